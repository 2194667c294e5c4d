#pragma once

#include <cmath>
#include <string>

#include "lrt/errors.hpp"
#include "lrt/fields.hpp"

namespace lrt::presets {

// Smooth compactly supported bump, value 1 at the center, support |u| < 1.
// The demos and tests build all their fields from this profile so supports
// stay exact and derivatives are available in closed form.
inline double bump(double u) {
    const double u2 = u * u;
    if (u2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u2));
}

inline double bump_d1(double u) {
    const double u2 = u * u;
    if (u2 >= 1.0) return 0.0;
    const double D = 1.0 - u2;
    return bump(u) * (-2.0 * u / (D * D));
}

inline double bump_d2(double u) {
    const double u2 = u * u;
    if (u2 >= 1.0) return 0.0;
    const double D = 1.0 - u2;
    const double g1 = -2.0 * u / (D * D);
    const double g2 = -2.0 / (D * D) - 8.0 * u2 / (D * D * D);
    return bump(u) * (g1 * g1 + g2);
}

// time window centered in the admissible slab (D, T - D) for a disc whose
// longest geodesic has length diam; frac < 1 keeps a safety margin
struct TimeWindow {
    double center, width;
};

inline TimeWindow influence_window(double T, double diam = 2.0, double frac = 0.8) {
    const double width = 0.5 * frac * (T - 2.0 * diam);
    if (!(width > 0.0))
        throw ValidationError("influence_window: need T > 2 diam, got T = " + std::to_string(T));
    return {0.5 * T, width};
}

// separable product: time bump times radial spatial bump, supported in the
// influence set when T > 2 diam
inline STScalar separable_st(double T, double rx = 0.55, double diam = 2.0) {
    const TimeWindow w = influence_window(T, diam);
    return STScalar::callback(
        [w, rx](double t, Vec2 p) {
            return bump((t - w.center) / w.width) * bump(norm(p) / rx);
        },
        w.center - w.width, w.center + w.width);
}

// off-center non-separable variant
inline STScalar gaussian_st(double T, double diam = 2.0) {
    const TimeWindow w = influence_window(T, diam);
    return STScalar::callback(
        [w](double t, Vec2 p) {
            const Vec2 c{0.15, -0.1};
            return bump((t - w.center) / w.width) * bump(norm(p - c) / 0.5);
        },
        w.center - w.width, w.center + w.width);
}

// scalar gauge function in the influence set, for exactness experiments
inline STScalar psi_st(double T, double amp = 1.0, double diam = 2.0) {
    const TimeWindow w = influence_window(T, diam);
    return STScalar::callback(
        [w, amp](double t, Vec2 p) {
            return amp * bump((t - w.center) / w.width) * bump(norm(p) / 0.6);
        },
        w.center - w.width, w.center + w.width);
}

// smooth one-form in the influence set with a rotational spatial leg, which
// no exact form matches
inline STOneForm oneform_st(double T, double amp = 1.0, double diam = 2.0) {
    const TimeWindow w = influence_window(T, diam);
    return STOneForm::callback(
        [w, amp](double t, Vec2 p) {
            const double env = amp * bump((t - w.center) / w.width) * bump(norm(p) / 0.6);
            OneFormVal v;
            v.b = env;
            v.a = env * perp(p);
            return v;
        },
        w.center - w.width, w.center + w.width);
}

}  // namespace lrt::presets
