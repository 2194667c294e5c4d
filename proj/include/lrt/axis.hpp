#pragma once

#include <cmath>
#include <string>

#include "lrt/errors.hpp"

namespace lrt {

// Uniform node-centered axis: n nodes including both endpoints.
struct Axis {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
    int n = 2;

    double h() const { return (hi - lo) / (n - 1); }
    double coord(int i) const { return lo + h() * i; }
    // fractional index; callers decide how to treat out-of-range values
    double frac(double x) const { return (x - lo) / h(); }
    bool contains(double x) const { return x >= lo && x <= hi; }

    void validate() const {
        if (n < 2) throw ValidationError("axis '" + name + "': need at least 2 nodes");
        if (!(hi > lo)) throw ValidationError("axis '" + name + "': hi must exceed lo");
        if (!std::isfinite(lo) || !std::isfinite(hi))
            throw ValidationError("axis '" + name + "': non-finite bounds");
    }
};

inline Axis make_axis(std::string name, double lo, double hi, int n) {
    Axis a{std::move(name), lo, hi, n};
    a.validate();
    return a;
}

}  // namespace lrt
