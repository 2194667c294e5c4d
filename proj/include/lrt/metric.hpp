#pragma once

#include <functional>
#include <memory>
#include <string>

#include "lrt/axis.hpp"
#include "lrt/interp.hpp"
#include "lrt/vec.hpp"

namespace lrt {

// Conformally Euclidean metric on the closed unit disc: g = c(x)^{-2} dx^2.
// g-unit vectors have Euclidean length c, the outward g-unit normal is c*xhat,
// boundary arc measure is dalpha/c, and the Gauss curvature is c^2 lap(log c).
//
// The factor c comes from an analytic callback (presets, tests) or from a
// sampled grid with prefiltered cubic interpolation. Grid metrics should be
// sampled on a box slightly larger than the disc so that boundary bisection
// never evaluates outside the data.
class MetricField {
  public:
    MetricField();  // Euclidean

    static MetricField euclidean();
    static MetricField gaussian_bump(double amplitude, double width);
    // "euclidean" or "gaussian-bump:<amplitude>,<width>"
    static MetricField preset(const std::string& spec);
    static MetricField from_grid(Axis x, Axis y, std::vector<double> c_values);
    // callbacks: c, grad log c, lap log c (curvature needs the last one)
    static MetricField from_callback(std::function<double(Vec2)> c,
                                     std::function<Vec2(Vec2)> grad_log_c,
                                     std::function<double(Vec2)> lap_log_c);

    double c(Vec2 p) const;
    Vec2 grad_log_c(Vec2 p) const;
    double curvature(Vec2 p) const;  // Gauss curvature of g

    // geodesic acceleration -Gamma^k_ij v^i v^j for coordinate velocity v
    Vec2 accel(Vec2 p, Vec2 v) const {
        if (euclid_) return {0.0, 0.0};
        const Vec2 L = grad_log_c(p);
        const double s = 2.0 * dot(v, L);
        const double vv = dot(v, v);
        return {s * v.x - vv * L.x, s * v.y - vv * L.y};
    }

    // Christoffel symbols Gamma[k][i][j] of g at p
    void christoffel(Vec2 p, double gamma[2][2][2]) const;

    // geodesic curvature of the boundary circle w.r.t. g at angle alpha;
    // strict convexity needs this positive everywhere
    double boundary_curvature(double alpha) const;

    bool is_euclidean() const { return euclid_; }
    const std::string& describe() const { return desc_; }

  private:
    bool euclid_ = true;
    std::string desc_ = "euclidean";
    std::function<double(Vec2)> c_fn_;
    std::function<Vec2(Vec2)> glc_fn_;
    std::function<double(Vec2)> llc_fn_;
    std::shared_ptr<const Spline2> spl_;
};

}  // namespace lrt
