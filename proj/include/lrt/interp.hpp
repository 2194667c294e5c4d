#pragma once

#include <vector>

#include "lrt/axis.hpp"

namespace lrt {

// Prefiltered cubic B-spline interpolation (recursive filter, mirror
// boundaries). C2 smooth, exact at the nodes, value error O(h^4) and
// derivative error O(h^3) on smooth data, which is what the metric and the
// forward-only field evaluations need. Plain local bicubic stencils are only
// C1 with O(h^2) derivatives and miss the accuracy gates on practical grids.

// In-place prefilter of one line of n samples with the given stride.
void bspline_prefilter_line(double* c, int n, long stride);

// Basis weights on nodes i-1..i+2 at fractional offset t in [0,1).
void cubic_weights(double t, double w[4]);
void cubic_dweights(double t, double w[4]);
void cubic_d2weights(double t, double w[4]);

class Spline2 {
  public:
    Spline2() = default;
    Spline2(Axis ax, Axis ay, std::vector<double> samples);

    double value(double x, double y) const;
    // f, df/dx, df/dy
    void value_grad(double x, double y, double* f, double* fx, double* fy) const;
    // adds fxx, fyy, fxy
    void value_grad_hess(double x, double y, double* f, double* fx, double* fy, double* fxx,
                         double* fyy, double* fxy) const;

    const Axis& ax() const { return ax_; }
    const Axis& ay() const { return ay_; }

  private:
    Axis ax_, ay_;
    std::vector<double> c_;
};

class Spline3 {
  public:
    Spline3() = default;
    Spline3(Axis a0, Axis a1, Axis a2, std::vector<double> samples);

    double value(double u0, double u1, double u2) const;
    void value_grad(double u0, double u1, double u2, double* f, double* g0, double* g1,
                    double* g2) const;
    // diagonal second derivatives (enough for wave operators)
    void value_grad_diag2(double u0, double u1, double u2, double* f, double* g0, double* g1,
                          double* g2, double* h00, double* h11, double* h22) const;

  private:
    Axis a0_, a1_, a2_;
    std::vector<double> c_;
};

}  // namespace lrt
