#pragma once

#include <memory>

#include "lrt/fields.hpp"
#include "lrt/geodesics.hpp"
#include "lrt/interp.hpp"

namespace lrt {

// Mollification, the characteristic chart along a null geodesic, and the
// phase/amplitude construction with residual checks of the eikonal and
// transport equations.

// C2 plateau cutoff: 1 on |u| <= 1/4, 0 on |u| >= 1/2, quintic smoothstep in
// between. Same profile serves as mollifier kernel and tube cutoff.
double chi_profile(double u);
// integral of chi(|w|)^2 dw over the line (tube-integral normalizer)
double chi_sq_mass();

// Convolution with the plateau kernel at radius (1/2) rho^{-1/4}; the
// discrete kernel is normalized to unit mass on the field's own grid, so
// constants pass through unchanged away from the support edge. Grid-backed
// fields only; values beyond the box count as zero.
ScalarField2 mollify(const ScalarField2& f, double rho);
STScalar mollify(const STScalar& f, double rho);
STOneForm mollify(const STOneForm& B, double rho);

// ---------------------------------------------------------------------------
// chart on the disc (two spatial dimensions, transverse coordinate z2)
//
// Polar normal coordinates (R, theta) about a point p behind the entry point
// of a spatial geodesic gamma give r = R - d(p, gamma(0)) and
//   z0 = (t + r)/sqrt(2), z1 = (-t + r + s0)/sqrt(2), z2 = theta - theta_p,
// so the null geodesic (s0 + s, gamma(s)) lands on z1 = z2 = 0.

class DiscChart {
  public:
    DiscChart() = default;

    double s0() const { return s0_; }
    double r0() const { return r0_; }
    double tau() const { return tau_; }
    double a0() const { return s0_ * kInvSqrt2; }
    double b0() const { return (s0_ + 2.0 * tau_) * kInvSqrt2; }
    Vec2 p() const { return p_; }
    double theta_p() const { return theta_p_; }
    double step() const { return step_; }
    const MetricField& metric() const { return g_; }

    // exponential map from p: trace to radius R at polar angle theta,
    // returning position, g-unit velocity and the transverse Jacobi value
    void exp_at(double theta, double R, Vec2* x, Vec2* v, double* jac) const;

    // Newton inversion of the exponential map; optional warm start
    void to_polar(Vec2 x, double* R, double* theta, double* jac = nullptr, Vec2* v = nullptr,
                  const double* R_guess = nullptr, const double* theta_guess = nullptr) const;

    void to_z(double t, Vec2 x, double z[3]) const;
    void from_z(const double z[3], double* t, Vec2* x, double* jac = nullptr,
                Vec2* v = nullptr) const;

    // phase of the construction
    double phi(double t, Vec2 x) const;

    // pullback metric components in z, 3x3 row-major, by centered differences
    // of the inverse map; honest measure of the 2 dz0 dz1 + g22 dz2^2 form
    void metric_z(const double z[3], double h, double out[9]) const;

    // pointwise eikonal residual <grad phi, grad phi> with grad r from
    // centered differences of the polar radius
    double eikonal_residual(Vec2 x, double h = 1e-5) const;

    static constexpr double kInvSqrt2 = 0.70710678118654752440;

  private:
    friend DiscChart build_chart(const MetricField&, const Geodesic&, double, double,
                                 const TraceOptions&);
    MetricField g_;
    Vec2 p_{};
    double theta_p_ = 0.0;  // polar angle at p of the direction toward gamma(0)
    double r0_ = 0.0;
    double s0_ = 0.0;
    double tau_ = 0.0;  // length of gamma
    double step_ = 1e-3;
};

// p_offset is the distance behind gamma's entry point at which p is placed;
// gamma must be a boundary-to-boundary traced geodesic of g
DiscChart build_chart(const MetricField& g, const Geodesic& gamma, double s0, double p_offset,
                      const TraceOptions& opt = {});

// largest tube half-width on which the chart round trip stays within tol,
// found by bisection
double delta_prime(const DiscChart& ch, double tol = 1e-8, double hi = 1.0);

// amplitudes on a tube grid around the null geodesic; cum1/cum2 hold the
// running integral of (A_i rho)_0 from a0 along z0 at fixed transverse point
struct AmplitudePair {
    double rho = 1.0;
    double delta = 0.25;
    Axis az0, az1, az2;
    std::vector<double> c1, c2;      // (i0 * n1 + i1) * n2 + i2
    std::vector<double> cum1, cum2;  // integral factors, same layout
    std::vector<double> a10, a20;    // sampled (A rho)_0 for residual checks
    std::vector<double> jac;         // transverse Jacobi value (|g|^{1/2})

    std::size_t idx(int i0, int i1, int i2) const {
        return (std::size_t(i0) * az1.n + i1) * az2.n + i2;
    }
};

AmplitudePair build_amplitudes(const DiscChart& ch, const STOneForm& A1rho,
                               const STOneForm& A2rho, double rho, double delta, int n0 = 129,
                               int n1 = 17, int n2 = 17);

// finite-difference residual of the transport equation for c1 (which = 1) or
// c2 (which = 2); zero on the z0 end planes where the stencil does not fit
std::vector<double> transport_residual(const AmplitudePair& amps, int which);

struct GoProbe {
    CSTScalar principal;  // e^{+-i rho phi} c on the output grid
    CSTScalar source;     // wave-operator residual of the principal term
};

// evaluates the probe pair on an output grid; A and Arho may alias when the
// one-form is smooth enough to skip mollification; q may be null
GoProbe go_probe(const DiscChart& ch, const AmplitudePair& amps, const STOneForm& A,
                 const STOneForm& Arho, const STScalar* q, int which, const Axis& at,
                 const Axis& ax, const Axis& ay);

// ---------------------------------------------------------------------------
// closed forms for the 1+1-dimensional strip (0,T) x [0,1], null line
// beta(r) = (s0 + r, r); no transverse direction, |g| = 1

struct LineForm {
    std::function<double(double, double)> b, a;  // b dt + a dx; null means 0
};

struct MinkChart {
    double s0 = 1.5;

    double z0(double t, double x) const { return (t + x) * DiscChart::kInvSqrt2; }
    double z1(double t, double x) const { return (-t + x + s0) * DiscChart::kInvSqrt2; }
    double t_from(double w0, double w1) const { return 0.5 * (M_SQRT2 * (w0 - w1) + s0); }
    double x_from(double w0, double w1) const { return 0.5 * (M_SQRT2 * (w0 + w1) - s0); }
    double a0() const { return s0 * DiscChart::kInvSqrt2; }
    double b0() const { return (s0 + 2.0) * DiscChart::kInvSqrt2; }
    double phi(double t, double x) const { return z1(t, x); }

    // <grad phi, grad phi> for the exact phase; cancels identically
    double eikonal_residual() const {
        double pt = -DiscChart::kInvSqrt2, px = DiscChart::kInvSqrt2;
        return -pt * pt + px * px;
    }
};

struct MinkAmplitudes {
    MinkChart ch;
    double rho = 1.0;
    double delta = 0.25;
    Axis az0, az1;
    std::vector<double> cum1, cum2;  // i0 * n1 + i1
    std::vector<double> a10, a20;
    std::shared_ptr<const Spline2> spl1, spl2;

    double c(int which, double t, double x) const;
    cplx principal(int which, double t, double x) const;
};

MinkAmplitudes build_mink_amplitudes(const MinkChart& ch, const LineForm& A1, const LineForm& A2,
                                     double rho, double delta, int n0 = 1025, int n1 = 129);

std::vector<double> mink_transport_residual(const MinkAmplitudes& amps, int which);

}  // namespace lrt
