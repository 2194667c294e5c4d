#pragma once

#include <functional>
#include <vector>

#include "lrt/axis.hpp"
#include "lrt/fields.hpp"
#include "lrt/geooptics.hpp"

namespace lrt {

// 1+1-dimensional wave laboratory on the strip (0,T) x (0,1) for the operator
//   L u = d_tt u - d_xx u - b d_t u + a d_x u + q u
// (one-form A = b dt + a dx paired with the Lorentzian gradient). Forward and
// adjoint solves share one leapfrog kernel; the boundary maps, the integral
// identity and the high-frequency probes build on them.

struct Coeffs1D {
    std::function<double(double, double)> b, a, q;  // (t, x); null means zero
};

struct BoundaryData1D {
    std::function<double(double)> left, right;  // Dirichlet traces; null means zero
};

struct WaveGrid1D {
    Axis t, x;
    double dt() const { return t.h(); }
    double dx() const { return x.h(); }
};

// time step chosen from the space step and the Courant ratio
WaveGrid1D make_wave_grid(double T, int nx, double cfl = 0.85);

struct WaveField1D {
    WaveGrid1D grid;
    std::vector<double> u;  // level-major, t.n levels of x.n nodes

    double& at(int k, int i) { return u[std::size_t(k) * grid.x.n + i]; }
    double at(int k, int i) const { return u[std::size_t(k) * grid.x.n + i]; }
};

// zero initial displacement; v0 (initial velocity) and an interior source are
// optional hooks, used mostly by convergence studies against manufactured
// solutions
WaveField1D solve_forward(const WaveGrid1D& grid, const Coeffs1D& co, const BoundaryData1D& f,
                          const std::function<double(double, double)>& source = nullptr,
                          const std::function<double(double)>& v0 = nullptr);

// solves the formal adjoint system (one-form flipped, potential shifted by
// its divergence) with data h and zero state at t = T, returned in forward
// time, so the result can be paired directly with forward fields
WaveField1D solve_adjoint(const WaveGrid1D& grid, const Coeffs1D& co, const BoundaryData1D& h);

struct DnTrace {
    std::vector<double> left, right;  // one sample per time level
};

// boundary map trace d_nu u - (1/2) A(nu) u of a solved forward field
DnTrace dn_trace(const WaveField1D& u, const Coeffs1D& co);
// trace of the adjoint solution, d_nu v + (1/2) A(nu) v
DnTrace adjoint_dn_trace(const WaveField1D& v, const Coeffs1D& co);
// forward solve followed by dn_trace
DnTrace dn_map(const WaveGrid1D& grid, const Coeffs1D& co, const BoundaryData1D& f);

// lateral-boundary pairing integral of a trace against Dirichlet data
double boundary_pair(const DnTrace& tr, const BoundaryData1D& g, const Axis& taxis);

struct IdentityReport {
    double lhs = 0.0;      // boundary pairing of the map difference
    double rhs = 0.0;      // interior integral against the adjoint solution
    double gap = 0.0;      // |lhs - rhs|
    double rel_gap = 0.0;  // gap over the larger magnitude
};

// checks <(Lambda_1 - Lambda_2) f1, f2> against the interior identity with
// the coefficient differences
IdentityReport integral_identity_check(const WaveGrid1D& grid, const Coeffs1D& co1,
                                       const Coeffs1D& co2, const BoundaryData1D& f1,
                                       const BoundaryData1D& f2);

// gauge function with the derivatives the transformed potential needs
struct Psi1D {
    std::function<double(double, double)> psi, dt, dx, dtt, dxx;
};

// coefficients after A -> A + d psi, q -> q + (1/2) box psi - (1/2) A grad psi
// - (1/4) <grad psi, grad psi>
Coeffs1D gauge_transform_1d(const Coeffs1D& co, const Psi1D& psi);

struct GaugeCheck {
    double dn_gap = 0.0;     // relative L2 distance of the two boundary maps
    double probe_gap = 0.0;  // relative max distance of u-tilde from e^{psi/2} u
};

// psi must vanish on the lateral boundary; both solves use the same data f
GaugeCheck gauge_invariance_check(const WaveGrid1D& grid, const Coeffs1D& co, const Psi1D& psi,
                                  const BoundaryData1D& f);

// staggered energy at level k + 1/2, exactly conserved by the plain scheme
double discrete_energy(const WaveField1D& u, int k);

// ---------------------------------------------------------------------------
// high-frequency reduction of the boundary-map difference to line integrals

struct ReductionConfig {
    double T = 4.0;
    double s0 = 1.5;      // null line enters at (s0, 0)
    double delta = 0.25;  // tube half-width in the chart coordinates
    int nx = 513;         // base space resolution, refined with rho
    double cfl = 0.85;
    std::vector<double> rhos = {8.0, 16.0, 32.0, 64.0, 128.0};
    int tube_n0 = 1025, tube_n1 = 129;
};

struct ReductionRow {
    double rho = 0.0;
    cplx value;        // <(Lambda_1 - Lambda_2) f1, f2> with probe data
    cplx target;       // predicted leading term
    double rel_gap = 0.0;
    double remainder = 0.0;  // max-over-time L2 gap between u1 and its principal part
};

struct ReductionResult {
    std::vector<ReductionRow> rows;
    double tube_value = 0.0;   // width-extrapolated tube functional
    double tube_oracle = 0.0;  // closed-form line integral it approaches
    double tube_rel_gap = 0.0;
};

// one-form experiment: pair (A, q) against (0, q); the boundary-map pairing
// approaches i rho times the weighted tube integral of (A)_0
ReductionResult reduction_experiment(const ReductionConfig& cfg, const LineForm& A,
                                     const std::function<double(double, double)>& q = nullptr);

// potential experiment: pair (0, q) against (0, 0); the pairing approaches
// the plain tube integral of q, with no rho factor
ReductionResult potential_reduction_experiment(const ReductionConfig& cfg,
                                               const std::function<double(double, double)>& q);

}  // namespace lrt
