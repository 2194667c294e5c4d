#pragma once

#include <cstdint>

#include "lrt/transforms.hpp"

namespace lrt {

// Discretized inversion of the geodesic transform on the disc and of the
// light transform on (0,T) x disc, by a moment pipeline and by a direct
// least-squares oracle. Matrices map grid node values to sinogram values
// through the same interpolation and quadrature used by the forward
// transforms, so forward-then-invert round trips test the solver and not a
// discretization mismatch.

struct TracedRays {
    std::vector<BoundaryRay> rays;
    std::vector<Geodesic> geos;
};

TracedRays trace_rays(const MetricField& g, int n_base, int n_dir, const TraceOptions& opt = {});

struct Csr {
    int nrows = 0;
    int ncols = 0;
    std::vector<std::int64_t> rowptr;  // size nrows + 1
    std::vector<int> col;
    std::vector<double> val;

    std::int64_t nnz() const { return rowptr.empty() ? 0 : rowptr.back(); }
    std::size_t bytes() const;
};

// y = A x, parallel over rows, each row reduced left to right
void csr_apply(const Csr& a, const double* x, double* y);
std::vector<double> csr_apply(const Csr& a, const std::vector<double>& x);
Csr build_transpose(const Csr& a);

// Sparse forward operator plus the explicit transpose (kept so the adjoint
// apply is also a deterministic row-parallel product) and per-row quadrature
// weights of the sinogram inner product.
struct RayOperator {
    Csr mat;
    Csr mat_t;
    std::vector<double> row_w;
    Axis gx, gy;       // spatial column grid, node layout i * gy.n + j
    Axis gt;           // time axis of the column grid (light operator only)
    Axis s_axis;       // s axis of the row layout (light operator only)
    bool spacetime = false;
    std::size_t n_rays = 0;
};

// row per ray; entries are bilinear-hat x trapezoid weights, so a row applied
// to all-ones sums to the chord length of that ray
RayOperator assemble_ray_matrix(const TracedRays& tr, const Axis& gx, const Axis& gy);

// rows ordered s-major to match LightSinogram::value; columns indexed like
// STScalar nodes (k * gx.n + i) * gy.n + j; an upper estimate of the matrix
// plus transpose footprint is checked against the cap before allocation
RayOperator assemble_light_matrix(const TracedRays& tr, const Axis& s_axis, const Axis& gt,
                                  const Axis& gx, const Axis& gy,
                                  std::size_t memory_cap_bytes);

struct SolveOptions {
    int max_iter = 400;
    double tol = 1e-8;  // on the normal-equation residual, relative to the rhs
    std::size_t memory_cap_bytes = std::size_t(3) << 30;
};

struct SolveReport {
    int iterations = 0;
    bool converged = false;
    double lambda = 0.0;
    std::vector<double> residual_history;  // normal-equation residual per iteration
};

// exact inf-norm of A^T W A (all entries nonnegative, so the norm is the
// largest row sum, reachable as max of A^T W (A 1))
double normal_inf_norm(const RayOperator& op);

// conjugate-residual iteration on (A^T W A + lambda I) f = A^T W b; the
// residual 2-norm is nonincreasing by construction. lambda < 0 selects the
// default 1e-4 * |A^T W A|_inf.
std::vector<double> solve_tikhonov(const RayOperator& op, const std::vector<double>& b,
                                   double lambda, const SolveOptions& opt = {},
                                   SolveReport* report = nullptr);

struct GaussLegendre {
    std::vector<double> x, w;  // nodes and weights on [-1, 1]
};
GaussLegendre gauss_legendre(int n);

// Orthonormal Legendre basis p_0..p_degree on a time window, with the moment
// matrix int t^k p_j(t) dt needed to convert monomial time-moments of a field
// into basis coefficients. Integrals use Gauss-Legendre quadrature, which is
// exact here, so the Gram matrix is the identity to rounding.
class TimeBasis {
  public:
    TimeBasis(double t_lo, double t_hi, int degree, int n_samples = 129);

    int size() const { return degree_ + 1; }
    const Axis& t_axis() const { return taxis_; }
    double eval(int j, double t) const;
    std::vector<double> gram() const;                      // size^2 row-major
    std::vector<double> moment_matrix(int n_moments) const;  // [k*size+j] = int t^k p_j
    double moment_condition() const;  // inf-norm condition of the square moment matrix

  private:
    double lo_, hi_;
    int degree_;
    Axis taxis_;
};

ScalarField2 invert_geodesic_transform(const RayOperator& op, const std::vector<double>& sino,
                                       double lambda, const SolveOptions& opt = {},
                                       SolveReport* report = nullptr);

struct MomentReport {
    std::vector<SolveReport> solves;  // one per moment order
    double imag_leak = 0.0;           // max imaginary part discarded from the data moments
    double moment_condition = 0.0;
};

// moment pipeline: sinogram s-moments of orders 0..K, a triangular sequence
// of geodesic-transform inversions (order k reads only already-solved orders
// below k through the remainder coupling), then a basis solve in time
STScalar invert_light_transform_moments(const TracedRays& tr, const LightSinogram& L, int K,
                                        const TimeBasis& basis, const Axis& gx, const Axis& gy,
                                        double lambda, const SolveOptions& opt = {},
                                        MomentReport* report = nullptr);

STScalar invert_light_transform_direct(const TracedRays& tr, const LightSinogram& L,
                                       const Axis& gt, const Axis& gx, const Axis& gy,
                                       double lambda, const SolveOptions& opt = {},
                                       SolveReport* report = nullptr);

namespace ref {
void csr_apply(const Csr& a, const double* x, double* y);
RayOperator assemble_ray_matrix(const TracedRays& tr, const Axis& gx, const Axis& gy);
}  // namespace ref

}  // namespace lrt
