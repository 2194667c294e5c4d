#pragma once

#include "lrt/transforms.hpp"

namespace lrt {

// Time-Fourier moments of space-time fields and of light sinograms, plus the
// moment identity linking them to geodesic transforms. Fourier convention:
// fhat(tau) = integral of e^{-i tau t} f(t) dt.

// trapezoid in t of e^{-i tau t} f(t,x) on the field's own grid
CScalarField2 time_fourier(const STScalar& f, double tau, InterpMode out_mode = InterpMode::cubic);

// moment field m_k(x) = integral of (-i t)^k f(t,x) dt
CScalarField2 moment_slice(int k, const STScalar& f, InterpMode out_mode = InterpMode::cubic);

// per-ray s-moment of a light sinogram: integral of (-i (s - center))^k
// Lf(s, ray) ds. The identity below is invariant under a common shift of the
// s and t origins, and solvers center the window to keep the powers small.
// window_warning flags nonzero sinogram values (>1e-12) on the first or last
// s-slice, meaning the s-grid fails to cover the support bound.
cplx sinogram_moment(int k, const LightSinogram& L, std::size_t iray,
                     bool* window_warning = nullptr, double center = 0.0);
std::vector<cplx> sinogram_moments(int k, const LightSinogram& L,
                                   bool* window_warning = nullptr, double center = 0.0);

// Which moment order feeds the remainder sum. The identity derived by
// k-fold differentiation couples lower-order moments (lagged); the top_order
// variant pairs every remainder term with the order-k moment instead and is
// kept only to demonstrate that it does not satisfy the identity.
enum class MomentCoupling { lagged, top_order };

// right side of the moment identity along one traced geodesic:
//   I(m_k) + sum_{j=0}^{k-1} C(k,j) R_{k-j}(m_j)        (lagged)
//   I(m_k) + sum_{j=0}^{k-1} C(k,j) R_{k-j}(m_k)        (top_order)
cplx slice_identity_rhs(int k, const STScalar& f, const Geodesic& geo,
                        MomentCoupling coupling = MomentCoupling::lagged);

// batch version reusing precomputed moment fields m_0..m_k
cplx slice_identity_rhs_from_moments(int k, const std::vector<CScalarField2>& moments,
                                     const Geodesic& geo,
                                     MomentCoupling coupling = MomentCoupling::lagged);

double binomial(int n, int k);

}  // namespace lrt
