#include "lrt/slicing.hpp"

#include <cmath>

#include "lrt/errors.hpp"
#include "lrt/parallel.hpp"

namespace lrt {

using par::parallel_for;

namespace {

// i^k without drifting through repeated complex multiplies
cplx ipow(int k) {
    switch (k & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

// trapezoid reduction over the t-axis of w(t_k) * f(t_k, x_i, y_j), one
// output cell per (i, j)
template <typename Weight>
CScalarField2 reduce_time(const STScalar& f, Weight w, InterpMode out_mode) {
    if (!f.is_grid())
        throw ValidationError("time reduction needs a grid-backed space-time field");
    const Axis& at = f.at();
    const Axis& ax = f.ax();
    const Axis& ay = f.ay();
    const double ht = at.h();

    std::vector<cplx> wt(std::size_t(at.n));
    for (int k = 0; k < at.n; ++k) {
        double cell = (k == 0 || k == at.n - 1) ? 0.5 * ht : ht;
        wt[k] = w(at.coord(k)) * cell;
    }

    std::vector<cplx> out(std::size_t(ax.n) * ay.n);
    parallel_for(ax.n, [&](int i) {
        for (int j = 0; j < ay.n; ++j) {
            cplx acc = 0.0;
            for (int k = 0; k < at.n; ++k) acc += wt[k] * f.node(k, i, j);
            out[std::size_t(i) * ay.n + j] = acc;
        }
    });
    return CScalarField2::grid(ax, ay, std::move(out), out_mode);
}

}  // namespace

CScalarField2 time_fourier(const STScalar& f, double tau, InterpMode out_mode) {
    return reduce_time(
        f, [tau](double t) { return std::exp(cplx(0.0, -tau * t)); }, out_mode);
}

CScalarField2 moment_slice(int k, const STScalar& f, InterpMode out_mode) {
    if (k < 0) throw ValidationError("moment order must be nonnegative");
    return reduce_time(
        f,
        [k](double t) {
            cplx m = ipow(k) * double(k & 1 ? -1 : 1);  // (-i)^k
            return m * std::pow(t, k);
        },
        out_mode);
}

cplx sinogram_moment(int k, const LightSinogram& L, std::size_t iray, bool* window_warning,
                     double center) {
    if (k < 0) throw ValidationError("moment order must be nonnegative");
    const Axis& s = L.s_axis;
    if (window_warning &&
        (std::abs(L.at(0, iray)) > 1e-12 || std::abs(L.at(s.n - 1, iray)) > 1e-12))
        *window_warning = true;
    const cplx mik = ipow(k) * double(k & 1 ? -1 : 1);
    const double hs = s.h();
    cplx acc = 0.0;
    for (int is = 0; is < s.n; ++is) {
        double cell = (is == 0 || is == s.n - 1) ? 0.5 * hs : hs;
        acc += mik * std::pow(s.coord(is) - center, k) * L.at(is, iray) * cell;
    }
    return acc;
}

std::vector<cplx> sinogram_moments(int k, const LightSinogram& L, bool* window_warning,
                                   double center) {
    std::vector<cplx> out(L.rays.size());
    // the warning flag is shared; set it serially first, then fill in parallel
    if (window_warning) {
        for (std::size_t i = 0; i < L.rays.size(); ++i)
            sinogram_moment(k, L, i, window_warning, center);
    }
    parallel_for(int(L.rays.size()), [&](int i) {
        out[std::size_t(i)] = sinogram_moment(k, L, std::size_t(i), nullptr, center);
    });
    return out;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

cplx slice_identity_rhs_from_moments(int k, const std::vector<CScalarField2>& moments,
                                     const Geodesic& geo, MomentCoupling coupling) {
    if (int(moments.size()) <= k)
        throw ValidationError("slice identity needs moment fields m_0 .. m_k");
    cplx rhs = ray_transform(moments[std::size_t(k)], geo);
    for (int j = 0; j < k; ++j) {
        const CScalarField2& mj =
            coupling == MomentCoupling::lagged ? moments[std::size_t(j)] : moments[std::size_t(k)];
        rhs += binomial(k, j) * remainder_transform(k - j, mj, geo);
    }
    return rhs;
}

cplx slice_identity_rhs(int k, const STScalar& f, const Geodesic& geo, MomentCoupling coupling) {
    std::vector<CScalarField2> moments;
    moments.reserve(std::size_t(k) + 1);
    for (int j = 0; j <= k; ++j) moments.push_back(moment_slice(j, f));
    return slice_identity_rhs_from_moments(k, moments, geo, coupling);
}

}  // namespace lrt
