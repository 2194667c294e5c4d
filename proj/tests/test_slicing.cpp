#include <doctest.h>

#include <cmath>
#include <vector>

#include "lrt/presets.hpp"
#include "lrt/slicing.hpp"

using namespace lrt;

namespace {

const double kPi = std::acos(-1.0);

// sample a callback field onto a grid
STScalar on_grid(const STScalar& f, const Axis& at, const Axis& ax, const Axis& ay) {
    std::vector<double> v(std::size_t(at.n) * ax.n * ay.n);
    for (int k = 0; k < at.n; ++k)
        for (int i = 0; i < ax.n; ++i)
            for (int j = 0; j < ay.n; ++j)
                v[(std::size_t(k) * ax.n + i) * ay.n + j] =
                    f.value(at.coord(k), {ax.coord(i), ay.coord(j)});
    return STScalar::grid(at, ax, ay, std::move(v), InterpMode::cubic);
}

}  // namespace

TEST_CASE("binomial coefficients") {
    CHECK(binomial(0, 0) == 1.0);
    CHECK(binomial(4, 2) == 6.0);
    CHECK(binomial(7, 3) == 35.0);
    CHECK(binomial(3, 5) == 0.0);
}

TEST_CASE("moment slice oracles on a separable grid field") {
    // f = h(x) on t in [0, 3]: m_k = h * integral of (-i t)^k over [0, 3]
    const double Ts = 3.0;
    const Axis at = make_axis("t", 0.0, Ts, 121);
    const Axis ax = make_axis("x", -1.0, 1.0, 17), ay = make_axis("y", -1.0, 1.0, 17);
    std::vector<double> v(std::size_t(at.n) * ax.n * ay.n);
    auto h = [](Vec2 p) { return 1.0 + 0.3 * p.x - 0.2 * p.y; };
    for (int k = 0; k < at.n; ++k)
        for (int i = 0; i < ax.n; ++i)
            for (int j = 0; j < ay.n; ++j)
                v[(std::size_t(k) * ax.n + i) * ay.n + j] = h({ax.coord(i), ay.coord(j)});
    const STScalar f = STScalar::grid(at, ax, ay, std::move(v), InterpMode::linear);

    const Vec2 p{0.25, -0.5};
    const CScalarField2 m1 = moment_slice(1, f);
    const CScalarField2 m2 = moment_slice(2, f);
    // m1 = -i T^2/2 h, m2 = -T^3/3 h; the t-quadrature of polynomials of
    // degree <= 2 is not exact for trapezoid, so allow its O(h^2) error
    CHECK(m1(p).imag() == doctest::Approx(-0.5 * Ts * Ts * h(p)).epsilon(1e-4));
    CHECK(std::abs(m1(p).real()) < 1e-12);
    CHECK(m2(p).real() == doctest::Approx(-Ts * Ts * Ts / 3.0 * h(p)).epsilon(1e-4));
    CHECK(std::abs(m2(p).imag()) < 1e-12);
}

TEST_CASE("time fourier slice matches a closed form and conjugates") {
    // f = cos(t) h(x) on [0, 2 pi]: fhat(1) = pi h(x)
    const Axis at = make_axis("t", 0.0, 2.0 * kPi, 257);
    const Axis ax = make_axis("x", -1.0, 1.0, 9), ay = make_axis("y", -1.0, 1.0, 9);
    std::vector<double> v(std::size_t(at.n) * ax.n * ay.n);
    for (int k = 0; k < at.n; ++k)
        for (int i = 0; i < ax.n; ++i)
            for (int j = 0; j < ay.n; ++j)
                v[(std::size_t(k) * ax.n + i) * ay.n + j] =
                    std::cos(at.coord(k)) * (1.0 + 0.5 * ax.coord(i));
    const STScalar f = STScalar::grid(at, ax, ay, std::move(v), InterpMode::linear);
    const Vec2 p{0.5, 0.0};
    const CScalarField2 fh = time_fourier(f, 1.0);
    CHECK(fh(p).real() == doctest::Approx(kPi * 1.25).epsilon(1e-4));
    CHECK(std::abs(fh(p).imag()) < 1e-6);
    // conjugate symmetry for real fields
    const CScalarField2 fm = time_fourier(f, -1.0);
    CHECK(fm(p).real() == doctest::Approx(fh(p).real()).epsilon(1e-10));
    CHECK(fm(p).imag() == doctest::Approx(-fh(p).imag()).epsilon(1e-10));
}

TEST_CASE("sinogram moments integrate the s axis") {
    // build a light sinogram by hand: one ray, L(s) = triangle hat on the grid
    LightSinogram L;
    L.s_axis = make_axis("s", 0.0, 2.0, 201);
    L.rays.resize(1);
    L.value.resize(201, 0.0);
    // smooth bump centered at s = 1
    for (int is = 0; is < 201; ++is)
        L.value[std::size_t(is)] = presets::bump((L.s_axis.coord(is) - 1.0) / 0.5);
    const cplx d0 = sinogram_moment(0, L, 0);
    const cplx d1 = sinogram_moment(1, L, 0);
    // reference by direct sums
    double r0 = 0.0, r1 = 0.0;
    const double h = L.s_axis.h();
    for (int is = 0; is < 201; ++is) {
        const double w = (is == 0 || is == 200) ? 0.5 : 1.0;
        r0 += w * h * L.value[std::size_t(is)];
        r1 += w * h * L.s_axis.coord(is) * L.value[std::size_t(is)];
    }
    CHECK(d0.real() == doctest::Approx(r0).epsilon(1e-13));
    CHECK(d1.imag() == doctest::Approx(-r1).epsilon(1e-13));

    bool warn = false;
    sinogram_moment(0, L, 0, &warn);
    CHECK(!warn);
    L.value[0] = 0.5;  // nonzero on the first slice: window too narrow
    sinogram_moment(0, L, 0, &warn);
    CHECK(warn);
}

TEST_CASE("moment identity holds per ray and per order") {
    const MetricField g = MetricField::euclidean();
    const double T = 6.0;
    const Axis at = make_axis("t", 0.0, T, 64);
    const Axis ax = make_axis("x", -1.05, 1.05, 64), ay = make_axis("y", -1.05, 1.05, 64);
    const STScalar f = on_grid(presets::separable_st(T), at, ax, ay);

    const Axis sx = make_axis("s", f.t_supp_lo() - 2.4, f.t_supp_hi() + 0.4, 96);
    const int nb = 6, nd = 5;
    const LightSinogram L = forward_light(g, f, sx, nb, nd);

    std::vector<CScalarField2> moments;
    for (int k = 0; k <= 2; ++k) moments.push_back(moment_slice(k, f));

    const std::vector<BoundaryRay> rays = boundary_ray_grid(g, nb, nd);
    for (int k = 0; k <= 2; ++k) {
        double num = 0.0, den = 0.0, num_top = 0.0;
        for (std::size_t ir = 0; ir < rays.size(); ++ir) {
            const Geodesic geo = trace_geodesic(g, rays[ir].x0, rays[ir].v0);
            const cplx d = sinogram_moment(k, L, ir);
            const cplx rhs = slice_identity_rhs_from_moments(k, moments, geo);
            const cplx rhs_top =
                slice_identity_rhs_from_moments(k, moments, geo, MomentCoupling::top_order);
            num += std::norm(d - rhs);
            num_top += std::norm(d - rhs_top);
            den += std::norm(d);
        }
        const double gap = std::sqrt(num / den);
        CHECK(gap < 1e-3);
        if (k >= 1) CHECK(std::sqrt(num_top / den) > 10.0 * gap);
    }
}

TEST_CASE("batch and single-ray identity evaluations agree") {
    const MetricField g = MetricField::euclidean();
    const double T = 6.0;
    const Axis at = make_axis("t", 0.0, T, 48);
    const Axis ax = make_axis("x", -1.05, 1.05, 48), ay = make_axis("y", -1.05, 1.05, 48);
    const STScalar f = on_grid(presets::separable_st(T), at, ax, ay);
    const Geodesic geo = trace_geodesic(g, boundary_point(0.8), inward_vector(g, 0.8, 0.35));

    std::vector<CScalarField2> moments;
    for (int k = 0; k <= 3; ++k) moments.push_back(moment_slice(k, f));
    const cplx a = slice_identity_rhs(3, f, geo);
    const cplx b = slice_identity_rhs_from_moments(3, moments, geo);
    CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(b)));
}
