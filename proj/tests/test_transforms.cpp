#include <doctest.h>

#include <cmath>
#include <vector>

#include "lrt/presets.hpp"
#include "lrt/transforms.hpp"

using namespace lrt;

namespace {

const double kPi = std::acos(-1.0);

Geodesic chord(double alpha, double mu) {
    const MetricField g = MetricField::euclidean();
    return trace_geodesic(g, boundary_point(alpha), inward_vector(g, alpha, mu));
}

}  // namespace

TEST_CASE("ray transform of one returns the chord length") {
    const ScalarField2 one = ScalarField2::callback([](Vec2) { return 1.0; });
    const Geodesic geo = chord(0.4, kPi / 6.0);
    CHECK(ray_transform(one, geo) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-8));
}

TEST_CASE("remainder transform oracles on a unit integrand") {
    const ScalarField2 one = ScalarField2::callback([](Vec2) { return 1.0; });
    const Geodesic geo = chord(1.3, 0.0);  // tau = 2
    const double tau = geo.tau();
    // integral of (i r)^j dr = i^j tau^{j+1} / (j+1)
    const cplx r0 = remainder_transform(0, one, geo);
    const cplx r1 = remainder_transform(1, one, geo);
    const cplx r2 = remainder_transform(2, one, geo);
    CHECK(r0.real() == doctest::Approx(tau).epsilon(1e-10));
    CHECK(std::abs(r0.imag()) < 1e-12);
    CHECK(r1.imag() == doctest::Approx(0.5 * tau * tau).epsilon(1e-8));
    CHECK(std::abs(r1.real()) < 1e-12);
    CHECK(r2.real() == doctest::Approx(-tau * tau * tau / 3.0).epsilon(1e-6));
    CHECK(std::abs(r2.imag()) < 1e-12);
}

TEST_CASE("one-form transform telescopes for exact spatial forms") {
    // a = grad phi for phi = bump(|p| / 0.8), which vanishes on the boundary
    const ScalarField2 a1 = ScalarField2::callback([](Vec2 p) {
        const double r = norm(p);
        if (r < 1e-12) return 0.0;
        return presets::bump_d1(r / 0.8) / 0.8 * (p.x / r);
    });
    const ScalarField2 a2 = ScalarField2::callback([](Vec2 p) {
        const double r = norm(p);
        if (r < 1e-12) return 0.0;
        return presets::bump_d1(r / 0.8) / 0.8 * (p.y / r);
    });
    for (double mu : {0.0, 0.5, -0.9})
        CHECK(std::abs(ray_transform_oneform(a1, a2, chord(0.9, mu))) < 1e-7);
}

TEST_CASE("light transform reduces to a shifted chord integral") {
    // spatially constant time bump: L f(s, ray) = integral of eta(s + r) dr
    auto eta = [](double t) { return presets::bump((t - 2.0) / 0.5); };
    const STScalar f =
        STScalar::callback([eta](double t, Vec2) { return eta(t); }, 1.5, 2.5);
    const Geodesic geo = chord(0.0, 0.0);
    const double s = 0.7;
    // Simpson reference on the exact line
    const int n = 4000;
    double ref = 0.0;
    const double h = geo.tau() / n;
    for (int m = 0; m <= n; ++m) {
        const double w = (m == 0 || m == n) ? 1.0 : (m % 2 ? 4.0 : 2.0);
        ref += w * eta(s + m * h);
    }
    ref *= h / 3.0;
    CHECK(light_transform(f, geo, s) == doctest::Approx(ref).epsilon(1e-7));
}

TEST_CASE("light sinogram is zero outside the support window, bit for bit") {
    const MetricField g = MetricField::euclidean();
    const STScalar f = presets::separable_st(4.5);
    const Axis sx = make_axis("s", -1.0, 5.0, 41);
    const LightSinogram L = forward_light(g, f, sx, 8, 9);
    const double lo = f.t_supp_lo() - 2.0, hi = f.t_supp_hi();
    int outside = 0;
    for (int is = 0; is < sx.n; ++is) {
        const double s = sx.coord(is);
        if (s >= lo && s <= hi) continue;
        for (std::size_t ir = 0; ir < L.rays.size(); ++ir) {
            CHECK(L.at(is, ir) == 0.0);
            ++outside;
        }
    }
    CHECK(outside > 0);  // the window must actually be exercised
}

TEST_CASE("light transform is equivariant under time shifts") {
    const MetricField g = MetricField::euclidean();
    auto shape = [](double t, Vec2 p) {
        return presets::bump((t - 2.2) / 0.3) * presets::bump(norm(p) / 0.6);
    };
    const STScalar f = STScalar::callback(shape, 1.9, 2.5);
    const double d = 0.35;
    const STScalar fshift = STScalar::callback(
        [shape, d](double t, Vec2 p) { return shape(t - d, p); }, 1.9 + d, 2.5 + d);
    const Geodesic geo = chord(0.8, 0.4);
    for (double s : {0.4, 0.9, 1.6})
        CHECK(light_transform(fshift, geo, s + d) ==
              doctest::Approx(light_transform(f, geo, s)).epsilon(1e-12));
}

TEST_CASE("one-form light transform pairs with the null tangent") {
    // B = b dt with b independent of space: pairing contributes b(s + r) * 1
    auto eta = [](double t) { return presets::bump((t - 2.0) / 0.4); };
    const STOneForm B = STOneForm::callback(
        [eta](double t, Vec2) {
            return OneFormVal{eta(t), {0.0, 0.0}};
        },
        1.6, 2.4);
    const STScalar feta = STScalar::callback([eta](double t, Vec2) { return eta(t); }, 1.6, 2.4);
    const Geodesic geo = chord(0.2, 0.3);
    for (double s : {0.5, 1.1})
        CHECK(light_transform_oneform(B, geo, s) ==
              doctest::Approx(light_transform(feta, geo, s)).epsilon(1e-12));
}

TEST_CASE("sinogram shapes and ray order match the grid convention") {
    const MetricField g = MetricField::euclidean();
    const ScalarField2 one = ScalarField2::callback([](Vec2) { return 1.0; });
    const int nb = 6, nd = 5;
    const Sinogram sino = forward_ray(g, one, nb, nd);
    REQUIRE(sino.rays.size() == std::size_t(nb) * nd);
    REQUIRE(sino.value.size() == sino.rays.size());
    const std::vector<BoundaryRay> rays = boundary_ray_grid(g, nb, nd);
    for (std::size_t i = 0; i < rays.size(); ++i) {
        CHECK(sino.rays[i].alpha == rays[i].alpha);
        CHECK(sino.rays[i].mu == rays[i].mu);
        CHECK(sino.value[i] == doctest::Approx(2.0 * std::cos(rays[i].mu)).epsilon(1e-6));
    }
}

TEST_CASE("curved-metric transform matches a dense quadrature reference") {
    const MetricField g = MetricField::gaussian_bump(0.15, 0.45);
    const ScalarField2 f =
        ScalarField2::callback([](Vec2 p) { return 1.0 + 0.5 * p.x - 0.2 * p.y * p.y; });
    TraceOptions fine;
    fine.step = 2.5e-4;
    const Geodesic coarse = trace_geodesic(g, boundary_point(0.6), inward_vector(g, 0.6, 0.2));
    const Geodesic dense = trace_geodesic(g, boundary_point(0.6), inward_vector(g, 0.6, 0.2),
                                          fine);
    CHECK(ray_transform(f, coarse) == doctest::Approx(ray_transform(f, dense)).epsilon(1e-6));
}
