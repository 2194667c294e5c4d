#include <doctest.h>

#include <cmath>
#include <vector>

#include "lrt/errors.hpp"
#include "lrt/metric.hpp"

using namespace lrt;

TEST_CASE("euclidean preset is the identity conformal factor") {
    const MetricField g = MetricField::euclidean();
    CHECK(g.is_euclidean());
    CHECK(g.c({0.3, -0.4}) == 1.0);
    CHECK(g.curvature({0.1, 0.2}) == 0.0);
    const Vec2 a = g.accel({0.2, 0.1}, {0.5, -0.3});
    CHECK(a.x == 0.0);
    CHECK(a.y == 0.0);
    CHECK(g.boundary_curvature(1.1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("preset strings parse or reject") {
    CHECK(MetricField::preset("euclidean").is_euclidean());
    const MetricField g = MetricField::preset("gaussian-bump:0.2,0.5");
    CHECK(!g.is_euclidean());
    CHECK(g.c({0.0, 0.0}) == doctest::Approx(1.0 + 0.2).epsilon(1e-12));
    CHECK_THROWS_AS(MetricField::preset("hyperbolic"), ValidationError);
    CHECK_THROWS_AS(MetricField::preset("gaussian-bump:0.2"), ValidationError);
}

TEST_CASE("exponential conformal factor has the closed-form connection") {
    // c = e^x, log c = x: grad log c = (1, 0), laplacian 0, so K = 0 and the
    // acceleration is 2 v_x v - |v|^2 e_x
    const MetricField g = MetricField::from_callback(
        [](Vec2 p) { return std::exp(p.x); }, [](Vec2) { return Vec2{1.0, 0.0}; },
        [](Vec2) { return 0.0; });
    const Vec2 p{0.2, -0.3}, v{0.7, 0.4};
    const Vec2 a = g.accel(p, v);
    const double vv = v.x * v.x + v.y * v.y;
    CHECK(a.x == doctest::Approx(2.0 * v.x * v.x - vv).epsilon(1e-14));
    CHECK(a.y == doctest::Approx(2.0 * v.x * v.y).epsilon(1e-14));
    CHECK(g.curvature(p) == 0.0);

    double gamma[2][2][2];
    g.christoffel(p, gamma);
    // Gamma^x_xx = -d_x log c = -1, Gamma^x_yy = +1, Gamma^y_xy = -1
    CHECK(gamma[0][0][0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(gamma[0][1][1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gamma[1][0][1] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(gamma[1][0][0] == doctest::Approx(0.0).epsilon(1e-12));

    // accel must equal -Gamma^k_ij v^i v^j
    double ax = 0.0, ay = 0.0;
    const double vv2[2] = {v.x, v.y};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            ax -= gamma[0][i][j] * vv2[i] * vv2[j];
            ay -= gamma[1][i][j] * vv2[i] * vv2[j];
        }
    CHECK(a.x == doctest::Approx(ax).epsilon(1e-12));
    CHECK(a.y == doctest::Approx(ay).epsilon(1e-12));
}

TEST_CASE("gaussian bump curvature matches the analytic laplacian") {
    const double amp = 0.15, w = 0.45;
    const MetricField g = MetricField::gaussian_bump(amp, w);
    // log c with c = 1 + amp exp(-|p|^2 / (2 w^2)); compare K against a
    // finite-difference laplacian of log c times c^2
    auto logc = [&](double x, double y) {
        return std::log(1.0 + amp * std::exp(-0.5 * (x * x + y * y) / (w * w)));
    };
    const double x = 0.3, y = -0.2, h = 1e-4;
    const double lap = (logc(x + h, y) + logc(x - h, y) + logc(x, y + h) + logc(x, y - h) -
                        4.0 * logc(x, y)) /
                       (h * h);
    const double cc = g.c({x, y});
    CHECK(g.curvature({x, y}) == doctest::Approx(cc * cc * lap).epsilon(1e-6));
    // the bump raises c in the middle, which makes the center negatively
    // curved relative to the rim
    CHECK(g.curvature({0.0, 0.0}) < 0.0);
}

TEST_CASE("grid-backed metric approximates its source callback") {
    const double amp = 0.1, w = 0.5;
    const MetricField ref = MetricField::gaussian_bump(amp, w);
    const Axis ax = make_axis("x", -1.1, 1.1, 129), ay = make_axis("y", -1.1, 1.1, 129);
    std::vector<double> v(std::size_t(ax.n) * ay.n);
    for (int i = 0; i < ax.n; ++i)
        for (int j = 0; j < ay.n; ++j)
            v[std::size_t(i) * ay.n + j] = ref.c({ax.coord(i), ay.coord(j)});
    const MetricField g = MetricField::from_grid(ax, ay, std::move(v));
    double worst_c = 0.0, worst_k = 0.0;
    for (int m = 0; m < 64; ++m) {
        const Vec2 p{-0.8 + 1.6 * (m % 8) / 8.0, -0.8 + 1.6 * (m / 8) / 8.0};
        worst_c = std::max(worst_c, std::abs(g.c(p) - ref.c(p)));
        worst_k = std::max(worst_k, std::abs(g.curvature(p) - ref.curvature(p)));
    }
    CHECK(worst_c < 1e-7);
    CHECK(worst_k < 1e-3);
}

TEST_CASE("boundary curvature of a mild bump stays positive") {
    const MetricField g = MetricField::gaussian_bump(0.15, 0.45);
    for (int m = 0; m < 32; ++m) {
        CHECK(g.boundary_curvature(2.0 * std::acos(-1.0) * m / 32.0) > 0.0);
    }
}
