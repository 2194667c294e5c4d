#include <doctest.h>

#include <cmath>
#include <functional>

#include "lrt/dnlab.hpp"
#include "lrt/errors.hpp"
#include "lrt/presets.hpp"

using namespace lrt;

namespace {

double max_level_err(const WaveField1D& u, int k,
                     const std::function<double(double, double)>& exact) {
    double e = 0.0;
    const double t = u.grid.t.coord(k);
    for (int i = 0; i < u.grid.x.n; ++i)
        e = std::max(e, std::fabs(u.at(k, i) - exact(t, u.grid.x.coord(i))));
    return e;
}

}  // namespace

TEST_CASE("wave grid construction and validation") {
    const WaveGrid1D g = make_wave_grid(2.0, 129, 0.85);
    CHECK(g.x.n == 129);
    CHECK(g.t.hi == 2.0);
    CHECK(g.dt() <= 0.85 * g.dx() * (1.0 + 1e-12));

    CHECK_THROWS_AS(make_wave_grid(-1.0, 129), ValidationError);
    CHECK_THROWS_AS(make_wave_grid(2.0, 4), ValidationError);
    CHECK_THROWS_AS(make_wave_grid(2.0, 129, 1.2), ValidationError);

    WaveGrid1D bad = g;
    bad.t = make_axis("t", 0.0, 2.0, 129);  // dt far above dx
    CHECK_THROWS_AS(solve_forward(bad, {}, {}), ValidationError);
}

TEST_CASE("a left-injected pulse translates at unit speed") {
    const WaveGrid1D grid = make_wave_grid(1.0, 257);
    auto pulse = [](double t) { return presets::bump((t - 0.3) / 0.25); };
    const WaveField1D u = solve_forward(grid, {}, {pulse, nullptr});

    const int k = int(std::lround(0.8 / grid.dt()));
    const double err = max_level_err(
        u, k, [&](double t, double x) { return x <= t ? pulse(t - x) : 0.0; });
    CHECK(err < 5e-3);
}

TEST_CASE("manufactured solution converges at second order") {
    const double om = 2.5;
    Coeffs1D co;
    co.b = [](double t, double x) { return 0.3 * std::sin(M_PI * x) * std::cos(t); };
    co.a = [](double, double x) { return 0.25 * std::sin(2.0 * M_PI * x); };
    co.q = [](double, double x) { return 0.8 + 0.3 * x; };
    auto exact = [om](double t, double x) { return std::sin(M_PI * x) * std::sin(om * t); };
    auto source = [&, om](double t, double x) {
        const double u = exact(t, x);
        const double ut = om * std::sin(M_PI * x) * std::cos(om * t);
        const double ux = M_PI * std::cos(M_PI * x) * std::sin(om * t);
        return (M_PI * M_PI - om * om) * u - co.b(t, x) * ut + co.a(t, x) * ux + co.q(t, x) * u;
    };
    auto v0 = [om](double x) { return om * std::sin(M_PI * x); };

    double prev = -1.0, ratio_lo = 10.0, ratio_hi = 0.0;
    for (int nx : {65, 129, 257}) {
        const WaveGrid1D grid = make_wave_grid(1.0, nx);
        const WaveField1D u = solve_forward(grid, co, {}, source, v0);
        const double err = max_level_err(u, grid.t.n - 1, exact);
        if (prev > 0.0) {
            ratio_lo = std::min(ratio_lo, prev / err);
            ratio_hi = std::max(ratio_hi, prev / err);
        }
        prev = err;
    }
    CHECK(ratio_lo > 3.0);
    CHECK(ratio_hi < 5.5);
}

TEST_CASE("plain scheme conserves the staggered energy") {
    const WaveGrid1D grid = make_wave_grid(3.0, 129);
    const WaveField1D u = solve_forward(grid, {}, {}, nullptr,
                                        [](double x) { return std::sin(3.0 * M_PI * x); });
    const double e0 = discrete_energy(u, 0);
    CHECK(e0 > 0.0);
    for (int k : {1, grid.t.n / 2, grid.t.n - 2})
        CHECK(discrete_energy(u, k) == doctest::Approx(e0).epsilon(1e-11));
    CHECK_THROWS_AS(discrete_energy(u, grid.t.n - 1), ValidationError);
    CHECK_THROWS_AS(discrete_energy(u, -1), ValidationError);
}

TEST_CASE("unstable coefficients are reported, not returned") {
    const WaveGrid1D grid = make_wave_grid(3.0, 65);
    Coeffs1D co;
    co.q = [](double, double) { return -5000.0; };
    CHECK_THROWS_AS(
        solve_forward(grid, co, {}, nullptr, [](double x) { return std::sin(M_PI * x); }),
        ConvergenceError);
}

TEST_CASE("adjoint of the plain wave operator is its own time reversal") {
    const WaveGrid1D grid = make_wave_grid(2.0, 129);
    const double T = grid.t.hi;
    BoundaryData1D h;
    h.right = [](double t) { return presets::bump((t - 1.2) / 0.5); };
    const WaveField1D v = solve_adjoint(grid, {}, h);
    BoundaryData1D hrev;
    hrev.right = [h, T](double s) { return h.right(T - s); };
    const WaveField1D w = solve_forward(grid, {}, hrev);
    const int nt = grid.t.n;
    for (int k : {0, 1, nt / 3, nt - 1})
        for (int i : {0, 17, 64, 128})
            CHECK(v.at(k, i) == w.at(nt - 1 - k, i));
}

TEST_CASE("boundary pairing of the map against the adjoint map agrees") {
    const WaveGrid1D grid = make_wave_grid(2.5, 257);
    Coeffs1D co;
    co.b = [](double t, double x) { return 0.35 * std::sin(M_PI * x) * presets::bump((t - 1.2) / 0.9); };
    co.a = [](double t, double x) { return 0.3 * std::sin(2.0 * M_PI * x) * presets::bump((t - 1.2) / 0.9); };
    co.q = [](double t, double x) { return 0.7 * std::sin(M_PI * x) * presets::bump((t - 1.2) / 0.8); };
    BoundaryData1D f, h;
    f.left = [](double t) { return presets::bump((t - 0.8) / 0.5); };
    h.right = [](double t) { return presets::bump((t - 1.5) / 0.6); };

    const double lhs = boundary_pair(dn_map(grid, co, f), h, grid.t);
    const WaveField1D v = solve_adjoint(grid, co, h);
    const double rhs = boundary_pair(adjoint_dn_trace(v, co), f, grid.t);
    CHECK(lhs == doctest::Approx(rhs).epsilon(2e-3));
    CHECK(std::fabs(lhs) > 1e-6);  // the pairing actually sees the data

    DnTrace short_tr;
    short_tr.left.resize(grid.t.n - 1);
    short_tr.right.resize(grid.t.n - 1);
    CHECK_THROWS_AS(boundary_pair(short_tr, f, grid.t), ValidationError);
}

TEST_CASE("integral identity holds and tightens at second order") {
    BoundaryData1D f1, f2;
    f1.left = [](double t) { return presets::bump((t - 0.9) / 0.55); };
    f2.left = [](double t) { return presets::bump((t - 1.0) / 0.5); };
    f2.right = [](double t) { return presets::bump((t - 1.4) / 0.5); };

    SUBCASE("potential difference") {
        Coeffs1D co1;
        co1.q = [](double t, double x) {
            return 1.4 * std::sin(M_PI * x) * presets::bump((t - 1.1) / 0.6);
        };
        double gap_prev = -1.0;
        for (int nx : {129, 257}) {
            const WaveGrid1D grid = make_wave_grid(2.2, nx);
            const IdentityReport rep = integral_identity_check(grid, co1, {}, f1, f2);
            CHECK(rep.rel_gap < 5e-2);
            if (gap_prev > 0.0) {
                CHECK(gap_prev / rep.gap > 2.0);
                CHECK(gap_prev / rep.gap < 8.0);
            }
            gap_prev = rep.gap;
        }
    }

    SUBCASE("one-form difference") {
        Coeffs1D co1;
        co1.b = [](double t, double x) {
            return 0.5 * std::sin(M_PI * x) * presets::bump((t - 1.1) / 0.7);
        };
        co1.a = [](double t, double x) {
            return 0.4 * std::sin(2.0 * M_PI * x) * presets::bump((t - 1.1) / 0.7);
        };
        const WaveGrid1D grid = make_wave_grid(2.2, 257);
        const IdentityReport rep = integral_identity_check(grid, co1, {}, f1, f2);
        CHECK(rep.rel_gap < 5e-2);
    }
}

TEST_CASE("gauge transform leaves the boundary map fixed") {
    Psi1D psi;
    psi.psi = [](double t, double x) {
        return 0.4 * std::sin(M_PI * x) * presets::bump((t - 1.1) / 0.7);
    };
    psi.dt = [](double t, double x) {
        return 0.4 * std::sin(M_PI * x) * presets::bump_d1((t - 1.1) / 0.7) / 0.7;
    };
    psi.dx = [](double t, double x) {
        return 0.4 * M_PI * std::cos(M_PI * x) * presets::bump((t - 1.1) / 0.7);
    };
    psi.dtt = [](double t, double x) {
        return 0.4 * std::sin(M_PI * x) * presets::bump_d2((t - 1.1) / 0.7) / 0.49;
    };
    psi.dxx = [](double t, double x) {
        return -0.4 * M_PI * M_PI * std::sin(M_PI * x) * presets::bump((t - 1.1) / 0.7);
    };

    Coeffs1D co;
    co.b = [](double t, double x) { return 0.3 * std::sin(M_PI * x) * presets::bump((t - 1.0) / 0.8); };
    co.a = [](double t, double x) { return 0.25 * std::sin(2.0 * M_PI * x) * presets::bump((t - 1.0) / 0.9); };
    co.q = [](double t, double x) { return 0.6 * std::sin(M_PI * x) * presets::bump((t - 1.0) / 0.8); };
    BoundaryData1D f;
    f.left = [](double t) { return presets::bump((t - 0.6) / 0.4); };
    f.right = [](double t) { return presets::bump((t - 1.3) / 0.45); };

    double prev = -1.0;
    for (int nx : {129, 257}) {
        const WaveGrid1D grid = make_wave_grid(2.2, nx);
        const GaugeCheck gc = gauge_invariance_check(grid, co, psi, f);
        CHECK(gc.dn_gap < 1e-2);
        CHECK(gc.probe_gap < 5e-3);
        if (prev > 0.0) {
            CHECK(prev / gc.dn_gap > 2.0);
            CHECK(prev / gc.dn_gap < 8.0);
        }
        prev = gc.dn_gap;
    }

    Psi1D offside = psi;
    offside.psi = [](double t, double x) { return t * x; };
    const WaveGrid1D grid = make_wave_grid(2.2, 129);
    CHECK_THROWS_AS(gauge_invariance_check(grid, co, offside, f), ValidationError);
    CHECK_THROWS_AS(gauge_transform_1d(co, Psi1D{}), ValidationError);
}

TEST_CASE("reduction experiments approach their tube targets") {
    ReductionConfig cfg;
    cfg.T = 4.0;
    cfg.s0 = 1.5;
    cfg.delta = 0.25;
    cfg.nx = 257;
    cfg.rhos = {8.0, 32.0};
    cfg.tube_n0 = 513;
    cfg.tube_n1 = 65;

    SUBCASE("one-form pairing") {
        LineForm A;
        A.b = [&cfg](double t, double x) {
            return 0.5 * presets::bump(2.0 * (x - 0.5)) * presets::bump((t - cfg.s0 - 0.5) / 0.8);
        };
        A.a = [&cfg](double t, double x) {
            return 0.35 * std::sin(M_PI * x) * presets::bump((t - cfg.s0 - 0.5) / 0.9);
        };
        const ReductionResult res = reduction_experiment(cfg, A);
        REQUIRE(res.rows.size() == 2);
        CHECK(res.rows[1].rel_gap < res.rows[0].rel_gap);
        CHECK(res.rows[1].rel_gap < 0.5);
        CHECK(res.rows[1].remainder < res.rows[0].remainder);
        CHECK(res.tube_rel_gap < 0.05);
    }

    SUBCASE("potential pairing") {
        auto q = [&cfg](double t, double x) {
            return 1.2 * std::sin(M_PI * x) * presets::bump((t - cfg.s0 - 0.5) / 0.8);
        };
        const ReductionResult res = potential_reduction_experiment(cfg, q);
        REQUIRE(res.rows.size() == 2);
        CHECK(res.rows[1].rel_gap < res.rows[0].rel_gap);
        CHECK(res.rows[1].rel_gap < 0.5);
        CHECK(res.tube_rel_gap < 0.05);
    }

    SUBCASE("configuration validation") {
        ReductionConfig bad = cfg;
        bad.s0 = 0.1;
        CHECK_THROWS_AS(reduction_experiment(bad, LineForm{}), ValidationError);
        bad = cfg;
        bad.T = 2.5;
        CHECK_THROWS_AS(potential_reduction_experiment(
                            bad, [](double, double) { return 1.0; }),
                        ValidationError);
        CHECK_THROWS_AS(potential_reduction_experiment(cfg, nullptr), ValidationError);
    }
}
