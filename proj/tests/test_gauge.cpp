#include <doctest.h>

#include <cmath>
#include <vector>

#include "lrt/gauge.hpp"
#include "lrt/presets.hpp"
#include "lrt/transforms.hpp"

using namespace lrt;

namespace {

STScalar sampled_psi(double T, const Axis& at, const Axis& ax, const Axis& ay, double amp) {
    const STScalar cb = presets::psi_st(T, amp);
    std::vector<double> v(std::size_t(at.n) * ax.n * ay.n);
    for (int k = 0; k < at.n; ++k)
        for (int i = 0; i < ax.n; ++i)
            for (int j = 0; j < ay.n; ++j)
                v[(std::size_t(k) * ax.n + i) * ay.n + j] =
                    cb.value(at.coord(k), {ax.coord(i), ay.coord(j)});
    return STScalar::grid(at, ax, ay, std::move(v));
}

STOneForm sampled_form(const STOneForm& cb, const Axis& at, const Axis& ax, const Axis& ay) {
    std::vector<double> b(std::size_t(at.n) * ax.n * ay.n), a1(b.size()), a2(b.size());
    for (int k = 0; k < at.n; ++k)
        for (int i = 0; i < ax.n; ++i)
            for (int j = 0; j < ay.n; ++j) {
                const OneFormVal o = cb.value(at.coord(k), {ax.coord(i), ay.coord(j)});
                const std::size_t n = (std::size_t(k) * ax.n + i) * ay.n + j;
                b[n] = o.b;
                a1[n] = o.a.x;
                a2[n] = o.a.y;
            }
    return STOneForm::grid(at, ax, ay, std::move(b), std::move(a1), std::move(a2));
}

double rel_l2(const std::vector<double>& a, const std::vector<double>& b, double sign = 1.0) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - sign * b[i]) * (a[i] - sign * b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("exterior derivative matches analytic partials at interior nodes") {
    const Axis at = make_axis("t", 0.0, 2.0, 41);
    const Axis ax = make_axis("x", -1.0, 1.0, 41), ay = make_axis("y", -1.0, 1.0, 41);
    std::vector<double> v(std::size_t(at.n) * ax.n * ay.n);
    auto psi = [](double t, double x, double y) { return std::sin(t) * x * x * y; };
    for (int k = 0; k < at.n; ++k)
        for (int i = 0; i < ax.n; ++i)
            for (int j = 0; j < ay.n; ++j)
                v[(std::size_t(k) * ax.n + i) * ay.n + j] =
                    psi(at.coord(k), ax.coord(i), ay.coord(j));
    const STOneForm d = exterior_derivative(STScalar::grid(at, ax, ay, std::move(v)));

    const int k = 20, i = 25, j = 12;
    const double t = at.coord(k), x = ax.coord(i), y = ay.coord(j);
    CHECK(d.b().node(k, i, j) == doctest::Approx(std::cos(t) * x * x * y).epsilon(2e-3));
    CHECK(d.a1().node(k, i, j) == doctest::Approx(std::sin(t) * 2.0 * x * y).epsilon(2e-3));
    CHECK(d.a2().node(k, i, j) == doctest::Approx(std::sin(t) * x * x).epsilon(2e-3));
}

TEST_CASE("potential extraction round trip on an exact form") {
    const double T = 6.0;
    const Axis at = make_axis("t", 0.0, T, 96);
    const Axis ax = make_axis("x", -1.05, 1.05, 49), ay = make_axis("y", -1.05, 1.05, 49);
    const STScalar psi = sampled_psi(T, at, ax, ay, 0.7);
    const STOneForm dpsi = exterior_derivative(psi);

    const PotentialResult res = extract_potential(dpsi, at, ax, ay);
    CHECK(res.boundary_ok);
    CHECK(res.discrepancy_rel < 0.08);
    CHECK(rel_l2(res.psi.values(), psi.values()) < 0.05);
}

TEST_CASE("rotational one-forms leave a large family mismatch") {
    const double T = 6.0;
    const Axis at = make_axis("t", 0.0, T, 48);
    const Axis ax = make_axis("x", -1.05, 1.05, 49), ay = make_axis("y", -1.05, 1.05, 49);
    const STOneForm rot = sampled_form(presets::oneform_st(T, 0.8), at, ax, ay);
    const PotentialResult res = extract_potential(rot, at, ax, ay);
    CHECK(res.discrepancy_rel > 0.2);
}

TEST_CASE("gauge equivalence detects exact shifts and rejects others") {
    const double T = 6.0;
    const Axis at = make_axis("t", 0.0, T, 96);
    const Axis ax = make_axis("x", -1.05, 1.05, 49), ay = make_axis("y", -1.05, 1.05, 49);
    const STScalar psi = sampled_psi(T, at, ax, ay, 0.6);
    const STOneForm dpsi = exterior_derivative(psi);
    const STOneForm A1 = sampled_form(presets::oneform_st(T), at, ax, ay);

    auto plus = [&](const STOneForm& d) {
        std::vector<double> b = A1.b().values(), a1 = A1.a1().values(), a2 = A1.a2().values();
        for (std::size_t n = 0; n < b.size(); ++n) {
            b[n] += d.b().values()[n];
            a1[n] += d.a1().values()[n];
            a2[n] += d.a2().values()[n];
        }
        return STOneForm::grid(at, ax, ay, std::move(b), std::move(a1), std::move(a2));
    };

    const EquivalenceResult eq = check_gauge_equivalence(A1, plus(dpsi), 0.1, at, ax, ay);
    CHECK(eq.equivalent);
    // the convention integrates A1 - A2, so the recovered potential is -psi
    CHECK(rel_l2(eq.potential.psi.values(), psi.values(), -1.0) < 0.05);

    // swapping the spatial legs of an exact form breaks exactness
    const STOneForm rot = STOneForm::grid(at, ax, ay,
                                          std::vector<double>(psi.values().size(), 0.0),
                                          std::vector<double>(dpsi.a2().values()),
                                          std::vector<double>(dpsi.a1().values()));
    const EquivalenceResult ne = check_gauge_equivalence(A1, plus(rot), 0.1, at, ax, ay);
    CHECK(!ne.equivalent);
    CHECK(ne.residual > 0.5);
}

TEST_CASE("gauge transform reduces to the closed form on a simple potential") {
    // A = 0, q = 0, euclidean metric, psi = sin(t) x y (harmonic in space):
    // q-tilde = (1/2)(-psi_tt) - (1/4)(-psi_t^2 + |grad psi|^2)
    const Axis at = make_axis("t", 0.0, 2.0, 81);
    const Axis ax = make_axis("x", -1.05, 1.05, 81), ay = make_axis("y", -1.05, 1.05, 81);
    std::vector<double> v(std::size_t(at.n) * ax.n * ay.n);
    for (int k = 0; k < at.n; ++k)
        for (int i = 0; i < ax.n; ++i)
            for (int j = 0; j < ay.n; ++j)
                v[(std::size_t(k) * ax.n + i) * ay.n + j] =
                    std::sin(at.coord(k)) * ax.coord(i) * ay.coord(j);
    const STScalar psi = STScalar::grid(at, ax, ay, std::move(v));

    const std::size_t total = psi.values().size();
    const STOneForm zero_form =
        STOneForm::grid(at, ax, ay, std::vector<double>(total, 0.0),
                        std::vector<double>(total, 0.0), std::vector<double>(total, 0.0));
    const STScalar zero_q = STScalar::grid(at, ax, ay, std::vector<double>(total, 0.0));
    const GaugePair out = gauge_transform(zero_form, zero_q, psi, MetricField::euclidean());

    const int k = 40, i = 30, j = 50;
    const double t = at.coord(k), x = ax.coord(i), y = ay.coord(j);
    const double pt = std::cos(t) * x * y;
    const double px = std::sin(t) * y, py = std::sin(t) * x;
    const double want = 0.5 * (std::sin(t) * x * y) - 0.25 * (-pt * pt + px * px + py * py);
    CHECK(out.q.node(k, i, j) == doctest::Approx(want).epsilon(5e-3));
    CHECK(out.A.b().node(k, i, j) == doctest::Approx(pt).epsilon(5e-3));
    CHECK(out.A.a1().node(k, i, j) == doctest::Approx(px).epsilon(5e-3));
}

TEST_CASE("light transform annihilates closed-form exact forms") {
    const MetricField g = MetricField::euclidean();
    const double T = 6.0;
    const presets::TimeWindow w = presets::influence_window(T);
    const double rad = 0.6;
    const STOneForm dpsi = STOneForm::callback(
        [w, rad](double t, Vec2 p) {
            const double u = (t - w.center) / w.width;
            const double r = norm(p) / rad;
            OneFormVal out;
            out.b = presets::bump_d1(u) / w.width * presets::bump(r);
            const double rr = norm(p);
            const double dr = presets::bump(u) * presets::bump_d1(r) / rad;
            out.a = rr > 1e-12 ? (dr / rr) * p : Vec2{0.0, 0.0};
            return out;
        },
        w.center - w.width, w.center + w.width);
    const Axis sx = make_axis("s", 0.0, 4.5, 31);
    const LightSinogram L = forward_light_oneform(g, dpsi, sx, 8, 9);
    CHECK(max_abs(L.value) < 1e-5);
}
