#include "lrt/gauge.hpp"

#include <algorithm>
#include <cmath>

#include "lrt/errors.hpp"
#include "lrt/parallel.hpp"

namespace lrt {

using par::parallel_for;

namespace {

// second-order first derivative along one index of a (t,x,y) block
struct Block3 {
    const std::vector<double>* v;
    int nt, nx, ny;
    double at(int k, int i, int j) const { return (*v)[(std::size_t(k) * nx + i) * ny + j]; }
};

double d1(const Block3& f, int k, int i, int j, int axis, double h) {
    int n = axis == 0 ? f.nt : axis == 1 ? f.nx : f.ny;
    int c = axis == 0 ? k : axis == 1 ? i : j;
    auto val = [&](int s) {
        return axis == 0 ? f.at(s, i, j) : axis == 1 ? f.at(k, s, j) : f.at(k, i, s);
    };
    if (c == 0) return (-3 * val(0) + 4 * val(1) - val(2)) / (2 * h);
    if (c == n - 1) return (3 * val(n - 1) - 4 * val(n - 2) + val(n - 3)) / (2 * h);
    return (val(c + 1) - val(c - 1)) / (2 * h);
}

double d2(const Block3& f, int k, int i, int j, int axis, double h) {
    int n = axis == 0 ? f.nt : axis == 1 ? f.nx : f.ny;
    int c = axis == 0 ? k : axis == 1 ? i : j;
    auto val = [&](int s) {
        return axis == 0 ? f.at(s, i, j) : axis == 1 ? f.at(k, s, j) : f.at(k, i, s);
    };
    if (c == 0) return (2 * val(0) - 5 * val(1) + 4 * val(2) - val(3)) / (h * h);
    if (c == n - 1)
        return (2 * val(n - 1) - 5 * val(n - 2) + 4 * val(n - 3) - val(n - 4)) / (h * h);
    return (val(c + 1) - 2 * val(c) + val(c - 1)) / (h * h);
}

void require_grid(const STScalar& psi) {
    if (!psi.is_grid() || psi.at().n < 4 || psi.ax().n < 4 || psi.ay().n < 4)
        throw ValidationError("gauge operations need a grid potential with at least 4 nodes per axis");
}

}  // namespace

STOneForm exterior_derivative(const STScalar& psi) {
    require_grid(psi);
    const Axis &at = psi.at(), &ax = psi.ax(), &ay = psi.ay();
    Block3 f{&psi.values(), at.n, ax.n, ay.n};
    std::size_t total = std::size_t(at.n) * ax.n * ay.n;
    std::vector<double> b(total), a1(total), a2(total);
    parallel_for(at.n, [&](int k) {
        for (int i = 0; i < ax.n; ++i)
            for (int j = 0; j < ay.n; ++j) {
                std::size_t idx = (std::size_t(k) * ax.n + i) * ay.n + j;
                b[idx] = d1(f, k, i, j, 0, at.h());
                a1[idx] = d1(f, k, i, j, 1, ax.h());
                a2[idx] = d1(f, k, i, j, 2, ay.h());
            }
    });
    return STOneForm::grid(at, ax, ay, std::move(b), std::move(a1), std::move(a2));
}

GaugePair gauge_transform(const STOneForm& A, const STScalar& q, const STScalar& psi,
                          const MetricField& g) {
    require_grid(psi);
    const Axis &at = psi.at(), &ax = psi.ax(), &ay = psi.ay();
    Block3 f{&psi.values(), at.n, ax.n, ay.n};
    std::size_t total = std::size_t(at.n) * ax.n * ay.n;
    std::vector<double> b(total), a1(total), a2(total), qt(total);
    parallel_for(at.n, [&](int k) {
        double t = at.coord(k);
        for (int i = 0; i < ax.n; ++i)
            for (int j = 0; j < ay.n; ++j) {
                std::size_t idx = (std::size_t(k) * ax.n + i) * ay.n + j;
                Vec2 p{ax.coord(i), ay.coord(j)};
                double c2 = g.c(p);
                c2 *= c2;
                double pt = d1(f, k, i, j, 0, at.h());
                double px = d1(f, k, i, j, 1, ax.h());
                double py = d1(f, k, i, j, 2, ay.h());
                OneFormVal av = A.value(t, p);
                b[idx] = av.b + pt;
                a1[idx] = av.a.x + px;
                a2[idx] = av.a.y + py;
                // box psi, the A(grad psi) pairing and |grad psi|^2 in the
                // Lorentzian metric, signature (-,+,+) with spatial factor c^2
                double box = -d2(f, k, i, j, 0, at.h()) +
                             c2 * (d2(f, k, i, j, 1, ax.h()) + d2(f, k, i, j, 2, ay.h()));
                double a_grad = -av.b * pt + c2 * (av.a.x * px + av.a.y * py);
                double grad2 = -pt * pt + c2 * (px * px + py * py);
                qt[idx] = q.value(t, p) + 0.5 * box - 0.5 * a_grad - 0.25 * grad2;
            }
    });
    GaugePair out;
    out.A = STOneForm::grid(at, ax, ay, std::move(b), std::move(a1), std::move(a2));
    out.q = STScalar::grid(at, ax, ay, std::move(qt));
    return out;
}

PotentialResult extract_potential(const STOneForm& B, const Axis& at, const Axis& ax,
                                  const Axis& ay) {
    std::size_t total = std::size_t(at.n) * ax.n * ay.n;
    std::vector<double> psi_t(total), psi_s(total);

    // family one: straight up in t from the initial slice, where an exact
    // form supported in the influence set leaves no spatial contribution
    parallel_for(ax.n, [&](int i) {
        double x = ax.coord(i);
        for (int j = 0; j < ay.n; ++j) {
            Vec2 p{x, ay.coord(j)};
            double acc = 0.0;
            double prev = B.value(at.coord(0), p).b;
            psi_t[(0 * std::size_t(ax.n) + i) * ay.n + j] = 0.0;
            for (int k = 1; k < at.n; ++k) {
                double cur = B.value(at.coord(k), p).b;
                acc += 0.5 * at.h() * (prev + cur);
                prev = cur;
                psi_t[(std::size_t(k) * ax.n + i) * ay.n + j] = acc;
            }
        }
    });

    // family two: radially inward from the boundary circle at fixed t; the
    // substep keeps the quadrature error below the finite-difference budget
    const double hstep = 0.5 * std::min(ax.h(), ay.h());
    parallel_for(ax.n, [&](int i) {
        for (int j = 0; j < ay.n; ++j) {
            Vec2 p{ax.coord(i), ay.coord(j)};
            double len = norm(p);
            Vec2 start = len > 1e-12 ? p * (1.0 / len) : Vec2{1.0, 0.0};
            Vec2 seg = p - start;
            double seg_len = norm(seg);
            int steps = std::max(2, int(std::ceil(seg_len / hstep)));
            for (int k = 0; k < at.n; ++k) {
                double t = at.coord(k);
                double acc = 0.0;
                OneFormVal prev = B.value(t, start);
                for (int m = 1; m <= steps; ++m) {
                    Vec2 xm = start + seg * (double(m) / steps);
                    OneFormVal cur = B.value(t, xm);
                    acc += 0.5 * (dot(prev.a + cur.a, seg) / steps);
                    prev = cur;
                }
                psi_s[(std::size_t(k) * ax.n + i) * ay.n + j] = acc;
            }
        }
    });

    PotentialResult res;
    double max_psi = 0.0, max_gap = 0.0, bmax = 0.0;
    for (int k = 0; k < at.n; ++k)
        for (int i = 0; i < ax.n; ++i)
            for (int j = 0; j < ay.n; ++j) {
                std::size_t idx = (std::size_t(k) * ax.n + i) * ay.n + j;
                max_psi = std::max(max_psi, std::abs(psi_t[idx]));
                max_gap = std::max(max_gap, std::abs(psi_t[idx] - psi_s[idx]));
                Vec2 p{ax.coord(i), ay.coord(j)};
                if (norm(p) >= 1.0) bmax = std::max(bmax, std::abs(psi_t[idx]));
            }
    res.psi = STScalar::grid(at, ax, ay, std::move(psi_t));
    res.discrepancy = max_gap;
    res.discrepancy_rel = max_psi > 0.0 ? max_gap / max_psi : 0.0;
    res.boundary_max = bmax;
    res.boundary_ok = bmax <= 1e-6 * std::max(1.0, max_psi);
    return res;
}

EquivalenceResult check_gauge_equivalence(const STOneForm& A1, const STOneForm& A2, double tol,
                                          const Axis& at, const Axis& ax, const Axis& ay) {
    std::size_t total = std::size_t(at.n) * ax.n * ay.n;
    std::vector<double> db(total), da1(total), da2(total);
    parallel_for(at.n, [&](int k) {
        double t = at.coord(k);
        for (int i = 0; i < ax.n; ++i)
            for (int j = 0; j < ay.n; ++j) {
                std::size_t idx = (std::size_t(k) * ax.n + i) * ay.n + j;
                Vec2 p{ax.coord(i), ay.coord(j)};
                OneFormVal v1 = A1.value(t, p), v2 = A2.value(t, p);
                db[idx] = v1.b - v2.b;
                da1[idx] = v1.a.x - v2.a.x;
                da2[idx] = v1.a.y - v2.a.y;
            }
    });
    STOneForm diff = STOneForm::grid(at, ax, ay, db, da1, da2);

    EquivalenceResult res;
    res.potential = extract_potential(diff, at, ax, ay);
    STOneForm dpsi = exterior_derivative(res.potential.psi);
    double num = 0.0, den = 0.0;
    const auto &eb = dpsi.b().values(), &e1 = dpsi.a1().values(), &e2 = dpsi.a2().values();
    for (std::size_t idx = 0; idx < total; ++idx) {
        double r0 = db[idx] - eb[idx], r1 = da1[idx] - e1[idx], r2 = da2[idx] - e2[idx];
        num += r0 * r0 + r1 * r1 + r2 * r2;
        den += db[idx] * db[idx] + da1[idx] * da1[idx] + da2[idx] * da2[idx];
    }
    res.residual = den > 0.0 ? std::sqrt(num / den) : 0.0;
    res.equivalent = res.residual <= tol;
    return res;
}

}  // namespace lrt
