#include "lrt/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "lrt/errors.hpp"
#include "lrt/parallel.hpp"
#include "lrt/slicing.hpp"

namespace lrt {

using par::block_sum;
using par::parallel_for;
using par::serial_for;

namespace {

// trapezoid cell weight for stored sample m of a traced geodesic; the last
// interval is the short boundary-hitting cell
double cell_weight(const Geodesic& geo, std::size_t m) {
    const auto& s = geo.s;
    if (s.size() < 2) return 0.0;
    if (m == 0) return 0.5 * (s[1].r - s[0].r);
    if (m + 1 == s.size()) return 0.5 * (s[m].r - s[m - 1].r);
    return 0.5 * (s[m + 1].r - s[m - 1].r);
}

void hat(const Axis& ax, double x, int& i0, double& f) {
    double u = ax.frac(x);
    i0 = int(std::floor(u));
    if (i0 < 0) i0 = 0;
    if (i0 > ax.n - 2) i0 = ax.n - 2;
    f = u - i0;
    if (f < 0.0) f = 0.0;
    if (f > 1.0) f = 1.0;
}

void require_disc_cover(const Axis& gx, const Axis& gy) {
    if (gx.lo > -1.0 || gx.hi < 1.0 || gy.lo > -1.0 || gy.hi < 1.0)
        throw ValidationError("spatial grid must cover the closed unit disc");
}

using RowEntries = std::vector<std::pair<int, double>>;

void combine(RowEntries& e) {
    std::sort(e.begin(), e.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < e.size();) {
        int c = e[i].first;
        double v = 0.0;
        while (i < e.size() && e[i].first == c) v += e[i++].second;
        e[out++] = {c, v};
    }
    e.resize(out);
}

Csr pack_rows(std::vector<RowEntries>& rows, int ncols) {
    Csr a;
    a.nrows = int(rows.size());
    a.ncols = ncols;
    a.rowptr.assign(rows.size() + 1, 0);
    for (std::size_t r = 0; r < rows.size(); ++r)
        a.rowptr[r + 1] = a.rowptr[r] + std::int64_t(rows[r].size());
    a.col.resize(std::size_t(a.rowptr.back()));
    a.val.resize(std::size_t(a.rowptr.back()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::int64_t p = a.rowptr[r];
        for (const auto& [c, v] : rows[r]) {
            a.col[std::size_t(p)] = c;
            a.val[std::size_t(p)] = v;
            ++p;
        }
        RowEntries().swap(rows[r]);
    }
    return a;
}

template <typename ForEach>
RayOperator assemble_ray_impl(const TracedRays& tr, const Axis& gx, const Axis& gy,
                              ForEach&& for_each) {
    require_disc_cover(gx, gy);
    const int n_rays = int(tr.rays.size());
    std::vector<RowEntries> rows(static_cast<std::size_t>(n_rays));
    for_each(n_rays, [&](int r) {
        const Geodesic& geo = tr.geos[std::size_t(r)];
        RowEntries& e = rows[std::size_t(r)];
        e.reserve(4 * geo.s.size());
        for (std::size_t m = 0; m < geo.s.size(); ++m) {
            double w = cell_weight(geo, m);
            if (w == 0.0) continue;
            int i0, j0;
            double fx, fy;
            hat(gx, geo.s[m].x.x, i0, fx);
            hat(gy, geo.s[m].x.y, j0, fy);
            int base = i0 * gy.n + j0;
            e.push_back({base, w * (1 - fx) * (1 - fy)});
            e.push_back({base + 1, w * (1 - fx) * fy});
            e.push_back({base + gy.n, w * fx * (1 - fy)});
            e.push_back({base + gy.n + 1, w * fx * fy});
        }
        combine(e);
    });

    RayOperator op;
    op.mat = pack_rows(rows, gx.n * gy.n);
    op.mat_t = build_transpose(op.mat);
    op.row_w.resize(std::size_t(n_rays));
    for (int r = 0; r < n_rays; ++r) op.row_w[std::size_t(r)] = tr.rays[std::size_t(r)].weight;
    op.gx = gx;
    op.gy = gy;
    op.n_rays = std::size_t(n_rays);
    return op;
}

// dense LU with partial pivoting for the small basis systems
struct DenseLU {
    int n = 0;
    std::vector<double> a;  // row-major, factored in place
    std::vector<int> piv;

    void factor(int nn, std::vector<double> m) {
        n = nn;
        a = std::move(m);
        piv.resize(std::size_t(n));
        for (int k = 0; k < n; ++k) {
            int p = k;
            for (int i = k + 1; i < n; ++i)
                if (std::abs(a[std::size_t(i) * n + k]) > std::abs(a[std::size_t(p) * n + k]))
                    p = i;
            piv[std::size_t(k)] = p;
            if (p != k)
                for (int j = 0; j < n; ++j)
                    std::swap(a[std::size_t(k) * n + j], a[std::size_t(p) * n + j]);
            double d = a[std::size_t(k) * n + k];
            if (d == 0.0) throw ConvergenceError("singular moment-of-basis matrix");
            for (int i = k + 1; i < n; ++i) {
                double l = a[std::size_t(i) * n + k] / d;
                a[std::size_t(i) * n + k] = l;
                for (int j = k + 1; j < n; ++j) a[std::size_t(i) * n + j] -= l * a[std::size_t(k) * n + j];
            }
        }
    }

    void solve(double* b) const {
        for (int k = 0; k < n; ++k) {
            if (piv[std::size_t(k)] != k) std::swap(b[k], b[piv[std::size_t(k)]]);
            for (int i = k + 1; i < n; ++i) b[i] -= a[std::size_t(i) * n + k] * b[k];
        }
        for (int i = n - 1; i >= 0; --i) {
            for (int j = i + 1; j < n; ++j) b[i] -= a[std::size_t(i) * n + j] * b[j];
            b[i] /= a[std::size_t(i) * n + i];
        }
    }
};

double inf_norm(const std::vector<double>& m, int n) {
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += std::abs(m[std::size_t(i) * n + j]);
        best = std::max(best, s);
    }
    return best;
}

// trapezoid of (r - shift)^p h(gamma(r)) along a traced geodesic
double power_line_integral(int p, const ScalarField2& h, const Geodesic& geo,
                           double shift = 0.0) {
    double acc = 0.0;
    for (std::size_t m = 0; m < geo.s.size(); ++m)
        acc += cell_weight(geo, m) * std::pow(geo.s[m].r - shift, p) * h(geo.s[m].x);
    return acc;
}

}  // namespace

TracedRays trace_rays(const MetricField& g, int n_base, int n_dir, const TraceOptions& opt) {
    TracedRays tr;
    tr.rays = boundary_ray_grid(g, n_base, n_dir);
    tr.geos.resize(tr.rays.size());
    parallel_for(int(tr.rays.size()), [&](int i) {
        tr.geos[std::size_t(i)] =
            trace_geodesic(g, tr.rays[std::size_t(i)].x0, tr.rays[std::size_t(i)].v0, opt);
    });
    return tr;
}

std::size_t Csr::bytes() const {
    return rowptr.size() * sizeof(std::int64_t) + col.size() * sizeof(int) +
           val.size() * sizeof(double);
}

void csr_apply(const Csr& a, const double* x, double* y) {
    parallel_for(a.nrows, [&](int r) {
        double acc = 0.0;
        for (std::int64_t p = a.rowptr[std::size_t(r)]; p < a.rowptr[std::size_t(r) + 1]; ++p)
            acc += a.val[std::size_t(p)] * x[a.col[std::size_t(p)]];
        y[r] = acc;
    });
}

std::vector<double> csr_apply(const Csr& a, const std::vector<double>& x) {
    if (int(x.size()) != a.ncols) throw ValidationError("csr_apply: dimension mismatch");
    std::vector<double> y(std::size_t(a.nrows));
    csr_apply(a, x.data(), y.data());
    return y;
}

void ref::csr_apply(const Csr& a, const double* x, double* y) {
    serial_for(a.nrows, [&](int r) {
        double acc = 0.0;
        for (std::int64_t p = a.rowptr[std::size_t(r)]; p < a.rowptr[std::size_t(r) + 1]; ++p)
            acc += a.val[std::size_t(p)] * x[a.col[std::size_t(p)]];
        y[r] = acc;
    });
}

Csr build_transpose(const Csr& a) {
    Csr t;
    t.nrows = a.ncols;
    t.ncols = a.nrows;
    t.rowptr.assign(std::size_t(a.ncols) + 1, 0);
    for (std::size_t p = 0; p < a.col.size(); ++p) t.rowptr[std::size_t(a.col[p]) + 1]++;
    for (int c = 0; c < a.ncols; ++c) t.rowptr[std::size_t(c) + 1] += t.rowptr[std::size_t(c)];
    t.col.resize(a.col.size());
    t.val.resize(a.val.size());
    // serial scatter so entries of each transpose row keep ascending source
    // row order; the adjoint apply then sums in a fixed order
    std::vector<std::int64_t> cur(t.rowptr.begin(), t.rowptr.end() - 1);
    for (int r = 0; r < a.nrows; ++r) {
        for (std::int64_t p = a.rowptr[std::size_t(r)]; p < a.rowptr[std::size_t(r) + 1]; ++p) {
            std::int64_t q = cur[std::size_t(a.col[std::size_t(p)])]++;
            t.col[std::size_t(q)] = r;
            t.val[std::size_t(q)] = a.val[std::size_t(p)];
        }
    }
    return t;
}

RayOperator assemble_ray_matrix(const TracedRays& tr, const Axis& gx, const Axis& gy) {
    return assemble_ray_impl(tr, gx, gy,
                             [](int n, auto&& body) { parallel_for(n, body); });
}

RayOperator ref::assemble_ray_matrix(const TracedRays& tr, const Axis& gx, const Axis& gy) {
    return assemble_ray_impl(tr, gx, gy, [](int n, auto&& body) { serial_for(n, body); });
}

RayOperator assemble_light_matrix(const TracedRays& tr, const Axis& s_axis, const Axis& gt,
                                  const Axis& gx, const Axis& gy,
                                  std::size_t memory_cap_bytes) {
    require_disc_cover(gx, gy);
    const int n_rays = int(tr.rays.size());
    const int n_rows = s_axis.n * n_rays;

    // footprint estimate before any large allocation: per ray, count spatial
    // cell changes along the trace once; time cell crossings are bounded by
    // tau / h_t + 2 for every s shift
    std::int64_t nnz_bound = 0;
    for (const Geodesic& geo : tr.geos) {
        std::int64_t changes = 0;
        int pi = -1, pj = -1;
        for (const auto& smp : geo.s) {
            int i0, j0;
            double f;
            hat(gx, smp.x.x, i0, f);
            hat(gy, smp.x.y, j0, f);
            if (i0 != pi || j0 != pj) ++changes;
            pi = i0;
            pj = j0;
        }
        std::int64_t t_cells = std::int64_t(geo.tau() / gt.h()) + 2;
        nnz_bound += std::int64_t(s_axis.n) * 8 * (changes + t_cells);
    }
    std::size_t est = std::size_t(nnz_bound) * (sizeof(double) + sizeof(int)) * 2 +
                      std::size_t(n_rows + gt.n * gx.n * gy.n + 2) * sizeof(std::int64_t);
    if (est > memory_cap_bytes)
        throw ValidationError("light matrix estimate " + std::to_string(est >> 20) +
                              " MiB exceeds cap " + std::to_string(memory_cap_bytes >> 20) +
                              " MiB");

    std::vector<RowEntries> rows(static_cast<std::size_t>(n_rows));
    parallel_for(n_rows, [&](int row) {
        const int is = row / n_rays;
        const int ir = row % n_rays;
        const double s = s_axis.coord(is);
        const Geodesic& geo = tr.geos[std::size_t(ir)];
        RowEntries& e = rows[std::size_t(row)];
        for (std::size_t m = 0; m < geo.s.size(); ++m) {
            double t = s + geo.s[m].r;
            if (t < gt.lo || t > gt.hi) continue;
            double w = cell_weight(geo, m);
            if (w == 0.0) continue;
            int k0, i0, j0;
            double ft, fx, fy;
            hat(gt, t, k0, ft);
            hat(gx, geo.s[m].x.x, i0, fx);
            hat(gy, geo.s[m].x.y, j0, fy);
            for (int dk = 0; dk < 2; ++dk) {
                double wt = w * (dk ? ft : 1 - ft);
                int base = ((k0 + dk) * gx.n + i0) * gy.n + j0;
                e.push_back({base, wt * (1 - fx) * (1 - fy)});
                e.push_back({base + 1, wt * (1 - fx) * fy});
                e.push_back({base + gy.n, wt * fx * (1 - fy)});
                e.push_back({base + gy.n + 1, wt * fx * fy});
            }
        }
        combine(e);
    });

    RayOperator op;
    op.mat = pack_rows(rows, gt.n * gx.n * gy.n);
    op.mat_t = build_transpose(op.mat);
    op.row_w.resize(std::size_t(n_rows));
    for (int row = 0; row < n_rows; ++row) {
        int is = row / n_rays;
        double hs = s_axis.h();
        double cell = (is == 0 || is == s_axis.n - 1) ? 0.5 * hs : hs;
        op.row_w[std::size_t(row)] = tr.rays[std::size_t(row % n_rays)].weight * cell;
    }
    op.gx = gx;
    op.gy = gy;
    op.gt = gt;
    op.s_axis = s_axis;
    op.spacetime = true;
    op.n_rays = std::size_t(n_rays);
    return op;
}

double normal_inf_norm(const RayOperator& op) {
    std::vector<double> ones(std::size_t(op.mat.ncols), 1.0);
    std::vector<double> tmp(std::size_t(op.mat.nrows));
    csr_apply(op.mat, ones.data(), tmp.data());
    for (int i = 0; i < op.mat.nrows; ++i) tmp[std::size_t(i)] *= op.row_w[std::size_t(i)];
    std::vector<double> rowsum(std::size_t(op.mat.ncols));
    csr_apply(op.mat_t, tmp.data(), rowsum.data());
    return max_abs(rowsum);
}

std::vector<double> solve_tikhonov(const RayOperator& op, const std::vector<double>& b,
                                   double lambda, const SolveOptions& opt, SolveReport* report) {
    const int m = op.mat.nrows;
    const int n = op.mat.ncols;
    if (int(b.size()) != m) throw ValidationError("solve_tikhonov: sinogram size mismatch");
    if (lambda < 0.0) lambda = 1e-4 * normal_inf_norm(op);

    std::vector<double> tmp_m(static_cast<std::size_t>(m));
    auto apply_normal = [&](const double* in, double* out) {
        csr_apply(op.mat, in, tmp_m.data());
        parallel_for(m, [&](int i) { tmp_m[std::size_t(i)] *= op.row_w[std::size_t(i)]; });
        csr_apply(op.mat_t, tmp_m.data(), out);
        parallel_for(n, [&](int i) { out[std::size_t(i)] += lambda * in[std::size_t(i)]; });
    };
    auto dot = [&](const std::vector<double>& u, const std::vector<double>& v) {
        return block_sum(n, [&](int i) { return u[std::size_t(i)] * v[std::size_t(i)]; });
    };

    std::vector<double> rhs(static_cast<std::size_t>(n));
    for (int i = 0; i < m; ++i) tmp_m[std::size_t(i)] = op.row_w[std::size_t(i)] * b[std::size_t(i)];
    csr_apply(op.mat_t, tmp_m.data(), rhs.data());

    SolveReport rep;
    rep.lambda = lambda;
    std::vector<double> x(std::size_t(n), 0.0);
    double rhs_norm = std::sqrt(dot(rhs, rhs));
    if (rhs_norm == 0.0) {
        rep.converged = true;
        if (report) *report = std::move(rep);
        return x;
    }

    // conjugate residual iteration: minimizes the normal-equation residual
    // over the Krylov space, so the recorded history never increases
    std::vector<double> r = rhs, p = rhs, mr(static_cast<std::size_t>(n)), mp(static_cast<std::size_t>(n));
    apply_normal(r.data(), mr.data());
    mp = mr;
    double r_mr = dot(r, mr);
    for (int it = 0; it < opt.max_iter; ++it) {
        double mp_mp = dot(mp, mp);
        if (mp_mp == 0.0 || r_mr == 0.0) {
            rep.converged = true;
            break;
        }
        double alpha = r_mr / mp_mp;
        parallel_for(n, [&](int i) {
            x[std::size_t(i)] += alpha * p[std::size_t(i)];
            r[std::size_t(i)] -= alpha * mp[std::size_t(i)];
        });
        double res = std::sqrt(dot(r, r));
        rep.residual_history.push_back(res);
        rep.iterations = it + 1;
        if (res <= opt.tol * rhs_norm) {
            rep.converged = true;
            break;
        }
        apply_normal(r.data(), mr.data());
        double r_mr_new = dot(r, mr);
        double beta = r_mr_new / r_mr;
        r_mr = r_mr_new;
        parallel_for(n, [&](int i) {
            p[std::size_t(i)] = r[std::size_t(i)] + beta * p[std::size_t(i)];
            mp[std::size_t(i)] = mr[std::size_t(i)] + beta * mp[std::size_t(i)];
        });
    }
    if (report) *report = std::move(rep);
    return x;
}

GaussLegendre gauss_legendre(int n) {
    if (n < 1) throw ValidationError("gauss_legendre: need at least one node");
    GaussLegendre gl;
    gl.x.resize(std::size_t(n));
    gl.w.resize(std::size_t(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        gl.x[std::size_t(i)] = -x;
        gl.w[std::size_t(i)] = w;
        gl.x[std::size_t(n - 1 - i)] = x;
        gl.w[std::size_t(n - 1 - i)] = w;
    }
    return gl;
}

TimeBasis::TimeBasis(double t_lo, double t_hi, int degree, int n_samples)
    : lo_(t_lo), hi_(t_hi), degree_(degree) {
    if (degree < 0) throw ValidationError("time basis degree must be nonnegative");
    if (!(t_hi > t_lo)) throw ValidationError("time basis window is empty");
    taxis_ = make_axis("t", t_lo, t_hi, n_samples);
}

double TimeBasis::eval(int j, double t) const {
    double u = 2.0 * (t - lo_) / (hi_ - lo_) - 1.0;
    double p0 = 1.0, p1 = u;
    if (j == 0) p1 = p0;
    for (int k = 2; k <= j; ++k) {
        double p2 = ((2 * k - 1) * u * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return std::sqrt((2.0 * j + 1.0) / (hi_ - lo_)) * p1;
}

std::vector<double> TimeBasis::gram() const {
    const int n = size();
    GaussLegendre gl = gauss_legendre(n + 1);
    std::vector<double> g(std::size_t(n) * n, 0.0);
    for (std::size_t q = 0; q < gl.x.size(); ++q) {
        double t = lo_ + 0.5 * (gl.x[q] + 1.0) * (hi_ - lo_);
        double w = 0.5 * (hi_ - lo_) * gl.w[q];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g[std::size_t(i) * n + j] += w * eval(i, t) * eval(j, t);
    }
    return g;
}

std::vector<double> TimeBasis::moment_matrix(int n_moments) const {
    // powers are taken about the interval midpoint; raw powers of t make the
    // matrix exponentially ill-conditioned as soon as the window sits away
    // from the origin
    const int n = size();
    const double mid = 0.5 * (lo_ + hi_);
    GaussLegendre gl = gauss_legendre((n_moments + degree_) / 2 + 2);
    std::vector<double> m(std::size_t(n_moments) * n, 0.0);
    for (std::size_t q = 0; q < gl.x.size(); ++q) {
        double t = lo_ + 0.5 * (gl.x[q] + 1.0) * (hi_ - lo_);
        double w = 0.5 * (hi_ - lo_) * gl.w[q];
        double tk = 1.0;
        for (int k = 0; k < n_moments; ++k) {
            for (int j = 0; j < n; ++j) m[std::size_t(k) * n + j] += w * tk * eval(j, t);
            tk *= t - mid;
        }
    }
    return m;
}

double TimeBasis::moment_condition() const {
    const int n = size();
    std::vector<double> m = moment_matrix(n);
    DenseLU lu;
    lu.factor(n, m);
    std::vector<double> inv(std::size_t(n) * n, 0.0);
    std::vector<double> e(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[std::size_t(j)] = 1.0;
        lu.solve(e.data());
        for (int i = 0; i < n; ++i) inv[std::size_t(i) * n + j] = e[std::size_t(i)];
    }
    return inf_norm(m, n) * inf_norm(inv, n);
}

ScalarField2 invert_geodesic_transform(const RayOperator& op, const std::vector<double>& sino,
                                       double lambda, const SolveOptions& opt,
                                       SolveReport* report) {
    if (op.spacetime) throw ValidationError("invert_geodesic_transform: got a light operator");
    std::vector<double> x = solve_tikhonov(op, sino, lambda, opt, report);
    return ScalarField2::grid(op.gx, op.gy, std::move(x), InterpMode::linear);
}

STScalar invert_light_transform_moments(const TracedRays& tr, const LightSinogram& L, int K,
                                        const TimeBasis& basis, const Axis& gx, const Axis& gy,
                                        double lambda, const SolveOptions& opt,
                                        MomentReport* report) {
    if (L.rays.size() != tr.rays.size())
        throw ValidationError("sinogram ray grid does not match the traced rays");
    if (basis.size() != K + 1)
        throw ValidationError("time basis degree must equal the maximum moment order");
    MomentReport rep;
    rep.moment_condition = basis.moment_condition();
    if (rep.moment_condition > 1e8)
        throw ConvergenceError("moment-of-basis matrix condition " +
                               std::to_string(rep.moment_condition) +
                               " too large; reduce the moment order K");

    RayOperator op = assemble_ray_matrix(tr, gx, gy);
    if (lambda < 0.0) lambda = 1e-4 * normal_inf_norm(op);
    const int n_rays = int(tr.rays.size());

    // Work with the real moments mu_k = Re(i^k m_k); for real fields the
    // data moments are i^{-k} real, and the slice identity becomes
    //   Re(i^k d_k) = I(mu_k) + sum_{j<k} C(k,j) (-1)^{k-j} int r^{k-j} mu_j dr
    // which keeps every triangular step a real geodesic-transform inversion.
    // Moments are taken about the basis midpoint (the identity is invariant
    // under a common shift of s and t) so the basis solve stays conditioned.
    const double t_mid = 0.5 * (basis.t_axis().lo + basis.t_axis().hi);
    std::vector<ScalarField2> mu;
    mu.reserve(std::size_t(K) + 1);
    for (int k = 0; k <= K; ++k) {
        std::vector<cplx> dk = sinogram_moments(k, L, nullptr, t_mid);
        std::vector<double> rhs(static_cast<std::size_t>(n_rays));
        for (int i = 0; i < n_rays; ++i) {
            cplx tw = dk[std::size_t(i)];
            for (int q = 0; q < k; ++q) tw *= cplx(0.0, 1.0);
            rhs[std::size_t(i)] = tw.real();
            rep.imag_leak = std::max(rep.imag_leak, std::abs(tw.imag()));
        }
        for (int j = 0; j < k; ++j) {
            // moving the remainder coupling to the data side flips its sign
            double coeff = binomial(k, j) * ((k - j) % 2 ? 1.0 : -1.0);
            const ScalarField2& mj = mu[std::size_t(j)];
            parallel_for(n_rays, [&](int i) {
                rhs[std::size_t(i)] +=
                    coeff * power_line_integral(k - j, mj, tr.geos[std::size_t(i)]);
            });
        }
        SolveReport srep;
        std::vector<double> vals = solve_tikhonov(op, rhs, lambda, opt, &srep);
        rep.solves.push_back(std::move(srep));
        mu.push_back(ScalarField2::grid(gx, gy, std::move(vals), InterpMode::cubic));
    }

    // per-node solve of the moment-of-basis system, then sample the basis
    const int nb = basis.size();
    DenseLU lu;
    lu.factor(nb, basis.moment_matrix(nb));
    const Axis& gt = basis.t_axis();
    std::vector<double> table(std::size_t(gt.n) * nb);
    for (int k = 0; k < gt.n; ++k)
        for (int j = 0; j < nb; ++j) table[std::size_t(k) * nb + j] = basis.eval(j, gt.coord(k));

    std::vector<double> out(std::size_t(gt.n) * gx.n * gy.n);
    parallel_for(gx.n, [&](int i) {
        std::vector<double> coef(static_cast<std::size_t>(nb));
        for (int j = 0; j < gy.n; ++j) {
            for (int k = 0; k < nb; ++k) coef[std::size_t(k)] = mu[std::size_t(k)].node(i, j);
            lu.solve(coef.data());
            for (int k = 0; k < gt.n; ++k) {
                double acc = 0.0;
                for (int q = 0; q < nb; ++q) acc += table[std::size_t(k) * nb + q] * coef[std::size_t(q)];
                out[(std::size_t(k) * gx.n + i) * gy.n + j] = acc;
            }
        }
    });
    if (report) *report = std::move(rep);
    return STScalar::grid(gt, gx, gy, std::move(out), InterpMode::linear);
}

STScalar invert_light_transform_direct(const TracedRays& tr, const LightSinogram& L,
                                       const Axis& gt, const Axis& gx, const Axis& gy,
                                       double lambda, const SolveOptions& opt,
                                       SolveReport* report) {
    if (L.rays.size() != tr.rays.size())
        throw ValidationError("sinogram ray grid does not match the traced rays");
    RayOperator op = assemble_light_matrix(tr, L.s_axis, gt, gx, gy, opt.memory_cap_bytes);
    std::vector<double> x = solve_tikhonov(op, L.value, lambda, opt, report);
    return STScalar::grid(gt, gx, gy, std::move(x), InterpMode::linear);
}

}  // namespace lrt
