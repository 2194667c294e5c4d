#include "lrt/geodesics.hpp"

#include <cmath>
#include <sstream>

#include "lrt/errors.hpp"

namespace lrt {

namespace {

struct State {
    Vec2 x, v;
};

inline State axpy(const State& s, double h, const State& d) {
    return {{s.x.x + h * d.x.x, s.x.y + h * d.x.y}, {s.v.x + h * d.v.x, s.v.y + h * d.v.y}};
}

inline State deriv(const MetricField& g, const State& s) { return {s.v, g.accel(s.x, s.v)}; }

State rk4_step(const MetricField& g, const State& s, double h) {
    const State k1 = deriv(g, s);
    const State k2 = deriv(g, axpy(s, 0.5 * h, k1));
    const State k3 = deriv(g, axpy(s, 0.5 * h, k2));
    const State k4 = deriv(g, axpy(s, h, k3));
    State out = s;
    out.x.x += h / 6.0 * (k1.x.x + 2 * k2.x.x + 2 * k3.x.x + k4.x.x);
    out.x.y += h / 6.0 * (k1.x.y + 2 * k2.x.y + 2 * k3.x.y + k4.x.y);
    out.v.x += h / 6.0 * (k1.v.x + 2 * k2.v.x + 2 * k3.v.x + k4.v.x);
    out.v.y += h / 6.0 * (k1.v.y + 2 * k2.v.y + 2 * k3.v.y + k4.v.y);
    return out;
}

inline double bdry(const State& s) { return norm2(s.x) - 1.0; }

}  // namespace

Geodesic trace_geodesic(const MetricField& g, Vec2 x0, Vec2 v0, const TraceOptions& opt) {
    if (opt.step <= 0.0) throw ValidationError("trace_geodesic: step must be positive");
    if (norm2(x0) > 1.0 + 1e-12)
        throw ValidationError("trace_geodesic: start point lies outside the disc");

    Geodesic geo;
    State cur{x0, v0};
    double r = 0.0;
    geo.s.push_back({0.0, cur.x, cur.v});

    int since_store = 0;
    for (;;) {
        State nxt = rk4_step(g, cur, opt.step);
        if (bdry(nxt) > 0.0) {
            // the exit lies inside this step; bisect the substep length
            double lo = 0.0, hi = opt.step;
            State hit = nxt;
            double bh = bdry(nxt);
            for (int it = 0; it < 200; ++it) {
                if (std::fabs(bh) <= opt.boundary_tol) break;
                const double mid = 0.5 * (lo + hi);
                const State sm = rk4_step(g, cur, mid);
                const double bm = bdry(sm);
                if (bm > 0.0) {
                    hi = mid;
                    hit = sm;
                    bh = bm;
                } else {
                    lo = mid;
                }
                if (hi - lo < 1e-18) {
                    hit = rk4_step(g, cur, hi);
                    bh = bdry(hit);
                    break;
                }
            }
            geo.s.push_back({r + hi, hit.x, hit.v});
            return geo;
        }
        r += opt.step;
        cur = nxt;
        if (r > opt.max_arc)
            throw TrappedRayError("trace_geodesic: no boundary exit within arc length " +
                                  std::to_string(opt.max_arc) + " (trapped ray?)");
        if (++since_store == opt.store_stride) {
            geo.s.push_back({r, cur.x, cur.v});
            since_store = 0;
        }
    }
}

Vec2 boundary_point(double alpha) { return {std::cos(alpha), std::sin(alpha)}; }

Vec2 inward_vector(const MetricField& g, double alpha, double mu) {
    const Vec2 p = boundary_point(alpha);
    const Vec2 inw{-p.x, -p.y};
    const Vec2 tan{-p.y, p.x};
    const double cc = g.c(p);
    return cc * (std::cos(mu) * inw + std::sin(mu) * tan);
}

std::vector<BoundaryRay> boundary_ray_grid(const MetricField& g, int n_base, int n_dir) {
    if (n_base < 1 || n_dir < 1)
        throw ValidationError("boundary_ray_grid: need n_base >= 1 and n_dir >= 1");
    const double pi = std::acos(-1.0);
    const double dalpha = 2.0 * pi / n_base;
    const double dmu = pi / n_dir;
    std::vector<BoundaryRay> rays;
    rays.reserve(std::size_t(n_base) * n_dir);
    for (int i = 0; i < n_base; ++i) {
        const double alpha = dalpha * i;
        const Vec2 p = boundary_point(alpha);
        const double cb = g.c(p);
        for (int j = 0; j < n_dir; ++j) {
            const double mu = -0.5 * pi + dmu * (j + 0.5);
            BoundaryRay r;
            r.alpha = alpha;
            r.mu = mu;
            r.x0 = p;
            r.v0 = inward_vector(g, alpha, mu);
            r.weight = std::cos(mu) * dmu * dalpha / cb;
            rays.push_back(r);
        }
    }
    return rays;
}

double longest_chord(const MetricField& g, Vec2 x, int n_dirs, const TraceOptions& opt) {
    if (n_dirs < 1) throw ValidationError("longest_chord: n_dirs must be >= 1");
    const double pi = std::acos(-1.0);
    const double cc = g.c(x);
    double best = 0.0;
    for (int k = 0; k < n_dirs; ++k) {
        const double th = pi * k / n_dirs;
        const Vec2 v{cc * std::cos(th), cc * std::sin(th)};
        const double fwd = trace_geodesic(g, x, v, opt).tau();
        const double bwd = trace_geodesic(g, x, {-v.x, -v.y}, opt).tau();
        best = std::max(best, fwd + bwd);
    }
    return best;
}

Geodesic longest_geodesic_through(const MetricField& g, Vec2 x, int n_dirs,
                                  const TraceOptions& opt) {
    if (n_dirs < 1) throw ValidationError("longest_geodesic_through: n_dirs must be >= 1");
    const double pi = std::acos(-1.0);
    const double cc = g.c(x);
    double best = -1.0;
    Vec2 best_entry{}, best_v{};
    for (int k = 0; k < n_dirs; ++k) {
        const double th = pi * k / n_dirs;
        const Vec2 v{cc * std::cos(th), cc * std::sin(th)};
        const Geodesic fwd = trace_geodesic(g, x, v, opt);
        const Geodesic bwd = trace_geodesic(g, x, {-v.x, -v.y}, opt);
        if (fwd.tau() + bwd.tau() > best) {
            best = fwd.tau() + bwd.tau();
            best_entry = bwd.s.back().x;
            best_v = {-bwd.s.back().v.x, -bwd.s.back().v.y};
        }
    }
    return trace_geodesic(g, best_entry, best_v, opt);
}

double boundary_distance(const MetricField& g, Vec2 x, int n_dirs, const TraceOptions& opt) {
    if (n_dirs < 1) throw ValidationError("boundary_distance: n_dirs must be >= 1");
    const double pi = std::acos(-1.0);
    const double cc = g.c(x);
    double best = opt.max_arc;
    for (int k = 0; k < n_dirs; ++k) {
        const double th = 2.0 * pi * k / n_dirs;
        const Vec2 v{cc * std::cos(th), cc * std::sin(th)};
        best = std::min(best, trace_geodesic(g, x, v, opt).tau());
    }
    return best;
}

double diameter(const MetricField& g, int n_base, int n_dir, const TraceOptions& opt) {
    const double pi = std::acos(-1.0);
    double best = 0.0;
    for (int i = 0; i < n_base; ++i) {
        const double alpha = 2.0 * pi * i / n_base;
        for (int j = 0; j < n_dir; ++j) {
            const double mu = -0.5 * pi + pi * (j + 0.5) / n_dir;
            best = std::max(
                best, trace_geodesic(g, boundary_point(alpha), inward_vector(g, alpha, mu), opt)
                          .tau());
        }
    }
    return best;
}

bool in_influence_set(const MetricField& g, double t, Vec2 x, double T, int n_dirs,
                      const TraceOptions& opt) {
    const double D = longest_chord(g, x, n_dirs, opt);
    return D < t && t < T - D;
}

std::vector<double> jacobi_field(const MetricField& g, const Geodesic& geo) {
    const std::size_t n = geo.s.size();
    std::vector<double> J(n, 0.0);
    if (n == 0) return J;
    std::vector<double> K(n);
    for (std::size_t i = 0; i < n; ++i) K[i] = g.curvature(geo.s[i].x);
    double j = 0.0, jp = 1.0;
    J[0] = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = geo.s[i + 1].r - geo.s[i].r;
        // RK4 with K linear on the interval
        auto kat = [&](double u) { return K[i] + (K[i + 1] - K[i]) * u; };
        const double k1j = jp, k1p = -kat(0.0) * j;
        const double k2j = jp + 0.5 * h * k1p, k2p = -kat(0.5) * (j + 0.5 * h * k1j);
        const double k3j = jp + 0.5 * h * k2p, k3p = -kat(0.5) * (j + 0.5 * h * k2j);
        const double k4j = jp + h * k3p, k4p = -kat(1.0) * (j + h * k3j);
        j += h / 6.0 * (k1j + 2 * k2j + 2 * k3j + k4j);
        jp += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
        J[i + 1] = j;
    }
    return J;
}

SimplicityReport check_simplicity(const MetricField& g, int n_base, int n_dir,
                                  const TraceOptions& opt) {
    SimplicityReport rep;
    std::ostringstream os;

    double min_kappa = 1e300;
    const int n_alpha = 720;
    const double pi = std::acos(-1.0);
    for (int i = 0; i < n_alpha; ++i)
        min_kappa = std::min(min_kappa, g.boundary_curvature(2.0 * pi * i / n_alpha));
    if (!(min_kappa > 0.0)) {
        rep.nonconvex_boundary = true;
        os << "boundary curvature dips to " << min_kappa << "; ";
    }

    int n_trapped = 0, n_conj = 0;
    for (const BoundaryRay& ray : boundary_ray_grid(g, n_base, n_dir)) {
        Geodesic geo;
        try {
            geo = trace_geodesic(g, ray.x0, ray.v0, opt);
        } catch (const TrappedRayError&) {
            ++n_trapped;
            continue;
        }
        const std::vector<double> J = jacobi_field(g, geo);
        for (std::size_t i = 1; i < J.size(); ++i) {
            if (geo.s[i].r > 1e-9 && J[i] <= 0.0) {
                ++n_conj;
                break;
            }
        }
    }
    if (n_trapped > 0) {
        rep.trapped_ray = true;
        os << n_trapped << " rays hit the arc-length cap; ";
    }
    if (n_conj > 0) {
        rep.conjugate_point = true;
        os << n_conj << " rays have a Jacobi zero before exit; ";
    }
    rep.simple = !rep.trapped_ray && !rep.conjugate_point && !rep.nonconvex_boundary;
    if (rep.simple) os << "no trapped rays, no conjugate points, convex boundary";
    rep.detail = os.str();
    return rep;
}

}  // namespace lrt
