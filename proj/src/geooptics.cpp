#include "lrt/geooptics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "lrt/errors.hpp"
#include "lrt/parallel.hpp"

namespace lrt {

namespace {

// quintic smoothstep with vanishing first and second derivatives at 0 and 1
double smoothstep5(double w) {
    return ((6.0 * w - 15.0) * w + 10.0) * w * w * w;
}

}  // namespace

double chi_profile(double u) {
    u = std::fabs(u);
    if (u <= 0.25) return 1.0;
    if (u >= 0.5) return 0.0;
    return smoothstep5((0.5 - u) / 0.25);
}

double chi_sq_mass() {
    // plateau gives 1/2 exactly, the two ramps by composite Simpson
    static const double mass = [] {
        const int n = 4096;
        const double h = 0.25 / n;
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
            const double u0 = 0.25 + k * h;
            const double f0 = chi_profile(u0), fm = chi_profile(u0 + 0.5 * h),
                         f1 = chi_profile(u0 + h);
            s += h / 6.0 * (f0 * f0 + 4.0 * fm * fm + f1 * f1);
        }
        return 0.5 + 2.0 * s;
    }();
    return mass;
}

// ---------------------------------------------------------------------------
// mollification

namespace {

void check_kernel_fits(double radius, const Axis& a) {
    if (2.0 * radius >= a.hi - a.lo) {
        char msg[160];
        std::snprintf(msg, sizeof msg, "mollify: kernel diameter %.4g exceeds the %s extent %.4g",
                      2.0 * radius, a.name.c_str(), a.hi - a.lo);
        throw ValidationError(msg);
    }
}

}  // namespace

ScalarField2 mollify(const ScalarField2& f, double rho) {
    if (!f.is_grid()) throw ValidationError("mollify: grid-backed field required");
    if (!(rho > 0.0)) throw ValidationError("mollify: rho must be positive");
    const Axis ax = f.ax(), ay = f.ay();
    const double radius = 0.5 * std::pow(rho, -0.25);
    check_kernel_fits(radius, ax);
    check_kernel_fits(radius, ay);
    const double scale = 1.0 / (2.0 * radius);  // == rho^{1/4}
    const int mx = int(std::ceil(radius / ax.h()));
    const int my = int(std::ceil(radius / ay.h()));
    const int kw = 2 * my + 1;
    std::vector<double> w(std::size_t(2 * mx + 1) * kw);
    double sum = 0.0;
    for (int di = -mx; di <= mx; ++di)
        for (int dj = -my; dj <= my; ++dj) {
            const double v = chi_profile(std::hypot(di * ax.h(), dj * ay.h()) * scale);
            w[std::size_t(di + mx) * kw + (dj + my)] = v;
            sum += v;
        }
    for (double& v : w) v /= sum;

    std::vector<double> out(std::size_t(ax.n) * ay.n, 0.0);
    par::parallel_for(ax.n, [&](int i) {
        for (int j = 0; j < ay.n; ++j) {
            double acc = 0.0;
            for (int di = -mx; di <= mx; ++di) {
                const int ii = i + di;
                if (ii < 0 || ii >= ax.n) continue;
                const double* wrow = &w[std::size_t(di + mx) * kw];
                for (int dj = -my; dj <= my; ++dj) {
                    const int jj = j + dj;
                    if (jj < 0 || jj >= ay.n) continue;
                    acc += wrow[dj + my] * f.node(ii, jj);
                }
            }
            out[std::size_t(i) * ay.n + j] = acc;
        }
    });
    return ScalarField2::grid(ax, ay, std::move(out), InterpMode::cubic);
}

STScalar mollify(const STScalar& f, double rho) {
    if (!f.is_grid()) throw ValidationError("mollify: grid-backed field required");
    if (!(rho > 0.0)) throw ValidationError("mollify: rho must be positive");
    const Axis at = f.at(), ax = f.ax(), ay = f.ay();
    const double radius = 0.5 * std::pow(rho, -0.25);
    check_kernel_fits(radius, at);
    check_kernel_fits(radius, ax);
    check_kernel_fits(radius, ay);
    const double scale = 1.0 / (2.0 * radius);
    const int mt = int(std::ceil(radius / at.h()));
    const int mx = int(std::ceil(radius / ax.h()));
    const int my = int(std::ceil(radius / ay.h()));
    const int kwx = 2 * mx + 1, kwy = 2 * my + 1;
    std::vector<double> w(std::size_t(2 * mt + 1) * kwx * kwy);
    double sum = 0.0;
    for (int dk = -mt; dk <= mt; ++dk)
        for (int di = -mx; di <= mx; ++di)
            for (int dj = -my; dj <= my; ++dj) {
                const double rr = std::sqrt(dk * at.h() * dk * at.h() + di * ax.h() * di * ax.h() +
                                            dj * ay.h() * dj * ay.h());
                const double v = chi_profile(rr * scale);
                w[(std::size_t(dk + mt) * kwx + (di + mx)) * kwy + (dj + my)] = v;
                sum += v;
            }
    for (double& v : w) v /= sum;

    std::vector<double> out(std::size_t(at.n) * ax.n * ay.n, 0.0);
    par::parallel_for(at.n, [&](int k) {
        for (int i = 0; i < ax.n; ++i)
            for (int j = 0; j < ay.n; ++j) {
                double acc = 0.0;
                for (int dk = -mt; dk <= mt; ++dk) {
                    const int kk = k + dk;
                    if (kk < 0 || kk >= at.n) continue;
                    for (int di = -mx; di <= mx; ++di) {
                        const int ii = i + di;
                        if (ii < 0 || ii >= ax.n) continue;
                        const double* wrow = &w[(std::size_t(dk + mt) * kwx + (di + mx)) * kwy];
                        for (int dj = -my; dj <= my; ++dj) {
                            const int jj = j + dj;
                            if (jj < 0 || jj >= ay.n) continue;
                            acc += wrow[dj + my] * f.node(kk, ii, jj);
                        }
                    }
                }
                out[(std::size_t(k) * ax.n + i) * ay.n + j] = acc;
            }
    });
    STScalar g = STScalar::grid(at, ax, ay, std::move(out), InterpMode::cubic);
    return g;
}

STOneForm mollify(const STOneForm& B, double rho) {
    if (!B.is_grid()) throw ValidationError("mollify: grid-backed one-form required");
    STScalar b = mollify(B.b(), rho);
    STScalar a1 = mollify(B.a1(), rho);
    STScalar a2 = mollify(B.a2(), rho);
    return STOneForm::grid(b.at(), b.ax(), b.ay(), b.values(), a1.values(), a2.values(),
                           InterpMode::cubic);
}

// ---------------------------------------------------------------------------
// exponential map about the chart vertex

namespace {

struct RayState {
    Vec2 x, v;
    double J, Jp;
};

RayState state_deriv(const MetricField& g, const RayState& s) {
    RayState d;
    d.x = s.v;
    d.v = g.accel(s.x, s.v);
    d.J = s.Jp;
    d.Jp = -g.curvature(s.x) * s.J;
    return d;
}

RayState state_axpy(const RayState& s, double h, const RayState& d) {
    return {s.x + h * d.x, s.v + h * d.v, s.J + h * d.J, s.Jp + h * d.Jp};
}

RayState rk4_step(const MetricField& g, const RayState& s, double h) {
    const RayState k1 = state_deriv(g, s);
    const RayState k2 = state_deriv(g, state_axpy(s, 0.5 * h, k1));
    const RayState k3 = state_deriv(g, state_axpy(s, 0.5 * h, k2));
    const RayState k4 = state_deriv(g, state_axpy(s, h, k3));
    RayState out = s;
    out.x = s.x + (h / 6.0) * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    out.v = s.v + (h / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
    out.J = s.J + (h / 6.0) * (k1.J + 2.0 * k2.J + 2.0 * k3.J + k4.J);
    out.Jp = s.Jp + (h / 6.0) * (k1.Jp + 2.0 * k2.Jp + 2.0 * k3.Jp + k4.Jp);
    return out;
}

RayState vertex_state(const MetricField& g, Vec2 p, double theta) {
    const double cp = g.c(p);
    return {p, Vec2{cp * std::cos(theta), cp * std::sin(theta)}, 0.0, 1.0};
}

// radial geodesic from the vertex sampled at uniform arc steps, with a cubic
// read-back used when one fan line serves many tube nodes
struct RadialRay {
    double h = 0.0;
    std::vector<RayState> s;

    void eval(double R, Vec2* x, Vec2* v, double* J) const {
        const int n = int(s.size());
        double u = R / h;
        int k = int(std::floor(u));
        k = std::clamp(k, 1, n - 3);
        const double tt = u - k;
        // 4-point Lagrange weights on k-1 .. k+2
        const double w0 = -tt * (tt - 1.0) * (tt - 2.0) / 6.0;
        const double w1 = (tt + 1.0) * (tt - 1.0) * (tt - 2.0) / 2.0;
        const double w2 = -(tt + 1.0) * tt * (tt - 2.0) / 2.0;
        const double w3 = (tt + 1.0) * tt * (tt - 1.0) / 6.0;
        const RayState &s0 = s[k - 1], &s1 = s[k], &s2 = s[k + 1], &s3 = s[k + 2];
        if (x) *x = w0 * s0.x + w1 * s1.x + w2 * s2.x + w3 * s3.x;
        if (v) *v = w0 * s0.v + w1 * s1.v + w2 * s2.v + w3 * s3.v;
        if (J) *J = w0 * s0.J + w1 * s1.J + w2 * s2.J + w3 * s3.J;
    }
};

RadialRay trace_radial(const MetricField& g, Vec2 p, double theta, double R_max, double step) {
    RadialRay ray;
    const int n = std::max(4, int(std::ceil(R_max / step)));
    ray.h = R_max / n;
    ray.s.reserve(n + 1);
    RayState st = vertex_state(g, p, theta);
    ray.s.push_back(st);
    for (int k = 0; k < n; ++k) {
        st = rk4_step(g, st, ray.h);
        ray.s.push_back(st);
    }
    return ray;
}

}  // namespace

void DiscChart::exp_at(double theta, double R, Vec2* x, Vec2* v, double* jac) const {
    RayState st = vertex_state(g_, p_, theta);
    const double L = std::fabs(R);
    const int n = std::max(1, int(std::ceil(L / step_)));
    const double h = R / n;
    for (int k = 0; k < n; ++k) st = rk4_step(g_, st, h);
    if (x) *x = st.x;
    if (v) *v = st.v;
    if (jac) *jac = st.J;
}

void DiscChart::to_polar(Vec2 xq, double* R_out, double* th_out, double* jac, Vec2* v_out,
                         const double* R_guess, const double* theta_guess) const {
    double R = R_guess ? *R_guess : norm(xq - p_);
    double th = theta_guess ? *theta_guess : std::atan2(xq.y - p_.y, xq.x - p_.x);
    Vec2 x{}, v{};
    double J = 0.0;
    const double tol = 1e-12 * std::max(1.0, norm(xq - p_));
    for (int iter = 0; iter < 50; ++iter) {
        exp_at(th, R, &x, &v, &J);
        const Vec2 F = x - xq;
        if (norm(F) <= tol) {
            if (R_out) *R_out = R;
            if (th_out) *th_out = th;
            if (jac) *jac = J;
            if (v_out) *v_out = v;
            return;
        }
        // columns d(exp)/dR = v and d(exp)/dtheta = J perp(v)
        const double a11 = v.x, a12 = -J * v.y;
        const double a21 = v.y, a22 = J * v.x;
        const double det = a11 * a22 - a12 * a21;
        if (std::fabs(det) < 1e-14)
            throw ConvergenceError("to_polar: singular exponential map (conjugate point)");
        double dR = -(a22 * F.x - a12 * F.y) / det;
        double dth = -(-a21 * F.x + a11 * F.y) / det;
        dR = std::clamp(dR, -0.5, 0.5);
        dth = std::clamp(dth, -0.5, 0.5);
        R += dR;
        th += dth;
    }
    throw ConvergenceError("to_polar: Newton iteration did not converge");
}

void DiscChart::to_z(double t, Vec2 x, double z[3]) const {
    double R = 0.0, th = 0.0;
    to_polar(x, &R, &th);
    const double r = R - r0_;
    z[0] = (t + r) * kInvSqrt2;
    z[1] = (-t + r + s0_) * kInvSqrt2;
    z[2] = th - theta_p_;
}

void DiscChart::from_z(const double z[3], double* t, Vec2* x, double* jac, Vec2* v) const {
    const double r = 0.5 * (M_SQRT2 * (z[0] + z[1]) - s0_);
    if (t) *t = 0.5 * (M_SQRT2 * (z[0] - z[1]) + s0_);
    exp_at(theta_p_ + z[2], r0_ + r, x, v, jac);
}

double DiscChart::phi(double t, Vec2 x) const {
    double z[3];
    to_z(t, x, z);
    return z[1];
}

void DiscChart::metric_z(const double z[3], double h, double out[9]) const {
    double col[3][3];
    for (int k = 0; k < 3; ++k) {
        double zp[3] = {z[0], z[1], z[2]}, zm[3] = {z[0], z[1], z[2]};
        zp[k] += h;
        zm[k] -= h;
        double tp = 0.0, tm = 0.0;
        Vec2 xp{}, xm{};
        from_z(zp, &tp, &xp);
        from_z(zm, &tm, &xm);
        col[k][0] = (tp - tm) / (2.0 * h);
        col[k][1] = (xp.x - xm.x) / (2.0 * h);
        col[k][2] = (xp.y - xm.y) / (2.0 * h);
    }
    Vec2 xc{};
    from_z(z, nullptr, &xc);
    const double cc = g_.c(xc);
    const double wsp = 1.0 / (cc * cc);
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
            out[k * 3 + l] = -col[k][0] * col[l][0] +
                             wsp * (col[k][1] * col[l][1] + col[k][2] * col[l][2]);
}

double DiscChart::eikonal_residual(Vec2 x, double h) const {
    double gr2;
    if (g_.is_euclidean()) {
        // the polar radius about p is exact here, no differencing needed
        const Vec2 d = x - p_;
        const double n2 = norm(d);
        gr2 = (d.x * d.x + d.y * d.y) / (n2 * n2);
        return -0.5 + 0.5 * gr2;
    }
    double R0 = 0.0, th0 = 0.0;
    to_polar(x, &R0, &th0);
    double Rxp, Rxm, Ryp, Rym, th;
    to_polar(x + Vec2{h, 0.0}, &Rxp, &th, nullptr, nullptr, &R0, &th0);
    to_polar(x - Vec2{h, 0.0}, &Rxm, &th, nullptr, nullptr, &R0, &th0);
    to_polar(x + Vec2{0.0, h}, &Ryp, &th, nullptr, nullptr, &R0, &th0);
    to_polar(x - Vec2{0.0, h}, &Rym, &th, nullptr, nullptr, &R0, &th0);
    const double rx = (Rxp - Rxm) / (2.0 * h), ry = (Ryp - Rym) / (2.0 * h);
    const double cc = g_.c(x);
    return -0.5 + 0.5 * cc * cc * (rx * rx + ry * ry);
}

DiscChart build_chart(const MetricField& g, const Geodesic& gamma, double s0, double p_offset,
                      const TraceOptions& opt) {
    if (gamma.s.size() < 2) throw ValidationError("build_chart: geodesic has no samples");
    if (!(p_offset > 0.0)) throw ValidationError("build_chart: p_offset must be positive");
    if (!(s0 > 0.0)) throw ValidationError("build_chart: s0 must be positive");
    DiscChart ch;
    ch.g_ = g;
    ch.s0_ = s0;
    ch.tau_ = gamma.tau();
    ch.r0_ = p_offset;
    ch.step_ = opt.step;

    // continue the geodesic backward past the entry point; the reversed ray
    // lands at the vertex p, and reversing once more points back at gamma(0)
    RayState st{gamma.s.front().x, -1.0 * gamma.s.front().v, 0.0, 1.0};
    const int n = std::max(1, int(std::ceil(p_offset / opt.step)));
    const double h = p_offset / n;
    for (int k = 0; k < n; ++k) st = rk4_step(g, st, h);
    ch.p_ = st.x;
    const Vec2 dir = -1.0 * st.v;
    ch.theta_p_ = std::atan2(dir.y, dir.x);
    return ch;
}

double delta_prime(const DiscChart& ch, double tol, double hi) {
    const double a0 = ch.a0(), b0 = ch.b0();
    auto invertible = [&](double delta) -> bool {
        // the tube grows past both chord ends by the same margin the
        // amplitude grid uses, so test the padded window
        const double lo0 = a0 - delta, hi0 = b0 + delta;
        try {
            for (int i0 = 0; i0 <= 6; ++i0) {
                const double z0 = lo0 + (hi0 - lo0) * i0 / 6.0;
                for (int ia = 0; ia < 8; ++ia) {
                    const double ang = 2.0 * M_PI * ia / 8.0;
                    for (double rad : {0.5 * delta, delta}) {
                        const double z[3] = {z0, rad * std::cos(ang), rad * std::sin(ang)};
                        double t = 0.0, J = 0.0;
                        Vec2 x{};
                        ch.from_z(z, &t, &x, &J);
                        if (!(J > 0.0)) return false;
                        double zb[3];
                        ch.to_z(t, x, zb);
                        const double err = std::max({std::fabs(zb[0] - z[0]),
                                                     std::fabs(zb[1] - z[1]),
                                                     std::fabs(zb[2] - z[2])});
                        if (!(err <= tol)) return false;
                    }
                }
            }
        } catch (const Error&) {
            return false;
        }
        return true;
    };
    double lo = 0.0;
    if (!invertible(1e-3)) return 0.0;
    lo = 1e-3;
    if (invertible(hi)) return hi;
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        (invertible(mid) ? lo : hi) = mid;
    }
    return lo;
}

// ---------------------------------------------------------------------------
// amplitudes on the tube grid

AmplitudePair build_amplitudes(const DiscChart& ch, const STOneForm& A1rho,
                               const STOneForm& A2rho, double rho, double delta, int n0, int n1,
                               int n2) {
    if (!(delta > 0.0)) throw ValidationError("build_amplitudes: delta must be positive");
    if (n0 < 8 || n1 < 4 || n2 < 4)
        throw ValidationError("build_amplitudes: tube grid too coarse (need n0>=8, n1,n2>=4)");
    AmplitudePair am;
    am.rho = rho;
    am.delta = delta;
    am.az0 = make_axis("z0", ch.a0() - delta, ch.b0() + delta, n0);
    am.az1 = make_axis("z1", -0.5 * delta, 0.5 * delta, n1);
    am.az2 = make_axis("z2", -0.5 * delta, 0.5 * delta, n2);

    // deepest tube point behind the vertex must still have positive radius
    const double r_min = 0.5 * (M_SQRT2 * (am.az0.lo + am.az1.lo) - ch.s0());
    if (ch.r0() + r_min <= 0.0)
        throw ValidationError(
            "build_amplitudes: tube reaches behind the chart vertex; "
            "increase p_offset or decrease delta");
    const double r_max = 0.5 * (M_SQRT2 * (am.az0.hi + am.az1.hi) - ch.s0());
    const double R_max = ch.r0() + r_max + 4.0 * ch.step();

    const std::size_t total = std::size_t(n0) * n1 * n2;
    am.c1.assign(total, 0.0);
    am.c2.assign(total, 0.0);
    am.cum1.assign(total, 0.0);
    am.cum2.assign(total, 0.0);
    am.a10.assign(total, 0.0);
    am.a20.assign(total, 0.0);
    am.jac.assign(total, 0.0);

    // one fan trace per transverse angle serves the whole (z0, z1) sheet
    std::vector<int> bad(n2, 0);
    par::parallel_for(n2, [&](int i2) {
        const RadialRay ray =
            trace_radial(ch.metric(), ch.p(), ch.theta_p() + am.az2.coord(i2), R_max, ch.step());
        for (int i0 = 0; i0 < n0; ++i0)
            for (int i1 = 0; i1 < n1; ++i1) {
                const double z0 = am.az0.coord(i0), z1 = am.az1.coord(i1);
                const double r = 0.5 * (M_SQRT2 * (z0 + z1) - ch.s0());
                const double t = 0.5 * (M_SQRT2 * (z0 - z1) + ch.s0());
                Vec2 x{}, v{};
                double J = 0.0;
                ray.eval(ch.r0() + r, &x, &v, &J);
                const std::size_t id = am.idx(i0, i1, i2);
                if (!(J > 0.0)) bad[i2] = 1;
                am.jac[id] = J;
                const OneFormVal w1 = A1rho.value(t, x);
                const OneFormVal w2 = A2rho.value(t, x);
                am.a10[id] = (w1.b + dot(w1.a, v)) * DiscChart::kInvSqrt2;
                am.a20[id] = (w2.b + dot(w2.a, v)) * DiscChart::kInvSqrt2;
            }
    });
    if (std::find(bad.begin(), bad.end(), 1) != bad.end())
        throw ConvergenceError("build_amplitudes: conjugate point inside the tube");

    // running integral from a0 along z0 on each transverse line, then the
    // amplitudes themselves
    const double h0 = am.az0.h();
    const double fa = (ch.a0() - am.az0.lo) / h0;
    const int ia = std::clamp(int(std::floor(fa)), 0, n0 - 2);
    const double wa = fa - ia;
    par::parallel_for(n1 * n2, [&](int pair) {
        const int i1 = pair / n2, i2 = pair % n2;
        const double chi =
            chi_profile(std::hypot(am.az1.coord(i1), am.az2.coord(i2)) / delta);
        for (int pass = 0; pass < 2; ++pass) {
            const std::vector<double>& a = pass == 0 ? am.a10 : am.a20;
            std::vector<double>& cum = pass == 0 ? am.cum1 : am.cum2;
            std::vector<double>& c = pass == 0 ? am.c1 : am.c2;
            const double sgn = pass == 0 ? 0.5 : -0.5;
            double acc = 0.0;
            cum[am.idx(0, i1, i2)] = 0.0;
            for (int i0 = 1; i0 < n0; ++i0) {
                acc += 0.5 * h0 * (a[am.idx(i0 - 1, i1, i2)] + a[am.idx(i0, i1, i2)]);
                cum[am.idx(i0, i1, i2)] = acc;
            }
            const double base =
                (1.0 - wa) * cum[am.idx(ia, i1, i2)] + wa * cum[am.idx(ia + 1, i1, i2)];
            for (int i0 = 0; i0 < n0; ++i0) {
                const std::size_t id = am.idx(i0, i1, i2);
                cum[id] -= base;
                c[id] = chi / std::sqrt(am.jac[id]) * std::exp(sgn * cum[id]);
            }
        }
    });
    return am;
}

std::vector<double> transport_residual(const AmplitudePair& am, int which) {
    if (which != 1 && which != 2) throw ValidationError("transport_residual: which must be 1 or 2");
    const std::vector<double>& c = which == 1 ? am.c1 : am.c2;
    const std::vector<double>& a = which == 1 ? am.a10 : am.a20;
    const double sgn = which == 1 ? -0.5 : 0.5;
    const int n0 = am.az0.n, n1 = am.az1.n, n2 = am.az2.n;
    const double h0 = am.az0.h();
    std::vector<double> res(c.size(), 0.0);
    par::parallel_for(n1 * n2, [&](int pair) {
        const int i1 = pair / n2, i2 = pair % n2;
        for (int i0 = 1; i0 + 1 < n0; ++i0) {
            const std::size_t id = am.idx(i0, i1, i2);
            const std::size_t idm = am.idx(i0 - 1, i1, i2), idp = am.idx(i0 + 1, i1, i2);
            const double dc = (c[idp] - c[idm]) / (2.0 * h0);
            const double dlj = (std::log(am.jac[idp]) - std::log(am.jac[idm])) / (2.0 * h0);
            res[id] = dc + (0.5 * dlj + sgn * a[id]) * c[id];
        }
    });
    return res;
}

// ---------------------------------------------------------------------------
// probe on an output grid

namespace {

// one-sided and centered second differences on a uniform line of m samples
double d2_line(const double* u, int i, int m, double h) {
    const double h2 = h * h;
    if (i == 0) return (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / h2;
    if (i == m - 1) return (2.0 * u[m - 1] - 5.0 * u[m - 2] + 4.0 * u[m - 3] - u[m - 4]) / h2;
    return (u[i - 1] - 2.0 * u[i] + u[i + 1]) / h2;
}

double d1_line(const double* u, int i, int m, double h) {
    if (i == 0) return (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
    if (i == m - 1) return (3.0 * u[m - 1] - 4.0 * u[m - 2] + u[m - 3]) / (2.0 * h);
    return (u[i + 1] - u[i - 1]) / (2.0 * h);
}

}  // namespace

GoProbe go_probe(const DiscChart& ch, const AmplitudePair& am, const STOneForm& A,
                 const STOneForm& Arho, const STScalar* q, int which, const Axis& at,
                 const Axis& ax, const Axis& ay) {
    if (which != 1 && which != 2) throw ValidationError("go_probe: which must be 1 or 2");
    at.validate();
    ax.validate();
    ay.validate();
    if (at.n < 4 || ax.n < 4 || ay.n < 4)
        throw ValidationError("go_probe: output grid too coarse for the stencils");
    const int nt = at.n, nx = ax.n, ny = ay.n;
    const std::size_t total = std::size_t(nt) * nx * ny;
    const double sgn = which == 1 ? 1.0 : -1.0;
    const Spline3 cum_spl(am.az0, am.az1, am.az2, which == 1 ? am.cum1 : am.cum2);

    // polar data per spatial node, shared by every time level
    std::vector<double> Rv(std::size_t(nx) * ny), thv(Rv.size()), Jv(Rv.size());
    std::vector<Vec2> vv(Rv.size());
    par::parallel_for(nx, [&](int i) {
        bool warm = false;
        double Rg = 0.0, tg = 0.0;
        for (int j = 0; j < ny; ++j) {
            const Vec2 xy{ax.coord(i), ay.coord(j)};
            const std::size_t id = std::size_t(i) * ny + j;
            ch.to_polar(xy, &Rv[id], &thv[id], &Jv[id], &vv[id], warm ? &Rg : nullptr,
                        warm ? &tg : nullptr);
            Rg = Rv[id];
            tg = thv[id];
            warm = true;
        }
    });

    // amplitude and phase; exact zeros wherever the cutoff vanishes
    std::vector<double> cval(total, 0.0), phval(total, 0.0);
    const double half_w = 0.5 * am.delta;
    par::parallel_for(nx, [&](int i) {
        for (int j = 0; j < ny; ++j) {
            const std::size_t sid = std::size_t(i) * ny + j;
            const double r = Rv[sid] - ch.r0();
            const double z2 = thv[sid] - ch.theta_p();
            const double Jf = 1.0 / std::sqrt(std::max(Jv[sid], 1e-300));
            for (int k = 0; k < nt; ++k) {
                const double t = at.coord(k);
                const double z0 = (t + r) * DiscChart::kInvSqrt2;
                const double z1 = (-t + r + ch.s0()) * DiscChart::kInvSqrt2;
                const std::size_t id = (std::size_t(k) * nx + i) * ny + j;
                phval[id] = z1;
                if (std::fabs(z2) >= half_w) continue;
                const double chi = chi_profile(std::hypot(z1, z2) / am.delta);
                if (chi == 0.0) continue;
                const double z0c = std::clamp(z0, am.az0.lo, am.az0.hi);
                const double cum = cum_spl.value(z0c, z1, z2);
                cval[id] = Jf * chi * std::exp(sgn * 0.5 * cum);
            }
        }
    });

    // principal term
    std::vector<cplx> pr(total, cplx(0.0, 0.0));
    par::parallel_for(nt, [&](int k) {
        for (std::size_t id = std::size_t(k) * nx * ny; id < std::size_t(k + 1) * nx * ny; ++id)
            if (cval[id] != 0.0) pr[id] = std::polar(cval[id], sgn * am.rho * phval[id]);
    });

    // wave operator applied to the amplitude, then the mismatch term from the
    // unmollified one-form
    const double ht = at.h(), hx = ax.h(), hy = ay.h();
    std::vector<double> brho, a1rho, a2rho;
    brho.assign(total, 0.0);
    a1rho.assign(total, 0.0);
    a2rho.assign(total, 0.0);
    par::parallel_for(nt, [&](int k) {
        const double t = at.coord(k);
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                const OneFormVal w = Arho.value(t, Vec2{ax.coord(i), ay.coord(j)});
                const std::size_t id = (std::size_t(k) * nx + i) * ny + j;
                brho[id] = w.b;
                a1rho[id] = w.a.x;
                a2rho[id] = w.a.y;
            }
    });

    std::vector<cplx> src(total, cplx(0.0, 0.0));
    par::parallel_for(nt, [&](int k) {
        std::vector<double> ut(nt), uxl(nx), uyl(ny);
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                const std::size_t id = (std::size_t(k) * nx + i) * ny + j;
                const std::size_t sid = std::size_t(i) * ny + j;
                const Vec2 xy{ax.coord(i), ay.coord(j)};
                const double cg = ch.metric().c(xy);
                const double cg2 = cg * cg;

                auto at_kij = [&](int kk, int ii, int jj) {
                    return cval[(std::size_t(kk) * nx + ii) * ny + jj];
                };
                for (int kk = 0; kk < nt; ++kk) ut[kk] = at_kij(kk, i, j);
                for (int ii = 0; ii < nx; ++ii) uxl[ii] = at_kij(k, ii, j);
                for (int jj = 0; jj < ny; ++jj) uyl[jj] = at_kij(k, i, jj);

                const double ctt = d2_line(ut.data(), k, nt, ht);
                const double cxx = d2_line(uxl.data(), i, nx, hx);
                const double cyy = d2_line(uyl.data(), j, ny, hy);
                const double ct = d1_line(ut.data(), k, nt, ht);
                const double cx = d1_line(uxl.data(), i, nx, hx);
                const double cy = d1_line(uyl.data(), j, ny, hy);

                // L c = d_tt c - c^2 lap c + Arho(grad c) + q c, adjoint
                // flips the one-form and shifts q by its divergence
                double Lc = ctt - cg2 * (cxx + cyy);
                const double agrad = -brho[id] * ct + cg2 * (a1rho[id] * cx + a2rho[id] * cy);
                double qv = q ? q->value(at.coord(k), xy) : 0.0;
                if (which == 1) {
                    Lc += agrad + qv * cval[id];
                } else {
                    for (int kk = 0; kk < nt; ++kk)
                        ut[kk] = brho[(std::size_t(kk) * nx + i) * ny + j];
                    for (int ii = 0; ii < nx; ++ii)
                        uxl[ii] = a1rho[(std::size_t(k) * nx + ii) * ny + j];
                    for (int jj = 0; jj < ny; ++jj)
                        uyl[jj] = a2rho[(std::size_t(k) * nx + i) * ny + jj];
                    const double divA = -d1_line(ut.data(), k, nt, ht) +
                                        cg2 * (d1_line(uxl.data(), i, nx, hx) +
                                               d1_line(uyl.data(), j, ny, hy));
                    Lc += -agrad + (qv - divA) * cval[id];
                }

                const OneFormVal w = A.value(at.coord(k), xy);
                const double da0 = (w.b - brho[id] + dot(w.a - Vec2{a1rho[id], a2rho[id]},
                                                         vv[sid])) *
                                   DiscChart::kInvSqrt2;
                const cplx inner = cplx(Lc, sgn * am.rho * da0 * cval[id]);
                src[id] = -std::polar(1.0, sgn * am.rho * phval[id]) * inner;
            }
    });

    GoProbe out;
    out.principal = CSTScalar::grid(at, ax, ay, std::move(pr), InterpMode::linear);
    out.source = CSTScalar::grid(at, ax, ay, std::move(src), InterpMode::linear);
    return out;
}

// ---------------------------------------------------------------------------
// strip versions with the closed-form chart

MinkAmplitudes build_mink_amplitudes(const MinkChart& ch, const LineForm& A1, const LineForm& A2,
                                     double rho, double delta, int n0, int n1) {
    if (!(delta > 0.0)) throw ValidationError("build_mink_amplitudes: delta must be positive");
    if (n0 < 8 || n1 < 4)
        throw ValidationError("build_mink_amplitudes: tube grid too coarse");
    MinkAmplitudes am;
    am.ch = ch;
    am.rho = rho;
    am.delta = delta;
    am.az0 = make_axis("z0", ch.a0() - delta, ch.b0() + delta, n0);
    am.az1 = make_axis("z1", -0.5 * delta, 0.5 * delta, n1);
    const std::size_t total = std::size_t(n0) * n1;
    am.cum1.assign(total, 0.0);
    am.cum2.assign(total, 0.0);
    am.a10.assign(total, 0.0);
    am.a20.assign(total, 0.0);

    auto eval = [](const LineForm& A, double t, double x) {
        const double b = A.b ? A.b(t, x) : 0.0;
        const double a = A.a ? A.a(t, x) : 0.0;
        return (b + a) * DiscChart::kInvSqrt2;
    };
    const double h0 = am.az0.h();
    const double fa = (ch.a0() - am.az0.lo) / h0;
    const int ia = std::clamp(int(std::floor(fa)), 0, n0 - 2);
    const double wa = fa - ia;
    par::parallel_for(n1, [&](int i1) {
        const double z1 = am.az1.coord(i1);
        for (int i0 = 0; i0 < n0; ++i0) {
            const double z0 = am.az0.coord(i0);
            const double t = ch.t_from(z0, z1), x = ch.x_from(z0, z1);
            am.a10[std::size_t(i0) * n1 + i1] = eval(A1, t, x);
            am.a20[std::size_t(i0) * n1 + i1] = eval(A2, t, x);
        }
        for (int pass = 0; pass < 2; ++pass) {
            const std::vector<double>& a = pass == 0 ? am.a10 : am.a20;
            std::vector<double>& cum = pass == 0 ? am.cum1 : am.cum2;
            double acc = 0.0;
            for (int i0 = 1; i0 < n0; ++i0) {
                acc += 0.5 * h0 * (a[std::size_t(i0 - 1) * n1 + i1] + a[std::size_t(i0) * n1 + i1]);
                cum[std::size_t(i0) * n1 + i1] = acc;
            }
            const double base = (1.0 - wa) * cum[std::size_t(ia) * n1 + i1] +
                                wa * cum[std::size_t(ia + 1) * n1 + i1];
            for (int i0 = 0; i0 < n0; ++i0) cum[std::size_t(i0) * n1 + i1] -= base;
        }
    });
    am.spl1 = std::make_shared<Spline2>(am.az0, am.az1, am.cum1);
    am.spl2 = std::make_shared<Spline2>(am.az0, am.az1, am.cum2);
    return am;
}

double MinkAmplitudes::c(int which, double t, double x) const {
    const double w1 = ch.z1(t, x);
    const double chi = chi_profile(w1 / delta);
    if (chi == 0.0) return 0.0;
    const double w0 = std::clamp(ch.z0(t, x), az0.lo, az0.hi);
    const double cum = (which == 1 ? *spl1 : *spl2).value(w0, w1);
    return chi * std::exp((which == 1 ? 0.5 : -0.5) * cum);
}

cplx MinkAmplitudes::principal(int which, double t, double x) const {
    const double cc = c(which, t, x);
    if (cc == 0.0) return {0.0, 0.0};
    return std::polar(cc, (which == 1 ? 1.0 : -1.0) * rho * ch.phi(t, x));
}

std::vector<double> mink_transport_residual(const MinkAmplitudes& am, int which) {
    if (which != 1 && which != 2)
        throw ValidationError("mink_transport_residual: which must be 1 or 2");
    const std::vector<double>& a = which == 1 ? am.a10 : am.a20;
    const std::vector<double>& cum = which == 1 ? am.cum1 : am.cum2;
    const double esgn = which == 1 ? 0.5 : -0.5;
    const int n0 = am.az0.n, n1 = am.az1.n;
    const double h0 = am.az0.h();
    std::vector<double> res(cum.size(), 0.0);
    par::parallel_for(n1, [&](int i1) {
        const double chi = chi_profile(am.az1.coord(i1) / am.delta);
        std::vector<double> c(n0);
        for (int i0 = 0; i0 < n0; ++i0)
            c[i0] = chi * std::exp(esgn * cum[std::size_t(i0) * n1 + i1]);
        for (int i0 = 1; i0 + 1 < n0; ++i0) {
            const double dc = (c[i0 + 1] - c[i0 - 1]) / (2.0 * h0);
            res[std::size_t(i0) * n1 + i1] =
                dc - esgn * a[std::size_t(i0) * n1 + i1] * c[i0];
        }
    });
    return res;
}

}  // namespace lrt
