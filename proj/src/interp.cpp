#include "lrt/interp.hpp"

#include <cmath>
#include <cstdlib>

namespace lrt {

namespace {

constexpr double kPole = -0.26794919243112270647;  // sqrt(3) - 2
constexpr double kGain = 6.0;                      // (1-z)(1-1/z) for the cubic pole

double initial_causal(const double* c, int n, long stride, double z) {
    // horizon where |z|^k drops below double precision
    int horizon = static_cast<int>(std::ceil(std::log(1e-17) / std::log(std::fabs(z))));
    if (horizon < n) {
        double zn = z, sum = c[0];
        for (int k = 1; k < horizon; ++k) {
            sum += zn * c[k * stride];
            zn *= z;
        }
        return sum;
    }
    // exact mirror formula for short lines
    double zn = z, iz = 1.0 / z;
    double z2n = std::pow(z, n - 1);
    double sum = c[0] + z2n * c[(n - 1) * stride];
    z2n *= z2n * iz;
    for (int k = 1; k <= n - 2; ++k) {
        sum += (zn + z2n) * c[k * stride];
        zn *= z;
        z2n *= iz;
    }
    return sum / (1.0 - zn * zn);
}

double initial_anticausal(const double* c, int n, long stride, double z) {
    return (z / (z * z - 1.0)) * (z * c[(n - 2) * stride] + c[(n - 1) * stride]);
}

inline int mirror(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * (n - 1);
    i = std::abs(i) % period;
    return i < n ? i : period - i;
}

struct LineW {
    int idx[4];
    double w[4];
};

// node indices and weights for one axis; u must already be clamped to [lo,hi]
inline LineW line_weights(const Axis& a, double u, void (*wfn)(double, double[4]),
                          double scale) {
    double f = a.frac(u);
    if (f < 0.0) f = 0.0;
    const double fmax = static_cast<double>(a.n - 1);
    if (f > fmax) f = fmax;
    int i = static_cast<int>(f);
    if (i > a.n - 2) i = a.n - 2;
    const double t = f - i;
    LineW lw;
    wfn(t, lw.w);
    for (int m = 0; m < 4; ++m) {
        lw.idx[m] = mirror(i - 1 + m, a.n);
        lw.w[m] *= scale;
    }
    return lw;
}

}  // namespace

void bspline_prefilter_line(double* c, int n, long stride) {
    if (n == 1) return;
    for (int k = 0; k < n; ++k) c[k * stride] *= kGain;
    c[0] = initial_causal(c, n, stride, kPole);
    for (int k = 1; k < n; ++k) c[k * stride] += kPole * c[(k - 1) * stride];
    c[(n - 1) * stride] = initial_anticausal(c, n, stride, kPole);
    for (int k = n - 2; k >= 0; --k)
        c[k * stride] = kPole * (c[(k + 1) * stride] - c[k * stride]);
}

void cubic_weights(double t, double w[4]) {
    const double t2 = t * t, t3 = t2 * t, mt = 1.0 - t;
    w[0] = mt * mt * mt / 6.0;
    w[1] = (4.0 - 6.0 * t2 + 3.0 * t3) / 6.0;
    w[2] = (1.0 + 3.0 * t + 3.0 * t2 - 3.0 * t3) / 6.0;
    w[3] = t3 / 6.0;
}

void cubic_dweights(double t, double w[4]) {
    const double t2 = t * t, mt = 1.0 - t;
    w[0] = -0.5 * mt * mt;
    w[1] = -2.0 * t + 1.5 * t2;
    w[2] = 0.5 + t - 1.5 * t2;
    w[3] = 0.5 * t2;
}

void cubic_d2weights(double t, double w[4]) {
    w[0] = 1.0 - t;
    w[1] = -2.0 + 3.0 * t;
    w[2] = 1.0 - 3.0 * t;
    w[3] = t;
}

Spline2::Spline2(Axis ax, Axis ay, std::vector<double> samples)
    : ax_(std::move(ax)), ay_(std::move(ay)), c_(std::move(samples)) {
    ax_.validate();
    ay_.validate();
    if (c_.size() != static_cast<std::size_t>(ax_.n) * ay_.n)
        throw ValidationError("Spline2: sample count does not match axes");
    for (int i = 0; i < ax_.n; ++i) bspline_prefilter_line(&c_[std::size_t(i) * ay_.n], ay_.n, 1);
    for (int j = 0; j < ay_.n; ++j) bspline_prefilter_line(&c_[j], ax_.n, ay_.n);
}

double Spline2::value(double x, double y) const {
    const LineW wx = line_weights(ax_, x, cubic_weights, 1.0);
    const LineW wy = line_weights(ay_, y, cubic_weights, 1.0);
    double s = 0.0;
    for (int m = 0; m < 4; ++m) {
        const double* row = &c_[std::size_t(wx.idx[m]) * ay_.n];
        double sy = 0.0;
        for (int k = 0; k < 4; ++k) sy += wy.w[k] * row[wy.idx[k]];
        s += wx.w[m] * sy;
    }
    return s;
}

void Spline2::value_grad(double x, double y, double* f, double* fx, double* fy) const {
    const LineW wx = line_weights(ax_, x, cubic_weights, 1.0);
    const LineW wy = line_weights(ay_, y, cubic_weights, 1.0);
    const LineW dx = line_weights(ax_, x, cubic_dweights, 1.0 / ax_.h());
    const LineW dy = line_weights(ay_, y, cubic_dweights, 1.0 / ay_.h());
    double s = 0.0, sx = 0.0, sy = 0.0;
    for (int m = 0; m < 4; ++m) {
        const double* row = &c_[std::size_t(wx.idx[m]) * ay_.n];
        double v = 0.0, vy = 0.0;
        for (int k = 0; k < 4; ++k) {
            v += wy.w[k] * row[wy.idx[k]];
            vy += dy.w[k] * row[dy.idx[k]];
        }
        s += wx.w[m] * v;
        sx += dx.w[m] * v;
        sy += wx.w[m] * vy;
    }
    if (f) *f = s;
    if (fx) *fx = sx;
    if (fy) *fy = sy;
}

void Spline2::value_grad_hess(double x, double y, double* f, double* fx, double* fy, double* fxx,
                              double* fyy, double* fxy) const {
    const LineW wx = line_weights(ax_, x, cubic_weights, 1.0);
    const LineW wy = line_weights(ay_, y, cubic_weights, 1.0);
    const LineW dx = line_weights(ax_, x, cubic_dweights, 1.0 / ax_.h());
    const LineW dy = line_weights(ay_, y, cubic_dweights, 1.0 / ay_.h());
    const LineW d2x = line_weights(ax_, x, cubic_d2weights, 1.0 / (ax_.h() * ax_.h()));
    const LineW d2y = line_weights(ay_, y, cubic_d2weights, 1.0 / (ay_.h() * ay_.h()));
    double s = 0, sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (int m = 0; m < 4; ++m) {
        const double* row = &c_[std::size_t(wx.idx[m]) * ay_.n];
        double v = 0, vy = 0, vyy = 0;
        for (int k = 0; k < 4; ++k) {
            v += wy.w[k] * row[wy.idx[k]];
            vy += dy.w[k] * row[dy.idx[k]];
            vyy += d2y.w[k] * row[d2y.idx[k]];
        }
        s += wx.w[m] * v;
        sx += dx.w[m] * v;
        sxx += d2x.w[m] * v;
        sy += wx.w[m] * vy;
        sxy += dx.w[m] * vy;
        syy += wx.w[m] * vyy;
    }
    if (f) *f = s;
    if (fx) *fx = sx;
    if (fy) *fy = sy;
    if (fxx) *fxx = sxx;
    if (fyy) *fyy = syy;
    if (fxy) *fxy = sxy;
}

Spline3::Spline3(Axis a0, Axis a1, Axis a2, std::vector<double> samples)
    : a0_(std::move(a0)), a1_(std::move(a1)), a2_(std::move(a2)), c_(std::move(samples)) {
    a0_.validate();
    a1_.validate();
    a2_.validate();
    const std::size_t n0 = a0_.n, n1 = a1_.n, n2 = a2_.n;
    if (c_.size() != n0 * n1 * n2) throw ValidationError("Spline3: sample count does not match axes");
    for (std::size_t i = 0; i < n0; ++i)
        for (std::size_t j = 0; j < n1; ++j)
            bspline_prefilter_line(&c_[(i * n1 + j) * n2], static_cast<int>(n2), 1);
    for (std::size_t i = 0; i < n0; ++i)
        for (std::size_t k = 0; k < n2; ++k)
            bspline_prefilter_line(&c_[i * n1 * n2 + k], static_cast<int>(n1),
                                   static_cast<long>(n2));
    for (std::size_t j = 0; j < n1; ++j)
        for (std::size_t k = 0; k < n2; ++k)
            bspline_prefilter_line(&c_[j * n2 + k], static_cast<int>(n0),
                                   static_cast<long>(n1 * n2));
}

double Spline3::value(double u0, double u1, double u2) const {
    const LineW w0 = line_weights(a0_, u0, cubic_weights, 1.0);
    const LineW w1 = line_weights(a1_, u1, cubic_weights, 1.0);
    const LineW w2 = line_weights(a2_, u2, cubic_weights, 1.0);
    const std::size_t n1 = a1_.n, n2 = a2_.n;
    double s = 0.0;
    for (int m = 0; m < 4; ++m) {
        const std::size_t base0 = std::size_t(w0.idx[m]) * n1 * n2;
        double s1 = 0.0;
        for (int k = 0; k < 4; ++k) {
            const double* row = &c_[base0 + std::size_t(w1.idx[k]) * n2];
            double s2 = 0.0;
            for (int l = 0; l < 4; ++l) s2 += w2.w[l] * row[w2.idx[l]];
            s1 += w1.w[k] * s2;
        }
        s += w0.w[m] * s1;
    }
    return s;
}

void Spline3::value_grad(double u0, double u1, double u2, double* f, double* g0, double* g1,
                         double* g2) const {
    double h00, h11, h22;
    value_grad_diag2(u0, u1, u2, f, g0, g1, g2, &h00, &h11, &h22);
}

void Spline3::value_grad_diag2(double u0, double u1, double u2, double* f, double* g0, double* g1,
                               double* g2, double* h00, double* h11, double* h22) const {
    const LineW w0 = line_weights(a0_, u0, cubic_weights, 1.0);
    const LineW w1 = line_weights(a1_, u1, cubic_weights, 1.0);
    const LineW w2 = line_weights(a2_, u2, cubic_weights, 1.0);
    const LineW d0 = line_weights(a0_, u0, cubic_dweights, 1.0 / a0_.h());
    const LineW d1 = line_weights(a1_, u1, cubic_dweights, 1.0 / a1_.h());
    const LineW d2 = line_weights(a2_, u2, cubic_dweights, 1.0 / a2_.h());
    const LineW e0 = line_weights(a0_, u0, cubic_d2weights, 1.0 / (a0_.h() * a0_.h()));
    const LineW e1 = line_weights(a1_, u1, cubic_d2weights, 1.0 / (a1_.h() * a1_.h()));
    const LineW e2 = line_weights(a2_, u2, cubic_d2weights, 1.0 / (a2_.h() * a2_.h()));
    const std::size_t n1 = a1_.n, n2 = a2_.n;

    double s = 0, s0 = 0, s1 = 0, s2 = 0, q0 = 0, q1 = 0, q2 = 0;
    for (int m = 0; m < 4; ++m) {
        const std::size_t base0 = std::size_t(w0.idx[m]) * n1 * n2;
        double v = 0, v1 = 0, v2 = 0, u11 = 0, u22 = 0;
        for (int k = 0; k < 4; ++k) {
            const double* row = &c_[base0 + std::size_t(w1.idx[k]) * n2];
            double a = 0, a2d = 0, a2dd = 0;
            for (int l = 0; l < 4; ++l) {
                a += w2.w[l] * row[w2.idx[l]];
                a2d += d2.w[l] * row[d2.idx[l]];
                a2dd += e2.w[l] * row[e2.idx[l]];
            }
            v += w1.w[k] * a;
            v1 += d1.w[k] * a;
            u11 += e1.w[k] * a;
            v2 += w1.w[k] * a2d;
            u22 += w1.w[k] * a2dd;
        }
        s += w0.w[m] * v;
        s0 += d0.w[m] * v;
        q0 += e0.w[m] * v;
        s1 += w0.w[m] * v1;
        q1 += w0.w[m] * u11;
        s2 += w0.w[m] * v2;
        q2 += w0.w[m] * u22;
    }
    if (f) *f = s;
    if (g0) *g0 = s0;
    if (g1) *g1 = s1;
    if (g2) *g2 = s2;
    if (h00) *h00 = q0;
    if (h11) *h11 = q1;
    if (h22) *h22 = q2;
}

}  // namespace lrt
