#include "lrt/fields.hpp"

#include <cmath>

namespace lrt {

namespace {

// bilinear on raw node values, caller guarantees the point is inside the box
double bilinear(const Axis& ax, const Axis& ay, const std::vector<double>& v, double x,
                double y) {
    double fx = ax.frac(x), fy = ay.frac(y);
    if (fx < 0) fx = 0;
    if (fy < 0) fy = 0;
    int i = static_cast<int>(fx), j = static_cast<int>(fy);
    if (i > ax.n - 2) i = ax.n - 2;
    if (j > ay.n - 2) j = ay.n - 2;
    const double tx = fx - i, ty = fy - j;
    const std::size_t ny = ay.n;
    const double* row0 = &v[std::size_t(i) * ny + j];
    const double* row1 = row0 + ny;
    return (1 - tx) * ((1 - ty) * row0[0] + ty * row0[1]) +
           tx * ((1 - ty) * row1[0] + ty * row1[1]);
}

// trilinear with t fastest varying handled by caller passing slice pointers
double trilinear(const Axis& at, const Axis& ax, const Axis& ay, const std::vector<double>& v,
                 double t, double x, double y) {
    double ft = at.frac(t);
    if (ft < 0) ft = 0;
    int k = static_cast<int>(ft);
    if (k > at.n - 2) k = at.n - 2;
    const double tt = ft - k;
    const std::size_t slice = std::size_t(ax.n) * ay.n;
    // reuse bilinear on the two t-slices
    const std::vector<double>* vv = &v;
    // cheap view trick: bilinear over subranges via pointer arithmetic
    auto bil = [&](int kk) {
        double fx = ax.frac(x), fy = ay.frac(y);
        if (fx < 0) fx = 0;
        if (fy < 0) fy = 0;
        int i = static_cast<int>(fx), j = static_cast<int>(fy);
        if (i > ax.n - 2) i = ax.n - 2;
        if (j > ay.n - 2) j = ay.n - 2;
        const double tx = fx - i, ty = fy - j;
        const double* base = vv->data() + std::size_t(kk) * slice;
        const double* row0 = base + std::size_t(i) * ay.n + j;
        const double* row1 = row0 + ay.n;
        return (1 - tx) * ((1 - ty) * row0[0] + ty * row0[1]) +
               tx * ((1 - ty) * row1[0] + ty * row1[1]);
    };
    return (1 - tt) * bil(k) + tt * bil(k + 1);
}

std::vector<double> part(const std::vector<cplx>& v, bool imag) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = imag ? v[i].imag() : v[i].real();
    return out;
}

}  // namespace

ScalarField2 ScalarField2::grid(Axis x, Axis y, std::vector<double> v, InterpMode m) {
    ScalarField2 f;
    f.ax_ = std::move(x);
    f.ay_ = std::move(y);
    f.ax_.validate();
    f.ay_.validate();
    if (v.size() != std::size_t(f.ax_.n) * f.ay_.n)
        throw ValidationError("ScalarField2: value count does not match axes");
    f.v_ = std::move(v);
    f.mode_ = m;
    if (m == InterpMode::cubic) f.spl_ = std::make_shared<Spline2>(f.ax_, f.ay_, f.v_);
    return f;
}

ScalarField2 ScalarField2::callback(std::function<double(Vec2)> fn) {
    ScalarField2 f;
    f.fn_ = std::move(fn);
    return f;
}

double ScalarField2::operator()(Vec2 p) const {
    if (fn_) return fn_(p);
    if (!ax_.contains(p.x) || !ay_.contains(p.y)) return 0.0;
    if (mode_ == InterpMode::cubic) return spl_->value(p.x, p.y);
    return bilinear(ax_, ay_, v_, p.x, p.y);
}

CScalarField2 CScalarField2::grid(Axis x, Axis y, std::vector<cplx> v, InterpMode m) {
    CScalarField2 f;
    f.ax_ = std::move(x);
    f.ay_ = std::move(y);
    f.ax_.validate();
    f.ay_.validate();
    if (v.size() != std::size_t(f.ax_.n) * f.ay_.n)
        throw ValidationError("CScalarField2: value count does not match axes");
    f.v_ = std::move(v);
    f.mode_ = m;
    if (m == InterpMode::cubic) {
        f.re_ = std::make_shared<Spline2>(f.ax_, f.ay_, part(f.v_, false));
        f.im_ = std::make_shared<Spline2>(f.ax_, f.ay_, part(f.v_, true));
    }
    return f;
}

CScalarField2 CScalarField2::callback(std::function<cplx(Vec2)> fn) {
    CScalarField2 f;
    f.fn_ = std::move(fn);
    return f;
}

cplx CScalarField2::operator()(Vec2 p) const {
    if (fn_) return fn_(p);
    if (!ax_.contains(p.x) || !ay_.contains(p.y)) return {0.0, 0.0};
    if (mode_ == InterpMode::cubic) return {re_->value(p.x, p.y), im_->value(p.x, p.y)};
    // bilinear on interleaved complex, done per part to stay simple
    double fx = ax_.frac(p.x), fy = ay_.frac(p.y);
    if (fx < 0) fx = 0;
    if (fy < 0) fy = 0;
    int i = static_cast<int>(fx), j = static_cast<int>(fy);
    if (i > ax_.n - 2) i = ax_.n - 2;
    if (j > ay_.n - 2) j = ay_.n - 2;
    const double tx = fx - i, ty = fy - j;
    const cplx* row0 = &v_[std::size_t(i) * ay_.n + j];
    const cplx* row1 = row0 + ay_.n;
    return (1 - tx) * ((1 - ty) * row0[0] + ty * row0[1]) +
           tx * ((1 - ty) * row1[0] + ty * row1[1]);
}

void STScalar::tighten_support() {
    const std::size_t slice = std::size_t(ax_.n) * ay_.n;
    int first = -1, last = -1;
    for (int k = 0; k < at_.n; ++k) {
        bool nz = false;
        const double* s = v_.data() + std::size_t(k) * slice;
        for (std::size_t i = 0; i < slice; ++i)
            if (s[i] != 0.0) {
                nz = true;
                break;
            }
        if (nz) {
            if (first < 0) first = k;
            last = k;
        }
    }
    if (first < 0) {
        t_supp_lo_ = at_.lo;
        t_supp_hi_ = at_.lo;  // empty field: zero everywhere
        return;
    }
    t_supp_lo_ = at_.coord(first > 0 ? first - 1 : 0);
    t_supp_hi_ = at_.coord(last < at_.n - 1 ? last + 1 : at_.n - 1);
}

STScalar STScalar::grid(Axis t, Axis x, Axis y, std::vector<double> v, InterpMode m) {
    STScalar f;
    f.at_ = std::move(t);
    f.ax_ = std::move(x);
    f.ay_ = std::move(y);
    f.at_.validate();
    f.ax_.validate();
    f.ay_.validate();
    if (v.size() != std::size_t(f.at_.n) * f.ax_.n * f.ay_.n)
        throw ValidationError("STScalar: value count does not match axes");
    f.v_ = std::move(v);
    f.mode_ = m;
    if (m == InterpMode::cubic) f.spl_ = std::make_shared<Spline3>(f.at_, f.ax_, f.ay_, f.v_);
    f.tighten_support();
    return f;
}

STScalar STScalar::callback(std::function<double(double, Vec2)> fn, double t_supp_lo,
                            double t_supp_hi) {
    STScalar f;
    f.fn_ = std::move(fn);
    f.t_supp_lo_ = t_supp_lo;
    f.t_supp_hi_ = t_supp_hi;
    return f;
}

double STScalar::value(double t, Vec2 p) const {
    if (t < t_supp_lo_ || t > t_supp_hi_) return 0.0;
    if (fn_) return fn_(t, p);
    if (!ax_.contains(p.x) || !ay_.contains(p.y)) return 0.0;
    if (mode_ == InterpMode::cubic) return spl_->value(t, p.x, p.y);
    return trilinear(at_, ax_, ay_, v_, t, p.x, p.y);
}

void CSTScalar::tighten_support() {
    const std::size_t slice = std::size_t(ax_.n) * ay_.n;
    int first = -1, last = -1;
    for (int k = 0; k < at_.n; ++k) {
        bool nz = false;
        const cplx* s = v_.data() + std::size_t(k) * slice;
        for (std::size_t i = 0; i < slice; ++i)
            if (s[i] != cplx{0.0, 0.0}) {
                nz = true;
                break;
            }
        if (nz) {
            if (first < 0) first = k;
            last = k;
        }
    }
    if (first < 0) {
        t_supp_lo_ = at_.lo;
        t_supp_hi_ = at_.lo;
        return;
    }
    t_supp_lo_ = at_.coord(first > 0 ? first - 1 : 0);
    t_supp_hi_ = at_.coord(last < at_.n - 1 ? last + 1 : at_.n - 1);
}

CSTScalar CSTScalar::grid(Axis t, Axis x, Axis y, std::vector<cplx> v, InterpMode m) {
    CSTScalar f;
    f.at_ = std::move(t);
    f.ax_ = std::move(x);
    f.ay_ = std::move(y);
    f.at_.validate();
    f.ax_.validate();
    f.ay_.validate();
    if (v.size() != std::size_t(f.at_.n) * f.ax_.n * f.ay_.n)
        throw ValidationError("CSTScalar: value count does not match axes");
    f.v_ = std::move(v);
    f.mode_ = m;
    if (m == InterpMode::cubic) {
        f.re_ = std::make_shared<Spline3>(f.at_, f.ax_, f.ay_, part(f.v_, false));
        f.im_ = std::make_shared<Spline3>(f.at_, f.ax_, f.ay_, part(f.v_, true));
    }
    f.tighten_support();
    return f;
}

CSTScalar CSTScalar::callback(std::function<cplx(double, Vec2)> fn, double t_supp_lo,
                              double t_supp_hi) {
    CSTScalar f;
    f.fn_ = std::move(fn);
    f.t_supp_lo_ = t_supp_lo;
    f.t_supp_hi_ = t_supp_hi;
    return f;
}

cplx CSTScalar::value(double t, Vec2 p) const {
    if (t < t_supp_lo_ || t > t_supp_hi_) return {0.0, 0.0};
    if (fn_) return fn_(t, p);
    if (!ax_.contains(p.x) || !ay_.contains(p.y)) return {0.0, 0.0};
    if (mode_ == InterpMode::cubic)
        return {re_->value(t, p.x, p.y), im_->value(t, p.x, p.y)};
    const std::vector<cplx>& v = v_;
    double ft = at_.frac(t);
    if (ft < 0) ft = 0;
    int k = static_cast<int>(ft);
    if (k > at_.n - 2) k = at_.n - 2;
    const double tt = ft - k;
    const std::size_t slice = std::size_t(ax_.n) * ay_.n;
    auto bil = [&](int kk) -> cplx {
        double fx = ax_.frac(p.x), fy = ay_.frac(p.y);
        if (fx < 0) fx = 0;
        if (fy < 0) fy = 0;
        int i = static_cast<int>(fx), j = static_cast<int>(fy);
        if (i > ax_.n - 2) i = ax_.n - 2;
        if (j > ay_.n - 2) j = ay_.n - 2;
        const double tx = fx - i, ty = fy - j;
        const cplx* row0 = v.data() + std::size_t(kk) * slice + std::size_t(i) * ay_.n + j;
        const cplx* row1 = row0 + ay_.n;
        return (1 - tx) * ((1 - ty) * row0[0] + ty * row0[1]) +
               tx * ((1 - ty) * row1[0] + ty * row1[1]);
    };
    return (1 - tt) * bil(k) + tt * bil(k + 1);
}

STOneForm STOneForm::grid(Axis t, Axis x, Axis y, std::vector<double> b, std::vector<double> a1,
                          std::vector<double> a2, InterpMode m) {
    STOneForm f;
    f.b_ = STScalar::grid(t, x, y, std::move(b), m);
    f.a1_ = STScalar::grid(t, x, y, std::move(a1), m);
    f.a2_ = STScalar::grid(t, x, y, std::move(a2), m);
    return f;
}

STOneForm STOneForm::callback(std::function<OneFormVal(double, Vec2)> fn, double t_supp_lo,
                              double t_supp_hi) {
    STOneForm f;
    f.fn_ = std::move(fn);
    f.cb_lo_ = t_supp_lo;
    f.cb_hi_ = t_supp_hi;
    f.is_cb_ = true;
    return f;
}

OneFormVal STOneForm::value(double t, Vec2 p) const {
    if (is_cb_) {
        if (t < cb_lo_ || t > cb_hi_) return {};
        return fn_(t, p);
    }
    return {b_.value(t, p), {a1_.value(t, p), a2_.value(t, p)}};
}

double STOneForm::t_supp_lo() const {
    if (is_cb_) return cb_lo_;
    double lo = b_.t_supp_lo();
    lo = std::min(lo, a1_.t_supp_lo());
    lo = std::min(lo, a2_.t_supp_lo());
    return lo;
}

double STOneForm::t_supp_hi() const {
    if (is_cb_) return cb_hi_;
    double hi = b_.t_supp_hi();
    hi = std::max(hi, a1_.t_supp_hi());
    hi = std::max(hi, a2_.t_supp_hi());
    return hi;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

double max_abs(const std::vector<cplx>& v) {
    double m = 0.0;
    for (const cplx& x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace lrt
