#include "lrt/metric.hpp"

#include <cmath>

namespace lrt {

MetricField::MetricField() = default;

MetricField MetricField::euclidean() { return MetricField(); }

MetricField MetricField::gaussian_bump(double amplitude, double width) {
    if (!(width > 0.0)) throw ValidationError("gaussian-bump: width must be positive");
    if (amplitude <= -1.0)
        throw ValidationError("gaussian-bump: amplitude <= -1 makes c vanish somewhere");
    MetricField m;
    m.euclid_ = (amplitude == 0.0);
    m.desc_ = "gaussian-bump:" + std::to_string(amplitude) + "," + std::to_string(width);
    const double w2 = width * width;
    m.c_fn_ = [amplitude, w2](Vec2 p) {
        return 1.0 + amplitude * std::exp(-norm2(p) / (2.0 * w2));
    };
    m.glc_fn_ = [amplitude, w2](Vec2 p) {
        const double e = amplitude * std::exp(-norm2(p) / (2.0 * w2));
        const double s = -e / ((1.0 + e) * w2);
        return Vec2{s * p.x, s * p.y};
    };
    m.llc_fn_ = [amplitude, w2](Vec2 p) {
        // lap log c = lap c / c - |grad c|^2 / c^2 for c = 1 + e
        const double r2 = norm2(p);
        const double e = amplitude * std::exp(-r2 / (2.0 * w2));
        const double c = 1.0 + e;
        const double lap_c = e * (r2 / (w2 * w2) - 2.0 / w2);
        const double grad_c2 = e * e * r2 / (w2 * w2);
        return lap_c / c - grad_c2 / (c * c);
    };
    return m;
}

MetricField MetricField::preset(const std::string& spec) {
    if (spec == "euclidean") return euclidean();
    const std::string tag = "gaussian-bump:";
    if (spec.rfind(tag, 0) == 0) {
        const std::string args = spec.substr(tag.size());
        const auto comma = args.find(',');
        if (comma == std::string::npos)
            throw ValidationError("metric preset '" + spec + "': expected gaussian-bump:<amplitude>,<width>");
        try {
            std::size_t p1 = 0, p2 = 0;
            const double amp = std::stod(args.substr(0, comma), &p1);
            const double wid = std::stod(args.substr(comma + 1), &p2);
            if (p1 != comma || p2 != args.size() - comma - 1)
                throw std::invalid_argument("trailing junk");
            return gaussian_bump(amp, wid);
        } catch (const ValidationError&) {
            throw;
        } catch (const std::exception&) {
            throw ValidationError("metric preset '" + spec + "': bad numeric arguments");
        }
    }
    throw ValidationError("unknown metric preset '" + spec + "'");
}

MetricField MetricField::from_grid(Axis x, Axis y, std::vector<double> c_values) {
    if (!(x.lo <= -1.0 && x.hi >= 1.0 && y.lo <= -1.0 && y.hi >= 1.0))
        throw ValidationError("metric grid must cover the closed unit disc");
    for (double v : c_values)
        if (!(v > 0.0)) throw ValidationError("metric grid: conformal factor must be positive");
    MetricField m;
    m.euclid_ = false;
    m.desc_ = "grid";
    m.spl_ = std::make_shared<Spline2>(std::move(x), std::move(y), std::move(c_values));
    return m;
}

MetricField MetricField::from_callback(std::function<double(Vec2)> c,
                                       std::function<Vec2(Vec2)> grad_log_c,
                                       std::function<double(Vec2)> lap_log_c) {
    MetricField m;
    m.euclid_ = false;
    m.desc_ = "callback";
    m.c_fn_ = std::move(c);
    m.glc_fn_ = std::move(grad_log_c);
    m.llc_fn_ = std::move(lap_log_c);
    return m;
}

double MetricField::c(Vec2 p) const {
    if (euclid_) return 1.0;
    if (c_fn_) return c_fn_(p);
    return spl_->value(p.x, p.y);
}

Vec2 MetricField::grad_log_c(Vec2 p) const {
    if (euclid_) return {0.0, 0.0};
    if (glc_fn_) return glc_fn_(p);
    double f, fx, fy;
    spl_->value_grad(p.x, p.y, &f, &fx, &fy);
    return {fx / f, fy / f};
}

double MetricField::curvature(Vec2 p) const {
    if (euclid_) return 0.0;
    const double cc = c(p);
    if (llc_fn_) return cc * cc * llc_fn_(p);
    double f, fx, fy, fxx, fyy, fxy;
    spl_->value_grad_hess(p.x, p.y, &f, &fx, &fy, &fxx, &fyy, &fxy);
    const double lap_log = (fxx + fyy) / f - (fx * fx + fy * fy) / (f * f);
    return cc * cc * lap_log;
}

void MetricField::christoffel(Vec2 p, double gamma[2][2][2]) const {
    const Vec2 L = grad_log_c(p);
    const double Lk[2] = {L.x, L.y};
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double v = 0.0;
                if (k == i) v -= Lk[j];
                if (k == j) v -= Lk[i];
                if (i == j) v += Lk[k];
                gamma[k][i][j] = v;
            }
}

double MetricField::boundary_curvature(double alpha) const {
    // kappa_g = c (kappa_euclid - d/dnu log c) with kappa_euclid = 1 on the
    // unit circle and nu the outward radial direction
    const Vec2 p{std::cos(alpha), std::sin(alpha)};
    const Vec2 L = grad_log_c(p);
    return c(p) * (1.0 - dot(L, p));
}

}  // namespace lrt
