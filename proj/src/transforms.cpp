#include "lrt/transforms.hpp"

#include "lrt/parallel.hpp"

namespace lrt {

namespace {

// trapezoid over the stored samples; F evaluated once per sample
template <class T, class F>
T along(const Geodesic& geo, F&& fn) {
    const auto& s = geo.s;
    T acc{};
    if (s.size() < 2) return acc;
    T prev = fn(s[0]);
    for (std::size_t i = 1; i < s.size(); ++i) {
        const T cur = fn(s[i]);
        acc += (s[i].r - s[i - 1].r) * 0.5 * (prev + cur);
        prev = cur;
    }
    return acc;
}

cplx ipow(int j) {
    switch (j & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

}  // namespace

double ray_transform(const ScalarField2& f, const Geodesic& geo) {
    return along<double>(geo, [&](const GeodesicSample& s) { return f(s.x); });
}

cplx ray_transform(const CScalarField2& f, const Geodesic& geo) {
    return along<cplx>(geo, [&](const GeodesicSample& s) { return f(s.x); });
}

double ray_transform_oneform(const ScalarField2& a1, const ScalarField2& a2,
                             const Geodesic& geo) {
    return along<double>(geo,
                         [&](const GeodesicSample& s) { return a1(s.x) * s.v.x + a2(s.x) * s.v.y; });
}

cplx remainder_transform(int j, const ScalarField2& h, const Geodesic& geo) {
    if (j < 0) throw ValidationError("remainder_transform: order must be >= 0");
    const double real_part = along<double>(geo, [&](const GeodesicSample& s) {
        double p = 1.0;
        for (int k = 0; k < j; ++k) p *= s.r;
        return p * h(s.x);
    });
    return ipow(j) * real_part;
}

cplx remainder_transform(int j, const CScalarField2& h, const Geodesic& geo) {
    if (j < 0) throw ValidationError("remainder_transform: order must be >= 0");
    const cplx val = along<cplx>(geo, [&](const GeodesicSample& s) {
        double p = 1.0;
        for (int k = 0; k < j; ++k) p *= s.r;
        return p * h(s.x);
    });
    return ipow(j) * val;
}

double light_transform(const STScalar& f, const Geodesic& geo, double s) {
    return along<double>(geo, [&](const GeodesicSample& gs) { return f.value(gs.r + s, gs.x); });
}

cplx light_transform(const CSTScalar& f, const Geodesic& geo, double s) {
    return along<cplx>(geo, [&](const GeodesicSample& gs) { return f.value(gs.r + s, gs.x); });
}

double light_transform_oneform(const STOneForm& B, const Geodesic& geo, double s) {
    return along<double>(geo, [&](const GeodesicSample& gs) {
        const OneFormVal w = B.value(gs.r + s, gs.x);
        return w.b + dot(w.a, gs.v);
    });
}

namespace {

template <class ForEach>
Sinogram forward_ray_generic(const MetricField& g, int n_base, int n_dir,
                             const TraceOptions& opt, ForEach&& loop,
                             double (*eval)(const void*, const Geodesic&), const void* ctx) {
    Sinogram sg;
    sg.rays = boundary_ray_grid(g, n_base, n_dir);
    sg.value.assign(sg.rays.size(), 0.0);
    loop(static_cast<std::int64_t>(sg.rays.size()), [&](std::int64_t i) {
        const Geodesic geo = trace_geodesic(g, sg.rays[i].x0, sg.rays[i].v0, opt);
        sg.value[i] = eval(ctx, geo);
    });
    return sg;
}

double eval_scalar(const void* ctx, const Geodesic& geo) {
    return ray_transform(*static_cast<const ScalarField2*>(ctx), geo);
}

struct OneFormCtx {
    const ScalarField2* a1;
    const ScalarField2* a2;
};

double eval_oneform(const void* ctx, const Geodesic& geo) {
    const auto* c = static_cast<const OneFormCtx*>(ctx);
    return ray_transform_oneform(*c->a1, *c->a2, geo);
}

template <class ForEach, class RowFill>
LightSinogram forward_light_generic(const MetricField& g, const Axis& s_axis, int n_base,
                                    int n_dir, const TraceOptions& opt, ForEach&& loop,
                                    RowFill&& fill) {
    LightSinogram ls;
    ls.s_axis = s_axis;
    ls.s_axis.validate();
    ls.rays = boundary_ray_grid(g, n_base, n_dir);
    ls.value.assign(std::size_t(s_axis.n) * ls.rays.size(), 0.0);
    const std::size_t nray = ls.rays.size();
    loop(static_cast<std::int64_t>(nray), [&](std::int64_t i) {
        const Geodesic geo = trace_geodesic(g, ls.rays[i].x0, ls.rays[i].v0, opt);
        for (int is = 0; is < ls.s_axis.n; ++is)
            ls.value[std::size_t(is) * nray + i] = fill(geo, ls.s_axis.coord(is));
    });
    return ls;
}

}  // namespace

Sinogram forward_ray(const MetricField& g, const ScalarField2& f, int n_base, int n_dir,
                     const TraceOptions& opt) {
    return forward_ray_generic(
        g, n_base, n_dir, opt, [](std::int64_t n, auto&& b) { par::parallel_for(n, b); },
        eval_scalar, &f);
}

Sinogram forward_ray_oneform(const MetricField& g, const ScalarField2& a1,
                             const ScalarField2& a2, int n_base, int n_dir,
                             const TraceOptions& opt) {
    OneFormCtx ctx{&a1, &a2};
    return forward_ray_generic(
        g, n_base, n_dir, opt, [](std::int64_t n, auto&& b) { par::parallel_for(n, b); },
        eval_oneform, &ctx);
}

LightSinogram forward_light(const MetricField& g, const STScalar& f, const Axis& s_axis,
                            int n_base, int n_dir, const TraceOptions& opt) {
    return forward_light_generic(
        g, s_axis, n_base, n_dir, opt, [](std::int64_t n, auto&& b) { par::parallel_for(n, b); },
        [&](const Geodesic& geo, double s) { return light_transform(f, geo, s); });
}

LightSinogram forward_light_oneform(const MetricField& g, const STOneForm& B, const Axis& s_axis,
                                    int n_base, int n_dir, const TraceOptions& opt) {
    return forward_light_generic(
        g, s_axis, n_base, n_dir, opt, [](std::int64_t n, auto&& b) { par::parallel_for(n, b); },
        [&](const Geodesic& geo, double s) { return light_transform_oneform(B, geo, s); });
}

namespace ref {

Sinogram forward_ray(const MetricField& g, const ScalarField2& f, int n_base, int n_dir,
                     const TraceOptions& opt) {
    return forward_ray_generic(
        g, n_base, n_dir, opt, [](std::int64_t n, auto&& b) { par::serial_for(n, b); },
        eval_scalar, &f);
}

LightSinogram forward_light(const MetricField& g, const STScalar& f, const Axis& s_axis,
                            int n_base, int n_dir, const TraceOptions& opt) {
    return forward_light_generic(
        g, s_axis, n_base, n_dir, opt, [](std::int64_t n, auto&& b) { par::serial_for(n, b); },
        [&](const Geodesic& geo, double s) { return light_transform(f, geo, s); });
}

}  // namespace ref

}  // namespace lrt
