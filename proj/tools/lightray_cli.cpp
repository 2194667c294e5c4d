// Batch driver for the lightray library. Every subcommand reads the same JSON
// experiment configuration (--config, overridable with repeated --set) and
// writes grid files under the configured output directory.
//
// Exit codes: 0 success, 1 bad input or configuration, 2 solver failure.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "lrt/config.hpp"
#include "lrt/dnlab.hpp"
#include "lrt/errors.hpp"
#include "lrt/gauge.hpp"
#include "lrt/geodesics.hpp"
#include "lrt/geooptics.hpp"
#include "lrt/gridfile.hpp"
#include "lrt/inversion.hpp"
#include "lrt/presets.hpp"
#include "lrt/selftest.hpp"
#include "lrt/slicing.hpp"
#include "lrt/transforms.hpp"

namespace {

using namespace lrt;

const double kPi = std::acos(-1.0);

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.output_dir);
    return (std::filesystem::path(cfg.output_dir) / name).string();
}

TraceOptions trace_options(const ExperimentConfig& cfg) {
    TraceOptions opt;
    opt.step = cfg.trace.step;
    opt.boundary_tol = cfg.trace.boundary_tol;
    opt.max_arc = cfg.trace.max_arc;
    return opt;
}

ScalarField2 spatial_field(const ExperimentConfig& cfg) {
    if (cfg.field == "one") return ScalarField2::callback([](Vec2) { return 1.0; });
    if (cfg.field == "gaussian")
        return ScalarField2::callback(
            [](Vec2 p) { return presets::bump(norm(p - Vec2{0.15, -0.1}) / 0.5); });
    return ScalarField2::callback([](Vec2 p) { return presets::bump(norm(p) / 0.55); });
}

STScalar st_field(const ExperimentConfig& cfg) {
    const double T = cfg.grid.T;
    if (cfg.field == "one") {
        // spatially constant, still confined to the influence window in time
        const presets::TimeWindow w = presets::influence_window(T);
        return STScalar::callback(
            [w](double t, Vec2) { return presets::bump((t - w.center) / w.width); },
            w.center - w.width, w.center + w.width);
    }
    if (cfg.field == "gaussian") return presets::gaussian_st(T);
    return presets::separable_st(T);
}

STScalar sample_st(const STScalar& f, const Axis& at, const Axis& ax, const Axis& ay) {
    std::vector<double> v(std::size_t(at.n) * ax.n * ay.n);
    for (int k = 0; k < at.n; ++k)
        for (int i = 0; i < ax.n; ++i)
            for (int j = 0; j < ay.n; ++j)
                v[(std::size_t(k) * ax.n + i) * ay.n + j] =
                    f.value(at.coord(k), {ax.coord(i), ay.coord(j)});
    return STScalar::grid(at, ax, ay, std::move(v), InterpMode::cubic);
}

Axis t_axis(const ExperimentConfig& cfg) { return make_axis("t", 0.0, cfg.grid.T, cfg.grid.nt); }
Axis x_axis(const ExperimentConfig& cfg) { return make_axis("x", -1.05, 1.05, cfg.grid.nx); }
Axis y_axis(const ExperimentConfig& cfg) { return make_axis("y", -1.05, 1.05, cfg.grid.ny); }

Axis alpha_axis(int n_base) {
    return make_axis("alpha", 0.0, 2.0 * kPi * (n_base - 1) / n_base, n_base);
}
Axis mu_axis(int n_dir) {
    const double half = 0.5 * kPi - 0.5 * kPi / n_dir;
    return make_axis("mu", -half, half, n_dir);
}

// s axis wide enough to show the quiet zone before the support window
Axis s_axis_for(const STScalar& f, double diam, int n_s) {
    return make_axis("s", f.t_supp_lo() - diam - 0.5, f.t_supp_hi() + 0.5, n_s);
}

int cmd_trace(const ExperimentConfig& cfg) {
    const MetricField g = MetricField::preset(cfg.metric);
    const Vec2 x0 = boundary_point(cfg.trace.alpha);
    const Vec2 v0 = inward_vector(g, cfg.trace.alpha, cfg.trace.mu);
    const Geodesic geo = trace_geodesic(g, x0, v0, trace_options(cfg));

    GridFile out;
    out.field_kind = "geodesic";
    out.components = 5;  // r, x, y, vx, vy per sample
    out.axes = {make_axis("sample", 0.0, double(geo.s.size() - 1), int(geo.s.size()))};
    out.data.reserve(geo.s.size() * 5);
    for (const GeodesicSample& s : geo.s) {
        out.data.insert(out.data.end(), {s.r, s.x.x, s.x.y, s.v.x, s.v.y});
    }
    const std::string path = out_path(cfg, "geodesic.grid");
    out.write(path);

    const GeodesicSample& e = geo.s.back();
    std::printf("metric      %s\n", cfg.metric.c_str());
    std::printf("entry       alpha = %.6f  mu = %.6f\n", cfg.trace.alpha, cfg.trace.mu);
    std::printf("arc length  %.10f\n", geo.tau());
    std::printf("exit point  (% .10f, % .10f)   |x| - 1 = %.3e\n", e.x.x, e.x.y,
                norm(e.x) - 1.0);
    std::printf("samples     %zu\n", geo.s.size());
    std::printf("wrote       %s\n", path.c_str());
    return 0;
}

int cmd_forward_ray(const ExperimentConfig& cfg) {
    const MetricField g = MetricField::preset(cfg.metric);
    const ScalarField2 f = spatial_field(cfg);
    Timer tm;
    const Sinogram sino = forward_ray(g, f, cfg.rays.n_base, cfg.rays.n_dir, trace_options(cfg));
    const double secs = tm.seconds();

    GridFile out;
    out.field_kind = "sinogram";
    out.axes = {alpha_axis(cfg.rays.n_base), mu_axis(cfg.rays.n_dir)};
    out.data = sino.value;
    const std::string path = out_path(cfg, "sinogram.grid");
    out.write(path);

    double vmin = sino.value[0], vmax = sino.value[0];
    for (double v : sino.value) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    std::printf("rays        %d x %d, %.2f s\n", cfg.rays.n_base, cfg.rays.n_dir, secs);
    std::printf("value range [%.6f, %.6f]\n", vmin, vmax);
    if (g.is_euclidean() && cfg.field == "one") {
        double worst = 0.0;
        for (std::size_t i = 0; i < sino.rays.size(); ++i) {
            const double chord = 2.0 * std::cos(sino.rays[i].mu);
            worst = std::max(worst, std::abs(sino.value[i] - chord) / chord);
        }
        std::printf("chord check max rel err %.3e against 2 cos(mu)\n", worst);
    }
    std::printf("wrote       %s\n", path.c_str());
    return 0;
}

int cmd_forward_light(const ExperimentConfig& cfg) {
    const MetricField g = MetricField::preset(cfg.metric);
    const TraceOptions opt = trace_options(cfg);
    const STScalar f = st_field(cfg);
    const double diam = diameter(g, 64, 33, opt);
    const Axis sx = s_axis_for(f, diam, cfg.rays.n_s);
    Timer tm;
    const LightSinogram L = forward_light(g, f, sx, cfg.rays.n_base, cfg.rays.n_dir, opt);
    const double secs = tm.seconds();

    GridFile out;
    out.field_kind = "light_sinogram";
    out.axes = {sx, alpha_axis(cfg.rays.n_base), mu_axis(cfg.rays.n_dir)};
    out.data = L.value;
    const std::string path = out_path(cfg, "light_sinogram.grid");
    out.write(path);

    // every ray is quiet outside [t_lo - diam, t_hi]: before the window the
    // ray has not reached the support yet, after it the support is in the past
    const double win_lo = f.t_supp_lo() - diam;
    const double win_hi = f.t_supp_hi();
    double spill = 0.0, peak = 0.0;
    for (int is = 0; is < sx.n; ++is) {
        const double s = sx.coord(is);
        for (std::size_t ir = 0; ir < L.rays.size(); ++ir) {
            const double v = std::abs(L.at(is, ir));
            peak = std::max(peak, v);
            if (s < win_lo || s > win_hi) spill = std::max(spill, v);
        }
    }
    std::printf("rays        %d x %d, %d s-values, %.2f s\n", cfg.rays.n_base, cfg.rays.n_dir,
                cfg.rays.n_s, secs);
    std::printf("support     t in [%.4f, %.4f], diameter %.6f\n", f.t_supp_lo(), f.t_supp_hi(),
                diam);
    std::printf("peak |Lf|   %.6e\n", peak);
    std::printf("spill outside [%.4f, %.4f]: %s\n", win_lo, win_hi,
                spill == 0.0 ? "exactly zero" : "NONZERO");
    if (spill != 0.0) std::printf("  max spill %.6e\n", spill);
    std::printf("wrote       %s\n", path.c_str());
    return 0;
}

int cmd_slice(const ExperimentConfig& cfg) {
    const MetricField g = MetricField::preset(cfg.metric);
    const TraceOptions opt = trace_options(cfg);
    const STScalar f = sample_st(st_field(cfg), t_axis(cfg), x_axis(cfg), y_axis(cfg));
    const double diam = diameter(g, 64, 33, opt);
    const Axis sx = s_axis_for(f, diam, cfg.rays.n_s);

    const LightSinogram L = forward_light(g, f, sx, cfg.rays.n_base, cfg.rays.n_dir, opt);
    const TracedRays tr = trace_rays(g, cfg.rays.n_base, cfg.rays.n_dir, opt);

    std::vector<CScalarField2> moments;
    for (int k = 0; k <= cfg.slice.k_max; ++k) moments.push_back(moment_slice(k, f));

    std::printf("moment identity on %d rays, grid %d x %d x %d\n", int(tr.rays.size()),
                cfg.grid.nt, cfg.grid.nx, cfg.grid.ny);
    std::printf("%3s  %12s  %14s  %14s\n", "k", "data norm", "gap (lagged)", "gap (top order)");
    bool warned = false;
    for (int k = 0; k <= cfg.slice.k_max; ++k) {
        bool warn = false;
        const std::vector<cplx> data = sinogram_moments(k, L, &warn);
        warned = warned || warn;
        double dn = 0.0, lag = 0.0, top = 0.0;
        for (std::size_t ir = 0; ir < tr.geos.size(); ++ir) {
            const cplx rl =
                slice_identity_rhs_from_moments(k, moments, tr.geos[ir], MomentCoupling::lagged);
            const cplx rt = slice_identity_rhs_from_moments(k, moments, tr.geos[ir],
                                                            MomentCoupling::top_order);
            dn += std::norm(data[ir]);
            lag += std::norm(data[ir] - rl);
            top += std::norm(data[ir] - rt);
        }
        dn = std::sqrt(dn);
        std::printf("%3d  %12.6e  %14.6e  %14.6e\n", k, dn, std::sqrt(lag) / dn,
                    std::sqrt(top) / dn);
    }
    if (warned) std::printf("warning: s axis does not cover the sinogram support\n");
    return 0;
}

int cmd_invert(const ExperimentConfig& cfg) {
    const MetricField g = MetricField::preset(cfg.metric);
    const TraceOptions opt = trace_options(cfg);
    const double diam = diameter(g, 64, 33, opt);
    cfg.require_support_window(diam);

    const STScalar f_true = st_field(cfg);
    const Axis sx = s_axis_for(f_true, diam, cfg.rays.n_s);
    Timer tm;
    const LightSinogram L = forward_light(g, f_true, sx, cfg.rays.n_base, cfg.rays.n_dir, opt);
    const TracedRays tr = trace_rays(g, cfg.rays.n_base, cfg.rays.n_dir, opt);
    std::printf("forward data %d rays x %d s-values, %.2f s\n", int(tr.rays.size()), sx.n,
                tm.seconds());

    SolveOptions sopt;
    sopt.max_iter = cfg.invert.max_iter;
    sopt.tol = cfg.invert.tol;
    sopt.memory_cap_bytes = std::size_t(cfg.invert.memory_cap_mib * 1024.0 * 1024.0);
    const Axis gx = x_axis(cfg), gy = y_axis(cfg);

    Timer ti;
    STScalar recon;
    if (cfg.invert.method == "direct") {
        const Axis gt = make_axis("t", f_true.t_supp_lo(), f_true.t_supp_hi(), cfg.grid.nt);
        SolveReport rep;
        recon = invert_light_transform_direct(tr, L, gt, gx, gy, cfg.invert.lambda, sopt, &rep);
        std::printf("direct solve %d iterations, lambda %.3e, converged %s\n", rep.iterations,
                    rep.lambda, rep.converged ? "yes" : "no");
    } else {
        const TimeBasis basis(f_true.t_supp_lo(), f_true.t_supp_hi(), cfg.invert.K);
        MomentReport rep;
        recon = invert_light_transform_moments(tr, L, cfg.invert.K, basis, gx, gy,
                                               cfg.invert.lambda, sopt, &rep);
        std::printf("moment pipeline K = %d, basis condition %.3e, imag leak %.3e\n",
                    cfg.invert.K, rep.moment_condition, rep.imag_leak);
        for (std::size_t k = 0; k < rep.solves.size(); ++k)
            std::printf("  order %zu: %d iterations, lambda %.3e\n", k, rep.solves[k].iterations,
                        rep.solves[k].lambda);
    }
    std::printf("inversion    %.2f s\n", ti.seconds());

    // error against the ground truth on the reconstruction's own nodes,
    // restricted to the disc where the data constrains the field
    double num = 0.0, den = 0.0;
    const Axis& rt = recon.at();
    for (int k = 0; k < rt.n; ++k)
        for (int i = 0; i < recon.ax().n; ++i)
            for (int j = 0; j < recon.ay().n; ++j) {
                const Vec2 p{recon.ax().coord(i), recon.ay().coord(j)};
                if (norm(p) > 1.0) continue;
                const double ft = f_true.value(rt.coord(k), p);
                const double d = recon.node(k, i, j) - ft;
                num += d * d;
                den += ft * ft;
            }
    const double rel = std::sqrt(num / den);
    std::printf("rel L2 error %.4f (field '%s', method '%s')\n", rel, cfg.field.c_str(),
                cfg.invert.method.c_str());

    GridFile out;
    out.field_kind = "scalar";
    out.axes = {recon.at(), recon.ax(), recon.ay()};
    out.data = recon.values();
    const std::string path = out_path(cfg, "reconstruction.grid");
    out.write(path);
    std::printf("wrote        %s\n", path.c_str());
    return 0;
}

int cmd_gauge_check(const ExperimentConfig& cfg) {
    const Axis at = t_axis(cfg), ax = x_axis(cfg), ay = y_axis(cfg);
    const double T = cfg.grid.T;

    // no transform is run here, so the gauge function does not need the
    // influence window; a wide time bump keeps the grid derivatives resolved
    // at the default nt
    const presets::TimeWindow w{0.5 * T, 0.3 * T};
    const STScalar psi0 = sample_st(
        STScalar::callback(
            [w](double t, Vec2 p) {
                return 0.8 * presets::bump((t - w.center) / w.width) *
                       presets::bump(norm(p) / 0.6);
            },
            w.center - w.width, w.center + w.width),
        at, ax, ay);
    const STOneForm dpsi = exterior_derivative(psi0);

    const STOneForm A1 = [&] {
        const STOneForm cb = presets::oneform_st(T);
        std::vector<double> b(psi0.values().size()), a1(b.size()), a2(b.size());
        for (int k = 0; k < at.n; ++k)
            for (int i = 0; i < ax.n; ++i)
                for (int j = 0; j < ay.n; ++j) {
                    const OneFormVal v = cb.value(at.coord(k), {ax.coord(i), ay.coord(j)});
                    const std::size_t n = (std::size_t(k) * ax.n + i) * ay.n + j;
                    b[n] = v.b;
                    a1[n] = v.a.x;
                    a2[n] = v.a.y;
                }
        return STOneForm::grid(at, ax, ay, std::move(b), std::move(a1), std::move(a2));
    }();

    auto shifted = [&](double scale, const STOneForm& d) {
        std::vector<double> b = A1.b().values(), a1 = A1.a1().values(), a2 = A1.a2().values();
        for (std::size_t n = 0; n < b.size(); ++n) {
            b[n] += scale * d.b().values()[n];
            a1[n] += scale * d.a1().values()[n];
            a2[n] += scale * d.a2().values()[n];
        }
        return STOneForm::grid(at, ax, ay, std::move(b), std::move(a1), std::move(a2));
    };

    const double tol = 0.05;
    {
        const STOneForm A2 = shifted(1.0, dpsi);
        // the recovered potential integrates the first argument minus the
        // second, so (A2, A1) returns the shift with its sign intact
        const EquivalenceResult r = check_gauge_equivalence(A2, A1, tol, at, ax, ay);
        double num = 0.0, den = 0.0;
        for (std::size_t n = 0; n < psi0.values().size(); ++n) {
            const double d = r.potential.psi.values()[n] - psi0.values()[n];
            num += d * d;
            den += psi0.values()[n] * psi0.values()[n];
        }
        std::printf("exact shift      equivalent %s, residual %.3e\n",
                    r.equivalent ? "yes" : "NO", r.residual);
        std::printf("                 potential rel L2 error %.4f, exactness discrepancy %.3e\n",
                    std::sqrt(num / den), r.potential.discrepancy_rel);
    }
    {
        // rotational perturbation: curl in (x, y) is nonzero, so no potential
        const STOneForm rot = [&] {
            std::vector<double> b(psi0.values().size(), 0.0), a1(b.size()), a2(b.size());
            for (int k = 0; k < at.n; ++k)
                for (int i = 0; i < ax.n; ++i)
                    for (int j = 0; j < ay.n; ++j) {
                        const Vec2 p{ax.coord(i), ay.coord(j)};
                        const double env = presets::bump((at.coord(k) - w.center) / w.width) *
                                           presets::bump(norm(p) / 0.6);
                        const std::size_t n = (std::size_t(k) * ax.n + i) * ay.n + j;
                        a1[n] = -env * p.y;
                        a2[n] = env * p.x;
                    }
            return STOneForm::grid(at, ax, ay, std::move(b), std::move(a1), std::move(a2));
        }();
        const STOneForm A2 = shifted(0.5, rot);
        const EquivalenceResult r = check_gauge_equivalence(A2, A1, tol, at, ax, ay);
        std::printf("rotational shift equivalent %s, residual %.3e\n", r.equivalent ? "YES" : "no",
                    r.residual);
        if (r.equivalent) {
            std::printf("error: a non-exact perturbation passed the equivalence test\n");
            return 2;
        }
    }
    return 0;
}

int cmd_go_probe(const ExperimentConfig& cfg) {
    const MetricField g = MetricField::preset(cfg.metric);
    const TraceOptions opt = trace_options(cfg);
    const Geodesic gamma = trace_geodesic(g, boundary_point(kPi), inward_vector(g, kPi, 0.0), opt);
    const DiscChart ch = build_chart(g, gamma, cfg.probe.s0, cfg.probe.p_offset, opt);

    const double dp = delta_prime(ch);
    const double delta = std::min(cfg.probe.delta, 0.9 * dp);
    std::printf("chart       s0 %.4f, vertex offset %.4f, tau %.6f\n", ch.s0(), ch.r0() ,
                ch.tau());
    std::printf("delta'      %.6f, tube half-width %.6f\n", dp, delta);

    // eikonal residual sampled along and around the central ray
    double eik = 0.0;
    for (int m = 1; m < 10; ++m) {
        const double r = gamma.tau() * m / 10.0;
        Vec2 x, v;
        ch.exp_at(ch.theta_p(), ch.r0() + r, &x, &v, nullptr);
        eik = std::max(eik, std::abs(ch.eikonal_residual(x)));
        ch.exp_at(ch.theta_p() + 0.15, ch.r0() + r, &x, &v, nullptr);
        eik = std::max(eik, std::abs(ch.eikonal_residual(x)));
    }
    std::printf("eikonal     max |S phi| %.3e over 18 probe points\n", eik);

    const double T = cfg.grid.T;
    const STOneForm A = presets::oneform_st(T, 0.4);
    const STOneForm Arho = mollify(
        [&] {
            const Axis at = t_axis(cfg), ax = x_axis(cfg), ay = y_axis(cfg);
            std::vector<double> b(std::size_t(at.n) * ax.n * ay.n), a1(b.size()), a2(b.size());
            for (int k = 0; k < at.n; ++k)
                for (int i = 0; i < ax.n; ++i)
                    for (int j = 0; j < ay.n; ++j) {
                        const OneFormVal v = A.value(at.coord(k), {ax.coord(i), ay.coord(j)});
                        const std::size_t n = (std::size_t(k) * ax.n + i) * ay.n + j;
                        b[n] = v.b;
                        a1[n] = v.a.x;
                        a2[n] = v.a.y;
                    }
            return STOneForm::grid(at, ax, ay, std::move(b), std::move(a1), std::move(a2));
        }(),
        cfg.probe.rho);
    const STOneForm zero = STOneForm::callback(
        [](double, Vec2) { return OneFormVal{0.0, {0.0, 0.0}}; }, 0.0, T);

    Timer tm;
    const AmplitudePair amps =
        build_amplitudes(ch, Arho, zero, cfg.probe.rho, delta, cfg.probe.n0, cfg.probe.n1,
                         cfg.probe.n2);
    const double r1 = max_abs(transport_residual(amps, 1));
    const double r2 = max_abs(transport_residual(amps, 2));
    std::printf("transport   max residual %.3e (pair 1), %.3e (pair 2), %.2f s\n", r1, r2,
                tm.seconds());

    Timer tp;
    const GoProbe probe =
        go_probe(ch, amps, A, Arho, nullptr, 1, t_axis(cfg), x_axis(cfg), y_axis(cfg));
    double pmax = 0.0, smax = 0.0;
    for (const cplx& v : probe.principal.values()) pmax = std::max(pmax, std::abs(v));
    for (const cplx& v : probe.source.values()) smax = std::max(smax, std::abs(v));
    std::printf("probe       rho %.1f, max |u| %.4f, max |source| %.4e, %.2f s\n", cfg.probe.rho,
                pmax, smax, tp.seconds());

    auto write_c = [&](const CSTScalar& fld, const std::string& name, const char* kind) {
        GridFile out;
        out.dtype = "c128";
        out.field_kind = kind;
        out.axes = {fld.at(), fld.ax(), fld.ay()};
        out.data.reserve(fld.values().size() * 2);
        for (const cplx& v : fld.values()) {
            out.data.push_back(v.real());
            out.data.push_back(v.imag());
        }
        const std::string path = out_path(cfg, name);
        out.write(path);
        std::printf("wrote       %s\n", path.c_str());
    };
    write_c(probe.principal, "probe_principal.grid", "go_principal");
    write_c(probe.source, "probe_source.grid", "go_source");
    return 0;
}

int cmd_dn_demo(const ExperimentConfig& cfg) {
    const double T = cfg.wave.T;
    const double tc = 0.5 * T, tw = 0.35 * T;

    // translation of a boundary pulse across a homogeneous strip
    {
        const WaveGrid1D grid = make_wave_grid(0.8, 257, cfg.wave.cfl);
        auto pulse = [](double t) { return presets::bump((t - 0.3) / 0.15); };
        const WaveField1D u = solve_forward(grid, {}, {pulse, nullptr});
        double worst = 0.0;
        for (int k = 0; k < grid.t.n; ++k)
            for (int i = 0; i < grid.x.n; ++i)
                worst = std::max(worst,
                                 std::abs(u.at(k, i) - pulse(grid.t.coord(k) - grid.x.coord(i))));
        std::printf("pulse translation   max err %.3e (0.8 x unit strip)\n", worst);
    }

    // manufactured solution with an interior source, order of convergence
    {
        const double om = 2.5;
        auto exact = [om](double t, double x) { return std::sin(kPi * x) * std::sin(om * t); };
        auto src = [om](double t, double x) {
            return (kPi * kPi - om * om) * std::sin(kPi * x) * std::sin(om * t);
        };
        auto v0 = [om](double x) { return om * std::sin(kPi * x); };
        double prev = 0.0;
        std::printf("manufactured wave   ");
        for (int nx : {65, 129, 257}) {
            const WaveGrid1D grid = make_wave_grid(1.0, nx, cfg.wave.cfl);
            const WaveField1D u = solve_forward(grid, {}, {}, src, v0);
            double err = 0.0;
            const int kl = grid.t.n - 1;
            for (int i = 0; i < grid.x.n; ++i)
                err = std::max(err, std::abs(u.at(kl, i) - exact(grid.t.coord(kl),
                                                                grid.x.coord(i))));
            if (prev > 0.0)
                std::printf("nx %d err %.3e (order %.2f)  ", nx, err, std::log2(prev / err));
            else
                std::printf("nx %d err %.3e  ", nx, err);
            prev = err;
        }
        std::printf("\n");
    }

    // energy conservation after the boundary pulse has entered
    {
        const WaveGrid1D grid = make_wave_grid(2.0, 257, cfg.wave.cfl);
        auto pulse = [](double t) { return presets::bump((t - 0.25) / 0.25); };
        const WaveField1D u = solve_forward(grid, {}, {pulse, nullptr});
        const int k0 = int(0.6 / grid.dt());
        const double e0 = discrete_energy(u, k0);
        double drift = 0.0;
        for (int k = k0; k + 1 < grid.t.n; ++k)
            drift = std::max(drift, std::abs(discrete_energy(u, k) - e0));
        std::printf("energy conservation rel drift %.3e after the pulse\n", drift / e0);
    }

    const Coeffs1D co_q{nullptr, nullptr, [tc, tw](double t, double x) {
                            return 1.4 * std::sin(kPi * x) *
                                   presets::bump((t - tc) / tw);
                        }};
    const Coeffs1D co_a{[tc, tw](double t, double x) {
                            return 0.5 * std::sin(kPi * x) * presets::bump((t - tc) / tw);
                        },
                        [tc, tw](double t, double x) {
                            return 0.4 * std::sin(2.0 * kPi * x) *
                                   presets::bump((t - tc) / tw);
                        },
                        nullptr};
    const BoundaryData1D f1{[](double t) { return presets::bump((t - 0.9) / 0.55); }, nullptr};
    const BoundaryData1D f2{[T](double t) { return presets::bump((t - 0.45 * T) / 0.6); },
                            [T](double t) { return 0.7 * presets::bump((t - 0.55 * T) / 0.5); }};

    // boundary pairing of the map difference against the interior identity
    for (const auto& [label, co] : {std::pair<const char*, const Coeffs1D&>{"q only", co_q},
                                    {"one-form", co_a}}) {
        std::printf("integral identity   %-8s", label);
        double prev = 0.0;
        for (int nx : {cfg.wave.nx / 2 + 1, cfg.wave.nx}) {
            const WaveGrid1D grid = make_wave_grid(T, nx, cfg.wave.cfl);
            const IdentityReport rep = integral_identity_check(grid, co, {}, f1, f2);
            if (prev > 0.0)
                std::printf("nx %d rel gap %.3e (order %.2f)", nx, rep.rel_gap,
                            std::log2(prev / rep.rel_gap));
            else
                std::printf("nx %d rel gap %.3e  ", nx, rep.rel_gap);
            prev = rep.rel_gap;
        }
        std::printf("\n");
    }

    // boundary maps agree after a gauge transformation fixing the boundary
    {
        auto eta = [tc, tw](double t) { return presets::bump((t - tc) / tw); };
        auto etad = [tc, tw](double t) { return presets::bump_d1((t - tc) / tw) / tw; };
        auto etadd = [tc, tw](double t) { return presets::bump_d2((t - tc) / tw) / (tw * tw); };
        const double amp = 0.4;
        const Psi1D psi{
            [=](double t, double x) { return amp * std::sin(kPi * x) * eta(t); },
            [=](double t, double x) { return amp * std::sin(kPi * x) * etad(t); },
            [=](double t, double x) { return amp * kPi * std::cos(kPi * x) * eta(t); },
            [=](double t, double x) { return amp * std::sin(kPi * x) * etadd(t); },
            [=](double t, double x) { return -amp * kPi * kPi * std::sin(kPi * x) * eta(t); }};
        std::printf("gauge invariance    ");
        double prev = 0.0;
        for (int nx : {cfg.wave.nx / 2 + 1, cfg.wave.nx}) {
            const WaveGrid1D grid = make_wave_grid(T, nx, cfg.wave.cfl);
            const GaugeCheck gc = gauge_invariance_check(grid, co_a, psi, f1);
            if (prev > 0.0)
                std::printf("nx %d dn gap %.3e (order %.2f), probe gap %.3e", nx, gc.dn_gap,
                            std::log2(prev / gc.dn_gap), gc.probe_gap);
            else
                std::printf("nx %d dn gap %.3e  ", nx, gc.dn_gap);
            prev = gc.dn_gap;
        }
        std::printf("\n");
    }
    return 0;
}

int cmd_reduce(const ExperimentConfig& cfg) {
    ReductionConfig rc;
    rc.T = cfg.wave.T;
    rc.cfl = cfg.wave.cfl;
    rc.s0 = cfg.reduce.s0;
    rc.delta = cfg.reduce.delta;
    rc.nx = cfg.reduce.nx;
    rc.rhos = cfg.reduce.rhos;

    const double s0 = rc.s0;
    const LineForm A{[s0](double t, double x) {
                         return 0.5 * presets::bump(2.0 * (x - 0.5)) *
                                presets::bump((t - s0 - 0.5) / 0.8);
                     },
                     [s0](double t, double x) {
                         return 0.35 * std::sin(kPi * x) *
                                presets::bump((t - s0 - 0.5) / 0.9);
                     }};
    auto q = [s0](double t, double x) {
        return 1.2 * std::sin(kPi * x) * presets::bump((t - s0 - 0.5) / 0.8);
    };

    auto print = [](const char* label, const ReductionResult& r) {
        std::printf("%s\n", label);
        std::printf("%8s  %12s  %12s  %10s  %12s\n", "rho", "|pairing|", "|target|", "rel gap",
                    "remainder");
        for (const ReductionRow& row : r.rows)
            std::printf("%8.1f  %12.6e  %12.6e  %10.4f  %12.6e\n", row.rho, std::abs(row.value),
                        std::abs(row.target), row.rel_gap, row.remainder);
        std::printf("tube functional %.8f, line oracle %.8f, rel gap %.3e\n", r.tube_value,
                    r.tube_oracle, r.tube_rel_gap);
    };

    Timer tm;
    print("one-form reduction: pairing vs i rho (weighted tube integral)",
          reduction_experiment(rc, A, q));
    print("potential reduction: pairing vs weighted tube integral of q",
          potential_reduction_experiment(rc, q));
    std::printf("total %.2f s\n", tm.seconds());
    return 0;
}

int cmd_selftest(const ExperimentConfig& cfg) {
    const std::vector<CheckResult> results = run_selftest(cfg);
    int failed = 0;
    for (const CheckResult& r : results) {
        std::printf("[%s] %-28s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        failed += r.pass ? 0 : 1;
    }
    std::printf("%d/%d checks passed\n", int(results.size()) - failed, int(results.size()));
    return failed == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lightray: ray and light-ray transforms on conformal disc metrics"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    app.add_option("-c,--config", config_path, "JSON experiment configuration");
    app.add_option("-s,--set", sets, "override a config entry, e.g. grid.nt=96")
        ->take_all();

    struct Cmd {
        const char* name;
        const char* help;
        int (*run)(const ExperimentConfig&);
    };
    const std::vector<Cmd> cmds = {
        {"trace", "trace one geodesic and write the polyline", cmd_trace},
        {"forward-ray", "geodesic transform of the configured spatial field", cmd_forward_ray},
        {"forward-light", "light transform of the configured space-time field",
         cmd_forward_light},
        {"slice", "check the moment identity between the two transforms", cmd_slice},
        {"invert", "reconstruct the space-time field from light data", cmd_invert},
        {"gauge-check", "potential extraction and gauge equivalence tests", cmd_gauge_check},
        {"go-probe", "build a geometric-optics probe and report residuals", cmd_go_probe},
        {"dn-demo", "wave lab: convergence, identity and gauge checks", cmd_dn_demo},
        {"reduce", "high-frequency reduction of boundary data to line integrals", cmd_reduce},
        {"selftest", "run the built-in consistency battery", cmd_selftest},
    };
    for (const Cmd& c : cmds) app.add_subcommand(c.name, c.help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        lrt::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = lrt::ExperimentConfig::load(config_path);
        for (const std::string& s : sets) cfg.apply_set(s);
        cfg.validate();

        for (const Cmd& c : cmds)
            if (app.got_subcommand(c.name)) return c.run(cfg);
        return 1;
    } catch (const lrt::ConvergenceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const lrt::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
