#include "lrt/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>

#include "lrt/dnlab.hpp"
#include "lrt/errors.hpp"
#include "lrt/gauge.hpp"
#include "lrt/geooptics.hpp"
#include "lrt/gridfile.hpp"
#include "lrt/metric.hpp"
#include "lrt/presets.hpp"
#include "lrt/rng.hpp"
#include "lrt/transforms.hpp"

namespace lrt {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

CheckResult run_one(const std::string& name, const std::function<CheckResult()>& body) {
    try {
        CheckResult r = body();
        r.name = name;
        return r;
    } catch (const Error& e) {
        return {name, false, std::string("unexpected error: ") + e.what()};
    } catch (const std::exception& e) {
        return {name, false, std::string("exception: ") + e.what()};
    }
}

CheckResult check_chords() {
    const MetricField g = MetricField::euclidean();
    const ScalarField2 one = ScalarField2::callback([](Vec2) { return 1.0; });
    const Sinogram sino = forward_ray(g, one, 16, 9);
    double worst = 0.0;
    for (std::size_t i = 0; i < sino.rays.size(); ++i) {
        const double chord = 2.0 * std::cos(sino.rays[i].mu);
        worst = std::max(worst, std::fabs(sino.value[i] - chord) / chord);
    }
    return {"", worst <= 1e-3, fmt("max relative chord error %.3g", worst)};
}

CheckResult check_measure() {
    const MetricField g = MetricField::euclidean();
    const auto rays = boundary_ray_grid(g, 64, 33);
    double total = 0.0;
    for (const auto& r : rays) total += r.weight;
    const double rel = std::fabs(total - 4.0 * M_PI) / (4.0 * M_PI);
    return {"", rel <= 2e-3, fmt("boundary measure off by %.3g relative", rel)};
}

CheckResult check_gridfile(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.output_dir);
    const std::string path = cfg.output_dir + "/selftest_roundtrip.grid";
    GridFile f;
    f.dtype = "f64";
    f.field_kind = "scalar";
    f.components = 1;
    f.axes = {make_axis("x", -1.0, 1.0, 5), make_axis("y", -1.0, 1.0, 7)};
    Rng rng(cfg.seed);
    f.data.resize(f.expected_len());
    for (double& v : f.data) v = rng.uniform(-1.0, 1.0);
    f.write(path);
    const GridFile g = GridFile::read(path);
    const bool same = g.data == f.data && g.dtype == f.dtype && g.axes.size() == f.axes.size();
    return {"", same, same ? "payload and metadata identical" : "round trip mismatch"};
}

CheckResult check_light_window() {
    const MetricField g = MetricField::euclidean();
    const double T = 4.5;
    const STScalar f = presets::separable_st(T);
    const Axis s_axis = make_axis("s", -2.0, 5.0, 57);
    const LightSinogram L = forward_light(g, f, s_axis, 8, 9);
    // light rays see nothing once the whole chord misses the time support
    const double s_lo = f.t_supp_lo() - 2.0, s_hi = f.t_supp_hi();
    double spill = 0.0;
    for (int is = 0; is < s_axis.n; ++is) {
        const double s = s_axis.coord(is);
        if (s >= s_lo && s <= s_hi) continue;
        for (std::size_t ir = 0; ir < L.rays.size(); ++ir)
            spill = std::max(spill, std::fabs(L.at(is, ir)));
    }
    return {"", spill == 0.0, fmt("largest out-of-window entry %.3g", spill)};
}

CheckResult check_gauge_annihilation() {
    const MetricField g = MetricField::euclidean();
    const double T = 4.5;
    // d psi in closed form, so the light transform sees an exactly exact form
    const presets::TimeWindow w = presets::influence_window(T);
    const double rad = 0.6;
    auto dpsi_fn = [w, rad](double t, Vec2 p) {
        const double u = (t - w.center) / w.width;
        const double r = norm(p) / rad;
        OneFormVal out;
        out.b = presets::bump_d1(u) / w.width * presets::bump(r);
        const double dr = presets::bump(u) * presets::bump_d1(r) / rad;
        const double rr = norm(p);
        out.a = rr > 1e-12 ? (dr / rr) * p : Vec2{0.0, 0.0};
        return out;
    };
    const STOneForm dpsi =
        STOneForm::callback(dpsi_fn, w.center - w.width, w.center + w.width);
    const Axis s_axis = make_axis("s", 0.0, 3.5, 29);
    const LightSinogram L = forward_light_oneform(g, dpsi, s_axis, 8, 9);
    double worst = 0.0;
    for (double x : L.value) worst = std::max(worst, std::fabs(x));
    double scale = 0.0;
    for (int mt = 0; mt <= 40; ++mt)
        for (int mr = 0; mr <= 40; ++mr) {
            const OneFormVal v = dpsi_fn(w.center - w.width + 2.0 * w.width * mt / 40.0,
                                         {rad * mr / 40.0, 0.0});
            scale = std::max({scale, std::fabs(v.b), std::fabs(v.a.x), std::fabs(v.a.y)});
        }
    const double bound = 1e-4 * scale * 2.0;
    return {"", worst <= bound, fmt("max |light transform of d psi| %.3g (bound %.3g)", worst, bound)};
}

CheckResult check_mollify_constant() {
    const Axis ax = make_axis("x", -1.0, 1.0, 65);
    const ScalarField2 one =
        ScalarField2::grid(ax, ax, std::vector<double>(65 * 65, 1.0), InterpMode::linear);
    const ScalarField2 sm = mollify(one, 256.0);
    const double radius = 0.5 * std::pow(256.0, -0.25);
    double worst = 0.0;
    for (int i = 0; i < ax.n; ++i)
        for (int j = 0; j < ax.n; ++j) {
            if (std::min({ax.coord(i) + 1.0, 1.0 - ax.coord(i), ax.coord(j) + 1.0,
                          1.0 - ax.coord(j)}) < radius + 2.0 * ax.h())
                continue;
            worst = std::max(worst, std::fabs(sm.node(i, j) - 1.0));
        }
    return {"", worst <= 1e-12, fmt("interior deviation from 1 is %.3g", worst)};
}

CheckResult check_chart_roundtrip() {
    const MetricField g = MetricField::euclidean();
    const Geodesic gamma = trace_geodesic(g, boundary_point(M_PI), inward_vector(g, M_PI, 0.0));
    const DiscChart ch = build_chart(g, gamma, 1.2, 0.6);
    const double z[3] = {1.3, 0.05, -0.03};
    double t = 0.0;
    Vec2 x{};
    ch.from_z(z, &t, &x);
    double zb[3];
    ch.to_z(t, x, zb);
    const double err =
        std::max({std::fabs(zb[0] - z[0]), std::fabs(zb[1] - z[1]), std::fabs(zb[2] - z[2])});
    return {"", err <= 1e-8, fmt("round-trip error %.3g", err)};
}

CheckResult check_dalembert() {
    const WaveGrid1D grid = make_wave_grid(0.8, 257);
    auto pulse = [](double t) { return presets::bump((t - 0.3) / 0.15); };
    const WaveField1D u = solve_forward(grid, {}, {pulse, nullptr});
    double worst = 0.0;
    for (int k = 0; k < grid.t.n; ++k)
        for (int i = 0; i < grid.x.n; ++i) {
            const double exact = pulse(grid.t.coord(k) - grid.x.coord(i));
            worst = std::max(worst, std::fabs(u.at(k, i) - exact));
        }
    return {"", worst <= 5e-3, fmt("translation error %.3g", worst)};
}

CheckResult check_energy() {
    const WaveGrid1D grid = make_wave_grid(2.0, 257);
    auto pulse = [](double t) { return presets::bump((t - 0.3) / 0.2); };
    const WaveField1D u = solve_forward(grid, {}, {pulse, nullptr});
    int k0 = 0;
    while (grid.t.coord(k0) < 0.6) ++k0;
    const double e0 = discrete_energy(u, k0);
    double drift = 0.0;
    for (int k = k0; k + 1 < grid.t.n; k += 16)
        drift = std::max(drift, std::fabs(discrete_energy(u, k) - e0));
    return {"", drift <= 1e-6 * e0, fmt("relative energy drift %.3g", drift / e0)};
}

CheckResult check_determinism(const ExperimentConfig& cfg) {
    const MetricField g = MetricField::preset(cfg.metric);
    const double T = cfg.grid.T;
    const STScalar f = presets::gaussian_st(T);
    const Axis s_axis = make_axis("s", 0.0, 3.0, 17);
    const LightSinogram a = forward_light(g, f, s_axis, 6, 7);
    const LightSinogram b = forward_light(g, f, s_axis, 6, 7);
    const bool same = a.value == b.value;
    return {"", same, same ? "repeated runs bit-identical" : "outputs differ between runs"};
}

CheckResult check_cfl_reject() {
    try {
        make_wave_grid(1.0, 64, 1.5);
    } catch (const ValidationError&) {
        return {"", true, "Courant violation rejected"};
    }
    return {"", false, "Courant violation was accepted"};
}

CheckResult check_config_reject() {
    try {
        ExperimentConfig::from_json_text("{\"grid\": {\"nz\": 3}}");
    } catch (const ValidationError&) {
        return {"", true, "unknown key rejected"};
    }
    return {"", false, "unknown key was accepted"};
}

CheckResult check_window_reject() {
    ExperimentConfig c;
    c.grid.T = 3.0;
    try {
        c.require_support_window(2.0);
    } catch (const ValidationError&) {
        return {"", true, "short time window rejected"};
    }
    return {"", false, "short time window was accepted"};
}

}  // namespace

std::vector<CheckResult> run_selftest(const ExperimentConfig& cfg) {
    std::vector<CheckResult> out;
    out.push_back(run_one("euclidean chord lengths", check_chords));
    out.push_back(run_one("boundary measure 4 pi", check_measure));
    out.push_back(run_one("grid file round trip", [&] { return check_gridfile(cfg); }));
    out.push_back(run_one("light sinogram window", check_light_window));
    out.push_back(run_one("exact forms annihilate", check_gauge_annihilation));
    out.push_back(run_one("mollifier preserves constants", check_mollify_constant));
    out.push_back(run_one("chart round trip", check_chart_roundtrip));
    out.push_back(run_one("wave pulse translation", check_dalembert));
    out.push_back(run_one("wave energy conservation", check_energy));
    out.push_back(run_one("deterministic kernels", [&] { return check_determinism(cfg); }));
    out.push_back(run_one("Courant validation", check_cfl_reject));
    out.push_back(run_one("config unknown keys", check_config_reject));
    out.push_back(run_one("time window validation", check_window_reject));
    return out;
}

}  // namespace lrt
