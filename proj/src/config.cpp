#include "lrt/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lrt/errors.hpp"

namespace lrt {

namespace {

using nlohmann::json;

[[noreturn]] void unknown_key(const std::string& path) {
    throw ValidationError("config: unknown key '" + path + "'");
}

double as_num(const json& v, const std::string& path) {
    if (!v.is_number()) throw ValidationError("config: '" + path + "' must be a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ValidationError("config: '" + path + "' must be an integer");
    return v.get<int>();
}

std::string as_str(const json& v, const std::string& path) {
    if (!v.is_string()) throw ValidationError("config: '" + path + "' must be a string");
    return v.get<std::string>();
}

void bind_fields(const json& j, ExperimentConfig& c) {
    if (!j.is_object()) throw ValidationError("config: top level must be an object");
    for (const auto& [key, val] : j.items()) {
        if (key == "metric") {
            c.metric = as_str(val, key);
        } else if (key == "field") {
            c.field = as_str(val, key);
        } else if (key == "seed") {
            if (!val.is_number_unsigned() && !val.is_number_integer())
                throw ValidationError("config: 'seed' must be an integer");
            c.seed = val.get<std::uint64_t>();
        } else if (key == "output_dir") {
            c.output_dir = as_str(val, key);
        } else if (key == "grid") {
            for (const auto& [k2, v2] : val.items()) {
                const std::string p = key + "." + k2;
                if (k2 == "T") c.grid.T = as_num(v2, p);
                else if (k2 == "nt") c.grid.nt = as_int(v2, p);
                else if (k2 == "nx") c.grid.nx = as_int(v2, p);
                else if (k2 == "ny") c.grid.ny = as_int(v2, p);
                else unknown_key(p);
            }
        } else if (key == "rays") {
            for (const auto& [k2, v2] : val.items()) {
                const std::string p = key + "." + k2;
                if (k2 == "n_base") c.rays.n_base = as_int(v2, p);
                else if (k2 == "n_dir") c.rays.n_dir = as_int(v2, p);
                else if (k2 == "n_s") c.rays.n_s = as_int(v2, p);
                else unknown_key(p);
            }
        } else if (key == "trace") {
            for (const auto& [k2, v2] : val.items()) {
                const std::string p = key + "." + k2;
                if (k2 == "step") c.trace.step = as_num(v2, p);
                else if (k2 == "boundary_tol") c.trace.boundary_tol = as_num(v2, p);
                else if (k2 == "max_arc") c.trace.max_arc = as_num(v2, p);
                else if (k2 == "alpha") c.trace.alpha = as_num(v2, p);
                else if (k2 == "mu") c.trace.mu = as_num(v2, p);
                else unknown_key(p);
            }
        } else if (key == "invert") {
            for (const auto& [k2, v2] : val.items()) {
                const std::string p = key + "." + k2;
                if (k2 == "method") c.invert.method = as_str(v2, p);
                else if (k2 == "lambda") c.invert.lambda = as_num(v2, p);
                else if (k2 == "tol") c.invert.tol = as_num(v2, p);
                else if (k2 == "K") c.invert.K = as_int(v2, p);
                else if (k2 == "max_iter") c.invert.max_iter = as_int(v2, p);
                else if (k2 == "memory_cap_mib") c.invert.memory_cap_mib = as_num(v2, p);
                else unknown_key(p);
            }
        } else if (key == "slice") {
            for (const auto& [k2, v2] : val.items()) {
                const std::string p = key + "." + k2;
                if (k2 == "k_max") c.slice.k_max = as_int(v2, p);
                else unknown_key(p);
            }
        } else if (key == "wave") {
            for (const auto& [k2, v2] : val.items()) {
                const std::string p = key + "." + k2;
                if (k2 == "T") c.wave.T = as_num(v2, p);
                else if (k2 == "cfl") c.wave.cfl = as_num(v2, p);
                else if (k2 == "nx") c.wave.nx = as_int(v2, p);
                else unknown_key(p);
            }
        } else if (key == "reduce") {
            for (const auto& [k2, v2] : val.items()) {
                const std::string p = key + "." + k2;
                if (k2 == "s0") c.reduce.s0 = as_num(v2, p);
                else if (k2 == "delta") c.reduce.delta = as_num(v2, p);
                else if (k2 == "eps") c.reduce.eps = as_num(v2, p);
                else if (k2 == "nx") c.reduce.nx = as_int(v2, p);
                else if (k2 == "rhos") {
                    if (!v2.is_array()) throw ValidationError("config: 'reduce.rhos' must be an array");
                    c.reduce.rhos.clear();
                    for (const auto& e : v2) c.reduce.rhos.push_back(as_num(e, p));
                } else {
                    unknown_key(p);
                }
            }
        } else if (key == "probe") {
            for (const auto& [k2, v2] : val.items()) {
                const std::string p = key + "." + k2;
                if (k2 == "rho") c.probe.rho = as_num(v2, p);
                else if (k2 == "delta") c.probe.delta = as_num(v2, p);
                else if (k2 == "s0") c.probe.s0 = as_num(v2, p);
                else if (k2 == "p_offset") c.probe.p_offset = as_num(v2, p);
                else if (k2 == "n0") c.probe.n0 = as_int(v2, p);
                else if (k2 == "n1") c.probe.n1 = as_int(v2, p);
                else if (k2 == "n2") c.probe.n2 = as_int(v2, p);
                else unknown_key(p);
            }
        } else {
            unknown_key(key);
        }
    }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("config: ") + e.what());
    }
    ExperimentConfig c;
    bind_fields(j, c);
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

void ExperimentConfig::apply_set(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ValidationError("config: --set expects key=value, got '" + assignment + "'");
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    json leaf;
    try {
        leaf = json::parse(raw);
    } catch (const json::parse_error&) {
        leaf = raw;  // unquoted strings like metric=bump:0.1:0.3
    }

    // build the nested object along the dotted path, then reuse the binder
    json j = leaf;
    std::size_t pos = key.size();
    while (true) {
        const auto dot = key.rfind('.', pos - 1);
        const std::string part =
            key.substr(dot == std::string::npos ? 0 : dot + 1, pos - (dot == std::string::npos ? 0 : dot + 1));
        if (part.empty()) throw ValidationError("config: bad --set key '" + key + "'");
        json wrap;
        wrap[part] = j;
        j = wrap;
        if (dot == std::string::npos) break;
        pos = dot;
    }
    bind_fields(j, *this);
    validate();
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& what) { throw ValidationError("config: " + what); };
    if (metric.empty()) fail("metric preset must be named");
    if (field != "one" && field != "gaussian" && field != "separable")
        fail("field must be one of: one, gaussian, separable");
    if (!(grid.T > 0.0)) fail("grid.T must be positive");
    if (grid.nt < 8 || grid.nx < 8 || grid.ny < 8) fail("grid node counts must be at least 8");
    if (grid.nt > 4096 || grid.nx > 4096 || grid.ny > 4096) fail("grid node counts above 4096 are unsupported");
    if (rays.n_base < 4 || rays.n_dir < 3) fail("rays.n_base >= 4 and rays.n_dir >= 3 required");
    if (rays.n_s < 8) fail("rays.n_s must be at least 8");
    if (!(trace.step > 0.0) || trace.step > 0.1) fail("trace.step must lie in (0, 0.1]");
    if (!(trace.boundary_tol > 0.0)) fail("trace.boundary_tol must be positive");
    if (!(trace.max_arc > 0.0)) fail("trace.max_arc must be positive");
    if (trace.alpha < 0.0 || trace.alpha >= 2.0 * 3.15) fail("trace.alpha must lie in [0, 2pi)");
    if (std::abs(trace.mu) >= 1.5708) fail("trace.mu must lie strictly inside (-pi/2, pi/2)");
    if (invert.method != "moments" && invert.method != "direct")
        fail("invert.method must be 'moments' or 'direct'");
    if (!(invert.tol > 0.0) || invert.tol > 1e-2) fail("invert.tol must lie in (0, 1e-2]");
    if (invert.K < 0 || invert.K > 12) fail("invert.K must lie in [0, 12]");
    if (invert.max_iter < 1 || invert.max_iter > 100000) fail("invert.max_iter out of range");
    if (!(invert.memory_cap_mib > 0.0)) fail("invert.memory_cap_mib must be positive");
    if (slice.k_max < 0 || slice.k_max > 12) fail("slice.k_max must lie in [0, 12]");
    if (!(wave.T > 0.0)) fail("wave.T must be positive");
    if (!(wave.cfl > 0.0) || wave.cfl > 1.0) fail("wave.cfl must lie in (0, 1]");
    if (wave.nx < 8 || wave.nx > 100000) fail("wave.nx out of range");
    if (!(reduce.delta > 0.0) || reduce.delta > 1.0) fail("reduce.delta must lie in (0, 1]");
    if (!(reduce.s0 > 0.0)) fail("reduce.s0 must be positive");
    if (reduce.eps < 0.0 || reduce.eps > 10.0) fail("reduce.eps out of range");
    if (reduce.nx < 8 || reduce.nx > 100000) fail("reduce.nx out of range");
    if (reduce.rhos.empty()) fail("reduce.rhos must not be empty");
    for (double r : reduce.rhos)
        if (!(r > 0.0)) fail("reduce.rhos entries must be positive");
    if (!(probe.rho > 0.0)) fail("probe.rho must be positive");
    if (!(probe.delta > 0.0) || probe.delta > 1.0) fail("probe.delta must lie in (0, 1]");
    if (!(probe.s0 > 0.0)) fail("probe.s0 must be positive");
    if (!(probe.p_offset > 0.0) || probe.p_offset > 5.0) fail("probe.p_offset must lie in (0, 5]");
    if (probe.n0 < 8 || probe.n1 < 4 || probe.n2 < 4) fail("probe tube grid too coarse");
    if (probe.n0 > 100000 || probe.n1 > 4096 || probe.n2 > 4096) fail("probe tube grid too large");
}

void ExperimentConfig::require_support_window(double diam) const {
    if (!(grid.T > 2.0 * diam)) {
        std::ostringstream ss;
        ss << "config: grid.T = " << grid.T << " must exceed twice the diameter (2 x " << diam
           << ") for influence-set experiments";
        throw ValidationError(ss.str());
    }
}

}  // namespace lrt
