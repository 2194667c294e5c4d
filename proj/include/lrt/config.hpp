#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lrt {

// Experiment configuration, read from a JSON document with a fixed schema.
// Unknown keys are rejected so a typo fails loudly instead of silently
// running with defaults. Dotted --set overrides reuse the same binder.

struct ExperimentConfig {
    std::string metric = "euclidean";  // preset spec understood by MetricField::preset
    std::string field = "separable";   // test field: one | gaussian | separable
    std::uint64_t seed = 12345;
    std::string output_dir = "out";

    struct Grid {
        double T = 4.5;
        int nt = 64, nx = 64, ny = 64;
    } grid;

    struct Rays {
        int n_base = 32, n_dir = 33, n_s = 96;
    } rays;

    struct Trace {
        double step = 1e-3, boundary_tol = 1e-10, max_arc = 64.0;
        double alpha = 0.3, mu = 0.2;  // single-ray demo parameters
    } trace;

    struct Invert {
        std::string method = "moments";  // moments | direct
        double lambda = -1.0;            // negative selects the scaled default
        double tol = 1e-8;
        int K = 2;
        int max_iter = 400;
        double memory_cap_mib = 3072.0;
    } invert;

    struct Slice {
        int k_max = 3;
    } slice;

    struct Wave {
        double T = 4.0, cfl = 0.85;
        int nx = 513;
    } wave;

    struct Reduce {
        double s0 = 1.5, delta = 0.25, eps = 0.05;
        int nx = 513;
        std::vector<double> rhos = {8.0, 16.0, 32.0, 64.0, 128.0};
    } reduce;

    struct Probe {
        double rho = 32.0, delta = 0.2, s0 = 1.2, p_offset = 0.6;
        int n0 = 257, n1 = 17, n2 = 17;
    } probe;

    static ExperimentConfig load(const std::string& path);
    static ExperimentConfig from_json_text(const std::string& text);

    // "section.key=value"; values parse as JSON, falling back to plain strings
    void apply_set(const std::string& assignment);

    // range checks for every documented parameter
    void validate() const;

    // experiments with fields supported in the influence set need the time
    // window to clear a full crossing of the disc
    void require_support_window(double diam) const;
};

}  // namespace lrt
