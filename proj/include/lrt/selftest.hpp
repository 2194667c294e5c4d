#pragma once

#include <string>
#include <vector>

#include "lrt/config.hpp"

namespace lrt {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// quick property battery covering every module; each check is independent
// and exceptions are reported as failures rather than aborting the run
std::vector<CheckResult> run_selftest(const ExperimentConfig& cfg);

}  // namespace lrt
