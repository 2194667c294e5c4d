#pragma once

#include <cstdint>
#include <random>

namespace lrt {

// Seeded random stream for test fields. mt19937_64 output is pinned by the
// standard; the uniform mapping below is done by hand because the standard
// distributions are implementation defined and would break byte-for-byte
// reproducibility across stdlibs.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t bits() { return eng_(); }

  private:
    std::mt19937_64 eng_;
};

}  // namespace lrt
