#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lrt/axis.hpp"

namespace lrt {

// On-disk field container. A grid file is a pair of files:
//   <path>       raw little-endian binary payload, IEEE-754 doubles
//   <path>.meta  UTF-8 "key: value" sidecar describing the payload
//
// Sidecar keys (all required, unknown keys rejected):
//   gridfile    format version, currently 1
//   creator     producing tool and version
//   dtype       f64 | c128  (c128 = interleaved re,im doubles)
//   field_kind  free-form tag: scalar | oneform | sinogram | light_sinogram | ...
//   components  values per grid node (oneform in 2+1-d has 3, etc.)
//   dims        node counts, slowest axis first
//   axis        one line per dim in storage order: "<name> <min> <max>"
//
// Payload layout: node-major row-major in dims order, component index
// fastest, re/im innermost for c128. Payload byte count must equal
// prod(dims) * components * sizeof(value).
struct GridFile {
    std::string dtype = "f64";
    std::string field_kind = "scalar";
    int components = 1;
    std::vector<Axis> axes;
    std::vector<double> data;  // raw doubles, c128 interleaved

    std::size_t nodes() const {
        std::size_t n = 1;
        for (const auto& a : axes) n *= static_cast<std::size_t>(a.n);
        return n;
    }
    std::size_t doubles_per_value() const { return dtype == "c128" ? 2 : 1; }
    std::size_t expected_len() const { return nodes() * components * doubles_per_value(); }

    void validate() const;
    void write(const std::string& path) const;
    static GridFile read(const std::string& path);
};

}  // namespace lrt
