#pragma once

namespace lrt {

inline constexpr const char* kCreator = "lightray 0.1.0";

}  // namespace lrt
