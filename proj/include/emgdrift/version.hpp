#pragma once

namespace emgdrift {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace emgdrift
