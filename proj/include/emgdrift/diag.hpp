#pragma once

#include <functional>
#include <string>

namespace emgdrift::diag {

using Sink = std::function<void(const std::string&)>;

/// Emits a non-fatal warning. Defaults to stderr.
void warn(const std::string& message);

/// Replaces the warning sink and returns the previous one. Passing an empty
/// function restores the stderr sink.
Sink set_sink(Sink sink);

}  // namespace emgdrift::diag
