#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "detectors/internal.hpp"
#include "emgdrift/csv.hpp"
#include "emgdrift/error.hpp"

namespace emgdrift {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// name, default, min, max, min_inclusive, max_inclusive, integer
constexpr ParamSpec kCusum[] = {
    {"min_n", 30, 1, kInf, true, false, true},
    {"delta", 0.5, 0, kInf, true, false, false},
    {"lambda", 12, 0, kInf, false, false, false},
};
constexpr ParamSpec kGma[] = {
    {"min_n", 30, 2, kInf, true, false, true},
    {"alpha", 0.99, 0, 1, false, false, false},
    {"lambda", 1.0, 0, kInf, false, false, false},
};
constexpr ParamSpec kPh[] = {
    {"min_n", 30, 1, kInf, true, false, true},
    {"delta", 0.25, 0, kInf, true, false, false},
    {"lambda", 25, 0, kInf, false, false, false},
    {"alpha", 0.9999, 0, 1, false, true, false},
};
constexpr ParamSpec kDdm[] = {
    {"min_n", 30, 1, kInf, true, false, true},
    {"warning_level", 2, 0, kInf, false, false, false},
    {"drift_level", 4, 0, kInf, false, false, false},
    {"quantile", 95, 0, 100, false, false, false},
    {"calibration", 50, 1, kInf, true, false, true},
};
constexpr ParamSpec kAdwin[] = {
    {"delta", 0.002, 0, 1, false, false, false},
    {"max_buckets", 5, 2, kInf, true, false, true},
    {"clock", 32, 1, kInf, true, false, true},
};
constexpr ParamSpec kHddmA[] = {
    {"drift_confidence", 0.001, 0, 1, false, false, false},
    {"warning_confidence", 0.005, 0, 1, false, false, false},
    {"two_sided", 0, 0, 1, true, true, true},
    {"rescale_window", 200, 2, kInf, true, false, true},
    {"rescale", 1, 0, 1, true, true, true},
};
constexpr ParamSpec kHddmW[] = {
    {"drift_confidence", 0.001, 0, 1, false, false, false},
    {"warning_confidence", 0.005, 0, 1, false, false, false},
    {"lambda", 0.05, 0, 1, false, false, false},
    {"two_sided", 0, 0, 1, true, true, true},
    {"rescale_window", 200, 2, kInf, true, false, true},
    {"rescale", 1, 0, 1, true, true, true},
};
constexpr ParamSpec kSeed[] = {
    {"block_size", 32, 2, kInf, true, false, true},
    {"delta", 0.05, 0, 1, false, false, false},
    {"epsilon_prime", 0.01, 0, 1, true, false, false},
    {"compress_term", 75, 1, kInf, true, false, true},
};
constexpr ParamSpec kAbcd[] = {
    {"delta", 0.05, 0, 1, false, false, false},
    {"min_segment", 30, 2, kInf, true, false, true},
    {"grid_step", 10, 1, kInf, true, false, true},
    {"max_window", 1000, 4, kInf, true, false, true},
};

bool in_range(const ParamSpec& spec, double v) {
  if (!std::isfinite(v)) return false;
  if (spec.min_inclusive ? v < spec.min : v <= spec.min) return false;
  if (spec.max_inclusive ? v > spec.max : v >= spec.max) return false;
  if (spec.integer && std::floor(v) != v) return false;
  return true;
}

std::string describe_range(const ParamSpec& spec) {
  std::ostringstream os;
  os << (spec.min_inclusive ? '[' : '(') << spec.min << ", ";
  if (std::isinf(spec.max)) os << "inf"; else os << spec.max;
  os << (spec.max_inclusive ? ']' : ')');
  if (spec.integer) os << " (integer)";
  return os.str();
}

}  // namespace

std::string_view to_string(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::CUSUM: return "CUSUM";
    case DetectorKind::GMA: return "GMA";
    case DetectorKind::PH: return "PH";
    case DetectorKind::DDM: return "DDM";
    case DetectorKind::ADWIN: return "ADWIN";
    case DetectorKind::HDDM_A: return "HDDM_A";
    case DetectorKind::HDDM_W: return "HDDM_W";
    case DetectorKind::SEED: return "SEED";
    case DetectorKind::ABCD: return "ABCD";
  }
  return "?";
}

std::optional<DetectorKind> parse_detector_kind(std::string_view name) {
  for (auto kind : kAllDetectorKinds) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::span<const ParamSpec> parameter_specs(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::CUSUM: return kCusum;
    case DetectorKind::GMA: return kGma;
    case DetectorKind::PH: return kPh;
    case DetectorKind::DDM: return kDdm;
    case DetectorKind::ADWIN: return kAdwin;
    case DetectorKind::HDDM_A: return kHddmA;
    case DetectorKind::HDDM_W: return kHddmW;
    case DetectorKind::SEED: return kSeed;
    case DetectorKind::ABCD: return kAbcd;
  }
  return {};
}

double DetectorConfig::get(std::string_view name) const {
  for (const auto& spec : parameter_specs(kind)) {
    if (spec.name != name) continue;
    const auto it = params.find(std::string(name));
    return it == params.end() ? spec.default_value : it->second;
  }
  throw ConfigError(std::string(to_string(kind)) + ": unknown parameter '" + std::string(name) + "'");
}

void DetectorConfig::validate() const {
  const auto specs = parameter_specs(kind);
  for (const auto& [name, value] : params) {
    const ParamSpec* match = nullptr;
    for (const auto& spec : specs) {
      if (spec.name == name) match = &spec;
    }
    if (!match) throw ConfigError(std::string(to_string(kind)) + ": unknown parameter '" + name + "'");
    if (!in_range(*match, value)) {
      throw ConfigError(std::string(to_string(kind)) + ": parameter '" + name + "' = " + csv::format_double(value) +
                        " is outside " + describe_range(*match));
    }
  }
  if (kind == DetectorKind::DDM && get("drift_level") <= get("warning_level")) {
    throw ConfigError("DDM: parameter 'drift_level' must exceed 'warning_level'");
  }
  if ((kind == DetectorKind::HDDM_A || kind == DetectorKind::HDDM_W) &&
      get("warning_confidence") < get("drift_confidence")) {
    throw ConfigError(std::string(to_string(kind)) +
                      ": parameter 'warning_confidence' must be >= 'drift_confidence'");
  }
}

std::string DetectorConfig::label() const {
  std::string out(to_string(kind));
  if (params.empty()) return out;
  out += '{';
  bool first = true;
  for (const auto& [name, value] : params) {
    if (!first) out += ';';
    out += name + '=' + csv::format_double(value);
    first = false;
  }
  out += '}';
  return out;
}

// ---------------------------------------------------------------------------

void Detector::check_input(double value) const {
  if (!std::isfinite(value)) throw DataError(std::string(to_string(kind_)) + ": non-finite input");
}

DetectorState Detector::update(double value) {
  check_input(value);
  ++n_;
  const auto status = step(value, n_);
  state_ = {status, n_};
  if (status == DetectorStatus::Drift) {
    clear();
    n_ = 0;
  }
  return state_;
}

void Detector::reset() {
  clear();
  n_ = 0;
  state_ = {};
}

std::unique_ptr<Detector> create_detector(const DetectorConfig& config) {
  config.validate();
  switch (config.kind) {
    case DetectorKind::CUSUM: return detail::make_cusum(config);
    case DetectorKind::GMA: return detail::make_gma(config);
    case DetectorKind::PH: return detail::make_page_hinkley(config);
    case DetectorKind::DDM: return detail::make_ddm(config);
    case DetectorKind::ADWIN: return detail::make_adwin(config);
    case DetectorKind::HDDM_A: return detail::make_hddm_a(config);
    case DetectorKind::HDDM_W: return detail::make_hddm_w(config);
    case DetectorKind::SEED: return detail::make_seed(config);
    case DetectorKind::ABCD: return detail::make_abcd(config);
  }
  throw ConfigError("unknown detector kind");
}

namespace detail {

double WindowCdfRescaler::push(double x) {
  double out = 0.5;
  if (history_.size() >= 2) {
    // Moments of the values shifted by the oldest one, so a constant window
    // gives exactly zero spread instead of summation round-off.
    const double shift = history_.front();
    double mean = 0.0;
    for (double y : history_) mean += y - shift;
    mean /= static_cast<double>(history_.size());
    double ss = 0.0;
    for (double y : history_) ss += (y - shift - mean) * (y - shift - mean);
    const double sd = std::sqrt(ss / static_cast<double>(history_.size() - 1));
    const double diff = (x - shift) - mean;
    if (sd > 0.0) {
      out = 0.5 * std::erfc(-diff / (sd * std::sqrt(2.0)));
    } else if (diff != 0.0) {
      out = diff > 0.0 ? 1.0 : 0.0;
    }
  }
  history_.push_back(x);
  if (history_.size() > window_) history_.pop_front();
  return out;
}

double WindowRescaler::push(double x) {
  double out = 0.5;
  if (!max_q_.empty()) {
    const double hi = max_q_.front().second;
    const double lo = min_q_.front().second;
    if (hi > lo) out = std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
  }
  ++t_;
  while (!max_q_.empty() && max_q_.back().second <= x) max_q_.pop_back();
  max_q_.emplace_back(t_, x);
  while (!min_q_.empty() && min_q_.back().second >= x) min_q_.pop_back();
  min_q_.emplace_back(t_, x);
  while (max_q_.front().first + window_ <= t_) max_q_.pop_front();
  while (min_q_.front().first + window_ <= t_) min_q_.pop_front();
  return out;
}

}  // namespace detail
}  // namespace emgdrift
