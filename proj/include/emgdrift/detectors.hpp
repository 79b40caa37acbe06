#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emgdrift/scoring.hpp"

namespace emgdrift {

enum class DetectorKind { CUSUM, GMA, PH, DDM, ADWIN, HDDM_A, HDDM_W, SEED, ABCD };

inline constexpr std::array<DetectorKind, 9> kAllDetectorKinds = {
    DetectorKind::ADWIN, DetectorKind::CUSUM, DetectorKind::GMA,  DetectorKind::HDDM_A, DetectorKind::HDDM_W,
    DetectorKind::PH,    DetectorKind::SEED,  DetectorKind::ABCD, DetectorKind::DDM};

std::string_view to_string(DetectorKind kind);
std::optional<DetectorKind> parse_detector_kind(std::string_view name);

enum class DetectorStatus { InControl, Warning, Drift };

struct DetectorState {
  DetectorStatus status = DetectorStatus::InControl;
  std::size_t n_seen = 0;  // updates since the last reset
};

/// One tunable parameter: name, default and admissible range.
struct ParamSpec {
  std::string_view name;
  double default_value;
  double min;
  double max;
  bool min_inclusive;
  bool max_inclusive;
  bool integer;
};

/// Parameter table of a detector kind, in documentation order.
std::span<const ParamSpec> parameter_specs(DetectorKind kind);

struct DetectorConfig {
  DetectorKind kind = DetectorKind::ADWIN;
  std::map<std::string, double> params;  // overrides; the rest take defaults

  static DetectorConfig defaults(DetectorKind kind) { return {kind, {}}; }

  /// Resolved value (override or default). Throws ConfigError for an
  /// unknown name.
  double get(std::string_view name) const;

  /// Throws ConfigError naming the first unknown or out-of-range parameter.
  void validate() const;

  /// "CUSUM" or "CUSUM{lambda=20}" when overrides are present.
  std::string label() const;
};

/// Incremental change detector over a univariate stream. Single owner; not
/// safe for concurrent updates.
class Detector {
 public:
  virtual ~Detector() = default;

  /// Feeds one value. On Drift the detector resets itself before returning,
  /// so the next update starts from empty statistics.
  DetectorState update(double value);

  DetectorState state() const noexcept { return state_; }
  DetectorKind kind() const noexcept { return kind_; }
  void reset();

 protected:
  explicit Detector(DetectorKind kind) : kind_(kind) {}
  /// Checked, finite input; `n` counts updates since reset including this one.
  virtual DetectorStatus step(double value, std::size_t n) = 0;
  virtual void clear() = 0;
  virtual void check_input(double value) const;

 private:
  DetectorKind kind_;
  DetectorState state_;
  std::size_t n_ = 0;
};

std::unique_ptr<Detector> create_detector(const DetectorConfig& config);

struct DriftEvent {
  enum class Kind { Warning, Drift };

  std::string detector;
  Kind kind = Kind::Drift;
  double t_seconds = 0.0;
  std::size_t score_index = 0;  // position in the score series
};

std::string_view to_string(DriftEvent::Kind kind);

/// Maps real-valued scores to {0,1} for DDM: threshold at the `quantile`-th
/// percentile of the first `calibration` scores, 1 when above it.
class ScoreBinarizer {
 public:
  ScoreBinarizer(double quantile, std::size_t calibration);

  /// Threshold from a calibration sample (linear-interpolated percentile).
  static double threshold_of(std::vector<double> sample, double quantile);

  /// Binarizes a whole series: calibrates on its prefix, then maps every
  /// value (prefix included).
  std::vector<double> apply(std::span<const double> scores) const;

 private:
  double quantile_;
  std::size_t calibration_;
};

/// Runs a fresh detector over the scores and reports one event per entry
/// into Warning and one per Drift. DDM inputs go through ScoreBinarizer.
std::vector<DriftEvent> detect_series(const DetectorConfig& config, std::span<const ScorePoint> scores);

/// Drift times only, in order.
std::vector<double> drift_times(std::span<const DriftEvent> events);

}  // namespace emgdrift
