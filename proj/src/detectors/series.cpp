#include <algorithm>
#include <cmath>

#include "detectors/internal.hpp"
#include "emgdrift/error.hpp"

namespace emgdrift {

std::string_view to_string(DriftEvent::Kind kind) {
  return kind == DriftEvent::Kind::Warning ? "warning" : "drift";
}

ScoreBinarizer::ScoreBinarizer(double quantile, std::size_t calibration)
    : quantile_(quantile), calibration_(calibration) {
  if (!(quantile > 0.0 && quantile < 100.0)) throw ConfigError("DDM: parameter 'quantile' must be in (0, 100)");
  if (calibration == 0) throw ConfigError("DDM: parameter 'calibration' must be positive");
}

double ScoreBinarizer::threshold_of(std::vector<double> sample, double quantile) {
  if (sample.empty()) throw DataError("binarizer: empty calibration sample");
  std::sort(sample.begin(), sample.end());
  const double pos = quantile / 100.0 * static_cast<double>(sample.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sample.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sample[lo] + frac * (sample[hi] - sample[lo]);
}

std::vector<double> ScoreBinarizer::apply(std::span<const double> scores) const {
  if (scores.empty()) return {};
  const auto n = std::min(calibration_, scores.size());
  const double threshold = threshold_of({scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(n)}, quantile_);
  std::vector<double> out(scores.size());
  std::transform(scores.begin(), scores.end(), out.begin(), [&](double s) { return s > threshold ? 1.0 : 0.0; });
  return out;
}

std::vector<DriftEvent> detect_series(const DetectorConfig& config, std::span<const ScorePoint> scores) {
  auto detector = create_detector(config);
  std::vector<double> values(scores.size());
  std::transform(scores.begin(), scores.end(), values.begin(), [](const ScorePoint& p) { return p.score; });
  if (config.kind == DetectorKind::DDM) {
    values = ScoreBinarizer(config.get("quantile"), static_cast<std::size_t>(config.get("calibration"))).apply(values);
  }

  const auto name = config.label();
  std::vector<DriftEvent> events;
  auto previous = DetectorStatus::InControl;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto status = detector->update(values[i]).status;
    if (status == DetectorStatus::Drift) {
      events.push_back({name, DriftEvent::Kind::Drift, scores[i].t_seconds, i});
    } else if (status == DetectorStatus::Warning && previous != DetectorStatus::Warning) {
      events.push_back({name, DriftEvent::Kind::Warning, scores[i].t_seconds, i});
    }
    previous = status;
  }
  return events;
}

std::vector<double> drift_times(std::span<const DriftEvent> events) {
  std::vector<double> out;
  for (const auto& e : events) {
    if (e.kind == DriftEvent::Kind::Drift) out.push_back(e.t_seconds);
  }
  return out;
}

}  // namespace emgdrift
