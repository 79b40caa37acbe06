#include "emgdrift/eval.hpp"

#include <algorithm>
#include <numeric>

#include "emgdrift/error.hpp"

namespace emgdrift {

MatchResult match_detections(std::span<const double> truths, std::span<const double> detections,
                             double window_seconds) {
  if (!(window_seconds >= 0.0)) throw ConfigError("matching: window_seconds must be >= 0");
  std::vector<double> t(truths.begin(), truths.end());
  std::vector<double> d(detections.begin(), detections.end());
  std::sort(t.begin(), t.end());
  std::sort(d.begin(), d.end());

  MatchResult result;
  std::vector<bool> used(d.size(), false);
  for (double truth : t) {
    auto it = std::lower_bound(d.begin(), d.end(), truth);
    bool matched = false;
    for (; it != d.end() && *it <= truth + window_seconds; ++it) {
      const auto idx = static_cast<std::size_t>(it - d.begin());
      if (used[idx]) continue;
      used[idx] = true;
      result.delays_seconds.push_back(*it - truth);
      matched = true;
      break;
    }
    if (matched) ++result.tp; else ++result.fn;
  }
  result.fp = d.size() - result.tp;
  return result;
}

MatchResult match_detections(const GroundTruth& truth, std::span<const double> detections, double window_seconds) {
  return match_detections(truth.boundaries, detections, window_seconds);
}

double f1(const MatchResult& match) {
  const auto denom = 2 * match.tp + match.fp + match.fn;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(match.tp) / static_cast<double>(denom);
}

std::optional<double> add_seconds(const MatchResult& match) {
  if (match.tp == 0 || match.delays_seconds.empty()) return std::nullopt;
  const double sum = std::accumulate(match.delays_seconds.begin(), match.delays_seconds.end(), 0.0);
  return sum / static_cast<double>(match.delays_seconds.size());
}

ReportRow make_report_row(std::string detector, int grasp, const MatchResult& match) {
  return {std::move(detector), grasp, match.tp, match.fp, match.fn, f1(match), add_seconds(match)};
}

}  // namespace emgdrift
