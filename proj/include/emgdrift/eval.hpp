#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emgdrift/stream.hpp"

namespace emgdrift {

struct MatchResult {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::vector<double> delays_seconds;  // one per true positive
};

inline constexpr double kDefaultMatchWindowSeconds = 10.0;

/// Greedy earliest-first matching: each truth t (ascending) takes the
/// earliest unmatched detection d with t <= d <= t + window. Inputs are
/// sorted internally.
MatchResult match_detections(std::span<const double> truths, std::span<const double> detections,
                             double window_seconds = kDefaultMatchWindowSeconds);
MatchResult match_detections(const GroundTruth& truth, std::span<const double> detections,
                             double window_seconds = kDefaultMatchWindowSeconds);

/// 2tp / (2tp + fp + fn), 0 when the denominator is 0.
double f1(const MatchResult& match);

/// Mean delay over true positives; empty when tp == 0.
std::optional<double> add_seconds(const MatchResult& match);

/// Rendering of an absent ADD.
inline constexpr const char* kNoDetection = "--";

struct ReportRow {
  std::string detector;
  int grasp = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double f1 = 0.0;
  std::optional<double> add_seconds;
};

ReportRow make_report_row(std::string detector, int grasp, const MatchResult& match);

}  // namespace emgdrift
