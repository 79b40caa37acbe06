#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <utility>

#include "emgdrift/detectors.hpp"

namespace emgdrift::detail {

std::unique_ptr<Detector> make_cusum(const DetectorConfig& config);
std::unique_ptr<Detector> make_gma(const DetectorConfig& config);
std::unique_ptr<Detector> make_page_hinkley(const DetectorConfig& config);
std::unique_ptr<Detector> make_ddm(const DetectorConfig& config);
std::unique_ptr<Detector> make_adwin(const DetectorConfig& config);
std::unique_ptr<Detector> make_hddm_a(const DetectorConfig& config);
std::unique_ptr<Detector> make_hddm_w(const DetectorConfig& config);
std::unique_ptr<Detector> make_seed(const DetectorConfig& config);
std::unique_ptr<Detector> make_abcd(const DetectorConfig& config);

/// Welford running mean/variance with a "standardize before update" helper.
class RunningMoments {
 public:
  void add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }
  std::size_t n() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double stddev() const noexcept { return n_ > 1 ? std::sqrt(m2_ / static_cast<double>(n_ - 1)) : 0.0; }
  /// (x - mean) / std with a small floor on std, so a constant history
  /// followed by a different value reads as a large deviation.
  double standardize(double x) const {
    const double floor = 1e-12 * std::max(1.0, std::abs(mean_));
    const double diff = x - mean_;
    if (diff == 0.0) return 0.0;
    return diff / std::max(stddev(), floor);
  }
  void clear() { *this = RunningMoments{}; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Exponentially faded mean/variance: observation i of t carries weight
/// alpha^(t-i). alpha = 1 reduces to RunningMoments.
class FadedMoments {
 public:
  explicit FadedMoments(double alpha) : alpha_(alpha) {}

  void add(double x) {
    weight_ = alpha_ * weight_ + 1.0;
    const double delta = x - mean_;
    mean_ += delta / weight_;
    s_ = alpha_ * s_ + delta * (x - mean_);
  }
  double mean() const noexcept { return mean_; }
  double stddev() const noexcept { return weight_ > 1.0 ? std::sqrt(std::max(0.0, s_ / (weight_ - 1.0))) : 0.0; }
  double standardize(double x) const {
    const double floor = 1e-12 * std::max(1.0, std::abs(mean_));
    const double diff = x - mean_;
    if (diff == 0.0) return 0.0;
    return diff / std::max(stddev(), floor);
  }
  void clear() {
    weight_ = 0.0;
    mean_ = 0.0;
    s_ = 0.0;
  }

 private:
  double alpha_;
  double weight_ = 0.0;
  double mean_ = 0.0;
  double s_ = 0.0;
};

/// Online min-max rescaling of each value against the preceding `window`
/// values, clamped to [0,1]. Bounded-variable detectors read their input
/// through it. With no usable range yet the output is 0.5.
class WindowRescaler {
 public:
  explicit WindowRescaler(std::size_t window) : window_(window) {}
  double push(double x);

 private:
  std::size_t window_;
  std::size_t t_ = 0;
  std::deque<std::pair<std::size_t, double>> max_q_;
  std::deque<std::pair<std::size_t, double>> min_q_;
};

/// Probability-integral rescaling: each value is standardized against the
/// mean and std of the preceding `window` values and mapped through the
/// normal CDF. Unlike min-max, a sustained level shift stays visible until
/// the window has absorbed it. Outputs 0.5 until two values are held.
class WindowCdfRescaler {
 public:
  explicit WindowCdfRescaler(std::size_t window) : window_(window) {}
  double push(double x);

 private:
  std::size_t window_;
  std::deque<double> history_;
};

}  // namespace emgdrift::detail
