#include <algorithm>
#include <cmath>
#include <deque>

#include "detectors/internal.hpp"

namespace emgdrift::detail {
namespace {

// Bernstein-bound mean monitor. Keeps a bounded window with cumulative sums
// and, after each update, tests a grid of cut points (every `grid_step`
// values, both sides at least `min_segment` long). A cut is significant when
// the segment means differ by more than eps(left) + eps(right), with
//   eps(n, var) = sqrt(2 var ln(2/delta') / n) + 2 R ln(2/delta') / (3 n)
// where R is the window range and delta' is delta split across the grid.
class Abcd final : public Detector {
 public:
  explicit Abcd(const DetectorConfig& config)
      : Detector(DetectorKind::ABCD),
        delta_(config.get("delta")),
        min_segment_(static_cast<std::size_t>(config.get("min_segment"))),
        grid_step_(static_cast<std::size_t>(config.get("grid_step"))),
        max_window_(static_cast<std::size_t>(config.get("max_window"))) {}

 protected:
  DetectorStatus step(double x, std::size_t) override {
    // prefix_[i] holds sums over the first i values of the window.
    if (prefix_.empty()) prefix_.push_back({0.0, 0.0});
    const auto& last = prefix_.back();
    prefix_.push_back({last.sum + x, last.sum_sq + x * x});
    values_.push_back(x);
    if (values_.size() > max_window_) {
      values_.pop_front();
      prefix_.pop_front();
    }
    return values_.size() >= 2 * min_segment_ && cut_found() ? DetectorStatus::Drift : DetectorStatus::InControl;
  }

  void clear() override {
    values_.clear();
    prefix_.clear();
  }

 private:
  struct Prefix {
    double sum;
    double sum_sq;
  };

  double epsilon(double n, double var, double range, double log_term) const {
    return std::sqrt(2.0 * var * log_term / n) + 2.0 * range * log_term / (3.0 * n);
  }

  bool cut_found() const {
    const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) return false;
    const std::size_t n = values_.size();
    const std::size_t first = min_segment_;
    const std::size_t last = n - min_segment_;
    const std::size_t cuts = (last - first) / grid_step_ + 1;
    const double log_term = std::log(2.0 * static_cast<double>(cuts) / delta_);
    const Prefix base = prefix_.front();
    const Prefix end = prefix_.back();
    for (std::size_t cut = first; cut <= last; cut += grid_step_) {
      const Prefix& mid = prefix_[cut];
      const double nl = static_cast<double>(cut);
      const double nr = static_cast<double>(n - cut);
      const double sl = mid.sum - base.sum;
      const double sr = end.sum - mid.sum;
      const double ml = sl / nl;
      const double mr = sr / nr;
      const double vl = std::max(0.0, (mid.sum_sq - base.sum_sq) / nl - ml * ml);
      const double vr = std::max(0.0, (end.sum_sq - mid.sum_sq) / nr - mr * mr);
      if (std::abs(ml - mr) > epsilon(nl, vl, range, log_term) + epsilon(nr, vr, range, log_term)) return true;
    }
    return false;
  }

  double delta_;
  std::size_t min_segment_;
  std::size_t grid_step_;
  std::size_t max_window_;
  std::deque<double> values_;
  std::deque<Prefix> prefix_;
};

}  // namespace

std::unique_ptr<Detector> make_abcd(const DetectorConfig& config) { return std::make_unique<Abcd>(config); }

}  // namespace emgdrift::detail
