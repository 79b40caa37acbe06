#include <cmath>
#include <limits>

#include "detectors/internal.hpp"

namespace emgdrift::detail {
namespace {

// Maps raw scores into [0,1]: rescale = 1 uses the normal-CDF rescaler,
// rescale = 0 the sliding min-max rescaler.
class UnitAdapter {
 public:
  UnitAdapter(bool cdf, std::size_t window) : cdf_(cdf), cdf_rescaler_(window), minmax_(window) {}
  double push(double x) { return cdf_ ? cdf_rescaler_.push(x) : minmax_.push(x); }

 private:
  bool cdf_;
  WindowCdfRescaler cdf_rescaler_;
  WindowRescaler minmax_;
};

// Both HDDM variants assume inputs in [0,1]; raw scores pass through a
// sliding-window rescaler first. The rescaler is an input adapter and is
// not cleared on drift.

// HDDM_A: Hoeffding bound on the difference between the running mean and
// the mean at the most favourable earlier cut point.
class HddmA final : public Detector {
 public:
  explicit HddmA(const DetectorConfig& config)
      : Detector(DetectorKind::HDDM_A),
        drift_confidence_(config.get("drift_confidence")),
        warning_confidence_(config.get("warning_confidence")),
        two_sided_(config.get("two_sided") != 0.0),
        rescaler_(config.get("rescale") != 0.0, static_cast<std::size_t>(config.get("rescale_window"))) {}

 protected:
  DetectorStatus step(double raw, std::size_t) override {
    const double x = rescaler_.push(raw);
    total_n_ += 1.0;
    total_c_ += x;
    if (n_min_ == 0.0) {
      n_min_ = total_n_;
      c_min_ = total_c_;
    }
    if (n_max_ == 0.0) {
      n_max_ = total_n_;
      c_max_ = total_c_;
    }
    const double log_term = std::log(1.0 / drift_confidence_);
    const double bound_total = std::sqrt(log_term / (2.0 * total_n_));
    const double mean = total_c_ / total_n_;
    if (c_min_ / n_min_ + std::sqrt(log_term / (2.0 * n_min_)) >= mean + bound_total) {
      c_min_ = total_c_;
      n_min_ = total_n_;
    }
    if (c_max_ / n_max_ - std::sqrt(log_term / (2.0 * n_max_)) <= mean - bound_total) {
      c_max_ = total_c_;
      n_max_ = total_n_;
    }

    if (mean_increased(drift_confidence_) || (two_sided_ && mean_decreased(drift_confidence_))) {
      return DetectorStatus::Drift;
    }
    if (mean_increased(warning_confidence_) || (two_sided_ && mean_decreased(warning_confidence_))) {
      return DetectorStatus::Warning;
    }
    return DetectorStatus::InControl;
  }

  void clear() override {
    n_min_ = c_min_ = n_max_ = c_max_ = 0.0;
    total_n_ = total_c_ = 0.0;
  }

 private:
  double epsilon(double n_cut, double confidence) const {
    const double m = (total_n_ - n_cut) / n_cut * (1.0 / total_n_);
    return std::sqrt(m / 2.0 * std::log(2.0 / confidence));
  }

  bool mean_increased(double confidence) const {
    if (n_min_ == total_n_) return false;
    return total_c_ / total_n_ - c_min_ / n_min_ >= epsilon(n_min_, confidence);
  }

  bool mean_decreased(double confidence) const {
    if (n_max_ == total_n_) return false;
    return c_max_ / n_max_ - total_c_ / total_n_ >= epsilon(n_max_, confidence);
  }

  double drift_confidence_;
  double warning_confidence_;
  bool two_sided_;
  UnitAdapter rescaler_;
  double n_min_ = 0.0, c_min_ = 0.0;
  double n_max_ = 0.0, c_max_ = 0.0;
  double total_n_ = 0.0, total_c_ = 0.0;
};

// HDDM_W: McDiarmid bound on EWMA estimates. `weight_sq` tracks the sum of
// squared EWMA weights of each estimate.
class HddmW final : public Detector {
 public:
  explicit HddmW(const DetectorConfig& config)
      : Detector(DetectorKind::HDDM_W),
        drift_confidence_(config.get("drift_confidence")),
        warning_confidence_(config.get("warning_confidence")),
        lambda_(config.get("lambda")),
        two_sided_(config.get("two_sided") != 0.0),
        rescaler_(config.get("rescale") != 0.0, static_cast<std::size_t>(config.get("rescale_window"))) {}

 protected:
  DetectorStatus step(double raw, std::size_t) override {
    const double x = rescaler_.push(raw);
    add(total_, x);

    update_increase(x);
    if (increased(drift_confidence_)) return DetectorStatus::Drift;
    const bool warn_up = increased(warning_confidence_);

    bool warn_down = false;
    if (two_sided_) {
      update_decrease(x);
      if (decreased(drift_confidence_)) return DetectorStatus::Drift;
      warn_down = decreased(warning_confidence_);
    }
    return warn_up || warn_down ? DetectorStatus::Warning : DetectorStatus::InControl;
  }

  void clear() override {
    total_ = {};
    incr_ref_ = incr_recent_ = decr_ref_ = decr_recent_ = {};
    incr_cut_ = std::numeric_limits<double>::infinity();
    decr_cut_ = -std::numeric_limits<double>::infinity();
  }

 private:
  struct Estimate {
    double ewma = 0.0;
    double weight_sq = 0.0;
    bool empty = true;
  };

  void add(Estimate& e, double x) const {
    if (e.empty) {
      e = {x, 1.0, false};
      return;
    }
    const double keep = 1.0 - lambda_;
    e.ewma = lambda_ * x + keep * e.ewma;
    e.weight_sq = lambda_ * lambda_ + keep * keep * e.weight_sq;
  }

  double bound(double weight_sq, double confidence) const {
    return std::sqrt(weight_sq * std::log(1.0 / confidence) / 2.0);
  }

  void update_increase(double x) {
    const double b = bound(total_.weight_sq, drift_confidence_);
    if (total_.ewma + b < incr_cut_) {
      incr_cut_ = total_.ewma + b;
      incr_ref_ = total_;
      incr_recent_ = {};
    } else {
      add(incr_recent_, x);
    }
  }

  void update_decrease(double x) {
    const double b = bound(total_.weight_sq, drift_confidence_);
    if (total_.ewma - b > decr_cut_) {
      decr_cut_ = total_.ewma - b;
      decr_ref_ = total_;
      decr_recent_ = {};
    } else {
      add(decr_recent_, x);
    }
  }

  bool increased(double confidence) const {
    if (incr_ref_.empty || incr_recent_.empty) return false;
    return incr_recent_.ewma - incr_ref_.ewma > bound(incr_ref_.weight_sq + incr_recent_.weight_sq, confidence);
  }

  bool decreased(double confidence) const {
    if (decr_ref_.empty || decr_recent_.empty) return false;
    return decr_ref_.ewma - decr_recent_.ewma > bound(decr_ref_.weight_sq + decr_recent_.weight_sq, confidence);
  }

  double drift_confidence_;
  double warning_confidence_;
  double lambda_;
  bool two_sided_;
  UnitAdapter rescaler_;
  Estimate total_;
  Estimate incr_ref_, incr_recent_, decr_ref_, decr_recent_;
  double incr_cut_ = std::numeric_limits<double>::infinity();
  double decr_cut_ = -std::numeric_limits<double>::infinity();
};

}  // namespace

std::unique_ptr<Detector> make_hddm_a(const DetectorConfig& config) { return std::make_unique<HddmA>(config); }
std::unique_ptr<Detector> make_hddm_w(const DetectorConfig& config) { return std::make_unique<HddmW>(config); }

}  // namespace emgdrift::detail
