#include <algorithm>

#include "detectors/internal.hpp"

namespace emgdrift::detail {
namespace {

// Page-Hinkley test run in both directions. The cumulative sum of
// (z - delta) is compared against its running minimum; z is the deviation
// from a faded running mean, in units of the faded running std.
class PageHinkley final : public Detector {
 public:
  explicit PageHinkley(const DetectorConfig& config)
      : Detector(DetectorKind::PH),
        min_n_(static_cast<std::size_t>(config.get("min_n"))),
        delta_(config.get("delta")),
        lambda_(config.get("lambda")),
        moments_(config.get("alpha")) {}

 protected:
  DetectorStatus step(double x, std::size_t n) override {
    if (n > min_n_) {
      const double z = moments_.standardize(x);
      up_sum_ += z - delta_;
      down_sum_ += -z - delta_;
      up_min_ = std::min(up_min_, up_sum_);
      down_min_ = std::min(down_min_, down_sum_);
    }
    moments_.add(x);
    if (n >= min_n_ && (up_sum_ - up_min_ > lambda_ || down_sum_ - down_min_ > lambda_)) {
      return DetectorStatus::Drift;
    }
    return DetectorStatus::InControl;
  }

  void clear() override {
    moments_.clear();
    up_sum_ = down_sum_ = 0.0;
    up_min_ = down_min_ = 0.0;
  }

 private:
  std::size_t min_n_;
  double delta_;
  double lambda_;
  FadedMoments moments_;
  double up_sum_ = 0.0;
  double down_sum_ = 0.0;
  double up_min_ = 0.0;
  double down_min_ = 0.0;
};

}  // namespace

std::unique_ptr<Detector> make_page_hinkley(const DetectorConfig& config) {
  return std::make_unique<PageHinkley>(config);
}

}  // namespace emgdrift::detail
