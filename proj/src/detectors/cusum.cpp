#include <algorithm>

#include "detectors/internal.hpp"

namespace emgdrift::detail {
namespace {

// Two-sided CUSUM on standardized deviations from the running mean. Both
// tolerance `delta` and threshold `lambda` are in units of the running
// standard deviation, so the defaults do not depend on the score scale.
class Cusum final : public Detector {
 public:
  explicit Cusum(const DetectorConfig& config)
      : Detector(DetectorKind::CUSUM),
        min_n_(static_cast<std::size_t>(config.get("min_n"))),
        delta_(config.get("delta")),
        lambda_(config.get("lambda")) {}

 protected:
  DetectorStatus step(double x, std::size_t n) override {
    if (n > min_n_) {
      const double z = moments_.standardize(x);
      upper_ = std::max(0.0, upper_ + z - delta_);
      lower_ = std::max(0.0, lower_ - z - delta_);
    }
    moments_.add(x);
    if (n >= min_n_ && (upper_ > lambda_ || lower_ > lambda_)) return DetectorStatus::Drift;
    return DetectorStatus::InControl;
  }

  void clear() override {
    moments_.clear();
    upper_ = 0.0;
    lower_ = 0.0;
  }

 private:
  std::size_t min_n_;
  double delta_;
  double lambda_;
  RunningMoments moments_;
  double upper_ = 0.0;
  double lower_ = 0.0;
};

}  // namespace

std::unique_ptr<Detector> make_cusum(const DetectorConfig& config) { return std::make_unique<Cusum>(config); }

}  // namespace emgdrift::detail
