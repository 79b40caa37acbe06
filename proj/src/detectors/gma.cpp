#include <cmath>

#include "detectors/internal.hpp"

namespace emgdrift::detail {
namespace {

// Geometric moving average of standardized deviations; drift when its
// magnitude exceeds lambda.
class Gma final : public Detector {
 public:
  explicit Gma(const DetectorConfig& config)
      : Detector(DetectorKind::GMA),
        min_n_(static_cast<std::size_t>(config.get("min_n"))),
        alpha_(config.get("alpha")),
        lambda_(config.get("lambda")) {}

 protected:
  DetectorStatus step(double x, std::size_t n) override {
    if (n > min_n_) {
      average_ = alpha_ * average_ + (1.0 - alpha_) * moments_.standardize(x);
    }
    moments_.add(x);
    if (n > min_n_ && std::abs(average_) > lambda_) return DetectorStatus::Drift;
    return DetectorStatus::InControl;
  }

  void clear() override {
    moments_.clear();
    average_ = 0.0;
  }

 private:
  std::size_t min_n_;
  double alpha_;
  double lambda_;
  RunningMoments moments_;
  double average_ = 0.0;
};

}  // namespace

std::unique_ptr<Detector> make_gma(const DetectorConfig& config) { return std::make_unique<Gma>(config); }

}  // namespace emgdrift::detail
