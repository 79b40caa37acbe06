#include <cmath>
#include <limits>

#include "detectors/internal.hpp"
#include "emgdrift/error.hpp"

namespace emgdrift::detail {
namespace {

// Gama et al. error-rate monitor over a {0,1} stream.
class Ddm final : public Detector {
 public:
  explicit Ddm(const DetectorConfig& config)
      : Detector(DetectorKind::DDM),
        min_n_(static_cast<std::size_t>(config.get("min_n"))),
        warning_level_(config.get("warning_level")),
        drift_level_(config.get("drift_level")) {}

 protected:
  void check_input(double value) const override {
    if (value != 0.0 && value != 1.0) throw DataError("DDM: input must be 0 or 1 (binarize scores first)");
  }

  DetectorStatus step(double x, std::size_t n) override {
    errors_ += x;
    const double nn = static_cast<double>(n);
    const double p = errors_ / nn;
    const double s = std::sqrt(p * (1.0 - p) / nn);
    if (n < min_n_) return DetectorStatus::InControl;
    if (p + s <= p_min_ + s_min_) {
      p_min_ = p;
      s_min_ = s;
    }
    if (p + s > p_min_ + drift_level_ * s_min_) return DetectorStatus::Drift;
    if (p + s > p_min_ + warning_level_ * s_min_) return DetectorStatus::Warning;
    return DetectorStatus::InControl;
  }

  void clear() override {
    errors_ = 0.0;
    p_min_ = std::numeric_limits<double>::max();
    s_min_ = std::numeric_limits<double>::max();
  }

 private:
  std::size_t min_n_;
  double warning_level_;
  double drift_level_;
  double errors_ = 0.0;
  double p_min_ = std::numeric_limits<double>::max();
  double s_min_ = std::numeric_limits<double>::max();
};

}  // namespace

std::unique_ptr<Detector> make_ddm(const DetectorConfig& config) { return std::make_unique<Ddm>(config); }

}  // namespace emgdrift::detail
