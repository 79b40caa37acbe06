#include <cmath>
#include <deque>
#include <vector>

#include "detectors/internal.hpp"

namespace emgdrift::detail {
namespace {

// ADWIN with an exponential histogram: row i holds buckets of 2^i values,
// at most `max_buckets` per row (one extra triggers a merge into row i+1).
// Every `clock` updates all bucket boundaries are tested as cut points.
class Adwin final : public Detector {
 public:
  explicit Adwin(const DetectorConfig& config)
      : Detector(DetectorKind::ADWIN),
        delta_(config.get("delta")),
        max_buckets_(static_cast<std::size_t>(config.get("max_buckets"))),
        clock_(static_cast<std::size_t>(config.get("clock"))) {}

  std::size_t width() const noexcept { return width_; }

 protected:
  DetectorStatus step(double x, std::size_t n) override {
    insert(x);
    if (n % clock_ == 0 && width_ > kMinWindow && cut_found()) return DetectorStatus::Drift;
    return DetectorStatus::InControl;
  }

  void clear() override {
    rows_.clear();
    width_ = 0;
    total_ = 0.0;
    variance_ = 0.0;
  }

 private:
  static constexpr std::size_t kMinWindow = 10;
  static constexpr std::size_t kMinSubWindow = 5;

  struct Bucket {
    double total = 0.0;
    double variance = 0.0;  // sum of squared deviations inside the bucket
  };

  void insert(double x) {
    if (rows_.empty()) rows_.emplace_back();
    rows_[0].push_back({x, 0.0});
    if (width_ > 0) {
      const double w = static_cast<double>(width_);
      const double d = x - total_ / w;
      variance_ += w * d * d / (w + 1.0);
    }
    ++width_;
    total_ += x;
    compress();
  }

  void compress() {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (rows_[i].size() <= max_buckets_) break;
      const double size = std::ldexp(1.0, static_cast<int>(i));
      const Bucket a = rows_[i][0];
      const Bucket b = rows_[i][1];
      rows_[i].pop_front();
      rows_[i].pop_front();
      const double diff = a.total / size - b.total / size;
      Bucket merged{a.total + b.total, a.variance + b.variance + size * size * diff * diff / (2.0 * size)};
      if (i + 1 == rows_.size()) rows_.emplace_back();
      rows_[i + 1].push_back(merged);
    }
  }

  bool cut_found() const {
    const double n = static_cast<double>(width_);
    const double v = variance_ / n;
    const double dd = std::log(2.0 * std::log(n) / delta_);
    double n0 = 0.0;
    double n1 = n;
    double u0 = 0.0;
    double u1 = total_;
    // Oldest buckets live in the highest row, at the front.
    for (std::size_t r = rows_.size(); r-- > 0;) {
      const double size = std::ldexp(1.0, static_cast<int>(r));
      for (std::size_t k = 0; k < rows_[r].size(); ++k) {
        if (r == 0 && k + 1 == rows_[r].size()) return false;
        n0 += size;
        n1 -= size;
        u0 += rows_[r][k].total;
        u1 -= rows_[r][k].total;
        if (n0 <= kMinSubWindow + 1 || n1 <= kMinSubWindow + 1) continue;
        const double m = 1.0 / (n0 - kMinSubWindow + 1) + 1.0 / (n1 - kMinSubWindow + 1);
        const double epsilon = std::sqrt(2.0 * m * v * dd) + 2.0 / 3.0 * dd * m;
        if (std::abs(u0 / n0 - u1 / n1) > epsilon) return true;
      }
    }
    return false;
  }

  double delta_;
  std::size_t max_buckets_;
  std::size_t clock_;
  std::vector<std::deque<Bucket>> rows_;
  std::size_t width_ = 0;
  double total_ = 0.0;
  double variance_ = 0.0;
};

}  // namespace

std::unique_ptr<Detector> make_adwin(const DetectorConfig& config) { return std::make_unique<Adwin>(config); }

}  // namespace emgdrift::detail
