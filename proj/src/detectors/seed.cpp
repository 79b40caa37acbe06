#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "detectors/internal.hpp"

namespace emgdrift::detail {
namespace {

// SEED: the stream is cut into fixed-size blocks and only block boundaries
// are tested as cut points. Each test uses a Hoeffding bound scaled by the
// empirical range of the window, with delta split evenly across the cut
// points (Bonferroni). Every `compress_term` blocks, adjacent blocks whose
// means differ by less than a tolerance are merged; the tolerance decays
// linearly from epsilon_prime * range for the oldest pair to zero for the
// newest, so recent history keeps full resolution.
class Seed final : public Detector {
 public:
  explicit Seed(const DetectorConfig& config)
      : Detector(DetectorKind::SEED),
        block_size_(static_cast<std::size_t>(config.get("block_size"))),
        delta_(config.get("delta")),
        epsilon_prime_(config.get("epsilon_prime")),
        compress_term_(static_cast<std::size_t>(config.get("compress_term"))) {}

 protected:
  DetectorStatus step(double x, std::size_t) override {
    if (blocks_.empty() || blocks_.back().count == block_size_) blocks_.push_back({});
    auto& b = blocks_.back();
    b.sum += x;
    b.count += 1;
    b.min = std::min(b.min, x);
    b.max = std::max(b.max, x);
    if (b.count < block_size_) return DetectorStatus::InControl;

    ++completed_;
    if (blocks_.size() >= 2 && cut_found()) return DetectorStatus::Drift;
    if (completed_ % compress_term_ == 0) compress();
    return DetectorStatus::InControl;
  }

  void clear() override {
    blocks_.clear();
    completed_ = 0;
  }

 private:
  struct Block {
    double sum = 0.0;
    std::size_t count = 0;
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
  };

  double range() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& b : blocks_) {
      lo = std::min(lo, b.min);
      hi = std::max(hi, b.max);
    }
    return hi - lo;
  }

  bool cut_found() const {
    const double r = range();
    if (!(r > 0.0)) return false;
    double total = 0.0;
    double count = 0.0;
    for (const auto& b : blocks_) {
      total += b.sum;
      count += static_cast<double>(b.count);
    }
    const double cuts = static_cast<double>(blocks_.size() - 1);
    const double log_term = std::log(2.0 * cuts / delta_);
    double left_sum = 0.0;
    double left_n = 0.0;
    for (std::size_t j = 0; j + 1 < blocks_.size(); ++j) {
      left_sum += blocks_[j].sum;
      left_n += static_cast<double>(blocks_[j].count);
      const double right_n = count - left_n;
      const double m = 1.0 / (1.0 / left_n + 1.0 / right_n);
      const double epsilon = r * std::sqrt(log_term / (2.0 * m));
      if (std::abs(left_sum / left_n - (total - left_sum) / right_n) > epsilon) return true;
    }
    return false;
  }

  void compress() {
    if (blocks_.size() < 3 || epsilon_prime_ == 0.0) return;
    const double r = range();
    const double pairs = static_cast<double>(blocks_.size() - 1);
    std::vector<Block> out;
    out.reserve(blocks_.size());
    out.push_back(blocks_[0]);
    // The newest block is left alone.
    for (std::size_t j = 1; j + 1 < blocks_.size(); ++j) {
      auto& prev = out.back();
      const auto& cur = blocks_[j];
      const double tolerance = epsilon_prime_ * r * (1.0 - static_cast<double>(j - 1) / pairs);
      const double gap = std::abs(prev.sum / static_cast<double>(prev.count) - cur.sum / static_cast<double>(cur.count));
      if (gap <= tolerance) {
        prev.sum += cur.sum;
        prev.count += cur.count;
        prev.min = std::min(prev.min, cur.min);
        prev.max = std::max(prev.max, cur.max);
      } else {
        out.push_back(cur);
      }
    }
    out.push_back(blocks_.back());
    blocks_ = std::move(out);
  }

  std::size_t block_size_;
  double delta_;
  double epsilon_prime_;
  std::size_t compress_term_;
  std::vector<Block> blocks_;
  std::size_t completed_ = 0;
};

}  // namespace

std::unique_ptr<Detector> make_seed(const DetectorConfig& config) { return std::make_unique<Seed>(config); }

}  // namespace emgdrift::detail
