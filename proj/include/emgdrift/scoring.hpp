#pragma once

#include <cstddef>
#include <deque>
#include <variant>
#include <vector>

#include "emgdrift/gaussian.hpp"
#include "emgdrift/preprocess.hpp"

namespace emgdrift {

struct ScorePoint {
  double score = 0.0;  // Mahalanobis distance, not squared
  std::size_t window_index = 0;
  double t_seconds = 0.0;
  bool degenerate = false;
};

/// Returned while the reference holds fewer than d + 2 vectors.
struct Warmup {
  std::size_t buffered = 0;
  std::size_t required = 0;
};

using ScoreResult = std::variant<ScorePoint, Warmup>;

/// FIFO of recent slope vectors acting as the "current" distribution. Each
/// update scores the new vector against the buffer and only then inserts it,
/// so a vector never contributes to its own reference.
class RollingReference {
 public:
  static constexpr std::size_t kDefaultCapacity = 30;

  explicit RollingReference(std::size_t capacity = kDefaultCapacity, Ridge ridge = Ridge::Auto);

  ScoreResult update(const SlopeVector& x);

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return buffer_.size(); }
  Ridge ridge() const noexcept { return ridge_; }

 private:
  std::size_t capacity_;
  Ridge ridge_;
  std::size_t dim_ = 0;
  std::deque<std::vector<double>> buffer_;
};

/// Runs a fresh RollingReference over `slopes` and keeps only scored points.
std::vector<ScorePoint> score_series(std::span<const SlopeVector> slopes,
                                     std::size_t capacity = RollingReference::kDefaultCapacity,
                                     Ridge ridge = Ridge::Auto);

}  // namespace emgdrift
