#include "emgdrift/scoring.hpp"

#include <cmath>
#include <string>

#include "emgdrift/error.hpp"

namespace emgdrift {

RollingReference::RollingReference(std::size_t capacity, Ridge ridge) : capacity_(capacity), ridge_(ridge) {
  if (capacity_ < 3) throw ConfigError("scoring: capacity must be >= 3");
}

ScoreResult RollingReference::update(const SlopeVector& x) {
  const auto d = x.slopes.size();
  if (d == 0) throw DataError("scoring: empty slope vector");
  if (dim_ == 0) {
    dim_ = d;
    if (capacity_ < dim_ + 2) {
      throw ConfigError("scoring: capacity " + std::to_string(capacity_) + " is below d + 2 = " +
                        std::to_string(dim_ + 2));
    }
  }
  if (d != dim_) throw DataError("scoring: slope vector has dimension " + std::to_string(d) + ", expected " +
                                 std::to_string(dim_));
  for (double v : x.slopes) {
    if (!std::isfinite(v)) throw DataError("scoring: non-finite slope in window " + std::to_string(x.window_index));
  }

  ScoreResult result = Warmup{buffer_.size(), dim_ + 2};
  if (buffer_.size() >= dim_ + 2) {
    Eigen::MatrixXd rows(buffer_.size(), dim_);
    for (std::size_t i = 0; i < buffer_.size(); ++i) {
      for (std::size_t j = 0; j < dim_; ++j) rows(i, j) = buffer_[i][j];
    }
    const auto model = fit_gaussian(rows, ridge_);
    const Eigen::Map<const Eigen::VectorXd> point(x.slopes.data(), static_cast<Eigen::Index>(dim_));
    const double score = model.mahalanobis(point);
    if (!std::isfinite(score)) throw NumericalError("scoring: non-finite Mahalanobis distance");
    result = ScorePoint{score, x.window_index, x.t_seconds, model.degenerate()};
  }

  if (buffer_.size() == capacity_) buffer_.pop_front();
  buffer_.push_back(x.slopes);
  return result;
}

std::vector<ScorePoint> score_series(std::span<const SlopeVector> slopes, std::size_t capacity, Ridge ridge) {
  RollingReference reference(capacity, ridge);
  std::vector<ScorePoint> out;
  for (const auto& s : slopes) {
    const auto result = reference.update(s);
    if (const auto* p = std::get_if<ScorePoint>(&result)) out.push_back(*p);
  }
  return out;
}

}  // namespace emgdrift
