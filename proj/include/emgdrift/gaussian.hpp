#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace emgdrift {

enum class Ridge {
  Auto,  // eps = max(1e-9, 1e-6 * trace(cov) / d) added before factorization
  None,  // factor the covariance as-is; fails if it is not positive definite
};

/// Multivariate Gaussian with a cached Cholesky factor of the (optionally
/// ridge-regularized) covariance.
class GaussianModel {
 public:
  /// Builds from known moments. `cov` must be symmetric to 1e-12 (relative
  /// to its largest entry); it is symmetrized afterwards.
  static GaussianModel from_moments(Eigen::VectorXd mean, Eigen::MatrixXd cov, std::size_t n,
                                    Ridge ridge = Ridge::Auto);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(mean_.size()); }
  std::size_t n() const noexcept { return n_; }
  const Eigen::VectorXd& mean() const noexcept { return mean_; }
  /// Unregularized covariance.
  const Eigen::MatrixXd& cov() const noexcept { return cov_; }
  /// Lower-triangular factor of cov() + ridge() * I.
  const Eigen::MatrixXd& chol() const noexcept { return chol_; }
  double ridge() const noexcept { return ridge_; }
  /// True when cov() itself is not numerically positive definite.
  bool degenerate() const noexcept { return degenerate_; }
  /// log det of the regularized covariance.
  double log_det() const noexcept { return log_det_; }

  /// sqrt((x - mean)^T (cov + ridge I)^-1 (x - mean)), via a triangular solve.
  double mahalanobis(const Eigen::Ref<const Eigen::VectorXd>& x) const;

 private:
  GaussianModel() = default;

  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd chol_;
  std::size_t n_ = 0;
  double ridge_ = 0.0;
  bool degenerate_ = false;
  double log_det_ = 0.0;
};

/// Sample mean and 1/(N-1) covariance of the rows of `samples` (N x d).
GaussianModel fit_gaussian(const Eigen::Ref<const Eigen::MatrixXd>& samples, Ridge ridge = Ridge::Auto);
GaussianModel fit_gaussian(std::span<const std::vector<double>> samples, Ridge ridge = Ridge::Auto);

/// Closed-form D_KL(g0 || g1), via Cholesky solves and log-determinants.
double kl_gaussian(const GaussianModel& g0, const GaussianModel& g1);

enum class KlOrder {
  ReferenceToLocal,  // D_KL(N_ref || N_local)
  LocalToReference,  // D_KL(N_local || N_ref)
};

struct KlPoint {
  std::size_t start_index = 0;  // first vector of the window
  double kl = 0.0;
};

struct KlProfileOptions {
  std::size_t ref_len = 1600;
  std::size_t window = 1600;
  std::size_t step = 1600;
  KlOrder order = KlOrder::ReferenceToLocal;
  Ridge ridge = Ridge::Auto;
};

/// Fits a reference Gaussian on the first `ref_len` rows, then one local
/// Gaussian per window starting at ref_len, ref_len + step, ...
std::vector<KlPoint> kl_profile(const Eigen::Ref<const Eigen::MatrixXd>& stream,
                                const KlProfileOptions& options = {});

}  // namespace emgdrift
