#include "emgdrift/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "emgdrift/error.hpp"

namespace emgdrift {
namespace {

constexpr double kRidgeFloor = 1e-9;
constexpr double kRidgeScale = 1e-6;
constexpr double kSymmetryTolerance = 1e-12;
constexpr double kDegeneratePivot = 1e-10;
constexpr double kKlTolerance = 1e-9;

bool numerically_pd(const Eigen::MatrixXd& cov) {
  const double d = static_cast<double>(cov.rows());
  const double scale = cov.trace() / d;
  if (!(scale > 0.0)) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) return false;
  const Eigen::MatrixXd l = llt.matrixL();
  return l.diagonal().array().square().minCoeff() > kDegeneratePivot * scale;
}

}  // namespace

GaussianModel GaussianModel::from_moments(Eigen::VectorXd mean, Eigen::MatrixXd cov, std::size_t n,
                                          Ridge ridge) {
  const auto d = mean.size();
  if (d == 0) throw DataError("gaussian: dimension must be positive");
  if (cov.rows() != d || cov.cols() != d) throw DataError("gaussian: covariance shape does not match mean");
  if (!mean.allFinite() || !cov.allFinite()) throw DataError("gaussian: non-finite moments");
  const double magnitude = std::max(1.0, cov.cwiseAbs().maxCoeff());
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * magnitude) {
    throw DataError("gaussian: covariance is not symmetric");
  }
  cov = 0.5 * (cov + cov.transpose());

  GaussianModel g;
  g.n_ = n;
  g.degenerate_ = !numerically_pd(cov);
  g.ridge_ = ridge == Ridge::Auto ? std::max(kRidgeFloor, kRidgeScale * cov.trace() / static_cast<double>(d)) : 0.0;

  Eigen::MatrixXd regularized = cov;
  regularized.diagonal().array() += g.ridge_;
  Eigen::LLT<Eigen::MatrixXd> llt(regularized);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("gaussian: covariance is not positive definite" +
                         std::string(ridge == Ridge::None ? " (ridge disabled)" : ""));
  }
  g.chol_ = llt.matrixL();
  g.log_det_ = 2.0 * g.chol_.diagonal().array().log().sum();
  if (!std::isfinite(g.log_det_)) throw NumericalError("gaussian: log-determinant is not finite");
  g.mean_ = std::move(mean);
  g.cov_ = std::move(cov);
  return g;
}

double GaussianModel::mahalanobis(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != mean_.size()) throw DataError("mahalanobis: dimension mismatch");
  const Eigen::VectorXd z = chol_.triangularView<Eigen::Lower>().solve(x - mean_);
  return z.norm();
}

GaussianModel fit_gaussian(const Eigen::Ref<const Eigen::MatrixXd>& samples, Ridge ridge) {
  const auto n = samples.rows();
  if (n < 2) {
    throw InsufficientDataError("fit_gaussian: need at least 2 samples, got " + std::to_string(n));
  }
  if (samples.cols() == 0) throw DataError("fit_gaussian: dimension must be positive");
  if (!samples.allFinite()) throw DataError("fit_gaussian: non-finite input");
  Eigen::VectorXd mean = samples.colwise().mean().transpose();
  const Eigen::MatrixXd centered = samples.rowwise() - mean.transpose();
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  cov = cov.selfadjointView<Eigen::Lower>();
  return GaussianModel::from_moments(std::move(mean), std::move(cov), static_cast<std::size_t>(n), ridge);
}

GaussianModel fit_gaussian(std::span<const std::vector<double>> samples, Ridge ridge) {
  if (samples.empty()) throw InsufficientDataError("fit_gaussian: need at least 2 samples, got 0");
  const auto d = samples.front().size();
  Eigen::MatrixXd m(samples.size(), d);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].size() != d) throw DataError("fit_gaussian: vectors have differing dimensions");
    for (std::size_t j = 0; j < d; ++j) m(i, j) = samples[i][j];
  }
  return fit_gaussian(m, ridge);
}

double kl_gaussian(const GaussianModel& g0, const GaussianModel& g1) {
  if (g0.dim() != g1.dim()) {
    throw DataError("kl_gaussian: dimension mismatch (" + std::to_string(g0.dim()) + " vs " +
                    std::to_string(g1.dim()) + ")");
  }
  const auto l1 = g1.chol().triangularView<Eigen::Lower>();
  // tr(S1^-1 S0) = ||L1^-1 L0||_F^2
  const Eigen::MatrixXd solved = l1.solve(g0.chol());
  const double trace_term = solved.squaredNorm();
  const Eigen::VectorXd diff = l1.solve(g1.mean() - g0.mean());
  const double quad_term = diff.squaredNorm();
  const double log_det_term = g1.log_det() - g0.log_det();

  if (!std::isfinite(trace_term)) throw NumericalError("kl_gaussian: trace term is not finite");
  if (!std::isfinite(quad_term)) throw NumericalError("kl_gaussian: quadratic term is not finite");
  if (!std::isfinite(log_det_term)) throw NumericalError("kl_gaussian: log-determinant term is not finite");

  const double kl = 0.5 * (trace_term + quad_term - static_cast<double>(g0.dim()) + log_det_term);
  if (!std::isfinite(kl)) throw NumericalError("kl_gaussian: result is not finite");
  if (kl < -kKlTolerance) throw NumericalError("kl_gaussian: negative divergence " + std::to_string(kl));
  return std::max(kl, 0.0);
}

std::vector<KlPoint> kl_profile(const Eigen::Ref<const Eigen::MatrixXd>& stream, const KlProfileOptions& options) {
  if (options.ref_len < 2 || options.window < 2) throw ConfigError("kl_profile: ref_len and window must be >= 2");
  if (options.step == 0) throw ConfigError("kl_profile: step must be positive");
  const auto n = static_cast<std::size_t>(stream.rows());
  if (n < options.ref_len + options.window) {
    throw DataError("kl_profile: stream has " + std::to_string(n) + " vectors; needs at least ref_len + window = " +
                    std::to_string(options.ref_len + options.window));
  }
  const auto reference = fit_gaussian(stream.topRows(static_cast<Eigen::Index>(options.ref_len)), options.ridge);
  std::vector<KlPoint> out;
  for (std::size_t start = options.ref_len; start + options.window <= n; start += options.step) {
    const auto local = fit_gaussian(
        stream.middleRows(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(options.window)), options.ridge);
    const double kl = options.order == KlOrder::ReferenceToLocal ? kl_gaussian(reference, local)
                                                                 : kl_gaussian(local, reference);
    out.push_back({start, kl});
  }
  return out;
}

}  // namespace emgdrift
