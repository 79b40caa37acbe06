#include "emgdrift/kpca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "emgdrift/error.hpp"
#include "emgdrift/kernels.hpp"

namespace emgdrift {
namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTolerance = 1e-12;

std::span<const double> flat(const RowMatrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
std::span<double> flat(RowMatrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }

}  // namespace

RowMatrix cosine_kernel_matrix(const RowMatrix& x) {
  if (!x.allFinite()) throw DataError("cosine_kernel_matrix: non-finite input");
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (x.row(i).squaredNorm() == 0.0) {
      throw DataError("cosine_kernel_matrix: row " + std::to_string(i) + " has zero norm");
    }
  }
  const auto n = static_cast<std::size_t>(x.rows());
  RowMatrix k(x.rows(), x.rows());
  kernels::omp::cosine_kernel(flat(x), n, static_cast<std::size_t>(x.cols()), flat(k));
  return k;
}

RowMatrix center_kernel(const RowMatrix& k) {
  if (k.rows() != k.cols()) throw DataError("center_kernel: matrix is not square");
  RowMatrix out = k;
  kernels::omp::center_kernel(flat(out), static_cast<std::size_t>(k.rows()));
  return out;
}

SymmetricEigen symmetric_eigen(const RowMatrix& a, EigenBackend backend) {
  if (a.rows() != a.cols()) throw DataError("symmetric_eigen: matrix is not square");
  const auto n = static_cast<std::size_t>(a.rows());
  RowMatrix work = a;
  RowMatrix vectors(a.rows(), a.cols());
  const auto result = backend == EigenBackend::Parallel
                          ? kernels::omp::jacobi_eigen(flat(work), n, flat(vectors), kMaxSweeps, kOffDiagonalTolerance)
                          : kernels::serial::jacobi_eigen(flat(work), n, flat(vectors), kMaxSweeps,
                                                          kOffDiagonalTolerance);
  if (!result.converged) {
    throw NumericalError("symmetric_eigen: Jacobi did not converge within " + std::to_string(kMaxSweeps) + " sweeps");
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return work(i, i) > work(j, j); });
  SymmetricEigen out;
  out.values.resize(a.rows());
  out.vectors.resize(a.rows(), a.cols());
  for (std::size_t c = 0; c < n; ++c) {
    out.values(c) = work(order[c], order[c]);
    out.vectors.col(c) = vectors.col(order[c]);
  }
  out.sweeps = result.sweeps;
  return out;
}

KpcaResult kpca_fit_project(const RowMatrix& x, std::size_t components, EigenBackend backend) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (components == 0) throw ConfigError("kpca: components must be positive");
  if (n < components + 1) {
    throw DataError("kpca: need at least " + std::to_string(components + 1) + " rows, got " + std::to_string(n));
  }
  const auto centered = center_kernel(cosine_kernel_matrix(x));
  const auto eig = symmetric_eigen(centered, backend);

  KpcaResult result;
  auto& model = result.model;
  model.components.resize(x.rows(), static_cast<Eigen::Index>(components));
  result.projections.resize(x.rows(), static_cast<Eigen::Index>(components));
  for (std::size_t c = 0; c < components; ++c) {
    Eigen::VectorXd v = eig.vectors.col(static_cast<Eigen::Index>(c));
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i) {
      if (std::abs(v(i)) > std::abs(v(arg))) arg = i;
    }
    if (v(arg) < 0.0) v = -v;
    const double lambda = std::max(0.0, eig.values(static_cast<Eigen::Index>(c)));
    model.eigenvalues.push_back(lambda);
    model.components.col(static_cast<Eigen::Index>(c)) = v;
    result.projections.col(static_cast<Eigen::Index>(c)) = std::sqrt(lambda) * v;
  }
  model.training_norms.resize(n);
  for (std::size_t i = 0; i < n; ++i) model.training_norms[i] = x.row(static_cast<Eigen::Index>(i)).norm();
  return result;
}

Separability separability_score(const RowMatrix& y, std::span<const int> labels, const LogisticOptions& options) {
  const auto n = static_cast<std::size_t>(y.rows());
  const auto m = static_cast<Eigen::Index>(y.cols());
  if (labels.size() != n) throw DataError("separability: label count does not match rows");
  if (n < 2) throw DataError("separability: need at least 2 rows");
  std::size_t positives = 0;
  for (int label : labels) {
    if (label != 0 && label != 1) throw DataError("separability: labels must be 0 or 1");
    positives += static_cast<std::size_t>(label);
  }
  if (positives == 0 || positives == n) throw DataError("separability: both classes must be present");

  Eigen::VectorXd target(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) target(static_cast<Eigen::Index>(i)) = labels[i];
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
  double bias = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (int it = 0; it < options.iterations; ++it) {
    const Eigen::VectorXd logits = (y * w).array() + bias;
    const Eigen::VectorXd prob = (1.0 + (-logits.array()).exp()).inverse();
    const Eigen::VectorXd err = prob - target;
    const Eigen::VectorXd grad_w = inv_n * (y.transpose() * err) + options.l2 * w;
    const double grad_b = inv_n * err.sum();
    w -= options.learning_rate * grad_w;
    bias -= options.learning_rate * grad_b;
  }

  const Eigen::VectorXd logits = (y * w).array() + bias;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int predicted = logits(static_cast<Eigen::Index>(i)) >= 0.0 ? 1 : 0;
    if (predicted == labels[i]) ++correct;
  }
  Separability out;
  out.accuracy = static_cast<double>(correct) / static_cast<double>(n);
  out.weights.assign(w.data(), w.data() + w.size());
  out.weights.push_back(bias);
  return out;
}

}  // namespace emgdrift
