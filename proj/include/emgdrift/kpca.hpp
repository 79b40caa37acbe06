#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace emgdrift {

/// Row-major dense matrix used by the KPCA routines.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// K[i][j] = cosine of rows i and j. Throws DataError naming the first
/// zero-norm row.
RowMatrix cosine_kernel_matrix(const RowMatrix& x);

/// K' = K - 1K - K1 + 1K1 with 1 the n x n matrix of 1/n.
RowMatrix center_kernel(const RowMatrix& k);

struct SymmetricEigen {
  Eigen::VectorXd values;   // descending
  RowMatrix vectors;        // unit columns, matching `values`
  int sweeps = 0;
};

enum class EigenBackend { Parallel, Serial };

/// Jacobi eigendecomposition (sweep cap 100, off-diagonal tolerance 1e-12
/// relative to the Frobenius norm). Throws NumericalError when the sweep cap
/// is reached first.
SymmetricEigen symmetric_eigen(const RowMatrix& a, EigenBackend backend = EigenBackend::Parallel);

struct KpcaModel {
  std::vector<double> eigenvalues;  // top m, descending, clamped at 0
  RowMatrix components;             // n x m unit eigenvectors of K'
  std::vector<double> training_norms;
};

struct KpcaResult {
  KpcaModel model;
  RowMatrix projections;  // n x m, Y[i][c] = sqrt(lambda_c) v_c[i]
};

/// Cosine-kernel PCA. Each component's sign makes its largest-magnitude
/// entry positive (first such entry on ties).
KpcaResult kpca_fit_project(const RowMatrix& x, std::size_t components = 3,
                            EigenBackend backend = EigenBackend::Parallel);

struct Separability {
  double accuracy = 0.0;
  std::vector<double> weights;  // m feature weights followed by the bias
};

struct LogisticOptions {
  double learning_rate = 0.1;
  int iterations = 5000;
  double l2 = 1e-4;  // on feature weights, not the bias
};

/// Batch gradient-descent logistic regression on the projections; returns
/// training accuracy and the hyperplane.
Separability separability_score(const RowMatrix& y, std::span<const int> labels, const LogisticOptions& options = {});

}  // namespace emgdrift
