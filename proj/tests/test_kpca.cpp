#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "emgdrift/error.hpp"
#include "emgdrift/kpca.hpp"

using namespace emgdrift;

namespace {

RowMatrix random_rows(Eigen::Index n, Eigen::Index d, std::uint64_t seed, double offset = 0.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  RowMatrix x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = normal(rng) + offset;
  }
  return x;
}

// Rows near +u for the first half and near -u for the second.
RowMatrix antipodal(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd u(d);
  for (Eigen::Index j = 0; j < d; ++j) u(j) = normal(rng);
  u.normalize();
  RowMatrix x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = i < n / 2 ? 1.0 : -1.0;
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = s * u(j) + 0.05 * normal(rng);
  }
  return x;
}

// Test-side centered cosine kernel, built with plain loops.
Eigen::MatrixXd centered_oracle(const RowMatrix& x) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) k(i, j) = x.row(i).dot(x.row(j)) / (x.row(i).norm() * x.row(j).norm());
  }
  const Eigen::MatrixXd one = Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  return k - one * k - k * one + one * k * one;
}

}  // namespace

TEST(CosineKernel, Examples) {
  RowMatrix x(4, 2);
  x << 1, 0, 0, 1, 1, 1, -2, -2;
  const auto k = cosine_kernel_matrix(x);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(k(i, i), 1.0, 1e-15);
  EXPECT_NEAR(k(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(k(2, 3), -1.0, 1e-15);
  EXPECT_NEAR(k(0, 2), std::sqrt(0.5), 1e-15);
}

TEST(CosineKernel, BoundedSymmetricUnitDiagonal) {
  const auto x = random_rows(60, 5, 1);
  const auto k = cosine_kernel_matrix(x);
  for (Eigen::Index i = 0; i < 60; ++i) {
    EXPECT_NEAR(k(i, i), 1.0, 1e-12);
    for (Eigen::Index j = 0; j < 60; ++j) {
      EXPECT_EQ(k(i, j), k(j, i));
      EXPECT_LE(std::abs(k(i, j)), 1.0 + 1e-12);
    }
  }
}

TEST(CosineKernel, ZeroRowNamesIndex) {
  RowMatrix x(3, 2);
  x << 1, 2, 0, 0, 3, 4;
  try {
    cosine_kernel_matrix(x);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos) << e.what();
  }
}

TEST(CenterKernel, Examples) {
  const auto id = center_kernel(RowMatrix::Identity(2, 2));
  EXPECT_NEAR(id(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(id(0, 1), -0.5, 1e-15);
  EXPECT_NEAR(id(1, 0), -0.5, 1e-15);
  EXPECT_NEAR(id(1, 1), 0.5, 1e-15);
  const auto c = center_kernel(RowMatrix::Constant(5, 5, 0.7));
  EXPECT_LE(c.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(CenterKernel, RowAndColumnSumsVanish) {
  const auto k = center_kernel(cosine_kernel_matrix(random_rows(150, 6, 2)));
  EXPECT_LE(k.rowwise().sum().cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE(k.colwise().sum().cwiseAbs().maxCoeff(), 1e-10);
  const auto oracle = centered_oracle(random_rows(150, 6, 2));
  EXPECT_LE((Eigen::MatrixXd(k) - oracle).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SymmetricEigen, BackendsAgreeWithEigen) {
  const auto k = center_kernel(cosine_kernel_matrix(random_rows(80, 5, 3)));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle{Eigen::MatrixXd(k)};
  Eigen::VectorXd expected = oracle.eigenvalues().reverse();
  for (auto backend : {EigenBackend::Serial, EigenBackend::Parallel}) {
    const auto e = symmetric_eigen(k, backend);
    ASSERT_EQ(e.values.size(), 80);
    for (Eigen::Index i = 0; i < 80; ++i) EXPECT_NEAR(e.values(i), expected(i), 1e-10);
    for (Eigen::Index i = 0; i + 1 < 80; ++i) EXPECT_GE(e.values(i), e.values(i + 1));
  }
}

TEST(Kpca, EigenResidual) {
  const auto x = random_rows(200, 10, 4);
  const auto result = kpca_fit_project(x, 3);
  const auto kc = center_kernel(cosine_kernel_matrix(x));
  const double fro = kc.norm();
  ASSERT_EQ(result.model.eigenvalues.size(), 3u);
  for (std::size_t c = 0; c < 3; ++c) {
    const Eigen::VectorXd v = result.model.components.col(static_cast<Eigen::Index>(c));
    EXPECT_NEAR(v.norm(), 1.0, 1e-12);
    EXPECT_LE((kc * v - result.model.eigenvalues[c] * v).norm(), 1e-8 * fro);
    if (c > 0) {
      EXPECT_GE(result.model.eigenvalues[c - 1], result.model.eigenvalues[c]);
    }
    EXPECT_GE(result.model.eigenvalues[c], 0.0);
  }
}

TEST(Kpca, ProjectionAndSignConvention) {
  const auto x = random_rows(50, 4, 5);
  const auto result = kpca_fit_project(x, 3);
  for (Eigen::Index c = 0; c < 3; ++c) {
    const Eigen::VectorXd v = result.model.components.col(c);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(v(arg), 0.0);
    for (Eigen::Index i = 0; i < 50; ++i) {
      EXPECT_NEAR(result.projections(i, c), std::sqrt(result.model.eigenvalues[c]) * v(i), 1e-14);
    }
  }
  for (Eigen::Index i = 0; i < 50; ++i) EXPECT_NEAR(result.model.training_norms[i], x.row(i).norm(), 1e-12);
}

TEST(Kpca, SpectrumSumsToTrace) {
  const auto kc = center_kernel(cosine_kernel_matrix(random_rows(120, 7, 6)));
  const auto e = symmetric_eigen(kc);
  EXPECT_NEAR(e.values.sum(), kc.trace(), 1e-8 * std::abs(kc.trace()));
}

TEST(Kpca, AntipodalClustersSeparate) {
  const auto x = antipodal(100, 6, 7);
  const auto result = kpca_fit_project(x, 3);
  // Brute-force oracle: top eigenvector of the test-side centered kernel.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(centered_oracle(x));
  const Eigen::VectorXd top = oracle.eigenvectors().col(99);
  const double align = std::abs(top.dot(result.model.components.col(0)));
  EXPECT_NEAR(align, 1.0, 1e-9);

  std::vector<int> labels(100);
  for (int i = 0; i < 100; ++i) labels[i] = i < 50 ? 0 : 1;
  const double first = result.projections(0, 0) > 0 ? 1.0 : -1.0;
  for (int i = 0; i < 100; ++i) EXPECT_EQ(result.projections(i, 0) * first > 0, i < 50) << i;
  EXPECT_DOUBLE_EQ(separability_score(result.projections, labels).accuracy, 1.0);
}

TEST(Kpca, RowScalingInvariant) {
  const auto x = random_rows(80, 5, 8);
  RowMatrix scaled = x;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.01, 100.0);
  for (Eigen::Index i = 0; i < scaled.rows(); ++i) scaled.row(i) *= u(rng);
  const auto a = kpca_fit_project(x, 3);
  const auto b = kpca_fit_project(scaled, 3);
  EXPECT_LE((a.projections - b.projections).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Kpca, PermutationEquivariant) {
  const auto x = random_rows(60, 4, 10);
  std::vector<Eigen::Index> perm(60);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(11));
  RowMatrix permuted(60, 4);
  for (Eigen::Index i = 0; i < 60; ++i) permuted.row(i) = x.row(perm[i]);
  const auto a = kpca_fit_project(x, 3);
  const auto b = kpca_fit_project(permuted, 3);
  for (Eigen::Index i = 0; i < 60; ++i) {
    for (Eigen::Index c = 0; c < 3; ++c) EXPECT_NEAR(b.projections(i, c), a.projections(perm[i], c), 1e-9);
  }
}

TEST(Kpca, Errors) {
  EXPECT_THROW(kpca_fit_project(random_rows(3, 2, 1), 3), DataError);
  EXPECT_THROW(kpca_fit_project(random_rows(10, 2, 1), 0), ConfigError);
}

TEST(Separability, SeparatedClusters) {
  RowMatrix y(200, 3);
  std::vector<int> labels(200);
  const auto noise = random_rows(200, 3, 12);
  for (Eigen::Index i = 0; i < 200; ++i) {
    labels[i] = i % 2;
    y.row(i) = 0.1 * noise.row(i);
    y(i, 0) += labels[i] ? 5.0 : -5.0;
  }
  const auto s = separability_score(y, labels);
  EXPECT_DOUBLE_EQ(s.accuracy, 1.0);
  EXPECT_EQ(s.weights.size(), 4u);
  EXPECT_GT(s.weights[0], 0.0);
}

TEST(Separability, RandomLabelsNearChance) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto y = random_rows(400, 3, 100 + seed);
    std::mt19937_64 rng(seed);
    std::vector<int> labels(400);
    for (auto& l : labels) l = static_cast<int>(rng() & 1u);
    if (std::count(labels.begin(), labels.end(), 1) == 0) continue;
    const double acc = separability_score(y, labels).accuracy;
    EXPECT_GE(acc, 0.45) << seed;
    EXPECT_LE(acc, 0.65) << seed;
  }
}

TEST(Separability, TwoPoints) {
  RowMatrix y(2, 1);
  y << -1.0, 1.0;
  const std::vector<int> labels{0, 1};
  EXPECT_DOUBLE_EQ(separability_score(y, labels).accuracy, 1.0);
}

TEST(Separability, Errors) {
  RowMatrix y = random_rows(10, 2, 1);
  EXPECT_THROW(separability_score(y, std::vector<int>(10, 1)), DataError);
  EXPECT_THROW(separability_score(y, std::vector<int>(9, 1)), DataError);
  std::vector<int> bad(10, 0);
  bad[3] = 2;
  EXPECT_THROW(separability_score(y, bad), DataError);
}
