#include <algorithm>
#include <cmath>
#include <vector>

#include "emgdrift/kernels.hpp"
#include "kernels/common.hpp"

namespace emgdrift::kernels::omp {

void rms_frames(std::span<const double> signal, std::size_t channels, std::size_t window,
                std::size_t stride, std::span<double> out) {
  const auto frames = static_cast<std::ptrdiff_t>(out.size() / channels);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t f = 0; f < frames; ++f) {
    rms_window(signal.data() + f * stride * channels, window, channels, out.data() + f * channels);
  }
}

void window_slopes(std::span<const double> frames, std::size_t channels, std::size_t window,
                   std::size_t stride, std::span<double> out) {
  const auto windows = static_cast<std::ptrdiff_t>(out.size() / channels);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t w = 0; w < windows; ++w) {
    slope_window(frames.data() + w * stride * channels, window, channels, out.data() + w * channels);
  }
}

void cosine_kernel(std::span<const double> x, std::size_t rows, std::size_t cols, std::span<double> out) {
  std::vector<double> norms(rows);
  const auto n = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t d = 0; d < cols; ++d) s += x[i * cols + d] * x[i * cols + d];
    norms[i] = std::sqrt(s);
  }
  // Each row computes its upper triangle; dynamic schedule balances the
  // shrinking row lengths.
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i * rows + i] = 1.0;
    for (std::size_t j = i + 1; j < rows; ++j) {
      double dot = 0.0;
      for (std::size_t d = 0; d < cols; ++d) dot += x[i * cols + d] * x[j * cols + d];
      const double v = std::clamp(dot / (norms[i] * norms[j]), -1.0, 1.0);
      out[i * rows + j] = v;
      out[j * rows + i] = v;
    }
  }
}

void center_kernel(std::span<double> k, std::size_t n) {
  std::vector<double> means(n, 0.0);
  const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < sn; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += k[i * n + j];
    means[i] = s / static_cast<double>(n);
  }
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) grand += means[i];
  grand /= static_cast<double>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < sn; ++i) {
    for (std::size_t j = 0; j < n; ++j) k[i * n + j] = k[i * n + j] - means[i] - means[j] + grand;
  }
}

EigenResult jacobi_eigen(std::span<double> a, std::size_t n, std::span<double> vectors, int max_sweeps,
                         double tolerance) {
  detail::set_identity(vectors, n);
  EigenResult result;
  const double fro = detail::frobenius(a);
  const double target = tolerance * fro;
  const double floor = n > 0 ? target / static_cast<double>(n) : 0.0;

  // Round-robin tournament over an even number of players; index n is a bye
  // when n is odd.
  const std::size_t players = n + (n % 2);
  const std::size_t pairs = players / 2;
  std::vector<std::size_t> order(players);
  for (std::size_t i = 0; i < players; ++i) order[i] = i;

  struct Planned {
    std::size_t p, q;
    detail::Rotation rot;
  };
  std::vector<Planned> plan(pairs);

  for (int sweep = 0; sweep <= max_sweeps; ++sweep) {
    if (detail::off_diagonal_norm(a, n) <= target) {
      result.converged = true;
      result.sweeps = sweep;
      return result;
    }
    if (sweep == max_sweeps) break;
    for (std::size_t round = 0; round + 1 < players; ++round) {
      for (std::size_t i = 0; i < pairs; ++i) {
        std::size_t p = order[i];
        std::size_t q = order[players - 1 - i];
        if (p > q) std::swap(p, q);
        plan[i].p = p;
        plan[i].q = q;
        plan[i].rot = q >= n ? detail::Rotation{}
                             : detail::make_rotation(a[p * n + p], a[q * n + q], a[p * n + q], floor);
      }
      const auto np = static_cast<std::ptrdiff_t>(pairs);
      // A <- J^T A: each pair owns rows p and q.
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t i = 0; i < np; ++i) {
        const auto& pl = plan[i];
        if (pl.rot.skip) continue;
        double* rp = a.data() + pl.p * n;
        double* rq = a.data() + pl.q * n;
        for (std::size_t k = 0; k < n; ++k) {
          const double x = rp[k];
          const double y = rq[k];
          rp[k] = pl.rot.c * x - pl.rot.s * y;
          rq[k] = pl.rot.s * x + pl.rot.c * y;
        }
      }
      // A <- A J and V <- V J: each pair owns columns p and q.
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t i = 0; i < np; ++i) {
        const auto& pl = plan[i];
        if (pl.rot.skip) continue;
        for (std::size_t k = 0; k < n; ++k) {
          const double x = a[k * n + pl.p];
          const double y = a[k * n + pl.q];
          a[k * n + pl.p] = pl.rot.c * x - pl.rot.s * y;
          a[k * n + pl.q] = pl.rot.s * x + pl.rot.c * y;
          const double vx = vectors[k * n + pl.p];
          const double vy = vectors[k * n + pl.q];
          vectors[k * n + pl.p] = pl.rot.c * vx - pl.rot.s * vy;
          vectors[k * n + pl.q] = pl.rot.s * vx + pl.rot.c * vy;
        }
        a[pl.p * n + pl.q] = 0.0;
        a[pl.q * n + pl.p] = 0.0;
      }
      std::rotate(order.begin() + 1, order.end() - 1, order.end());
    }
  }
  result.sweeps = max_sweeps;
  return result;
}

}  // namespace emgdrift::kernels::omp
