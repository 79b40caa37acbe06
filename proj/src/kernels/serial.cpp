#include <algorithm>
#include <cmath>
#include <vector>

#include "emgdrift/kernels.hpp"
#include "kernels/common.hpp"

namespace emgdrift::kernels {

void rms_window(const double* rows, std::size_t window, std::size_t channels, double* out) {
  for (std::size_t c = 0; c < channels; ++c) out[c] = 0.0;
  for (std::size_t i = 0; i < window; ++i) {
    const double* row = rows + i * channels;
    for (std::size_t c = 0; c < channels; ++c) out[c] += row[c] * row[c];
  }
  const double inv = 1.0 / static_cast<double>(window);
  for (std::size_t c = 0; c < channels; ++c) out[c] = std::sqrt(out[c] * inv);
}

void slope_window(const double* rows, std::size_t window, std::size_t channels, double* out) {
  const double center = 0.5 * static_cast<double>(window - 1);
  double sxx = 0.0;
  for (std::size_t k = 0; k < window; ++k) {
    const double dk = static_cast<double>(k) - center;
    sxx += dk * dk;
  }
  for (std::size_t c = 0; c < channels; ++c) out[c] = 0.0;
  for (std::size_t k = 0; k < window; ++k) {
    const double dk = static_cast<double>(k) - center;
    const double* row = rows + k * channels;
    for (std::size_t c = 0; c < channels; ++c) out[c] += dk * row[c];
  }
  for (std::size_t c = 0; c < channels; ++c) out[c] /= sxx;
}

namespace serial {

void rms_frames(std::span<const double> signal, std::size_t channels, std::size_t window,
                std::size_t stride, std::span<double> out) {
  const std::size_t frames = out.size() / channels;
  for (std::size_t f = 0; f < frames; ++f) {
    rms_window(signal.data() + f * stride * channels, window, channels, out.data() + f * channels);
  }
}

void window_slopes(std::span<const double> frames, std::size_t channels, std::size_t window,
                   std::size_t stride, std::span<double> out) {
  const std::size_t windows = out.size() / channels;
  for (std::size_t w = 0; w < windows; ++w) {
    slope_window(frames.data() + w * stride * channels, window, channels, out.data() + w * channels);
  }
}

void cosine_kernel(std::span<const double> x, std::size_t rows, std::size_t cols, std::span<double> out) {
  std::vector<double> norms(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t d = 0; d < cols; ++d) s += x[i * cols + d] * x[i * cols + d];
    norms[i] = std::sqrt(s);
  }
  for (std::size_t i = 0; i < rows; ++i) {
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
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += k[i * n + j];
    means[i] = s / static_cast<double>(n);
    grand += means[i];
  }
  grand /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
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

  for (int sweep = 0; sweep <= max_sweeps; ++sweep) {
    if (detail::off_diagonal_norm(a, n) <= target) {
      result.converged = true;
      result.sweeps = sweep;
      return result;
    }
    if (sweep == max_sweeps) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        const auto rot = detail::make_rotation(a[p * n + p], a[q * n + q], apq, floor);
        if (rot.skip) continue;
        const double c = rot.c;
        const double s = rot.s;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a[r * n + p];
          const double arq = a[r * n + q];
          const double new_rp = c * arp - s * arq;
          const double new_rq = s * arp + c * arq;
          a[r * n + p] = a[p * n + r] = new_rp;
          a[r * n + q] = a[q * n + r] = new_rq;
        }
        a[p * n + p] -= rot.t * apq;
        a[q * n + q] += rot.t * apq;
        a[p * n + q] = a[q * n + p] = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = vectors[r * n + p];
          const double vrq = vectors[r * n + q];
          vectors[r * n + p] = c * vrp - s * vrq;
          vectors[r * n + q] = s * vrp + c * vrq;
        }
      }
    }
  }
  result.sweeps = max_sweeps;
  return result;
}

}  // namespace serial
}  // namespace emgdrift::kernels
