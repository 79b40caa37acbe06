#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace emgdrift::kernels::detail {

inline double frobenius(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

inline double off_diagonal_norm(std::span<const double> a, std::size_t n) {
  double s = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) s += a[p * n + q] * a[p * n + q];
  }
  return std::sqrt(2.0 * s);
}

struct Rotation {
  double c = 1.0;
  double s = 0.0;
  double t = 0.0;
  bool skip = true;
};

/// Rotation annihilating a_pq (Numerical Recipes sign convention).
inline Rotation make_rotation(double app, double aqq, double apq, double floor) {
  Rotation r;
  if (std::abs(apq) <= floor) return r;
  const double theta = (aqq - app) / (2.0 * apq);
  double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  if (theta < 0.0) t = -t;
  r.c = 1.0 / std::sqrt(t * t + 1.0);
  r.s = t * r.c;
  r.t = t;
  r.skip = false;
  return r;
}

inline void set_identity(std::span<double> v, std::size_t n) {
  for (std::size_t i = 0; i < n * n; ++i) v[i] = 0.0;
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
}

}  // namespace emgdrift::kernels::detail
