#pragma once

// Dense numeric kernels. `serial` is the reference implementation kept for
// testing and benchmarking; `omp` is what the public API calls. Matrices are
// row-major and sized by the caller.
//
// The RMS, slope and kernel-matrix kernels produce bitwise-identical output
// in both flavours (same per-element arithmetic, only the loop over output
// rows is split). The eigensolvers differ in rotation order, so they agree
// only to rounding.

#include <cstddef>
#include <span>

namespace emgdrift::kernels {

struct EigenResult {
  int sweeps = 0;
  bool converged = false;
};

namespace serial {

/// signal: samples x channels; out: frame_count x channels.
void rms_frames(std::span<const double> signal, std::size_t channels, std::size_t window,
                std::size_t stride, std::span<double> out);

/// Least-squares slope over local index 0..window-1 for each window.
/// frames: frame_count x channels; out: window_count x channels.
void window_slopes(std::span<const double> frames, std::size_t channels, std::size_t window,
                   std::size_t stride, std::span<double> out);

/// x: rows x cols, no zero rows; out: rows x rows.
void cosine_kernel(std::span<const double> x, std::size_t rows, std::size_t cols, std::span<double> out);

/// In-place double centering of an n x n symmetric matrix.
void center_kernel(std::span<double> k, std::size_t n);

/// Cyclic row-order Jacobi. `a` (n x n, symmetric) is destroyed; its
/// diagonal holds the eigenvalues on return. `vectors` receives eigenvectors
/// as columns.
EigenResult jacobi_eigen(std::span<double> a, std::size_t n, std::span<double> vectors, int max_sweeps,
                         double tolerance);

}  // namespace serial

namespace omp {

void rms_frames(std::span<const double> signal, std::size_t channels, std::size_t window,
                std::size_t stride, std::span<double> out);
void window_slopes(std::span<const double> frames, std::size_t channels, std::size_t window,
                   std::size_t stride, std::span<double> out);
void cosine_kernel(std::span<const double> x, std::size_t rows, std::size_t cols, std::span<double> out);
void center_kernel(std::span<double> k, std::size_t n);

/// Round-robin (parallel ordering) Jacobi: each round applies n/2 disjoint
/// rotations at once.
EigenResult jacobi_eigen(std::span<double> a, std::size_t n, std::span<double> vectors, int max_sweeps,
                         double tolerance);

}  // namespace omp

/// Per-channel RMS of one window (rows x channels, oldest first). Shared by
/// the batch kernels and the streaming extractor so both sum in one order.
void rms_window(const double* rows, std::size_t window, std::size_t channels, double* out);

/// Per-channel least-squares slope of one window, same sharing rule.
void slope_window(const double* rows, std::size_t window, std::size_t channels, double* out);

}  // namespace emgdrift::kernels
