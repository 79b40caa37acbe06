#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "emgdrift/stream.hpp"

namespace emgdrift {

/// Per-channel RMS over one window of raw samples.
struct RmsFrame {
  std::vector<double> values;
  std::size_t frame_index = 0;
  double t_seconds = 0.0;  // window end
};

/// Per-channel least-squares slope (RMS units per frame) over one window of
/// RMS frames.
struct SlopeVector {
  std::vector<double> slopes;
  std::size_t window_index = 0;
  double t_seconds = 0.0;  // time of the last frame in the window
};

/// Sliding-window RMS. A stream shorter than one window gives an empty
/// result and a warning; trailing partial windows are dropped.
std::vector<RmsFrame> rms_extract(const SignalStream& stream, const Timeline& timeline);

/// Least-squares slope per channel over windows of `slope_window_frames`
/// frames advancing by `slope_stride_frames`. Frame times are taken from the
/// frames themselves.
std::vector<SlopeVector> slope_features(std::span<const RmsFrame> frames, const Timeline& timeline);

/// Incremental RMS extractor holding one window of samples in a ring buffer.
/// Produces the same frames as rms_extract on the same data.
class RmsStreamer {
 public:
  RmsStreamer(std::size_t channels, const Timeline& timeline);

  /// Returns a frame when the sample completes one.
  std::optional<RmsFrame> push(std::span<const double> sample);

  std::size_t samples_seen() const noexcept { return seen_; }

 private:
  Timeline timeline_;
  std::size_t channels_;
  std::size_t window_;
  std::size_t stride_;
  std::vector<double> ring_;     // window_ x channels_
  std::vector<double> scratch_;  // linearized window
  std::size_t head_ = 0;         // next write slot
  std::size_t seen_ = 0;
  std::size_t frames_ = 0;
};

/// Incremental slope extractor over a ring buffer of RMS frames.
class SlopeStreamer {
 public:
  SlopeStreamer(std::size_t channels, const Timeline& timeline);

  std::optional<SlopeVector> push(const RmsFrame& frame);

 private:
  std::size_t channels_;
  std::size_t window_;
  std::size_t stride_;
  std::vector<double> ring_;
  std::vector<double> scratch_;
  std::size_t head_ = 0;
  std::size_t seen_ = 0;
  std::size_t windows_ = 0;
};

}  // namespace emgdrift
