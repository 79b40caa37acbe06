#include "emgdrift/preprocess.hpp"

#include <algorithm>

#include "emgdrift/diag.hpp"
#include "emgdrift/error.hpp"
#include "emgdrift/kernels.hpp"

namespace emgdrift {

std::vector<RmsFrame> rms_extract(const SignalStream& stream, const Timeline& timeline) {
  timeline.validate();
  if (stream.sample_rate_hz() != timeline.sample_rate_hz) {
    throw ConfigError("rms_extract: stream and timeline sample rates differ");
  }
  const auto k = stream.channel_count();
  const auto count = timeline.rms_frame_count(stream.size());
  if (count == 0) {
    diag::warn("rms_extract: stream of " + std::to_string(stream.size()) + " samples is shorter than one " +
               std::to_string(timeline.rms_window_samples()) + "-sample window");
    return {};
  }
  std::vector<double> flat(count * k);
  kernels::omp::rms_frames(stream.values(), k, timeline.rms_window_samples(), timeline.rms_stride_samples(),
                           flat);

  std::vector<RmsFrame> frames(count);
  for (std::size_t f = 0; f < count; ++f) {
    frames[f].values.assign(flat.begin() + f * k, flat.begin() + (f + 1) * k);
    frames[f].frame_index = f;
    frames[f].t_seconds = timeline.rms_frame_seconds(f);
  }
  return frames;
}

std::vector<SlopeVector> slope_features(std::span<const RmsFrame> frames, const Timeline& timeline) {
  if (timeline.slope_window_frames < 2 || timeline.slope_stride_frames == 0) {
    throw ConfigError("slope_features: slope_window_frames must be >= 2 and slope_stride_frames > 0");
  }
  const auto count = timeline.slope_window_count(frames.size());
  if (count == 0) {
    diag::warn("slope_features: " + std::to_string(frames.size()) + " frames is fewer than one " +
               std::to_string(timeline.slope_window_frames) + "-frame window");
    return {};
  }
  const auto k = frames.front().values.size();
  std::vector<double> flat(frames.size() * k);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    if (frames[f].values.size() != k) throw DataError("slope_features: frames have differing channel counts");
    std::copy(frames[f].values.begin(), frames[f].values.end(), flat.begin() + f * k);
  }
  std::vector<double> out(count * k);
  kernels::omp::window_slopes(flat, k, timeline.slope_window_frames, timeline.slope_stride_frames, out);

  std::vector<SlopeVector> slopes(count);
  for (std::size_t w = 0; w < count; ++w) {
    slopes[w].slopes.assign(out.begin() + w * k, out.begin() + (w + 1) * k);
    slopes[w].window_index = w;
    const auto last = w * timeline.slope_stride_frames + timeline.slope_window_frames - 1;
    slopes[w].t_seconds = frames[last].t_seconds;
  }
  return slopes;
}

// ---------------------------------------------------------------------------

RmsStreamer::RmsStreamer(std::size_t channels, const Timeline& timeline)
    : timeline_(timeline),
      channels_(channels),
      window_(timeline.rms_window_samples()),
      stride_(timeline.rms_stride_samples()) {
  timeline.validate();
  if (channels == 0) throw ConfigError("RmsStreamer: channels must be positive");
  ring_.assign(window_ * channels_, 0.0);
  scratch_.assign(window_ * channels_, 0.0);
}

std::optional<RmsFrame> RmsStreamer::push(std::span<const double> sample) {
  if (sample.size() != channels_) throw DataError("RmsStreamer: channel count mismatch");
  std::copy(sample.begin(), sample.end(), ring_.begin() + head_ * channels_);
  head_ = (head_ + 1) % window_;
  ++seen_;
  if (seen_ < window_ || (seen_ - window_) % stride_ != 0) return std::nullopt;

  // head_ now points at the oldest sample.
  const auto split = (window_ - head_) * channels_;
  std::copy(ring_.begin() + head_ * channels_, ring_.end(), scratch_.begin());
  std::copy(ring_.begin(), ring_.begin() + head_ * channels_, scratch_.begin() + split);

  RmsFrame frame;
  frame.values.resize(channels_);
  kernels::rms_window(scratch_.data(), window_, channels_, frame.values.data());
  frame.frame_index = frames_++;
  frame.t_seconds = timeline_.rms_frame_seconds(frame.frame_index);
  return frame;
}

SlopeStreamer::SlopeStreamer(std::size_t channels, const Timeline& timeline)
    : channels_(channels), window_(timeline.slope_window_frames), stride_(timeline.slope_stride_frames) {
  if (channels == 0) throw ConfigError("SlopeStreamer: channels must be positive");
  if (window_ < 2 || stride_ == 0) throw ConfigError("SlopeStreamer: invalid slope window/stride");
  ring_.assign(window_ * channels_, 0.0);
  scratch_.assign(window_ * channels_, 0.0);
}

std::optional<SlopeVector> SlopeStreamer::push(const RmsFrame& frame) {
  if (frame.values.size() != channels_) throw DataError("SlopeStreamer: channel count mismatch");
  std::copy(frame.values.begin(), frame.values.end(), ring_.begin() + head_ * channels_);
  head_ = (head_ + 1) % window_;
  ++seen_;
  if (seen_ < window_ || (seen_ - window_) % stride_ != 0) return std::nullopt;

  const auto split = (window_ - head_) * channels_;
  std::copy(ring_.begin() + head_ * channels_, ring_.end(), scratch_.begin());
  std::copy(ring_.begin(), ring_.begin() + head_ * channels_, scratch_.begin() + split);

  SlopeVector out;
  out.slopes.resize(channels_);
  kernels::slope_window(scratch_.data(), window_, channels_, out.slopes.data());
  out.window_index = windows_++;
  out.t_seconds = frame.t_seconds;
  return out;
}

}  // namespace emgdrift
