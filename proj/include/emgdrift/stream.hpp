#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace emgdrift {

/// One multi-channel reading with its domain labels.
struct Sample {
  std::vector<double> channels;
  int subject = 0;
  int period = 0;  // 1..10, day/slot flattened
  int grasp = 0;   // 0 = rest
  std::int64_t index = 0;
};

/// A (subject, period) pair identifies one recording domain.
struct DomainKey {
  int subject = 0;
  int period = 0;
  auto operator<=>(const DomainKey&) const = default;
};

/// Multi-channel raw signal, stored row-major. Immutable once built apart
/// from appending; sample `i` has index `i`.
class SignalStream {
 public:
  SignalStream(double sample_rate_hz, std::vector<std::string> channel_names);

  void reserve(std::size_t samples);
  void push_back(std::span<const double> channels, int subject, int period, int grasp);
  void push_back(const Sample& sample) {
    push_back(sample.channels, sample.subject, sample.period, sample.grasp);
  }

  std::size_t size() const noexcept { return subject_.size(); }
  bool empty() const noexcept { return subject_.empty(); }
  std::size_t channel_count() const noexcept { return channel_names_.size(); }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  const std::vector<std::string>& channel_names() const noexcept { return channel_names_; }

  std::span<const double> channels(std::size_t i) const {
    return {values_.data() + i * channel_count(), channel_count()};
  }
  int subject(std::size_t i) const { return subject_[i]; }
  int period(std::size_t i) const { return period_[i]; }
  int grasp(std::size_t i) const { return grasp_[i]; }
  DomainKey domain(std::size_t i) const { return {subject_[i], period_[i]}; }
  std::int64_t index(std::size_t i) const { return static_cast<std::int64_t>(i); }
  Sample sample(std::size_t i) const;

  /// Row-major `size() x channel_count()` values.
  std::span<const double> values() const noexcept { return values_; }

 private:
  double sample_rate_hz_;
  std::vector<std::string> channel_names_;
  std::vector<double> values_;
  std::vector<int> subject_;
  std::vector<int> period_;
  std::vector<int> grasp_;
};

/// Window/stride settings at the RMS and slope levels, plus the conversions
/// from indices at each granularity to seconds.
struct Timeline {
  double sample_rate_hz = 0.0;
  double rms_window_ms = 200.0;
  double rms_stride_ms = 20.0;
  std::size_t slope_window_frames = 1500;
  std::size_t slope_stride_frames = 500;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  std::size_t rms_window_samples() const;
  std::size_t rms_stride_samples() const;

  std::size_t rms_frame_count(std::size_t samples) const;
  std::size_t slope_window_count(std::size_t frames) const;

  double sample_seconds(std::size_t sample) const;
  /// Window-end time of an RMS frame.
  double rms_frame_seconds(std::size_t frame) const;
  /// Time of the last RMS frame inside a slope window.
  double slope_window_seconds(std::size_t window) const;
};

/// Sorted change times in seconds.
struct GroundTruth {
  std::vector<double> boundaries;

  void validate() const;
  std::size_t size() const noexcept { return boundaries.size(); }
  bool empty() const noexcept { return boundaries.empty(); }
};

/// Reads the raw CSV schema `t,emg_1..emg_K,subject,period,grasp`. The `t`
/// column is optional and ignored; sample times come from index / fs.
SignalStream load_signal_csv(const std::filesystem::path& path, double sample_rate_hz);
SignalStream parse_signal_csv(std::istream& in, double sample_rate_hz);
void write_signal_csv(std::ostream& out, const SignalStream& stream);

struct ZeroChannelResult {
  SignalStream stream;
  std::vector<int> dropped;  // 1-based, input order
};

/// Removes every channel whose samples are all exactly zero.
ZeroChannelResult drop_zero_channels(const SignalStream& stream);

struct ConcatResult {
  SignalStream stream;
  GroundTruth truth;
};

/// Concatenates in the given order; one boundary per junction.
ConcatResult concat_domains(std::span<const SignalStream> streams);

/// Keeps only samples labelled `grasp`, re-indexed from zero. An absent
/// label yields an empty stream and a warning.
SignalStream filter_grasp(const SignalStream& stream, int grasp);

/// Splits by (subject, period) and returns the domains in ascending key
/// order. Samples of one key keep their encounter order across inputs.
std::vector<SignalStream> split_domains(std::span<const SignalStream> inputs);

/// Distinct non-rest grasp labels, ascending.
std::vector<int> observed_grasps(std::span<const SignalStream> inputs);

struct AssembledStream {
  SignalStream stream;
  GroundTruth truth;
  std::vector<int> dropped_channels;
};

/// The per-grasp stream the detectors see: split into domains, keep one
/// grasp (all labels when `grasp` is empty), concatenate in (subject,
/// period) order, then drop all-zero channels.
AssembledStream assemble_stream(std::span<const SignalStream> inputs, std::optional<int> grasp);

}  // namespace emgdrift
