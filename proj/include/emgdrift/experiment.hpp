#pragma once

// End-to-end runner: raw signal -> RMS -> slopes -> rolling Mahalanobis
// scores -> detectors -> matching against domain boundaries, one report row
// per (grasp, detector).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emgdrift/detectors.hpp"
#include "emgdrift/eval.hpp"
#include "emgdrift/gaussian.hpp"
#include "emgdrift/stream.hpp"
#include "emgdrift/synth.hpp"

namespace emgdrift {

/// Synthetic raw input: one piecewise-Gaussian recording per grasp, each
/// segment becoming one (subject, period) domain.
struct SynthInput {
  double sample_rate_hz = 0.0;
  int subject = 1;
  std::vector<int> grasps{1};
  std::vector<SynthSegment> segments;  // durations in samples
  Transition transition = Transition::Abrupt;
  std::size_t width = 0;

  /// The generator spec for one grasp; the seed is derived from `seed` and
  /// the grasp label so every grasp gets its own draws.
  SynthSpec spec_for(int grasp, std::uint64_t seed) const;
};

/// Raw streams for every grasp of a synthetic input.
std::vector<SignalStream> synth_signals(const SynthInput& input, std::uint64_t seed);

struct ExperimentConfig {
  std::vector<std::filesystem::path> csv_inputs;
  std::optional<SynthInput> synth;
  std::optional<std::vector<int>> grasps;  // default: every observed grasp
  Timeline timeline;
  std::size_t capacity = 30;
  Ridge ridge = Ridge::Auto;
  std::vector<DetectorConfig> detectors;  // grid cells already expanded
  double match_window_seconds = kDefaultMatchWindowSeconds;
  std::uint64_t seed = 0;

  bool has_inputs() const { return synth.has_value() || !csv_inputs.empty(); }
};

/// The nine detectors at their defaults, in report order.
std::vector<DetectorConfig> default_detectors();

/// Parses the JSON experiment document. Every section is optional here;
/// relative CSV paths resolve against `base_dir`. Unknown keys, bad types
/// and invalid parameters raise ConfigError.
ExperimentConfig parse_experiment_config(std::string_view json_text,
                                         const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Parses a standalone synthetic-input object (the `inputs.synth` section).
SynthInput parse_synth_input(std::string_view json_text);

/// Loads the configured inputs (CSV files or synthetic streams).
std::vector<SignalStream> load_inputs(const ExperimentConfig& config);

struct PairError {
  int grasp = 0;
  std::string detector;
  std::string stage;
  std::string message;
};

/// Per-grasp intermediate products, kept for inspection.
struct GraspTrace {
  int grasp = 0;
  GroundTruth truth;
  std::vector<int> dropped_channels;
  std::vector<ScorePoint> scores;
  std::vector<DriftEvent> events;  // all detectors, config order
};

struct ExperimentResult {
  std::vector<ReportRow> rows;  // sorted by grasp, then detector config order
  std::vector<PairError> errors;
  std::vector<GraspTrace> traces;
};

/// Runs every (grasp, detector) pair; pairs are independent and execute in
/// parallel. A failing pair is reported in `errors` and the rest continue.
ExperimentResult run_experiment(const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config, std::span<const SignalStream> inputs);

}  // namespace emgdrift
