#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "emgdrift/kpca.hpp"
#include "emgdrift/stream.hpp"

namespace emgdrift {

struct SynthSegment {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  std::size_t duration = 0;  // samples
};

enum class Transition { Abrupt, Gradual };

/// Piecewise-stationary Gaussian stream description. Boundaries sit at
/// segment junctions; a gradual transition moves the mean linearly over the
/// first `width` samples of the new segment.
struct SynthSpec {
  std::vector<SynthSegment> segments;
  Transition transition = Transition::Abrupt;
  std::size_t width = 0;
  std::uint64_t seed = 0;
  double sample_rate_hz = 1.0;  // converts junction indices to seconds

  void validate() const;
};

struct SynthStream {
  RowMatrix data;  // total samples x d
  GroundTruth truth;
  std::vector<std::size_t> segment_of;  // segment index per row
};

SynthStream synth_generate(const SynthSpec& spec);

/// Wraps a synthetic stream as a raw signal: one domain per segment
/// (period = segment + 1), channels named emg_1..emg_d.
SignalStream to_signal_stream(const SynthStream& synth, double sample_rate_hz, int subject, int grasp);

}  // namespace emgdrift
