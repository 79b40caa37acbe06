#include "emgdrift/synth.hpp"

#include <algorithm>
#include <random>
#include <string>

#include <Eigen/Cholesky>

#include "emgdrift/error.hpp"

namespace emgdrift {

void SynthSpec::validate() const {
  if (segments.empty()) throw ConfigError("synth: at least one segment is required");
  if (!(sample_rate_hz > 0.0)) throw ConfigError("synth: sample_rate_hz must be positive");
  const auto d = segments.front().mean.size();
  if (d == 0) throw ConfigError("synth: segment dimension must be positive");
  std::size_t shortest = segments.front().duration;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const auto& seg = segments[s];
    const auto tag = "synth: segment " + std::to_string(s) + ": ";
    if (seg.duration == 0) throw ConfigError(tag + "duration must be positive");
    if (seg.mean.size() != d) throw ConfigError(tag + "mean dimension differs from segment 0");
    if (seg.cov.rows() != d || seg.cov.cols() != d) throw ConfigError(tag + "covariance shape does not match mean");
    if (!seg.mean.allFinite() || !seg.cov.allFinite()) throw ConfigError(tag + "non-finite mean or covariance");
    if ((seg.cov - seg.cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, seg.cov.cwiseAbs().maxCoeff())) {
      throw DataError(tag + "covariance is not symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(seg.cov);
    if (llt.info() != Eigen::Success) throw DataError(tag + "covariance is not positive definite");
    shortest = std::min(shortest, seg.duration);
  }
  if (transition == Transition::Gradual && width >= shortest) {
    throw ConfigError("synth: gradual width must be shorter than the shortest segment");
  }
}

SynthStream synth_generate(const SynthSpec& spec) {
  spec.validate();
  const auto d = spec.segments.front().mean.size();
  std::size_t total = 0;
  for (const auto& seg : spec.segments) total += seg.duration;

  SynthStream out;
  out.data.resize(static_cast<Eigen::Index>(total), d);
  out.segment_of.reserve(total);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(d);

  std::size_t row = 0;
  for (std::size_t s = 0; s < spec.segments.size(); ++s) {
    const auto& seg = spec.segments[s];
    const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(seg.cov).matrixL();
    if (s > 0) out.truth.boundaries.push_back(static_cast<double>(row) / spec.sample_rate_hz);
    const std::size_t ramp = (s > 0 && spec.transition == Transition::Gradual) ? spec.width : 0;
    for (std::size_t k = 0; k < seg.duration; ++k, ++row) {
      for (Eigen::Index j = 0; j < d; ++j) z(j) = normal(rng);
      Eigen::VectorXd mean = seg.mean;
      if (k < ramp) {
        const double alpha = static_cast<double>(k + 1) / static_cast<double>(ramp + 1);
        mean = spec.segments[s - 1].mean + alpha * (seg.mean - spec.segments[s - 1].mean);
      }
      out.data.row(static_cast<Eigen::Index>(row)) = (mean + l * z).transpose();
      out.segment_of.push_back(s);
    }
  }
  return out;
}

SignalStream to_signal_stream(const SynthStream& synth, double sample_rate_hz, int subject, int grasp) {
  std::vector<std::string> names;
  for (Eigen::Index c = 0; c < synth.data.cols(); ++c) names.push_back("emg_" + std::to_string(c + 1));
  SignalStream stream(sample_rate_hz, std::move(names));
  stream.reserve(static_cast<std::size_t>(synth.data.rows()));
  for (Eigen::Index i = 0; i < synth.data.rows(); ++i) {
    const auto row = synth.data.row(i);
    stream.push_back(std::span<const double>(row.data(), static_cast<std::size_t>(row.size())), subject,
                     static_cast<int>(synth.segment_of[static_cast<std::size_t>(i)]) + 1, grasp);
  }
  return stream;
}

}  // namespace emgdrift
