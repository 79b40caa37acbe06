#include "emgdrift/stream.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <fstream>

#include "emgdrift/csv.hpp"
#include "emgdrift/diag.hpp"
#include "emgdrift/error.hpp"

namespace emgdrift {

SignalStream::SignalStream(double sample_rate_hz, std::vector<std::string> channel_names)
    : sample_rate_hz_(sample_rate_hz), channel_names_(std::move(channel_names)) {
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
    throw ConfigError("sample_rate_hz must be positive");
  }
}

void SignalStream::reserve(std::size_t samples) {
  values_.reserve(samples * channel_count());
  subject_.reserve(samples);
  period_.reserve(samples);
  grasp_.reserve(samples);
}

void SignalStream::push_back(std::span<const double> channels, int subject, int period, int grasp) {
  if (channels.size() != channel_count()) {
    throw DataError("sample has " + std::to_string(channels.size()) + " channels, stream has " +
                    std::to_string(channel_count()));
  }
  values_.insert(values_.end(), channels.begin(), channels.end());
  subject_.push_back(subject);
  period_.push_back(period);
  grasp_.push_back(grasp);
}

Sample SignalStream::sample(std::size_t i) const {
  const auto ch = channels(i);
  return Sample{{ch.begin(), ch.end()}, subject_[i], period_[i], grasp_[i], index(i)};
}

// ---------------------------------------------------------------------------

void Timeline::validate() const {
  if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
    throw ConfigError("timeline: sample_rate_hz must be positive");
  }
  if (!(rms_window_ms > 0.0)) throw ConfigError("timeline: rms_window_ms must be positive");
  if (!(rms_stride_ms > 0.0)) throw ConfigError("timeline: rms_stride_ms must be positive");
  if (rms_window_ms < rms_stride_ms) throw ConfigError("timeline: rms_window_ms must be >= rms_stride_ms");
  if (slope_window_frames == 0) throw ConfigError("timeline: slope_window_frames must be positive");
  if (slope_stride_frames == 0) throw ConfigError("timeline: slope_stride_frames must be positive");
  if (slope_window_frames < slope_stride_frames) {
    throw ConfigError("timeline: slope_window_frames must be >= slope_stride_frames");
  }
  if (slope_window_frames < 2) throw ConfigError("timeline: slope_window_frames must be >= 2");
  if (rms_stride_samples() == 0) {
    throw ConfigError("timeline: rms_stride_ms is shorter than one sample at this sample_rate_hz");
  }
}

std::size_t Timeline::rms_window_samples() const {
  return static_cast<std::size_t>(std::llround(sample_rate_hz * rms_window_ms / 1000.0));
}

std::size_t Timeline::rms_stride_samples() const {
  return static_cast<std::size_t>(std::llround(sample_rate_hz * rms_stride_ms / 1000.0));
}

std::size_t Timeline::rms_frame_count(std::size_t samples) const {
  const auto w = rms_window_samples();
  const auto s = rms_stride_samples();
  if (samples < w || s == 0) return 0;
  return (samples - w) / s + 1;
}

std::size_t Timeline::slope_window_count(std::size_t frames) const {
  if (frames < slope_window_frames) return 0;
  return (frames - slope_window_frames) / slope_stride_frames + 1;
}

double Timeline::sample_seconds(std::size_t sample) const {
  return static_cast<double>(sample) / sample_rate_hz;
}

double Timeline::rms_frame_seconds(std::size_t frame) const {
  return static_cast<double>(frame * rms_stride_samples() + rms_window_samples()) / sample_rate_hz;
}

double Timeline::slope_window_seconds(std::size_t window) const {
  return rms_frame_seconds(window * slope_stride_frames + slope_window_frames - 1);
}

void GroundTruth::validate() const {
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    if (!(boundaries[i] >= 0.0)) throw DataError("ground truth: boundaries must be >= 0");
    if (i > 0 && !(boundaries[i] > boundaries[i - 1])) {
      throw DataError("ground truth: boundaries must be strictly increasing");
    }
  }
}

// ---------------------------------------------------------------------------

SignalStream parse_signal_csv(std::istream& in, double sample_rate_hz) {
  const auto table = csv::parse(in);

  std::vector<std::size_t> emg_columns;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (table.header[i].rfind("emg_", 0) == 0) {
      emg_columns.push_back(i);
      names.push_back(table.header[i]);
    }
  }
  if (emg_columns.empty()) throw SchemaError("emg_*", "missing required column 'emg_*'");
  const auto subject_col = table.require("subject");
  const auto period_col = table.require("period");
  const auto grasp_col = table.require("grasp");

  SignalStream stream(sample_rate_hz, std::move(names));
  stream.reserve(table.rows.size());
  std::vector<double> channels(emg_columns.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto line = r + 1;
    for (std::size_t c = 0; c < emg_columns.size(); ++c) {
      channels[c] = csv::parse_double(row[emg_columns[c]], line);
      if (!std::isfinite(channels[c])) throw ParseError(line, "non-finite signal value");
    }
    stream.push_back(channels, static_cast<int>(csv::parse_int(row[subject_col], line)),
                     static_cast<int>(csv::parse_int(row[period_col], line)),
                     static_cast<int>(csv::parse_int(row[grasp_col], line)));
  }
  return stream;
}

SignalStream load_signal_csv(const std::filesystem::path& path, double sample_rate_hz) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return parse_signal_csv(in, sample_rate_hz);
}

void write_signal_csv(std::ostream& out, const SignalStream& stream) {
  out << 't';
  for (const auto& name : stream.channel_names()) out << ',' << name;
  out << ",subject,period,grasp\n";
  for (std::size_t i = 0; i < stream.size(); ++i) {
    out << csv::format_fixed(static_cast<double>(i) / stream.sample_rate_hz(), 6);
    for (double v : stream.channels(i)) out << ',' << csv::format_double(v);
    out << ',' << stream.subject(i) << ',' << stream.period(i) << ',' << stream.grasp(i) << '\n';
  }
}

// ---------------------------------------------------------------------------

ZeroChannelResult drop_zero_channels(const SignalStream& stream) {
  if (stream.empty()) throw DataError("drop_zero_channels: empty stream");
  const auto k = stream.channel_count();
  std::vector<bool> nonzero(k, false);
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto ch = stream.channels(i);
    for (std::size_t c = 0; c < k; ++c) {
      if (ch[c] != 0.0) nonzero[c] = true;
    }
  }

  std::vector<std::size_t> keep;
  std::vector<int> dropped;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < k; ++c) {
    if (nonzero[c]) {
      keep.push_back(c);
      names.push_back(stream.channel_names()[c]);
    } else {
      dropped.push_back(static_cast<int>(c + 1));
    }
  }
  if (keep.empty()) throw DataError("drop_zero_channels: every channel is all zeros");
  if (dropped.empty()) return {stream, {}};

  SignalStream out(stream.sample_rate_hz(), std::move(names));
  out.reserve(stream.size());
  std::vector<double> row(keep.size());
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto ch = stream.channels(i);
    for (std::size_t c = 0; c < keep.size(); ++c) row[c] = ch[keep[c]];
    out.push_back(row, stream.subject(i), stream.period(i), stream.grasp(i));
  }
  return {std::move(out), std::move(dropped)};
}

ConcatResult concat_domains(std::span<const SignalStream> streams) {
  if (streams.empty()) throw DataError("concat_domains: no streams given");
  const auto& first = streams.front();
  std::size_t total = 0;
  for (const auto& s : streams) {
    if (s.channel_count() != first.channel_count()) {
      throw DataError("concat_domains: channel counts differ (" + std::to_string(first.channel_count()) +
                      " vs " + std::to_string(s.channel_count()) + ")");
    }
    if (s.sample_rate_hz() != first.sample_rate_hz()) {
      throw DataError("concat_domains: sample rates differ");
    }
    total += s.size();
  }

  ConcatResult result{SignalStream(first.sample_rate_hz(), first.channel_names()), {}};
  result.stream.reserve(total);
  std::size_t cumulative = 0;
  for (std::size_t k = 0; k < streams.size(); ++k) {
    if (k > 0) {
      result.truth.boundaries.push_back(static_cast<double>(cumulative) / first.sample_rate_hz());
    }
    const auto& s = streams[k];
    for (std::size_t i = 0; i < s.size(); ++i) {
      result.stream.push_back(s.channels(i), s.subject(i), s.period(i), s.grasp(i));
    }
    cumulative += s.size();
  }
  return result;
}

SignalStream filter_grasp(const SignalStream& stream, int grasp) {
  SignalStream out(stream.sample_rate_hz(), stream.channel_names());
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (stream.grasp(i) == grasp) {
      out.push_back(stream.channels(i), stream.subject(i), stream.period(i), grasp);
    }
  }
  if (out.empty() && !stream.empty()) {
    diag::warn("filter_grasp: label " + std::to_string(grasp) + " not present; result is empty");
  }
  return out;
}

std::vector<SignalStream> split_domains(std::span<const SignalStream> inputs) {
  std::map<DomainKey, SignalStream> domains;
  for (const auto& input : inputs) {
    for (std::size_t i = 0; i < input.size(); ++i) {
      auto it = domains.find(input.domain(i));
      if (it == domains.end()) {
        it = domains.emplace(input.domain(i), SignalStream(input.sample_rate_hz(), input.channel_names())).first;
      }
      it->second.push_back(input.channels(i), input.subject(i), input.period(i), input.grasp(i));
    }
  }
  std::vector<SignalStream> out;
  out.reserve(domains.size());
  for (auto& [key, stream] : domains) out.push_back(std::move(stream));
  return out;
}

std::vector<int> observed_grasps(std::span<const SignalStream> inputs) {
  std::set<int> labels;
  for (const auto& input : inputs) {
    for (std::size_t i = 0; i < input.size(); ++i) {
      if (input.grasp(i) != 0) labels.insert(input.grasp(i));
    }
  }
  return {labels.begin(), labels.end()};
}

AssembledStream assemble_stream(std::span<const SignalStream> inputs, std::optional<int> grasp) {
  auto domains = split_domains(inputs);
  std::vector<SignalStream> kept;
  for (auto& d : domains) {
    if (grasp) {
      SignalStream filtered(d.sample_rate_hz(), d.channel_names());
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.grasp(i) == *grasp) filtered.push_back(d.channels(i), d.subject(i), d.period(i), d.grasp(i));
      }
      if (!filtered.empty()) kept.push_back(std::move(filtered));
    } else if (!d.empty()) {
      kept.push_back(std::move(d));
    }
  }
  if (kept.empty()) {
    throw DataError(grasp ? "no samples with grasp " + std::to_string(*grasp) : std::string("no samples"));
  }
  auto joined = concat_domains(kept);
  auto cleaned = drop_zero_channels(joined.stream);
  return {std::move(cleaned.stream), std::move(joined.truth), std::move(cleaned.dropped)};
}

}  // namespace emgdrift
