#include "emgdrift/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "emgdrift/error.hpp"
#include "emgdrift/preprocess.hpp"
#include "emgdrift/scoring.hpp"
#include "json.hpp"

namespace emgdrift {
namespace {

using nlohmann::json;

void check_keys(const json& obj, std::string_view section, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(section) + ": expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || item.key() == a;
    if (!known) throw ConfigError(std::string(section) + ": unknown key '" + item.key() + "'");
  }
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  return v.get<double>();
}

std::size_t count(const json& v, const std::string& where) {
  if (!v.is_number_integer() && !(v.is_number() && std::floor(v.get<double>()) == v.get<double>())) {
    throw ConfigError(where + ": expected an integer");
  }
  const auto x = v.get<double>();
  if (x < 0) throw ConfigError(where + ": must be non-negative");
  return static_cast<std::size_t>(x);
}

std::vector<int> int_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array of integers");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) throw ConfigError(where + ": expected an array of integers");
    out.push_back(e.get<int>());
  }
  return out;
}

Eigen::VectorXd vector_of(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ConfigError(where + ": expected a non-empty array of numbers");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = number(v[i], where);
  return out;
}

SynthSegment parse_segment(const json& obj, double fs, const std::string& where) {
  check_keys(obj, where, {"duration", "duration_s", "mean", "std", "cov"});
  SynthSegment seg;
  if (obj.contains("duration") == obj.contains("duration_s")) {
    throw ConfigError(where + ": exactly one of duration, duration_s is required");
  }
  if (obj.contains("duration")) {
    seg.duration = count(obj["duration"], where + ".duration");
  } else {
    const auto seconds = number(obj["duration_s"], where + ".duration_s");
    if (!(seconds > 0)) throw ConfigError(where + ".duration_s: must be positive");
    seg.duration = static_cast<std::size_t>(std::llround(seconds * fs));
  }
  if (obj.contains("std") && obj.contains("cov")) throw ConfigError(where + ": give std or cov, not both");
  if (obj.contains("cov")) {
    const auto& rows = obj["cov"];
    if (!rows.is_array() || rows.empty()) throw ConfigError(where + ".cov: expected a square matrix");
    const auto d = static_cast<Eigen::Index>(rows.size());
    seg.cov.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const auto row = vector_of(rows[static_cast<std::size_t>(i)], where + ".cov");
      if (row.size() != d) throw ConfigError(where + ".cov: expected a square matrix");
      seg.cov.row(i) = row.transpose();
    }
  } else if (obj.contains("std")) {
    const auto s = vector_of(obj["std"], where + ".std");
    seg.cov = s.cwiseProduct(s).asDiagonal();
  }
  if (obj.contains("mean")) {
    seg.mean = vector_of(obj["mean"], where + ".mean");
  } else if (seg.cov.size() > 0) {
    seg.mean = Eigen::VectorXd::Zero(seg.cov.rows());
  } else {
    throw ConfigError(where + ": one of mean, std, cov is required");
  }
  if (seg.cov.size() == 0) seg.cov = Eigen::MatrixXd::Identity(seg.mean.size(), seg.mean.size());
  return seg;
}

SynthInput parse_synth(const json& obj) {
  check_keys(obj, "synth", {"sample_rate_hz", "subject", "grasps", "transition", "width", "width_s", "segments"});
  SynthInput in;
  if (!obj.contains("sample_rate_hz")) throw ConfigError("synth: sample_rate_hz is required");
  in.sample_rate_hz = number(obj["sample_rate_hz"], "synth.sample_rate_hz");
  if (!(in.sample_rate_hz > 0)) throw ConfigError("synth.sample_rate_hz: must be positive");
  if (obj.contains("subject")) {
    if (!obj["subject"].is_number_integer()) throw ConfigError("synth.subject: expected an integer");
    in.subject = obj["subject"].get<int>();
  }
  if (obj.contains("grasps")) in.grasps = int_list(obj["grasps"], "synth.grasps");
  if (in.grasps.empty()) throw ConfigError("synth.grasps: at least one grasp is required");
  for (int g : in.grasps) {
    if (g <= 0) throw ConfigError("synth.grasps: labels must be positive (0 is rest)");
  }
  if (obj.contains("transition")) {
    const auto t = obj["transition"];
    if (t == "abrupt") {
      in.transition = Transition::Abrupt;
    } else if (t == "gradual") {
      in.transition = Transition::Gradual;
    } else {
      throw ConfigError("synth.transition: expected 'abrupt' or 'gradual'");
    }
  }
  if (obj.contains("width") && obj.contains("width_s")) throw ConfigError("synth: give width or width_s, not both");
  if (obj.contains("width")) in.width = count(obj["width"], "synth.width");
  if (obj.contains("width_s")) {
    in.width = static_cast<std::size_t>(std::llround(number(obj["width_s"], "synth.width_s") * in.sample_rate_hz));
  }
  if (!obj.contains("segments") || !obj["segments"].is_array()) {
    throw ConfigError("synth.segments: expected an array of segments");
  }
  for (std::size_t i = 0; i < obj["segments"].size(); ++i) {
    in.segments.push_back(
        parse_segment(obj["segments"][i], in.sample_rate_hz, "synth.segments[" + std::to_string(i) + "]"));
  }
  in.spec_for(in.grasps.front(), 0).validate();
  return in;
}

std::vector<DetectorConfig> parse_detector_entry(const json& entry, std::size_t index) {
  const auto where = "detectors[" + std::to_string(index) + "]";
  auto kind_of = [&](const json& v) {
    if (!v.is_string()) throw ConfigError(where + ".kind: expected a string");
    const auto kind = parse_detector_kind(v.get<std::string>());
    if (!kind) throw ConfigError(where + ": unknown detector kind '" + v.get<std::string>() + "'");
    return *kind;
  };
  if (entry.is_string()) {
    auto config = DetectorConfig::defaults(kind_of(entry));
    return {config};
  }
  check_keys(entry, where, {"kind", "params", "grid"});
  if (!entry.contains("kind")) throw ConfigError(where + ": kind is required");
  DetectorConfig base = DetectorConfig::defaults(kind_of(entry["kind"]));
  if (entry.contains("params")) {
    if (!entry["params"].is_object()) throw ConfigError(where + ".params: expected an object");
    for (const auto& item : entry["params"].items()) {
      base.params[item.key()] = number(item.value(), where + ".params." + item.key());
    }
  }
  std::vector<DetectorConfig> cells{base};
  if (entry.contains("grid")) {
    if (!entry["grid"].is_object()) throw ConfigError(where + ".grid: expected an object");
    for (const auto& item : entry["grid"].items()) {
      const auto& values = item.value();
      if (!values.is_array() || values.empty()) {
        throw ConfigError(where + ".grid." + item.key() + ": expected a non-empty array");
      }
      std::vector<DetectorConfig> next;
      for (const auto& cell : cells) {
        for (const auto& v : values) {
          auto c = cell;
          c.params[item.key()] = number(v, where + ".grid." + item.key());
          next.push_back(std::move(c));
        }
      }
      cells = std::move(next);
    }
  }
  for (const auto& c : cells) {
    try {
      c.validate();
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return cells;
}

std::uint64_t mix_seed(std::uint64_t seed, int grasp) {
  // splitmix64 finalizer over (seed, grasp)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(grasp) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

SynthSpec SynthInput::spec_for(int grasp, std::uint64_t seed) const {
  SynthSpec spec;
  spec.segments = segments;
  spec.transition = transition;
  spec.width = width;
  spec.seed = mix_seed(seed, grasp);
  spec.sample_rate_hz = sample_rate_hz;
  return spec;
}

std::vector<SignalStream> synth_signals(const SynthInput& input, std::uint64_t seed) {
  std::vector<SignalStream> out;
  for (int g : input.grasps) {
    out.push_back(to_signal_stream(synth_generate(input.spec_for(g, seed)), input.sample_rate_hz, input.subject, g));
  }
  return out;
}

std::vector<DetectorConfig> default_detectors() {
  std::vector<DetectorConfig> out;
  for (auto kind : kAllDetectorKinds) out.push_back(DetectorConfig::defaults(kind));
  return out;
}

ExperimentConfig parse_experiment_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  check_keys(doc, "config", {"inputs", "timeline", "scoring", "detectors", "matching", "seed"});

  ExperimentConfig config;
  std::optional<double> fs;
  if (doc.contains("inputs")) {
    const auto& in = doc["inputs"];
    check_keys(in, "inputs", {"csv", "synth", "sample_rate_hz", "grasps"});
    if (in.contains("csv") && in.contains("synth")) throw ConfigError("inputs: give csv or synth, not both");
    if (in.contains("csv")) {
      const auto& files = in["csv"];
      if (!files.is_array() || files.empty()) throw ConfigError("inputs.csv: expected a non-empty array of paths");
      for (const auto& f : files) {
        if (!f.is_string()) throw ConfigError("inputs.csv: expected a non-empty array of paths");
        std::filesystem::path p = f.get<std::string>();
        config.csv_inputs.push_back(p.is_relative() ? base_dir / p : p);
      }
    }
    if (in.contains("synth")) {
      config.synth = parse_synth(in["synth"]);
      fs = config.synth->sample_rate_hz;
    }
    if (in.contains("sample_rate_hz")) {
      const auto v = number(in["sample_rate_hz"], "inputs.sample_rate_hz");
      if (fs && *fs != v) throw ConfigError("inputs.sample_rate_hz: disagrees with synth.sample_rate_hz");
      fs = v;
    }
    if (in.contains("grasps")) config.grasps = int_list(in["grasps"], "inputs.grasps");
  }
  if (fs) config.timeline.sample_rate_hz = *fs;

  if (doc.contains("timeline")) {
    const auto& t = doc["timeline"];
    check_keys(t, "timeline", {"rms_window_ms", "rms_stride_ms", "slope_window_frames", "slope_stride_frames"});
    if (t.contains("rms_window_ms")) config.timeline.rms_window_ms = number(t["rms_window_ms"], "timeline.rms_window_ms");
    if (t.contains("rms_stride_ms")) config.timeline.rms_stride_ms = number(t["rms_stride_ms"], "timeline.rms_stride_ms");
    if (t.contains("slope_window_frames")) {
      config.timeline.slope_window_frames = count(t["slope_window_frames"], "timeline.slope_window_frames");
    }
    if (t.contains("slope_stride_frames")) {
      config.timeline.slope_stride_frames = count(t["slope_stride_frames"], "timeline.slope_stride_frames");
    }
  }
  if (fs) config.timeline.validate();

  if (doc.contains("scoring")) {
    const auto& s = doc["scoring"];
    check_keys(s, "scoring", {"capacity", "ridge"});
    if (s.contains("capacity")) config.capacity = count(s["capacity"], "scoring.capacity");
    if (s.contains("ridge")) {
      if (s["ridge"] == "auto") {
        config.ridge = Ridge::Auto;
      } else if (s["ridge"] == "none") {
        config.ridge = Ridge::None;
      } else {
        throw ConfigError("scoring.ridge: expected 'auto' or 'none'");
      }
    }
    if (config.capacity < 3) throw ConfigError("scoring.capacity: must be at least 3");
  }

  if (doc.contains("detectors")) {
    const auto& d = doc["detectors"];
    if (!d.is_array() || d.empty()) throw ConfigError("detectors: expected a non-empty array");
    for (std::size_t i = 0; i < d.size(); ++i) {
      for (auto& c : parse_detector_entry(d[i], i)) config.detectors.push_back(std::move(c));
    }
  } else {
    config.detectors = default_detectors();
  }

  if (doc.contains("matching")) {
    const auto& m = doc["matching"];
    check_keys(m, "matching", {"window_seconds"});
    if (m.contains("window_seconds")) {
      config.match_window_seconds = number(m["window_seconds"], "matching.window_seconds");
      if (!(config.match_window_seconds >= 0)) throw ConfigError("matching.window_seconds: must be non-negative");
    }
  }

  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
    config.seed = doc["seed"].get<std::uint64_t>();
  }
  return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment_config(text.str(), path.parent_path());
}

SynthInput parse_synth_input(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("synth: invalid JSON: ") + e.what());
  }
  return parse_synth(doc);
}

std::vector<SignalStream> load_inputs(const ExperimentConfig& config) {
  if (config.synth) return synth_signals(*config.synth, config.seed);
  if (config.csv_inputs.empty()) throw ConfigError("inputs: no csv files or synth section");
  if (!(config.timeline.sample_rate_hz > 0)) throw ConfigError("inputs.sample_rate_hz: required for csv inputs");
  std::vector<SignalStream> out;
  for (const auto& p : config.csv_inputs) out.push_back(load_signal_csv(p, config.timeline.sample_rate_hz));
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const auto inputs = load_inputs(config);
  return run_experiment(config, inputs);
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::span<const SignalStream> inputs) {
  config.timeline.validate();
  auto grasps = config.grasps ? *config.grasps : observed_grasps(inputs);
  std::sort(grasps.begin(), grasps.end());
  grasps.erase(std::unique(grasps.begin(), grasps.end()), grasps.end());
  if (grasps.empty()) throw DataError("inputs: no grasp-labelled samples");
  const auto detectors = config.detectors.empty() ? default_detectors() : config.detectors;

  struct StageFailure {
    std::string stage;
    std::string message;
  };
  std::vector<GraspTrace> traces(grasps.size());
  std::vector<std::optional<StageFailure>> grasp_failures(grasps.size());

  const auto n_grasps = static_cast<std::ptrdiff_t>(grasps.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t gi = 0; gi < n_grasps; ++gi) {
    auto& trace = traces[static_cast<std::size_t>(gi)];
    trace.grasp = grasps[static_cast<std::size_t>(gi)];
    std::string stage = "assemble";
    try {
      auto assembled = assemble_stream(inputs, trace.grasp);
      trace.truth = std::move(assembled.truth);
      trace.dropped_channels = std::move(assembled.dropped_channels);
      stage = "rms";
      const auto frames = rms_extract(assembled.stream, config.timeline);
      stage = "features";
      const auto slopes = slope_features(frames, config.timeline);
      stage = "score";
      trace.scores = score_series(slopes, config.capacity, config.ridge);
    } catch (const std::exception& e) {
      grasp_failures[static_cast<std::size_t>(gi)] = StageFailure{stage, e.what()};
    }
  }

  const auto n_det = detectors.size();
  const auto n_jobs = static_cast<std::ptrdiff_t>(grasps.size() * n_det);
  std::vector<std::optional<ReportRow>> rows(static_cast<std::size_t>(n_jobs));
  std::vector<std::optional<PairError>> errors(static_cast<std::size_t>(n_jobs));
  std::vector<std::vector<DriftEvent>> events(static_cast<std::size_t>(n_jobs));

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t job = 0; job < n_jobs; ++job) {
    const auto j = static_cast<std::size_t>(job);
    const auto gi = j / n_det;
    const auto& det = detectors[j % n_det];
    const auto& trace = traces[gi];
    const auto label = det.label();
    if (const auto& failure = grasp_failures[gi]) {
      errors[j] = PairError{trace.grasp, label, failure->stage, failure->message};
      continue;
    }
    std::string stage = "detect";
    try {
      events[j] = detect_series(det, trace.scores);
      stage = "match";
      const auto times = drift_times(events[j]);
      const auto match = match_detections(trace.truth, times, config.match_window_seconds);
      rows[j] = make_report_row(label, trace.grasp, match);
    } catch (const std::exception& e) {
      errors[j] = PairError{trace.grasp, label, stage, e.what()};
    }
  }

  ExperimentResult result;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j]) result.rows.push_back(std::move(*rows[j]));
    if (errors[j]) result.errors.push_back(std::move(*errors[j]));
    auto& trace = traces[j / n_det];
    trace.events.insert(trace.events.end(), events[j].begin(), events[j].end());
  }
  result.traces = std::move(traces);
  return result;
}

}  // namespace emgdrift
