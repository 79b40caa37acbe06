#include "cli.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "emgdrift/csv.hpp"
#include "emgdrift/diag.hpp"
#include "emgdrift/error.hpp"
#include "emgdrift/experiment.hpp"
#include "emgdrift/io.hpp"
#include "emgdrift/kpca.hpp"
#include "emgdrift/preprocess.hpp"
#include "emgdrift/scoring.hpp"
#include "emgdrift/version.hpp"

namespace emgdrift::cli {
namespace {

using Writer = std::function<void(std::ostream&)>;

// "-" or empty means the output stream.
void emit(const std::string& path, std::ostream& out, const Writer& write) {
  if (path.empty() || path == "-") {
    write(out);
    out.flush();
    return;
  }
  auto file = csv::open_output(path);
  write(file);
  file.close();
  if (!file) throw Error("failed writing '" + path + "'");
}

ExperimentConfig base_config(const std::string& path) {
  if (!path.empty()) return load_experiment_config(path);
  ExperimentConfig config;
  config.detectors = default_detectors();
  return config;
}

Ridge parse_ridge(const std::string& s) {
  if (s == "auto") return Ridge::Auto;
  if (s == "none") return Ridge::None;
  throw ConfigError("--ridge: expected 'auto' or 'none'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

struct TimelineFlags {
  std::optional<double> fs;
  std::optional<double> window_ms;
  std::optional<double> stride_ms;
  std::optional<std::size_t> slope_window;
  std::optional<std::size_t> slope_stride;

  void apply(Timeline& t) const {
    if (fs) t.sample_rate_hz = *fs;
    if (window_ms) t.rms_window_ms = *window_ms;
    if (stride_ms) t.rms_stride_ms = *stride_ms;
    if (slope_window) t.slope_window_frames = *slope_window;
    if (slope_stride) t.slope_stride_frames = *slope_stride;
  }
};

void add_rms_flags(CLI::App* sub, TimelineFlags& t) {
  sub->add_option("--fs", t.fs, "Sample rate in Hz");
  sub->add_option("--window-ms", t.window_ms, "RMS window length (default 200)");
  sub->add_option("--stride-ms", t.stride_ms, "RMS window stride (default 20)");
}

void add_slope_flags(CLI::App* sub, TimelineFlags& t) {
  sub->add_option("--slope-window", t.slope_window, "Frames per slope window (default 1500)");
  sub->add_option("--slope-stride", t.slope_stride, "Frames between slope windows (default 500)");
}

// ---------------------------------------------------------------------------

struct RmsArgs {
  std::vector<std::string> inputs;
  std::string config;
  std::string output;
  std::string truth_out;
  std::optional<int> grasp;
  TimelineFlags timeline;
};

void run_rms(const RmsArgs& a, std::ostream& out, std::ostream& err) {
  auto config = base_config(a.config);
  a.timeline.apply(config.timeline);
  if (!a.inputs.empty()) {
    config.synth.reset();
    config.csv_inputs.assign(a.inputs.begin(), a.inputs.end());
  }
  std::optional<int> grasp = a.grasp;
  if (!grasp && config.grasps && config.grasps->size() == 1) grasp = config.grasps->front();
  const auto inputs = load_inputs(config);
  const auto assembled = assemble_stream(inputs, grasp);
  if (!assembled.dropped_channels.empty()) {
    std::string list;
    for (int c : assembled.dropped_channels) list += (list.empty() ? "" : ",") + std::to_string(c);
    err << "dropped all-zero channels: " << list << '\n';
  }
  const auto frames = rms_extract(assembled.stream, config.timeline);
  emit(a.output, out, [&](std::ostream& o) { io::write_rms(o, frames); });
  if (!a.truth_out.empty()) emit(a.truth_out, out, [&](std::ostream& o) { io::write_ground_truth(o, assembled.truth); });
}

struct FeaturesArgs {
  std::string input;
  std::string config;
  std::string output;
  TimelineFlags timeline;
};

void run_features(const FeaturesArgs& a, std::ostream& out) {
  auto config = base_config(a.config);
  a.timeline.apply(config.timeline);
  const auto frames = io::read_rms(a.input);
  const auto slopes = slope_features(frames, config.timeline);
  emit(a.output, out, [&](std::ostream& o) { io::write_slopes(o, slopes); });
}

struct ScoreArgs {
  std::string input;
  std::string config;
  std::string output;
  std::optional<std::size_t> capacity;
  std::optional<std::string> ridge;
};

void run_score(const ScoreArgs& a, std::ostream& out) {
  auto config = base_config(a.config);
  if (a.capacity) config.capacity = *a.capacity;
  if (a.ridge) config.ridge = parse_ridge(*a.ridge);
  const auto slopes = io::read_slopes(a.input);
  const auto scores = score_series(slopes, config.capacity, config.ridge);
  emit(a.output, out, [&](std::ostream& o) { io::write_scores(o, scores); });
}

struct KlArgs {
  std::string input;
  std::string output;
  std::size_t ref_len = 1600;
  std::size_t window = 1600;
  std::size_t step = 1600;
  std::string order = "ref-local";
  std::string ridge = "auto";
};

void run_kl(const KlArgs& a, std::ostream& out) {
  KlProfileOptions options;
  options.ref_len = a.ref_len;
  options.window = a.window;
  options.step = a.step;
  options.ridge = parse_ridge(a.ridge);
  if (a.order == "ref-local") {
    options.order = KlOrder::ReferenceToLocal;
  } else if (a.order == "local-ref") {
    options.order = KlOrder::LocalToReference;
  } else {
    throw ConfigError("--order: expected 'ref-local' or 'local-ref'");
  }
  const auto table = io::read_feature_table(a.input);
  const Eigen::MatrixXd x = table.x;
  const auto points = kl_profile(x, options);
  emit(a.output, out, [&](std::ostream& o) { io::write_kl_profile(o, points, table.t_seconds); });
}

// ---------------------------------------------------------------------------

struct KpcaArgs {
  std::string input;
  std::string config;
  std::string output;
  std::size_t components = 3;
  std::string label_column = "label";
  std::optional<int> grasp;
  std::string domains;
  std::size_t max_rows = 2000;
  std::string backend = "parallel";
  TimelineFlags timeline;
};

DomainKey parse_domain(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ConfigError("--domains: expected SUBJECT:PERIOD pairs, got '" + s + "'");
  try {
    return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw ConfigError("--domains: expected SUBJECT:PERIOD pairs, got '" + s + "'");
  }
}

struct LabelledRows {
  RowMatrix x;
  std::vector<int> labels;
  bool labelled = false;
};

// Raw signal input: RMS frames of one grasp in two domains, labelled 0/1.
LabelledRows raw_domain_pair(const KpcaArgs& a, ExperimentConfig& config, std::ostream& err) {
  a.timeline.apply(config.timeline);
  if (!(config.timeline.sample_rate_hz > 0)) throw ConfigError("kpca: --fs is required for raw signal input");
  const std::vector<SignalStream> inputs{load_signal_csv(a.input, config.timeline.sample_rate_hz)};
  int grasp = 0;
  if (a.grasp) {
    grasp = *a.grasp;
  } else {
    const auto grasps = observed_grasps(inputs);
    if (grasps.empty()) throw DataError("kpca: input has no grasp-labelled samples");
    grasp = grasps.front();
  }
  const auto domains = split_domains(inputs);
  std::vector<DomainKey> wanted;
  if (!a.domains.empty()) {
    std::stringstream ss(a.domains);
    for (std::string item; std::getline(ss, item, ',');) wanted.push_back(parse_domain(item));
    if (wanted.size() != 2) throw ConfigError("--domains: expected exactly two SUBJECT:PERIOD pairs");
  } else {
    for (const auto& d : domains) {
      if (wanted.size() < 2) wanted.push_back(d.domain(0));
    }
    if (wanted.size() < 2) throw DataError("kpca: input holds fewer than two domains");
  }
  err << "kpca: grasp " << grasp << ", domains " << wanted[0].subject << ':' << wanted[0].period << " vs "
      << wanted[1].subject << ':' << wanted[1].period << '\n';

  std::vector<std::vector<double>> rows;
  LabelledRows out;
  for (int label = 0; label < 2; ++label) {
    const auto it = std::find_if(domains.begin(), domains.end(),
                                 [&](const SignalStream& s) { return s.domain(0) == wanted[label]; });
    if (it == domains.end()) {
      throw DataError("kpca: domain " + std::to_string(wanted[label].subject) + ":" +
                      std::to_string(wanted[label].period) + " not present");
    }
    const auto frames = rms_extract(filter_grasp(*it, grasp), config.timeline);
    for (const auto& f : frames) {
      rows.push_back(f.values);
      out.labels.push_back(label);
    }
  }
  if (rows.empty()) throw DataError("kpca: no RMS frames in the selected domains");
  const auto k = rows.front().size();
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < k; ++c) {
    if (std::any_of(rows.begin(), rows.end(), [&](const auto& r) { return r[c] != 0.0; })) keep.push_back(c);
  }
  if (keep.empty()) throw DataError("kpca: every channel is zero");
  out.x.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < keep.size(); ++c) {
      out.x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][keep[c]];
    }
  }
  out.labelled = true;
  return out;
}

void run_kpca(const KpcaArgs& a, std::ostream& out, std::ostream& err) {
  auto config = base_config(a.config);
  LabelledRows data;
  const auto table = io::read_feature_table(a.input);
  const bool raw = table.extra.count("subject") && table.extra.count("period") &&
                   !table.feature_names.empty() && table.feature_names.front().rfind("emg_", 0) == 0;
  if (raw) {
    data = raw_domain_pair(a, config, err);
  } else {
    data.x = table.x;
    if (auto it = table.extra.find(a.label_column); it != table.extra.end()) {
      for (double v : it->second) data.labels.push_back(static_cast<int>(v));
      data.labelled = true;
    } else {
      data.labels.assign(static_cast<std::size_t>(table.x.rows()), 0);
    }
  }

  const auto n = static_cast<std::size_t>(data.x.rows());
  if (a.max_rows == 0) throw ConfigError("--max-rows: must be positive");
  if (n > a.max_rows) {
    RowMatrix x(static_cast<Eigen::Index>(a.max_rows), data.x.cols());
    std::vector<int> labels(a.max_rows);
    for (std::size_t i = 0; i < a.max_rows; ++i) {
      const auto src = i * n / a.max_rows;
      x.row(static_cast<Eigen::Index>(i)) = data.x.row(static_cast<Eigen::Index>(src));
      labels[i] = data.labels[src];
    }
    err << "kpca: subsampled " << n << " rows to " << a.max_rows << '\n';
    data.x = std::move(x);
    data.labels = std::move(labels);
  }

  EigenBackend backend = EigenBackend::Parallel;
  if (a.backend == "serial") {
    backend = EigenBackend::Serial;
  } else if (a.backend != "parallel") {
    throw ConfigError("--backend: expected 'parallel' or 'serial'");
  }
  const auto result = kpca_fit_project(data.x, a.components, backend);
  emit(a.output, out, [&](std::ostream& o) { io::write_projections(o, result.projections, data.labels); });

  if (!data.labelled) return;
  const std::set<int> classes(data.labels.begin(), data.labels.end());
  if (classes.size() != 2) {
    diag::warn("kpca: separability needs exactly two label values, found " + std::to_string(classes.size()));
    return;
  }
  std::vector<int> binary(data.labels.size());
  for (std::size_t i = 0; i < binary.size(); ++i) binary[i] = data.labels[i] == *classes.rbegin() ? 1 : 0;
  const auto sep = separability_score(result.projections, binary);
  auto& report = (a.output.empty() || a.output == "-") ? err : out;
  report << "accuracy=" << csv::format_fixed(sep.accuracy, 6) << '\n';
}

// ---------------------------------------------------------------------------

std::vector<DetectorConfig> select_detectors(const ExperimentConfig& config, const std::vector<std::string>& kinds,
                                             const std::vector<std::string>& params) {
  std::vector<DetectorConfig> selected;
  if (kinds.empty()) {
    selected = config.detectors.empty() ? default_detectors() : config.detectors;
  } else {
    for (const auto& name : kinds) {
      const auto kind = parse_detector_kind(name);
      if (!kind) throw ConfigError("--detector: unknown detector kind '" + name + "'");
      auto c = DetectorConfig::defaults(*kind);
      for (const auto& from_config : config.detectors) {
        if (from_config.kind == *kind) {
          c = from_config;
          break;
        }
      }
      selected.push_back(c);
    }
  }
  for (const auto& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw ConfigError("--param: expected [KIND.]name=value, got '" + p + "'");
    auto name = p.substr(0, eq);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(p.substr(eq + 1), &used);
      if (used != p.size() - eq - 1) throw std::invalid_argument(p);
    } catch (const std::exception&) {
      throw ConfigError("--param: value of '" + name + "' is not a number");
    }
    std::optional<DetectorKind> target;
    if (const auto dot = name.find('.'); dot != std::string::npos) {
      target = parse_detector_kind(name.substr(0, dot));
      if (!target) throw ConfigError("--param: unknown detector kind '" + name.substr(0, dot) + "'");
      name = name.substr(dot + 1);
    } else if (selected.size() != 1) {
      throw ConfigError("--param: use KIND.name=value when more than one detector is selected");
    }
    for (auto& c : selected) {
      if (!target || c.kind == *target) c.params[name] = value;
    }
  }
  for (const auto& c : selected) c.validate();
  return selected;
}

struct DetectArgs {
  std::string input;
  std::string config;
  std::string output;
  std::vector<std::string> detectors;
  std::vector<std::string> params;
};

void run_detect(const DetectArgs& a, std::ostream& out) {
  const auto config = base_config(a.config);
  const auto detectors = select_detectors(config, a.detectors, a.params);
  const auto scores = io::read_scores(a.input);
  std::vector<DriftEvent> events;
  for (const auto& d : detectors) {
    const auto e = detect_series(d, scores);
    events.insert(events.end(), e.begin(), e.end());
  }
  emit(a.output, out, [&](std::ostream& o) { io::write_events(o, events); });
}

struct EvalArgs {
  std::string truth;
  std::string events;
  std::string config;
  std::string output;
  int grasp = 0;
  std::optional<double> window;
  std::vector<std::string> detectors;
};

void run_eval(const EvalArgs& a, std::ostream& out) {
  const auto config = base_config(a.config);
  const double window = a.window.value_or(config.match_window_seconds);
  if (!(window >= 0)) throw ConfigError("--window: must be non-negative");
  const auto truth = io::read_ground_truth(a.truth);
  const auto events = io::read_events(a.events);

  std::vector<std::string> labels = a.detectors;
  if (labels.empty()) {
    for (const auto& d : config.detectors.empty() ? default_detectors() : config.detectors) {
      labels.push_back(d.label());
    }
    for (const auto& e : events) {
      if (std::find(labels.begin(), labels.end(), e.detector) == labels.end()) labels.push_back(e.detector);
    }
  }
  std::vector<ReportRow> rows;
  for (const auto& label : labels) {
    std::vector<DriftEvent> mine;
    for (const auto& e : events) {
      if (e.detector == label) mine.push_back(e);
    }
    rows.push_back(make_report_row(label, a.grasp, match_detections(truth, drift_times(mine), window)));
  }
  emit(a.output, out, [&](std::ostream& o) { io::write_report(o, rows); });
}

struct SynthArgs {
  std::string spec;
  std::string output;
  std::string truth_out;
};

void run_synth(const SynthArgs& a, std::uint64_t seed, std::ostream& out) {
  const auto input = parse_synth_input(read_text(a.spec));
  const auto streams = synth_signals(input, seed);
  SignalStream all(input.sample_rate_hz, streams.front().channel_names());
  for (const auto& s : streams) {
    for (std::size_t i = 0; i < s.size(); ++i) all.push_back(s.channels(i), s.subject(i), s.period(i), s.grasp(i));
  }
  emit(a.output, out, [&](std::ostream& o) { write_signal_csv(o, all); });
  if (!a.truth_out.empty()) {
    // Per-grasp streams share the same segment layout, hence the same truth.
    const auto truth = synth_generate(input.spec_for(input.grasps.front(), seed)).truth;
    emit(a.truth_out, out, [&](std::ostream& o) { io::write_ground_truth(o, truth); });
  }
}

struct RunArgs {
  std::string config;
  std::string output;
  std::string trace_dir;
  std::optional<int> threads;
};

int run_run(const RunArgs& a, std::optional<std::uint64_t> seed, std::ostream& out, std::ostream& err) {
  auto config = load_experiment_config(a.config);
  if (seed) config.seed = *seed;
  if (!config.has_inputs()) throw ConfigError("config: inputs section is required for run");
  if (a.threads) {
    if (*a.threads < 1) throw ConfigError("--threads: must be at least 1");
    omp_set_num_threads(*a.threads);
  }
  const auto result = run_experiment(config);
  emit(a.output, out, [&](std::ostream& o) { io::write_report(o, result.rows); });
  if (!a.trace_dir.empty()) {
    std::filesystem::create_directories(a.trace_dir);
    for (const auto& t : result.traces) {
      const auto base = std::filesystem::path(a.trace_dir) / ("grasp" + std::to_string(t.grasp));
      emit(base.string() + "_truth.csv", out, [&](std::ostream& o) { io::write_ground_truth(o, t.truth); });
      emit(base.string() + "_scores.csv", out, [&](std::ostream& o) { io::write_scores(o, t.scores); });
      emit(base.string() + "_events.csv", out, [&](std::ostream& o) { io::write_events(o, t.events); });
    }
  }
  for (const auto& e : result.errors) {
    err << "error: grasp " << e.grasp << ", detector " << e.detector << ", stage " << e.stage << ": " << e.message
        << '\n';
  }
  return result.errors.empty() ? 0 : 1;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Domain-shift detection for multi-channel EMG streams", "emgdrift"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "Random seed for synth and run (overrides the config)");

  RmsArgs rms;
  auto* rms_cmd = app.add_subcommand("rms", "Raw signal CSV -> RMS frame CSV");
  rms_cmd->add_option("-i,--input", rms.inputs, "Raw signal CSV (repeatable)");
  rms_cmd->add_option("--config", rms.config, "Experiment config JSON");
  rms_cmd->add_option("--grasp", rms.grasp, "Keep only this grasp label");
  rms_cmd->add_option("-o,--output", rms.output, "RMS CSV (default: stdout)");
  rms_cmd->add_option("--truth-out", rms.truth_out, "Write domain boundaries here");
  add_rms_flags(rms_cmd, rms.timeline);

  FeaturesArgs features;
  auto* features_cmd = app.add_subcommand("features", "RMS frame CSV -> slope CSV");
  features_cmd->add_option("-i,--input", features.input, "RMS CSV")->required();
  features_cmd->add_option("--config", features.config, "Experiment config JSON");
  features_cmd->add_option("-o,--output", features.output, "Slope CSV (default: stdout)");
  add_slope_flags(features_cmd, features.timeline);

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Slope CSV -> rolling Mahalanobis score CSV");
  score_cmd->add_option("-i,--input", score.input, "Slope CSV")->required();
  score_cmd->add_option("--config", score.config, "Experiment config JSON");
  score_cmd->add_option("-o,--output", score.output, "Score CSV (default: stdout)");
  score_cmd->add_option("--capacity", score.capacity, "Rolling reference size (default 30)");
  score_cmd->add_option("--ridge", score.ridge, "auto or none");

  KlArgs kl;
  auto* kl_cmd = app.add_subcommand("kl", "Reference-based sliding KL profile of a feature CSV");
  kl_cmd->add_option("-i,--input", kl.input, "Feature CSV")->required();
  kl_cmd->add_option("-o,--output", kl.output, "KL profile CSV (default: stdout)");
  kl_cmd->add_option("--ref-len", kl.ref_len, "Reference length in rows")->capture_default_str();
  kl_cmd->add_option("--window", kl.window, "Window length in rows")->capture_default_str();
  kl_cmd->add_option("--step", kl.step, "Step in rows")->capture_default_str();
  kl_cmd->add_option("--order", kl.order, "ref-local or local-ref")->capture_default_str();
  kl_cmd->add_option("--ridge", kl.ridge, "auto or none")->capture_default_str();

  KpcaArgs kpca;
  auto* kpca_cmd = app.add_subcommand("kpca", "Cosine-kernel PCA projections and separability");
  kpca_cmd->add_option("-i,--input", kpca.input, "Feature CSV, or raw signal CSV with --fs")->required();
  kpca_cmd->add_option("--config", kpca.config, "Experiment config JSON");
  kpca_cmd->add_option("-o,--output", kpca.output, "Projection CSV (default: stdout)");
  kpca_cmd->add_option("--components", kpca.components, "Number of components")->capture_default_str();
  kpca_cmd->add_option("--label-column", kpca.label_column, "Label column of a feature CSV")->capture_default_str();
  kpca_cmd->add_option("--grasp", kpca.grasp, "Raw input: grasp to analyse (default: lowest)");
  kpca_cmd->add_option("--domains", kpca.domains, "Raw input: two SUBJECT:PERIOD keys (default: first two)");
  kpca_cmd->add_option("--max-rows", kpca.max_rows, "Evenly subsample to at most this many rows")
      ->capture_default_str();
  kpca_cmd->add_option("--backend", kpca.backend, "parallel or serial")->capture_default_str();
  add_rms_flags(kpca_cmd, kpca.timeline);

  DetectArgs detect;
  auto* detect_cmd = app.add_subcommand("detect", "Score CSV -> drift event CSV");
  detect_cmd->add_option("-i,--input", detect.input, "Score CSV")->required();
  detect_cmd->add_option("--config", detect.config, "Experiment config JSON");
  detect_cmd->add_option("-o,--output", detect.output, "Event CSV (default: stdout)");
  detect_cmd->add_option("-d,--detector", detect.detectors, "Detector kind (repeatable; default: all)");
  detect_cmd->add_option("-p,--param", detect.params, "[KIND.]name=value (repeatable)");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Synthetic multi-domain raw signal CSV");
  synth_cmd->add_option("--spec", synth.spec, "Synthetic input JSON")->required();
  synth_cmd->add_option("-o,--output", synth.output, "Raw signal CSV (default: stdout)");
  synth_cmd->add_option("--truth-out", synth.truth_out, "Write domain boundaries here");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Match drift events against ground truth");
  eval_cmd->add_option("--truth", eval.truth, "Ground-truth CSV")->required();
  eval_cmd->add_option("--events", eval.events, "Event CSV")->required();
  eval_cmd->add_option("--config", eval.config, "Experiment config JSON");
  eval_cmd->add_option("-o,--output", eval.output, "Report CSV (default: stdout)");
  eval_cmd->add_option("--grasp", eval.grasp, "Grasp label for the report rows")->capture_default_str();
  eval_cmd->add_option("--window", eval.window, "Matching window in seconds (default 10)");
  eval_cmd->add_option("-d,--detector", eval.detectors, "Detector label to report (repeatable)");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Full pipeline over every (grasp, detector) pair");
  run_cmd->add_option("--config", run.config, "Experiment config JSON")->required();
  run_cmd->add_option("-o,--output", run.output, "Report CSV (default: stdout)");
  run_cmd->add_option("--trace-dir", run.trace_dir, "Write per-grasp truth, scores and events here");
  run_cmd->add_option("--threads", run.threads, "OpenMP threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  auto previous = diag::set_sink([&err](const std::string& m) { err << "warning: " << m << '\n'; });
  int code = 0;
  try {
    if (*rms_cmd) {
      run_rms(rms, out, err);
    } else if (*features_cmd) {
      run_features(features, out);
    } else if (*score_cmd) {
      run_score(score, out);
    } else if (*kl_cmd) {
      run_kl(kl, out);
    } else if (*kpca_cmd) {
      run_kpca(kpca, out, err);
    } else if (*detect_cmd) {
      run_detect(detect, out);
    } else if (*synth_cmd) {
      run_synth(synth, seed.value_or(0), out);
    } else if (*eval_cmd) {
      run_eval(eval, out);
    } else if (*run_cmd) {
      code = run_run(run, seed, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = 1;
  }
  diag::set_sink(std::move(previous));
  return code;
}

}  // namespace emgdrift::cli
