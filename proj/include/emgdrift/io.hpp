#pragma once

// Readers and writers for every CSV schema the toolkit exchanges. Reals are
// written in shortest round-trip form so a write/read cycle is exact.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <span>
#include <vector>

#include "emgdrift/detectors.hpp"
#include "emgdrift/eval.hpp"
#include "emgdrift/gaussian.hpp"
#include "emgdrift/kpca.hpp"
#include "emgdrift/preprocess.hpp"
#include "emgdrift/scoring.hpp"
#include "emgdrift/stream.hpp"

namespace emgdrift::io {

// t_seconds
void write_ground_truth(std::ostream& out, const GroundTruth& truth);
GroundTruth read_ground_truth(const std::filesystem::path& path);

// frame,t_seconds,rms_1..rms_K
void write_rms(std::ostream& out, std::span<const RmsFrame> frames);
std::vector<RmsFrame> read_rms(const std::filesystem::path& path);

// window,t_seconds,slope_1..slope_K
void write_slopes(std::ostream& out, std::span<const SlopeVector> slopes);
std::vector<SlopeVector> read_slopes(const std::filesystem::path& path);

// window,t_seconds,score,degenerate
void write_scores(std::ostream& out, std::span<const ScorePoint> scores);
std::vector<ScorePoint> read_scores(const std::filesystem::path& path);

// window_start_index,t_seconds,kl; `row_seconds` maps an input row to its time
void write_kl_profile(std::ostream& out, std::span<const KlPoint> points, std::span<const double> row_seconds);

// detector,kind,t_seconds,score_index
void write_events(std::ostream& out, std::span<const DriftEvent> events);
std::vector<DriftEvent> read_events(const std::filesystem::path& path);

// detector,grasp,tp,fp,fn,f1,add_seconds
void write_report(std::ostream& out, std::span<const ReportRow> rows);
std::vector<ReportRow> read_report(const std::filesystem::path& path);

// index,pc1,pc2,pc3,label (one pc column per component)
void write_projections(std::ostream& out, const RowMatrix& y, std::span<const int> labels);

/// Any numeric CSV viewed as a feature matrix. Columns prefixed emg_, rms_
/// or slope_ are features when present; otherwise every column except the
/// bookkeeping ones (t, t_seconds, frame, window, index, subject, period,
/// grasp, label). Row times come from t_seconds or t, else the row index.
struct FeatureTable {
  RowMatrix x;
  std::vector<double> t_seconds;
  std::vector<std::string> feature_names;
  std::map<std::string, std::vector<double>> extra;  // non-feature columns
};

FeatureTable read_feature_table(const std::filesystem::path& path);

}  // namespace emgdrift::io
