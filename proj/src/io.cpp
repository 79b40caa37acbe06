#include "emgdrift/io.hpp"

#include <algorithm>
#include <array>
#include <ostream>
#include <string>
#include <string_view>

#include "emgdrift/csv.hpp"
#include "emgdrift/error.hpp"

namespace emgdrift::io {
namespace {

using csv::format_double;

std::vector<std::size_t> prefixed_columns(const csv::Table& table, const std::string& prefix) {
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (table.header[i].rfind(prefix, 0) == 0) cols.push_back(i);
  }
  if (cols.empty()) throw SchemaError(prefix + "*", "missing required column '" + prefix + "*'");
  return cols;
}

}  // namespace

void write_ground_truth(std::ostream& out, const GroundTruth& truth) {
  out << "t_seconds\n";
  for (double t : truth.boundaries) out << format_double(t) << '\n';
}

GroundTruth read_ground_truth(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto col = table.require("t_seconds");
  GroundTruth truth;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    truth.boundaries.push_back(csv::parse_double(table.rows[r][col], r + 1));
  }
  truth.validate();
  return truth;
}

void write_rms(std::ostream& out, std::span<const RmsFrame> frames) {
  out << "frame,t_seconds";
  const auto k = frames.empty() ? 0 : frames.front().values.size();
  for (std::size_t c = 0; c < k; ++c) out << ",rms_" << c + 1;
  out << '\n';
  for (const auto& f : frames) {
    out << f.frame_index << ',' << format_double(f.t_seconds);
    for (double v : f.values) out << ',' << format_double(v);
    out << '\n';
  }
}

std::vector<RmsFrame> read_rms(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto frame_col = table.require("frame");
  const auto t_col = table.require("t_seconds");
  const auto cols = prefixed_columns(table, "rms_");
  std::vector<RmsFrame> frames(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    frames[r].frame_index = static_cast<std::size_t>(csv::parse_int(row[frame_col], r + 1));
    frames[r].t_seconds = csv::parse_double(row[t_col], r + 1);
    for (auto c : cols) frames[r].values.push_back(csv::parse_double(row[c], r + 1));
  }
  return frames;
}

void write_slopes(std::ostream& out, std::span<const SlopeVector> slopes) {
  out << "window,t_seconds";
  const auto k = slopes.empty() ? 0 : slopes.front().slopes.size();
  for (std::size_t c = 0; c < k; ++c) out << ",slope_" << c + 1;
  out << '\n';
  for (const auto& s : slopes) {
    out << s.window_index << ',' << format_double(s.t_seconds);
    for (double v : s.slopes) out << ',' << format_double(v);
    out << '\n';
  }
}

std::vector<SlopeVector> read_slopes(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto w_col = table.require("window");
  const auto t_col = table.require("t_seconds");
  const auto cols = prefixed_columns(table, "slope_");
  std::vector<SlopeVector> slopes(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    slopes[r].window_index = static_cast<std::size_t>(csv::parse_int(row[w_col], r + 1));
    slopes[r].t_seconds = csv::parse_double(row[t_col], r + 1);
    for (auto c : cols) slopes[r].slopes.push_back(csv::parse_double(row[c], r + 1));
  }
  return slopes;
}

void write_scores(std::ostream& out, std::span<const ScorePoint> scores) {
  out << "window,t_seconds,score,degenerate\n";
  for (const auto& s : scores) {
    out << s.window_index << ',' << format_double(s.t_seconds) << ',' << format_double(s.score) << ','
        << (s.degenerate ? 1 : 0) << '\n';
  }
}

std::vector<ScorePoint> read_scores(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto w_col = table.require("window");
  const auto t_col = table.require("t_seconds");
  const auto s_col = table.require("score");
  const auto d_col = table.require("degenerate");
  std::vector<ScorePoint> scores(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    scores[r].window_index = static_cast<std::size_t>(csv::parse_int(row[w_col], r + 1));
    scores[r].t_seconds = csv::parse_double(row[t_col], r + 1);
    scores[r].score = csv::parse_double(row[s_col], r + 1);
    scores[r].degenerate = csv::parse_int(row[d_col], r + 1) != 0;
  }
  return scores;
}

void write_kl_profile(std::ostream& out, std::span<const KlPoint> points, std::span<const double> row_seconds) {
  out << "window_start_index,t_seconds,kl\n";
  for (const auto& p : points) {
    out << p.start_index << ',' << format_double(row_seconds[p.start_index]) << ',' << format_double(p.kl) << '\n';
  }
}

void write_events(std::ostream& out, std::span<const DriftEvent> events) {
  out << "detector,kind,t_seconds,score_index\n";
  for (const auto& e : events) {
    out << e.detector << ',' << to_string(e.kind) << ',' << format_double(e.t_seconds) << ',' << e.score_index
        << '\n';
  }
}

std::vector<DriftEvent> read_events(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto d_col = table.require("detector");
  const auto k_col = table.require("kind");
  const auto t_col = table.require("t_seconds");
  const auto i_col = table.require("score_index");
  std::vector<DriftEvent> events;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    DriftEvent e;
    e.detector = row[d_col];
    if (row[k_col] == "drift") {
      e.kind = DriftEvent::Kind::Drift;
    } else if (row[k_col] == "warning") {
      e.kind = DriftEvent::Kind::Warning;
    } else {
      throw ParseError(r + 1, "unknown event kind '" + row[k_col] + "'");
    }
    e.t_seconds = csv::parse_double(row[t_col], r + 1);
    e.score_index = static_cast<std::size_t>(csv::parse_int(row[i_col], r + 1));
    events.push_back(std::move(e));
  }
  return events;
}

void write_report(std::ostream& out, std::span<const ReportRow> rows) {
  out << "detector,grasp,tp,fp,fn,f1,add_seconds\n";
  for (const auto& r : rows) {
    out << r.detector << ',' << r.grasp << ',' << r.tp << ',' << r.fp << ',' << r.fn << ','
        << csv::format_fixed(r.f1, 6) << ',' << (r.add_seconds ? csv::format_fixed(*r.add_seconds, 6) : kNoDetection)
        << '\n';
  }
}

std::vector<ReportRow> read_report(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto cols = std::array{table.require("detector"), table.require("grasp"), table.require("tp"),
                               table.require("fp"),       table.require("fn"),    table.require("f1"),
                               table.require("add_seconds")};
  std::vector<ReportRow> rows;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    ReportRow out;
    out.detector = row[cols[0]];
    out.grasp = static_cast<int>(csv::parse_int(row[cols[1]], r + 1));
    out.tp = static_cast<std::size_t>(csv::parse_int(row[cols[2]], r + 1));
    out.fp = static_cast<std::size_t>(csv::parse_int(row[cols[3]], r + 1));
    out.fn = static_cast<std::size_t>(csv::parse_int(row[cols[4]], r + 1));
    out.f1 = csv::parse_double(row[cols[5]], r + 1);
    if (row[cols[6]] != kNoDetection) out.add_seconds = csv::parse_double(row[cols[6]], r + 1);
    rows.push_back(std::move(out));
  }
  return rows;
}

void write_projections(std::ostream& out, const RowMatrix& y, std::span<const int> labels) {
  out << "index";
  for (Eigen::Index c = 0; c < y.cols(); ++c) out << ",pc" << c + 1;
  out << ",label\n";
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    out << i;
    for (Eigen::Index c = 0; c < y.cols(); ++c) out << ',' << format_double(y(i, c));
    out << ',' << labels[static_cast<std::size_t>(i)] << '\n';
  }
}

FeatureTable read_feature_table(const std::filesystem::path& path) {
  static const std::array<std::string_view, 3> prefixes = {"emg_", "rms_", "slope_"};
  static const std::array<std::string_view, 9> bookkeeping = {"t",       "t_seconds", "frame", "window", "index",
                                                              "subject", "period",    "grasp", "label"};
  const auto table = csv::read(path);
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    for (auto p : prefixes) {
      if (table.header[i].rfind(p, 0) == 0) cols.push_back(i);
    }
  }
  if (cols.empty()) {
    for (std::size_t i = 0; i < table.header.size(); ++i) {
      if (std::find(bookkeeping.begin(), bookkeeping.end(), table.header[i]) == bookkeeping.end()) cols.push_back(i);
    }
  }
  if (cols.empty()) throw SchemaError("<features>", "no feature columns");

  FeatureTable out;
  const auto rows = table.rows.size();
  out.x.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols.size()));
  for (auto c : cols) out.feature_names.push_back(table.header[c]);
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (std::find(cols.begin(), cols.end(), i) == cols.end()) out.extra[table.header[i]].resize(rows);
  }
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = table.rows[r];
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out.x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = csv::parse_double(row[cols[c]], r + 1);
    }
    for (auto& [name, values] : out.extra) values[r] = csv::parse_double(row[*table.column(name)], r + 1);
  }
  if (auto it = out.extra.find("t_seconds"); it != out.extra.end()) {
    out.t_seconds = it->second;
  } else if (auto t = out.extra.find("t"); t != out.extra.end()) {
    out.t_seconds = t->second;
  } else {
    out.t_seconds.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) out.t_seconds[r] = static_cast<double>(r);
  }
  return out;
}

}  // namespace emgdrift::io
