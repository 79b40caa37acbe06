#pragma once

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "emgdrift/diag.hpp"
#include "emgdrift/scoring.hpp"

namespace emgdrift::testing {

/// Fresh, empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("emgdrift_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

/// Collects warnings for the lifetime of the object.
class WarningCapture {
 public:
  WarningCapture() {
    previous_ = diag::set_sink([this](const std::string& m) { messages.push_back(m); });
  }
  ~WarningCapture() { diag::set_sink(std::move(previous_)); }
  std::vector<std::string> messages;

 private:
  diag::Sink previous_;
};

inline std::vector<ScorePoint> as_scores(const std::vector<double>& values) {
  std::vector<ScorePoint> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i].score = values[i];
    out[i].window_index = i;
    out[i].t_seconds = static_cast<double>(i);
  }
  return out;
}

inline std::vector<double> gaussian_series(std::size_t n, std::uint64_t seed, double shift_at_mean = 0.0,
                                           std::size_t shift_index = SIZE_MAX) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = normal(rng) + (i >= shift_index ? shift_at_mean : 0.0);
  return out;
}

}  // namespace emgdrift::testing
