#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "emgdrift/detectors.hpp"
#include "emgdrift/error.hpp"
#include "support.hpp"

using namespace emgdrift;
using emgdrift::testing::as_scores;
using emgdrift::testing::gaussian_series;

namespace {

DetectorConfig with(DetectorKind kind, std::map<std::string, double> params) { return {kind, std::move(params)}; }

std::vector<std::size_t> drift_indices(const DetectorConfig& config, const std::vector<double>& values) {
  auto d = create_detector(config);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (d->update(values[i]).status == DetectorStatus::Drift) out.push_back(i);
  }
  return out;
}

// Straight-line two-sided CUSUM: Welford mean/std of the values since the
// last drift, z taken before the value joins them, accumulation from the
// (min_n+1)-th value, alarm from the min_n-th.
std::vector<std::size_t> cusum_oracle(const std::vector<double>& x, double delta, double lambda, std::size_t min_n) {
  std::vector<std::size_t> drifts;
  double mean = 0, m2 = 0, up = 0, down = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t n = count + 1;
    if (n > min_n) {
      const double sd = std::sqrt(m2 / static_cast<double>(count - 1));
      const double z = (x[i] - mean) / sd;
      up = std::max(0.0, up + z - delta);
      down = std::max(0.0, down - z - delta);
    }
    count += 1;
    const double d = x[i] - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x[i] - mean);
    if (n >= min_n && (up > lambda || down > lambda)) {
      drifts.push_back(i);
      mean = m2 = up = down = 0;
      count = 0;
    }
  }
  return drifts;
}

std::vector<double> bernoulli_series(std::size_t n, std::uint64_t seed, double p0, double p1, std::size_t at) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = u(rng) < (i < at ? p0 : p1) ? 1.0 : 0.0;
  return out;
}

// Several level changes of varying size.
std::vector<double> multi_step_series(std::uint64_t seed) {
  auto x = gaussian_series(6000, seed);
  const double levels[] = {0.0, 2.0, 0.5, 4.0, 1.0, 3.0};
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += 3.0 + levels[i / 1000];
  return x;
}

std::vector<double> binary_multi_step(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double p[] = {0.05, 0.3, 0.1, 0.5, 0.05, 0.4};
  std::vector<double> out(6000);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = u(rng) < p[i / 1000] ? 1.0 : 0.0;
  return out;
}

}  // namespace

TEST(DetectorConfig, DefaultsConstructForAllKinds) {
  ASSERT_EQ(kAllDetectorKinds.size(), 9u);
  for (auto kind : kAllDetectorKinds) {
    const auto config = DetectorConfig::defaults(kind);
    EXPECT_NO_THROW(config.validate()) << to_string(kind);
    auto d = create_detector(config);
    EXPECT_EQ(d->kind(), kind);
    EXPECT_EQ(d->state().status, DetectorStatus::InControl);
    EXPECT_EQ(d->state().n_seen, 0u);
    EXPECT_EQ(parse_detector_kind(to_string(kind)), kind);
  }
  EXPECT_FALSE(parse_detector_kind("EWMA").has_value());
}

TEST(DetectorConfig, AdwinDeltaOverride) {
  auto d = create_detector(with(DetectorKind::ADWIN, {{"delta", 0.002}}));
  EXPECT_EQ(d->state().n_seen, 0u);
}

TEST(DetectorConfig, OutOfRangeNamesParameter) {
  try {
    create_detector(with(DetectorKind::CUSUM, {{"lambda", -1.0}}));
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("lambda"), std::string::npos) << e.what();
  }
  EXPECT_THROW(create_detector(with(DetectorKind::ADWIN, {{"delta", 1.5}})), ConfigError);
  EXPECT_THROW(create_detector(with(DetectorKind::SEED, {{"block_size", 3.5}})), ConfigError);
  EXPECT_THROW(create_detector(with(DetectorKind::DDM, {{"drift_level", 1.0}})), ConfigError);
  try {
    create_detector(with(DetectorKind::GMA, {{"bogus", 1.0}}));
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
  }
}

TEST(DetectorConfig, Labels) {
  EXPECT_EQ(DetectorConfig::defaults(DetectorKind::PH).label(), "PH");
  EXPECT_EQ(with(DetectorKind::CUSUM, {{"lambda", 20}}).label(), "CUSUM{lambda=20}");
  EXPECT_EQ(with(DetectorKind::CUSUM, {{"lambda", 20}}).get("lambda"), 20.0);
  EXPECT_EQ(with(DetectorKind::CUSUM, {}).get("min_n"), 30.0);
  EXPECT_THROW(with(DetectorKind::CUSUM, {}).get("nope"), ConfigError);
}

TEST(Detectors, ConstantStreamNeverDrifts) {
  // 1.7 and 0.1 are not exact in binary, so running sums pick up round-off.
  for (auto kind : kAllDetectorKinds) {
    for (double value : {2.5, 1.7, 0.1, -3.3e5}) {
      if (kind == DetectorKind::DDM) value = value > 0 ? 1.0 : 0.0;
      EXPECT_TRUE(drift_indices(DetectorConfig::defaults(kind), std::vector<double>(10000, value)).empty())
          << to_string(kind) << " " << value;
    }
  }
}

TEST(Detectors, NonFiniteInputIsError) {
  for (auto kind : kAllDetectorKinds) {
    auto d = create_detector(DetectorConfig::defaults(kind));
    EXPECT_THROW(d->update(std::nan("")), DataError) << to_string(kind);
    EXPECT_THROW(d->update(INFINITY), DataError) << to_string(kind);
  }
}

TEST(Detectors, DdmRejectsNonBinaryInput) {
  auto d = create_detector(DetectorConfig::defaults(DetectorKind::DDM));
  EXPECT_NO_THROW(d->update(1.0));
  EXPECT_THROW(d->update(0.5), DataError);
}

TEST(Cusum, MatchesStraightLineOracle) {
  const auto config = with(DetectorKind::CUSUM, {{"delta", 0.005}, {"lambda", 50}, {"min_n", 30}});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = gaussian_series(3000, seed, 5.0, 1000);
    const auto got = drift_indices(config, x);
    const auto expected = cusum_oracle(x, 0.005, 50, 30);
    EXPECT_EQ(got, expected) << seed;
    bool in_range = false;
    for (auto i : got) in_range = in_range || (i > 1000 && i <= 1100);
    EXPECT_TRUE(in_range) << seed;
  }
}

TEST(Cusum, DefaultsMatchOracle) {
  const auto x = gaussian_series(5000, 42, 3.0, 2500);
  EXPECT_EQ(drift_indices(DetectorConfig::defaults(DetectorKind::CUSUM), x), cusum_oracle(x, 0.5, 12, 30));
}

TEST(Adwin, BernoulliSwitchDetectedWithin500) {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto x = bernoulli_series(4000, seed, 0.2, 0.8, 2000);
    for (auto i : drift_indices(with(DetectorKind::ADWIN, {{"delta", 0.002}}), x)) {
      if (i >= 2000 && i < 2500) {
        ++hits;
        break;
      }
    }
  }
  EXPECT_GE(hits, 19);
}

TEST(DetectSeries, EmptyGivesNoEvents) {
  for (auto kind : kAllDetectorKinds) EXPECT_TRUE(detect_series(DetectorConfig::defaults(kind), {}).empty());
}

TEST(DetectSeries, ConstantScoresGiveNoEvents) {
  const auto scores = as_scores(std::vector<double>(2000, 1.7));
  for (auto kind : kAllDetectorKinds) {
    EXPECT_TRUE(detect_series(DetectorConfig::defaults(kind), scores).empty()) << to_string(kind);
  }
}

TEST(DetectSeries, FiveSigmaStepIsDetected) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto values = gaussian_series(1000, seed, 5.0, 500);
    for (auto& v : values) v += 3.0;
    const auto scores = as_scores(values);
    for (auto kind : {DetectorKind::CUSUM, DetectorKind::PH, DetectorKind::ADWIN, DetectorKind::HDDM_A,
                      DetectorKind::HDDM_W}) {
      const auto events = detect_series(DetectorConfig::defaults(kind), scores);
      bool after = false;
      for (const auto& e : events) {
        EXPECT_EQ(e.detector, to_string(kind));
        EXPECT_DOUBLE_EQ(e.t_seconds, scores[e.score_index].t_seconds);
        after = after || (e.kind == DriftEvent::Kind::Drift && e.score_index >= 500);
      }
      EXPECT_TRUE(after) << to_string(kind) << " seed " << seed;
    }
  }
}

TEST(DetectSeries, WarningsReportedOnEntry) {
  // DDM at a binary stream whose error rate creeps up gives a warning
  // before the drift; consecutive Warning states produce one event.
  std::vector<double> scores;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < 3000; ++i) scores.push_back(normal(rng) + (i > 1500 ? 1.0 + (i - 1500) / 500.0 : 0.0));
  const auto events = detect_series(DetectorConfig::defaults(DetectorKind::DDM), as_scores(scores));
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].kind == DriftEvent::Kind::Warning) {
      EXPECT_FALSE(events[i - 1].kind == DriftEvent::Kind::Warning && events[i - 1].score_index + 1 == events[i].score_index);
    }
  }
  EXPECT_FALSE(drift_times(events).empty());
}

TEST(Detectors, Deterministic) {
  const auto x = multi_step_series(9);
  const auto scores = as_scores(x);
  for (auto kind : kAllDetectorKinds) {
    const auto a = detect_series(DetectorConfig::defaults(kind), scores);
    const auto b = detect_series(DetectorConfig::defaults(kind), scores);
    ASSERT_EQ(a.size(), b.size()) << to_string(kind);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].score_index, b[i].score_index);
      EXPECT_EQ(a[i].kind, b[i].kind);
    }
  }
}

TEST(Detectors, ResetOnDriftForgetsHistory) {
  for (auto kind : kAllDetectorKinds) {
    const bool binary = kind == DetectorKind::DDM;
    const auto prefix = binary ? bernoulli_series(1000, 4, 0.05, 0.05, 0) : gaussian_series(1000, 4);
    auto d = create_detector(DetectorConfig::defaults(kind));
    for (double v : prefix) d->update(v);
    // Push a large change until the detector fires.
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal(0.0, 1.0);
    bool fired = false;
    for (int i = 0; i < 5000 && !fired; ++i) {
      const double v = binary ? (i % 2 == 0 ? 1.0 : 0.0) : 10.0 + normal(rng);
      fired = d->update(v).status == DetectorStatus::Drift;
    }
    ASSERT_TRUE(fired) << to_string(kind);
    for (std::size_t i = 0; i < 30; ++i) {
      const auto s = d->update(prefix[i]);
      EXPECT_NE(s.status, DetectorStatus::Drift) << to_string(kind) << " at " << i;
      EXPECT_EQ(s.n_seen, i + 1);
    }
  }
}

TEST(Detectors, ExplicitResetMatchesFresh) {
  // HDDM's input rescaler keeps its score history across resets by design.
  for (auto kind : kAllDetectorKinds) {
    if (kind == DetectorKind::HDDM_A || kind == DetectorKind::HDDM_W) continue;
    const auto x = kind == DetectorKind::DDM ? binary_multi_step(12) : multi_step_series(12);
    auto used = create_detector(DetectorConfig::defaults(kind));
    for (int i = 0; i < 777; ++i) used->update(x[5000 + i]);
    used->reset();
    auto fresh = create_detector(DetectorConfig::defaults(kind));
    for (double v : x) ASSERT_EQ(used->update(v).status, fresh->update(v).status) << to_string(kind);
  }
}

struct Sensitivity {
  DetectorKind kind;
  std::string param;
  std::vector<double> ladder;  // ordered from least to most sensitive
};

void PrintTo(const Sensitivity& s, std::ostream* os) { *os << to_string(s.kind) << "." << s.param; }

class MonotoneSensitivity : public ::testing::TestWithParam<Sensitivity> {};

TEST_P(MonotoneSensitivity, MoreSensitiveNeverFewerDrifts) {
  const auto& s = GetParam();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto x = s.kind == DetectorKind::DDM ? binary_multi_step(seed) : multi_step_series(seed);
    std::size_t previous = 0;
    for (double v : s.ladder) {
      const auto n = drift_indices(with(s.kind, {{s.param, v}}), x).size();
      EXPECT_GE(n, previous) << to_string(s.kind) << " " << s.param << "=" << v << " seed " << seed;
      previous = n;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(
    Families, MonotoneSensitivity,
    ::testing::Values(Sensitivity{DetectorKind::CUSUM, "lambda", {200, 50, 25, 12}},
                      Sensitivity{DetectorKind::PH, "lambda", {200, 50, 25}},
                      Sensitivity{DetectorKind::GMA, "lambda", {4, 2, 1}},
                      Sensitivity{DetectorKind::DDM, "drift_level", {8, 6, 4}},
                      Sensitivity{DetectorKind::ADWIN, "delta", {1e-6, 1e-4, 0.002, 0.05}},
                      Sensitivity{DetectorKind::HDDM_A, "drift_confidence", {1e-6, 1e-4, 0.001}},
                      Sensitivity{DetectorKind::HDDM_W, "drift_confidence", {1e-6, 1e-4, 0.001}},
                      Sensitivity{DetectorKind::SEED, "delta", {1e-4, 0.01, 0.05}},
                      Sensitivity{DetectorKind::ABCD, "delta", {1e-4, 0.01, 0.05}}),
    [](const auto& info) { return std::string(to_string(info.param.kind)) + "_" + info.param.param; });

TEST(Detectors, FalseAlarmsBoundedOnNoise) {
  for (auto kind : kAllDetectorKinds) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto x = kind == DetectorKind::DDM ? bernoulli_series(100000, seed, 0.05, 0.05, 0)
                                               : gaussian_series(100000, 2000 + seed);
      EXPECT_LE(drift_indices(DetectorConfig::defaults(kind), x).size(), 5u) << to_string(kind) << " seed " << seed;
    }
  }
}

TEST(Detectors, Throughput) {
  const auto x = gaussian_series(100000, 1);
  const auto b = bernoulli_series(100000, 1, 0.1, 0.1, 0);
  for (auto kind : kAllDetectorKinds) {
    auto d = create_detector(DetectorConfig::defaults(kind));
    const auto& input = kind == DetectorKind::DDM ? b : x;
    const auto start = std::chrono::steady_clock::now();
    for (double v : input) d->update(v);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_LE(seconds, 1.0) << to_string(kind) << " took " << seconds << " s for 1e5 updates";
  }
}

TEST(ScoreBinarizer, PercentileThreshold) {
  std::vector<double> sample;
  for (int i = 1; i <= 100; ++i) sample.push_back(i);
  EXPECT_NEAR(ScoreBinarizer::threshold_of(sample, 95.0), 95.05, 1e-12);
  EXPECT_DOUBLE_EQ(ScoreBinarizer::threshold_of({4.0}, 50.0), 4.0);

  const ScoreBinarizer bin(50.0, 4);
  const std::vector<double> scores{1.0, 2.0, 3.0, 4.0, 2.4, 2.6, 10.0};
  EXPECT_EQ(bin.apply(scores), (std::vector<double>{0, 0, 1, 1, 0, 1, 1}));
  EXPECT_THROW(ScoreBinarizer(0.0, 10), ConfigError);
  EXPECT_THROW(ScoreBinarizer(95.0, 0), ConfigError);
}
