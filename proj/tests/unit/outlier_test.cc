// Copyright 2026 The Outlier Fusion Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "gtest/gtest.h"
#include "ofuse/error.h"
#include "ofuse/numeric/rng.h"
#include "ofuse/outlier/detector.h"
#include "ofuse/outlier/fusion.h"
#include "ofuse/outlier/iqr.h"
#include "ofuse/outlier/isolation_forest.h"
#include "ofuse/outlier/lof.h"
#include "ofuse/outlier/mcd.h"
#include "ofuse/outlier/ocsvm.h"
#include "support/oracles.h"

namespace ofuse {
namespace {

FeatureMatrix Column(const std::vector<double>& values) {
  return FeatureMatrix(values.size(), 1, values);
}

std::vector<double> Range(int lo, int hi) {
  std::vector<double> v;
  for (int i = lo; i <= hi; ++i) v.push_back(i);
  return v;
}

FeatureMatrix GaussianCloud(std::size_t n, std::size_t d, std::uint64_t seed) {
  RngStream rng(seed);
  std::vector<double> values(n * d);
  for (double& v : values) v = rng.Normal();
  return FeatureMatrix(n, d, std::move(values));
}

// --- IQR -------------------------------------------------------------------

TEST(IqrTest, FlagsOnlyTheHeavyTailPoint) {
  std::vector<double> data = Range(1, 10);
  data.push_back(100);
  const FlagVector flags = IqrDetect(Column(data));
  for (std::size_t i = 0; i < 10; ++i) EXPECT_FALSE(flags[i]);
  EXPECT_TRUE(flags[10]);
}

TEST(IqrTest, ConstantAndCompactColumnsFlagNothing) {
  const FlagVector constant = IqrDetect(Column(std::vector<double>(12, 3.0)));
  EXPECT_EQ(std::count(constant.begin(), constant.end(), true), 0);
  const FlagVector compact = IqrDetect(Column(Range(1, 10)));
  EXPECT_EQ(std::count(compact.begin(), compact.end(), true), 0);
}

TEST(IqrTest, AnyFeatureOutsideItsFencesFlags) {
  // Second column is binary and never triggers; first column has one spike.
  const FeatureMatrix x(6, 2, {0, 1, 0.1, 0, -0.1, 1, 0.05, 0, 9, 1, 0, 0});
  const FlagVector flags = IqrDetect(x);
  EXPECT_EQ(flags, (FlagVector{false, false, false, false, true, false}));
}

TEST(IqrTest, NeedsFourSamples) {
  try {
    IqrDetect(Column({1, 2, 3}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("insufficient data"), std::string::npos);
  }
}

// --- LOF -------------------------------------------------------------------

TEST(LofTest, GridInteriorIsInlier) {
  std::vector<double> grid;
  for (int r = 0; r < 10; ++r)
    for (int c = 0; c < 10; ++c) grid.insert(grid.end(), {double(r), double(c)});
  const FeatureMatrix x(100, 2, grid);
  const ScoreVector scores = LofScores(x, 8);
  const ScoreVector oracle = testing::BruteForceLof(x, 8);
  const std::size_t interior = 4 * 10 + 5;
  EXPECT_GE(scores[interior], 0.9);
  EXPECT_LE(scores[interior], 1.2);
  EXPECT_NEAR(scores[interior], oracle[interior], 1e-12);
}

TEST(LofTest, DistantPointScoresHigh) {
  std::vector<double> values;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) values.insert(values.end(), {double(r), double(c)});
  values.insert(values.end(), {1.0 + 10.0, 1.0});
  const FeatureMatrix x(10, 2, values);
  const ScoreVector scores = LofScores(x, 3);
  EXPECT_GT(scores[9], 1.5);
  EXPECT_NEAR(scores[9], testing::BruteForceLof(x, 3)[9], 1e-12 * scores[9]);
}

TEST(LofTest, IdenticalPointsScoreExactlyOne) {
  const FeatureMatrix x(30, 2, std::vector<double>(60, 2.5));
  for (double s : LofScores(x, 5)) EXPECT_EQ(s, 1.0);
}

TEST(LofTest, DuplicateGroupLargerThanKScoresOne) {
  std::vector<double> values(2 * 12, 0.0);  // 12 copies of the origin
  values.insert(values.end(), {3, 0, 0, 4, 5, 5});
  const ScoreVector scores = LofScores(FeatureMatrix(15, 2, values), 4);
  for (std::size_t i = 0; i < 12; ++i) EXPECT_EQ(scores[i], 1.0);
}

TEST(LofTest, MatchesDefinitionOracle) {
  RngStream rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + rng.UniformIndex(98);
    const std::size_t d = 1 + rng.UniformIndex(3);
    const bool integer = trial % 2 == 0;  // half the trials are tie-heavy
    std::vector<double> values(n * d);
    for (double& v : values) v = integer ? double(rng.UniformIndex(5)) : rng.Normal();
    const FeatureMatrix x(n, d, values);
    const std::size_t k = 1 + rng.UniformIndex(std::min<std::size_t>(n - 1, 25));
    const ScoreVector got = LofScores(x, k);
    const ScoreVector want = testing::BruteForceLof(x, k);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(got[i], want[i], 1e-12 * std::max(1.0, std::abs(want[i])))
          << "trial " << trial << " sample " << i;
    }
  }
}

TEST(LofTest, RejectsKAtLeastN) {
  EXPECT_THROW(LofScores(Column({1, 2, 3}), 3), Error);
}

// --- Isolation forest ------------------------------------------------------

TEST(IsolationForestTest, PathLengthNormalizer) {
  EXPECT_EQ(AveragePathLength(1), 0.0);
  EXPECT_EQ(AveragePathLength(2), 1.0);
  const double expected = 2.0 * (std::log(255.0) + 0.5772156649) - 2.0 * 255.0 / 256.0;
  EXPECT_DOUBLE_EQ(AveragePathLength(256), expected);
  // E[h] = c(psi) is the 0.5 fixed point of the score.
  EXPECT_DOUBLE_EQ(IsolationScore(AveragePathLength(256), 256), 0.5);
  EXPECT_DOUBLE_EQ(IsolationScore(0.0, 64), 1.0);
}

TEST(IsolationForestTest, ScoresLieInOpenUnitInterval) {
  const FeatureMatrix x = GaussianCloud(300, 3, 1);
  DetectorConfig cfg;
  cfg.seed = 3;
  for (double s : IsolationForestScores(x, cfg)) {
    EXPECT_GT(s, 0.0);
    EXPECT_LT(s, 1.0);
  }
}

TEST(IsolationForestTest, PlantedPointHasMaximumScoreAcrossSeeds) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RngStream rng(seed, 99);
    std::vector<double> values;
    for (int i = 0; i < 256; ++i) values.insert(values.end(), {rng.Normal(), rng.Normal()});
    values.insert(values.end(), {10.0, 10.0});
    DetectorConfig cfg;
    cfg.seed = seed;
    const ScoreVector s = IsolationForestScores(FeatureMatrix(257, 2, values), cfg);
    EXPECT_EQ(std::max_element(s.begin(), s.end()) - s.begin(), 256) << "seed " << seed;
  }
}

TEST(IsolationForestTest, DeterministicAndClampsSubsample) {
  const FeatureMatrix x = GaussianCloud(100, 2, 4);
  DetectorConfig cfg;
  cfg.seed = 12;
  EXPECT_EQ(IsolationForestScores(x, cfg), IsolationForestScores(x, cfg));
  const IsolationForest forest = IsolationForest::Fit(x, cfg);
  EXPECT_TRUE(forest.subsample_clamped());
  EXPECT_EQ(forest.subsample(), 100u);
  EXPECT_EQ(forest.height_limit(), 7u);
  cfg.seed = 13;
  EXPECT_NE(IsolationForestScores(x, cfg), IsolationForest::Fit(x, DetectorConfig{}).Score(x));
}

// --- One-class SVM ---------------------------------------------------------

// Projected gradient descent on the unmerged dual over the capped simplex;
// the projection is found by bisection on the shift.
double DualObjectiveOracle(const FeatureMatrix& x, double nu, double gamma) {
  const std::size_t n = x.samples();
  const double cap = 1.0 / (nu * double(n));
  Matrix q(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double sq = 0.0;
      for (std::size_t c = 0; c < x.features(); ++c)
        sq += (x(i, c) - x(j, c)) * (x(i, c) - x(j, c));
      q(i, j) = std::exp(-gamma * sq);
    }
  auto project = [&](std::vector<double> v) {
    double lo = -1e3, hi = 1e3;
    for (int it = 0; it < 200; ++it) {
      const double tau = 0.5 * (lo + hi);
      double sum = 0.0;
      for (double e : v) sum += std::clamp(e - tau, 0.0, cap);
      (sum > 1.0 ? lo : hi) = tau;
    }
    const double tau = 0.5 * (lo + hi);
    for (double& e : v) e = std::clamp(e - tau, 0.0, cap);
    return v;
  };
  std::vector<double> a(n, 1.0 / double(n));
  const double step = 1.0 / double(n);  // Lipschitz bound: |Q|_2 <= n
  for (int it = 0; it < 20000; ++it) {
    const std::vector<double> g = q * a;
    for (std::size_t i = 0; i < n; ++i) a[i] -= step * g[i];
    a = project(std::move(a));
  }
  const std::vector<double> g = q * a;
  return 0.5 * std::inner_product(a.begin(), a.end(), g.begin(), 0.0);
}

TEST(OcsvmTest, DualObjectiveMatchesProjectedGradientOracle) {
  RngStream rng(8);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n = 20 + rng.UniformIndex(20);
    std::vector<double> values(2 * n);
    for (double& v : values) v = trial % 2 ? double(rng.UniformIndex(4)) : rng.Normal();
    const FeatureMatrix x(n, 2, values);
    DetectorConfig cfg;
    cfg.ocsvm_nu = 0.1 + 0.1 * trial;
    cfg.ocsvm_tolerance = 1e-8;
    const OneClassSvm model = OneClassSvm::Fit(x, cfg);
    const double oracle = DualObjectiveOracle(x, *cfg.ocsvm_nu, model.gamma());
    EXPECT_NEAR(model.dual_objective(), oracle, 1e-7) << "trial " << trial;
    EXPECT_LE(model.kkt_violation(), 1e-8);
    double total = 0.0;
    for (double c : model.coefficients()) total += c;
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(OcsvmTest, IdenticalPointsHaveNoPositiveScore) {
  const FeatureMatrix x(40, 2, std::vector<double>(80, -1.5));
  DetectorConfig cfg;
  cfg.ocsvm_nu = 0.1;
  for (double s : OcsvmScores(x, cfg)) EXPECT_LE(s, 0.0);
}

TEST(OcsvmTest, PlantedPointHasMaximumScore) {
  RngStream rng(21);
  std::vector<double> values;
  for (int i = 0; i < 200; ++i) values.insert(values.end(), {rng.Normal(), rng.Normal()});
  values.insert(values.end(), {8.0, 0.0});
  DetectorConfig cfg;
  const ScoreVector s = OcsvmScores(FeatureMatrix(201, 2, values), cfg);
  EXPECT_EQ(std::max_element(s.begin(), s.end()) - s.begin(), 200);
}

TEST(OcsvmTest, NuBoundsTheTrainingOutlierFraction) {
  const FeatureMatrix x = GaussianCloud(400, 2, 31);
  DetectorConfig cfg;
  cfg.ocsvm_nu = 0.5;
  const ScoreVector s = OcsvmScores(x, cfg);
  const auto positive = std::count_if(s.begin(), s.end(), [](double v) { return v > 0.0; });
  EXPECT_LE(double(positive) / 400.0, 0.5 + 1.0 / 400.0);
}

TEST(OcsvmTest, MergingDuplicatesDoesNotChangeTheDecisionFunction) {
  // The same points, once with every row doubled: the doubled problem has
  // the same distinct rows with doubled multiplicities and n, so identical
  // bounds and an identical optimum.
  const FeatureMatrix base = GaussianCloud(60, 2, 5);
  std::vector<double> doubled;
  for (std::size_t i = 0; i < 60; ++i)
    for (int rep = 0; rep < 2; ++rep)
      doubled.insert(doubled.end(), base.sample(i).begin(), base.sample(i).end());
  DetectorConfig cfg;
  cfg.ocsvm_gamma = 0.5;
  cfg.ocsvm_tolerance = 1e-9;
  const OneClassSvm a = OneClassSvm::Fit(base, cfg);
  const OneClassSvm b = OneClassSvm::Fit(FeatureMatrix(120, 2, doubled), cfg);
  for (std::size_t i = 0; i < 60; ++i) {
    EXPECT_NEAR(a.Score(base.sample(i)), b.Score(base.sample(i)), 1e-7);
  }
}

TEST(OcsvmTest, NonConvergenceCarriesViolation) {
  const FeatureMatrix x = GaussianCloud(100, 2, 6);
  DetectorConfig cfg;
  cfg.ocsvm_max_iterations = 1;
  try {
    OneClassSvm::Fit(x, cfg);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNumeric);
    EXPECT_GT(e.violation(), cfg.ocsvm_tolerance);
    EXPECT_EQ(e.iterations(), 1u);
  }
}

TEST(OcsvmTest, DefaultGammaUsesOverallVariance) {
  const FeatureMatrix x(2, 2, {0, 0, 2, 2});  // var over entries = 1
  EXPECT_DOUBLE_EQ(OneClassSvm::DefaultGamma(x), 0.5);
  EXPECT_DOUBLE_EQ(OneClassSvm::DefaultGamma(FeatureMatrix(2, 1, {3, 3})), 1.0);
}

// --- MCD / elliptic envelope -----------------------------------------------

TEST(McdTest, FullSupportEqualsClassicalEstimate) {
  const FeatureMatrix x = GaussianCloud(50, 3, 9);
  DetectorConfig cfg;
  cfg.mcd_h = 50;
  const McdEstimate est = FitMcd(x, cfg);
  for (std::size_t c = 0; c < 3; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < 50; ++r) mean += x(r, c);
    mean /= 50.0;
    EXPECT_NEAR(est.raw_location[c], mean, 1e-12);
  }
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      double cov = 0.0;
      for (std::size_t r = 0; r < 50; ++r)
        cov += (x(r, a) - est.raw_location[a]) * (x(r, b) - est.raw_location[b]);
      EXPECT_NEAR(est.raw_covariance(a, b), cov / 50.0, 1e-12);
    }
  }
}

TEST(McdTest, StandardizedDataScoresApproachEuclideanNorms) {
  const FeatureMatrix x = GaussianCloud(10000, 2, 10);
  DetectorConfig cfg;
  cfg.seed = 1;
  const ScoreVector s = McdScores(x, cfg);
  double err = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < x.samples(); ++i) {
    const double e = std::hypot(x(i, 0), x(i, 1));
    err += (s[i] - e) * (s[i] - e);
    norm += e * e;
  }
  EXPECT_LE(std::sqrt(err / norm), 0.1);
}

TEST(McdTest, PlantedPointsHoldTheLargestScores) {
  RngStream rng(13);
  std::vector<double> values;
  for (int i = 0; i < 95; ++i) values.insert(values.end(), {rng.Normal(), rng.Normal()});
  for (int i = 0; i < 5; ++i) {
    const double angle = 2.0 * 3.141592653589793 * i / 5.0;
    values.insert(values.end(), {8.0 * std::cos(angle), 8.0 * std::sin(angle)});
  }
  const ScoreVector s = McdScores(FeatureMatrix(100, 2, values), DetectorConfig{});
  std::vector<std::size_t> order(100);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return s[a] > s[b]; });
  std::vector<std::size_t> top(order.begin(), order.begin() + 5);
  std::sort(top.begin(), top.end());
  EXPECT_EQ(top, (std::vector<std::size_t>{95, 96, 97, 98, 99}));
}

TEST(McdTest, ErrorsOnDegenerateOrUndersizedInput) {
  // Collinear points: every covariance is singular.
  std::vector<double> line;
  for (int i = 0; i < 20; ++i) line.insert(line.end(), {double(i), 2.0 * i});
  try {
    FitMcd(FeatureMatrix(20, 2, line), DetectorConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNumeric);
    EXPECT_NE(std::string(e.what()).find("degenerate data"), std::string::npos);
  }
  EXPECT_THROW(FitMcd(FeatureMatrix(2, 2, {1, 2, 3, 5}), DetectorConfig{}), Error);
  DetectorConfig small_h;
  small_h.mcd_h = 5;
  EXPECT_THROW(FitMcd(GaussianCloud(20, 2, 1), small_h), Error);
}

// --- Thresholding and fusion -----------------------------------------------

TEST(ThresholdTest, TopScoresByCount) {
  const std::vector<double> scores = Range(1, 10);
  const FlagVector flags = ThresholdByContamination(scores, 0.2);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(flags[i], i >= 8);
  const FlagVector none = ThresholdByContamination(scores, 0.0);
  EXPECT_EQ(std::count(none.begin(), none.end(), true), 0);
}

TEST(ThresholdTest, TiesGoToLowerIndex) {
  const FlagVector flags = ThresholdByContamination(std::vector<double>(10, 1.0), 0.3);
  EXPECT_EQ(flags, (FlagVector{true, true, true, false, false, false, false, false, false,
                               false}));
}

TEST(ThresholdTest, FlagsExactlyFloorCount) {
  RngStream rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng.UniformIndex(300);
    std::vector<double> scores(n);
    for (double& s : scores) s = double(rng.UniformIndex(5));
    const double c = rng.Uniform(0.0, 0.5);
    const FlagVector flags = ThresholdByContamination(scores, c);
    EXPECT_EQ(std::size_t(std::count(flags.begin(), flags.end(), true)),
              std::size_t(std::floor(c * double(n))));
  }
  EXPECT_THROW(ThresholdByContamination(std::vector<double>{1.0}, 0.6), Error);
}

std::array<FlagVector, kDetectorCount> SinglePattern(unsigned mask) {
  std::array<FlagVector, kDetectorCount> votes;
  for (std::size_t k = 0; k < kDetectorCount; ++k) votes[k] = {bool((mask >> k) & 1u)};
  return votes;
}

TEST(FusionTest, ExhaustiveTruthTable) {
  for (unsigned mask = 0; mask < 32; ++mask) {
    const auto verdict = FuseVotes(SinglePattern(mask))[0];
    const int count = __builtin_popcount(mask);
    EXPECT_EQ(verdict.vote_count, std::size_t(count));
    EXPECT_EQ(verdict.is_outlier, count >= 3) << "mask " << mask;
  }
  EXPECT_TRUE(FuseVotes(SinglePattern(0b00111))[0].is_outlier);
  EXPECT_FALSE(FuseVotes(SinglePattern(0b00011))[0].is_outlier);
  EXPECT_TRUE(FuseVotes(SinglePattern(0b11111))[0].is_outlier);
}

TEST(FusionTest, AddingAVoteNeverClearsAnOutlier) {
  for (unsigned mask = 0; mask < 32; ++mask) {
    for (unsigned bit = 0; bit < 5; ++bit) {
      const bool before = FuseVotes(SinglePattern(mask))[0].is_outlier;
      const bool after = FuseVotes(SinglePattern(mask | (1u << bit)))[0].is_outlier;
      EXPECT_TRUE(!before || after);
    }
  }
}

TEST(FusionTest, LengthMismatchIsAShapeError) {
  auto votes = SinglePattern(0);
  votes[2].push_back(true);
  try {
    FuseVotes(votes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kShape);
  }
}

TEST(FusionTest, RunIsDeterministicAndWritesCsv) {
  const auto data = testing::MakePlantedData(300, 0.05, 3, 8.0, 12.0);
  DetectorConfig cfg;
  cfg.seed = 5;
  const FusionResult a = RunFusion(data.x, cfg);
  const FusionResult b = RunFusion(data.x, cfg);
  std::ostringstream csv_a, csv_b;
  WriteVerdictCsv(csv_a, a.verdicts);
  WriteVerdictCsv(csv_b, b.verdicts);
  EXPECT_EQ(csv_a.str(), csv_b.str());
  EXPECT_EQ(a.scores, b.scores);
  EXPECT_TRUE(a.warnings.empty());
  const auto small = testing::MakePlantedData(100, 0.05, 3, 8.0, 12.0);
  EXPECT_EQ(RunFusion(small.x, cfg).warnings.size(), 1u);  // subsample clamped to n
  const std::string text = csv_a.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "sample_id,vote_iqr,vote_lof,vote_ocsvm,vote_iforest,vote_elliptic,vote_count,"
            "is_outlier");
}

TEST(FusionTest, CsvUsesSuppliedIds) {
  std::array<FlagVector, kDetectorCount> votes;
  for (auto& v : votes) v = {true, false};
  const auto verdicts = FuseVotes(votes);
  const std::vector<std::string> ids = {"a.png", "b.png"};
  std::ostringstream out;
  WriteVerdictCsv(out, verdicts, std::span<const std::string>(ids));
  EXPECT_EQ(out.str(),
            "sample_id,vote_iqr,vote_lof,vote_ocsvm,vote_iforest,vote_elliptic,vote_count,"
            "is_outlier\na.png,1,1,1,1,1,5,1\nb.png,0,0,0,0,0,0,0\n");
}

}  // namespace
}  // namespace ofuse
