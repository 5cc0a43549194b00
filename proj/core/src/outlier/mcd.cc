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

#include "ofuse/outlier/mcd.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>

#include <boost/math/distributions/chi_squared.hpp>

#include "ofuse/error.h"
#include "ofuse/numeric/linalg.h"
#include "ofuse/numeric/rng.h"

namespace ofuse {
namespace {

constexpr std::uint64_t kMcdStream = 0x3cd'e111;

struct Moments {
  std::vector<double> mean;
  Matrix covariance;
};

Moments SubsetMoments(const FeatureMatrix& x, std::span<const std::size_t> rows) {
  const std::size_t d = x.features();
  const double m = static_cast<double>(rows.size());
  Moments out{std::vector<double>(d, 0.0), Matrix(d, d)};
  for (std::size_t r : rows)
    for (std::size_t c = 0; c < d; ++c) out.mean[c] += x(r, c);
  for (double& v : out.mean) v /= m;
  for (std::size_t r : rows) {
    for (std::size_t a = 0; a < d; ++a) {
      const double da = x(r, a) - out.mean[a];
      for (std::size_t b = 0; b <= a; ++b) out.covariance(a, b) += da * (x(r, b) - out.mean[b]);
    }
  }
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      out.covariance(a, b) /= m;
      out.covariance(b, a) = out.covariance(a, b);
    }
  }
  return out;
}

std::vector<double> SquaredMahalanobis(const FeatureMatrix& x, std::span<const double> mean,
                                       const Cholesky& chol) {
  const std::size_t d = x.features();
  const Matrix& l = chol.lower();
  std::vector<double> out(x.samples());
  std::vector<double> z(d);
  for (std::size_t r = 0; r < x.samples(); ++r) {
    // Forward substitution L z = x - mean; distance^2 = |z|^2.
    double sum = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      double v = x(r, i) - mean[i];
      for (std::size_t k = 0; k < i; ++k) v -= l(i, k) * z[k];
      z[i] = v / l(i, i);
      sum += z[i] * z[i];
    }
    out[r] = sum;
  }
  return out;
}

// Indices of the h smallest distances, ties to the lower index, ascending.
std::vector<std::size_t> SmallestH(std::span<const double> dist, std::size_t h) {
  std::vector<std::pair<double, std::size_t>> keyed(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) keyed[i] = {dist[i], i};
  std::nth_element(keyed.begin(), keyed.begin() + static_cast<long>(h - 1), keyed.end());
  std::vector<std::size_t> subset(h);
  for (std::size_t i = 0; i < h; ++i) subset[i] = keyed[i].second;
  std::sort(subset.begin(), subset.end());
  return subset;
}

struct Candidate {
  std::vector<std::size_t> support;
  Moments moments;
  double log_det = std::numeric_limits<double>::infinity();
};

// Singular when a squared Cholesky pivot drops below 1e-12 of the largest
// variance.
bool Regular(const Matrix& cov, const std::optional<Cholesky>& chol) {
  if (!chol) return false;
  double scale = 0.0;
  for (std::size_t i = 0; i < cov.rows(); ++i) scale = std::max(scale, cov(i, i));
  if (!(scale > 0.0)) return false;
  const Matrix& l = chol->lower();
  for (std::size_t i = 0; i < cov.rows(); ++i) {
    if (l(i, i) * l(i, i) < 1e-12 * scale) return false;
  }
  return true;
}

std::optional<Candidate> RunRestart(const FeatureMatrix& x, std::size_t h,
                                    std::size_t max_csteps, RngStream& rng) {
  const std::size_t n = x.samples();
  const std::size_t d = x.features();

  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  std::size_t taken = 0;
  auto draw = [&] {
    std::swap(pool[taken], pool[taken + rng.UniformIndex(n - taken)]);
    ++taken;
  };
  for (std::size_t i = 0; i < d + 1; ++i) draw();
  Moments start = SubsetMoments(x, std::span(pool.data(), taken));
  std::optional<Cholesky> chol = Cholesky::TryFactor(start.covariance);
  while (!Regular(start.covariance, chol) && taken < n) {
    draw();
    start = SubsetMoments(x, std::span(pool.data(), taken));
    chol = Cholesky::TryFactor(start.covariance);
  }
  if (!Regular(start.covariance, chol)) return std::nullopt;

  std::optional<Candidate> best;
  std::vector<double> dist = SquaredMahalanobis(x, start.mean, *chol);
  for (std::size_t step = 0; step < max_csteps; ++step) {
    std::vector<std::size_t> subset = SmallestH(dist, h);
    if (best && subset == best->support) break;
    Moments m = SubsetMoments(x, subset);
    chol = Cholesky::TryFactor(m.covariance);
    if (!Regular(m.covariance, chol)) break;
    const double log_det = chol->LogDeterminant();
    if (best && log_det > best->log_det) break;
    dist = SquaredMahalanobis(x, m.mean, *chol);
    best = Candidate{std::move(subset), std::move(m), log_det};
  }
  return best;
}

}  // namespace

McdEstimate FitMcd(const FeatureMatrix& x, const DetectorConfig& cfg) {
  const std::size_t n = x.samples();
  const std::size_t d = x.features();
  Require(n > d, ErrorKind::kDomain, "MCD needs more samples than features");
  const std::size_t h_min = MinimumMcdSupport(n, d);
  const std::size_t h = cfg.mcd_h.value_or(h_min);
  Require(h >= h_min && h <= n, ErrorKind::kConfig,
          "mcd_h must lie in [ceil((n+d+1)/2), n]");

  const RngStream base(cfg.seed, kMcdStream);
  std::optional<Candidate> best;
  std::size_t used = 0;
  for (std::size_t r = 0; r < cfg.mcd_restarts; ++r) {
    RngStream rng = base.Split(r);
    auto candidate = RunRestart(x, h, cfg.mcd_max_csteps, rng);
    if (!candidate) continue;
    ++used;
    if (!best || candidate->log_det < best->log_det) best = std::move(candidate);
  }
  if (!best) Fail(ErrorKind::kNumeric, "degenerate data: MCD covariance singular in every restart");

  McdEstimate est;
  est.restarts_used = used;
  est.support = best->support;
  est.raw_location = best->moments.mean;
  est.raw_covariance = best->moments.covariance;
  est.raw_log_det = best->log_det;

  // Consistency correction to the chi-square median, then reweighting.
  const boost::math::chi_squared chi2(static_cast<double>(d));
  Matrix corrected = est.raw_covariance;
  std::vector<double> dist =
      SquaredMahalanobis(x, est.raw_location, Cholesky::Factor(est.raw_covariance));
  std::vector<double> sorted = dist;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(n / 2), sorted.end());
  double median = sorted[n / 2];
  if (n % 2 == 0) {
    median = 0.5 * (median + *std::max_element(sorted.begin(),
                                               sorted.begin() + static_cast<long>(n / 2)));
  }
  if (median > 0.0) {
    const double factor = median / boost::math::quantile(chi2, 0.5);
    for (double& v : corrected.values()) v *= factor;
    for (double& v : dist) v /= factor;
  }

  const double cutoff = boost::math::quantile(chi2, 0.975);
  std::vector<std::size_t> inliers;
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i] < cutoff) inliers.push_back(i);
  }
  est.location = est.raw_location;
  est.covariance = corrected;
  if (inliers.size() > d) {
    Moments reweighted = SubsetMoments(x, inliers);
    const auto chol = Cholesky::TryFactor(reweighted.covariance);
    if (Regular(reweighted.covariance, chol)) {
      est.location = std::move(reweighted.mean);
      est.covariance = std::move(reweighted.covariance);
    }
  }
  return est;
}

ScoreVector MahalanobisDistances(const FeatureMatrix& x, std::span<const double> location,
                                 const Matrix& covariance) {
  Require(location.size() == x.features() && covariance.rows() == x.features(),
          ErrorKind::kShape, "Mahalanobis location/covariance shape mismatch");
  ScoreVector out = SquaredMahalanobis(x, location, Cholesky::Factor(covariance));
  for (double& v : out) v = std::sqrt(v);
  return out;
}

ScoreVector McdScores(const FeatureMatrix& x, const DetectorConfig& cfg) {
  const McdEstimate est = FitMcd(x, cfg);
  return MahalanobisDistances(x, est.location, est.covariance);
}

}  // namespace ofuse
