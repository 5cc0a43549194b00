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

#include "ofuse/outlier/ocsvm.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <string>
#include <unordered_map>

#include "unique_rows.h"

namespace ofuse {
namespace {

constexpr double kTau = 1e-12;
constexpr std::size_t kDenseKernelLimit = 3000;
constexpr std::size_t kCacheBytes = std::size_t{256} << 20;

// Kernel columns over the distinct training points. Small problems keep
// the whole Gram matrix; larger ones use a bounded LRU column cache.
class KernelColumns {
 public:
  KernelColumns(const Matrix& points, double gamma) : points_(points), gamma_(gamma) {
    const std::size_t u = points.rows();
    if (u <= kDenseKernelLimit) {
      dense_.resize(u * u);
      for (std::size_t i = 0; i < u; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
          const double k = Eval(i, j);
          dense_[i * u + j] = k;
          dense_[j * u + i] = k;
        }
      }
    } else {
      capacity_ = std::max<std::size_t>(2, kCacheBytes / (sizeof(double) * u));
    }
  }

  double Eval(std::size_t i, std::size_t j) const {
    return std::exp(-gamma_ * SquaredDistance(points_.row(i), points_.row(j)));
  }

  std::span<const double> Column(std::size_t i) {
    const std::size_t u = points_.rows();
    if (!dense_.empty()) return {dense_.data() + i * u, u};
    if (auto it = index_.find(i); it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->second;
    }
    if (lru_.size() >= capacity_) {
      index_.erase(lru_.back().first);
      lru_.pop_back();
    }
    std::vector<double> col(u);
    for (std::size_t t = 0; t < u; ++t) col[t] = Eval(i, t);
    lru_.emplace_front(i, std::move(col));
    index_[i] = lru_.begin();
    return lru_.front().second;
  }

 private:
  const Matrix& points_;
  double gamma_;
  std::vector<double> dense_;
  std::size_t capacity_ = 0;
  std::list<std::pair<std::size_t, std::vector<double>>> lru_;
  std::unordered_map<std::size_t,
                     std::list<std::pair<std::size_t, std::vector<double>>>::iterator>
      index_;
};

}  // namespace

ConvergenceError::ConvergenceError(double violation, std::size_t iterations)
    : Error(ErrorKind::kNumeric, "one-class SVM did not converge after " +
                                     std::to_string(iterations) +
                                     " iterations; max KKT violation " +
                                     std::to_string(violation)),
      violation_(violation),
      iterations_(iterations) {}

double OneClassSvm::DefaultGamma(const FeatureMatrix& x) {
  const auto values = x.matrix().values();
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  if (var == 0.0) return 1.0;
  return 1.0 / (static_cast<double>(x.features()) * var);
}

OneClassSvm OneClassSvm::Fit(const FeatureMatrix& x, const DetectorConfig& cfg) {
  const std::size_t n = x.samples();
  Require(n >= 2, ErrorKind::kDomain, "one-class SVM needs n >= 2");
  const double nu = cfg.nu();
  Require(nu > 0.0 && nu <= 1.0, ErrorKind::kConfig, "ocsvm nu must lie in (0, 1]");

  OneClassSvm model;
  model.nu_ = nu;
  model.gamma_ = cfg.ocsvm_gamma.value_or(DefaultGamma(x));

  const internal::UniqueRows unique = internal::GroupUniqueRows(x);
  const std::size_t u = unique.counts.size();
  std::vector<double> upper(u);
  for (std::size_t t = 0; t < u; ++t) {
    upper[t] = static_cast<double>(unique.counts[t]) / (nu * static_cast<double>(n));
  }

  // Feasible start: fill bounds in order until the weights sum to one.
  std::vector<double> alpha(u, 0.0);
  double remaining = 1.0;
  for (std::size_t t = 0; t < u && remaining > 0.0; ++t) {
    alpha[t] = std::min(upper[t], remaining);
    remaining -= alpha[t];
  }

  KernelColumns kernel(unique.points, model.gamma_);
  std::vector<double> grad(u, 0.0);
  for (std::size_t t = 0; t < u; ++t) {
    if (alpha[t] == 0.0) continue;
    const auto col = kernel.Column(t);
    for (std::size_t s = 0; s < u; ++s) grad[s] += col[s] * alpha[t];
  }

  auto below_upper = [&](std::size_t t) { return alpha[t] < upper[t]; };
  auto above_lower = [&](std::size_t t) { return alpha[t] > 0.0; };

  std::size_t iter = 0;
  double violation = 0.0;
  while (true) {
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = u;
    for (std::size_t t = 0; t < u; ++t) {
      if (below_upper(t) && -grad[t] >= gmax) {
        gmax = -grad[t];
        i = t;
      }
    }
    if (i == u) {
      violation = 0.0;
      break;
    }
    const auto qi = kernel.Column(i);
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    std::size_t j = u;
    for (std::size_t t = 0; t < u; ++t) {
      if (!above_lower(t)) continue;
      gmax2 = std::max(gmax2, grad[t]);
      const double b = gmax + grad[t];
      if (b <= 0.0) continue;
      double a = qi[i] + 1.0 - 2.0 * qi[t];  // K(t, t) = 1 for RBF
      if (a <= 0.0) a = kTau;
      if (-(b * b) / a <= best) {
        best = -(b * b) / a;
        j = t;
      }
    }
    violation = gmax + gmax2;
    if (violation < cfg.ocsvm_tolerance || j == u) break;
    if (iter >= cfg.ocsvm_max_iterations) throw ConvergenceError(violation, iter);
    ++iter;

    const std::vector<double> col_i(qi.begin(), qi.end());
    const auto qj = kernel.Column(j);
    double quad = col_i[i] + qj[j] - 2.0 * col_i[j];
    if (quad <= 0.0) quad = kTau;
    const double old_i = alpha[i];
    const double old_j = alpha[j];
    const double delta = (grad[i] - grad[j]) / quad;
    const double sum = old_i + old_j;
    alpha[i] -= delta;
    alpha[j] += delta;
    if (sum > upper[i]) {
      if (alpha[i] > upper[i]) {
        alpha[i] = upper[i];
        alpha[j] = sum - upper[i];
      }
    } else if (alpha[j] < 0.0) {
      alpha[j] = 0.0;
      alpha[i] = sum;
    }
    if (sum > upper[j]) {
      if (alpha[j] > upper[j]) {
        alpha[j] = upper[j];
        alpha[i] = sum - upper[j];
      }
    } else if (alpha[i] < 0.0) {
      alpha[i] = 0.0;
      alpha[j] = sum;
    }
    const double di = alpha[i] - old_i;
    const double dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < u; ++t) grad[t] += col_i[t] * di + qj[t] * dj;
  }

  // rho: mean gradient over free variables, else midpoint of the bounds.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < u; ++t) {
    if (alpha[t] >= upper[t]) {
      lb = std::max(lb, grad[t]);
    } else if (alpha[t] <= 0.0) {
      ub = std::min(ub, grad[t]);
    } else {
      free_sum += grad[t];
      ++free_count;
    }
  }
  model.rho_ = free_count > 0 ? free_sum / static_cast<double>(free_count) : (ub + lb) / 2.0;

  double objective = 0.0;
  std::vector<double> sv_values;
  for (std::size_t t = 0; t < u; ++t) {
    objective += 0.5 * alpha[t] * grad[t];
    if (alpha[t] > 0.0) {
      const auto row = unique.points.row(t);
      sv_values.insert(sv_values.end(), row.begin(), row.end());
      model.coef_.push_back(alpha[t]);
    }
  }
  model.support_ = Matrix(model.coef_.size(), x.features(), std::move(sv_values));
  model.dual_objective_ = objective;
  model.kkt_violation_ = violation;
  model.iterations_ = iter;
  return model;
}

double OneClassSvm::Decision(std::span<const double> point) const {
  double sum = 0.0;
  for (std::size_t s = 0; s < coef_.size(); ++s) {
    sum += coef_[s] * std::exp(-gamma_ * SquaredDistance(support_.row(s), point));
  }
  return sum - rho_;
}

ScoreVector OneClassSvm::Score(const FeatureMatrix& x) const {
  ScoreVector scores(x.samples());
  for (std::size_t i = 0; i < x.samples(); ++i) scores[i] = Score(x.sample(i));
  return scores;
}

ScoreVector OcsvmScores(const FeatureMatrix& x, const DetectorConfig& cfg) {
  return OneClassSvm::Fit(x, cfg).Score(x);
}

}  // namespace ofuse
