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

#ifndef OFUSE_OUTLIER_OCSVM_H_
#define OFUSE_OUTLIER_OCSVM_H_

#include <cstddef>
#include <span>
#include <vector>

#include "ofuse/error.h"
#include "ofuse/numeric/matrix.h"
#include "ofuse/outlier/detector.h"

namespace ofuse {

// SMO ran out of iterations; carries the last maximal KKT violation.
class ConvergenceError : public Error {
 public:
  ConvergenceError(double violation, std::size_t iterations);
  double violation() const { return violation_; }
  std::size_t iterations() const { return iterations_; }

 private:
  double violation_;
  std::size_t iterations_;
};

// RBF one-class SVM, nu-parameterised:
//
//   min_a 1/2 a^T Q a   s.t.  0 <= a_i <= 1 / (nu n),  sum_i a_i = 1,
//   Q_ij = exp(-gamma |x_i - x_j|^2).
//
// Solved by pairwise SMO with second-order working-set selection. Identical
// samples share one kernel row, so they are merged into a single variable
// whose upper bound is multiplicity / (nu n); the decision function is the
// same as for the unmerged problem.
class OneClassSvm {
 public:
  // Throws kDomain for n < 2, ConvergenceError past cfg.ocsvm_max_iterations.
  static OneClassSvm Fit(const FeatureMatrix& x, const DetectorConfig& cfg);

  // Default kernel width 1 / (d * var(X)) over all entries; 1 if var is 0.
  static double DefaultGamma(const FeatureMatrix& x);

  // sum_i a_i K(x_i, point) - rho; negative outside the learned region.
  double Decision(std::span<const double> point) const;
  // rho - sum_i a_i K(x_i, point); higher = more anomalous.
  double Score(std::span<const double> point) const { return -Decision(point); }
  ScoreVector Score(const FeatureMatrix& x) const;

  double rho() const { return rho_; }
  double gamma() const { return gamma_; }
  double nu() const { return nu_; }
  double dual_objective() const { return dual_objective_; }
  double kkt_violation() const { return kkt_violation_; }
  std::size_t iterations() const { return iterations_; }
  const Matrix& support_vectors() const { return support_; }
  const std::vector<double>& coefficients() const { return coef_; }

 private:
  Matrix support_;
  std::vector<double> coef_;
  double rho_ = 0.0;
  double gamma_ = 1.0;
  double nu_ = 0.5;
  double dual_objective_ = 0.0;
  double kkt_violation_ = 0.0;
  std::size_t iterations_ = 0;
};

ScoreVector OcsvmScores(const FeatureMatrix& x, const DetectorConfig& cfg);

}  // namespace ofuse

#endif  // OFUSE_OUTLIER_OCSVM_H_
