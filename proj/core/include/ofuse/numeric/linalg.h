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

#ifndef OFUSE_NUMERIC_LINALG_H_
#define OFUSE_NUMERIC_LINALG_H_

#include <optional>
#include <span>
#include <vector>

#include "ofuse/numeric/matrix.h"

namespace ofuse {

// Lower-triangular Cholesky factor L with A = L L^T.
class Cholesky {
 public:
  // Returns nullopt when a pivot is not strictly positive.
  static std::optional<Cholesky> TryFactor(const Matrix& a);
  // Throws kNumeric "not positive definite" on failure.
  static Cholesky Factor(const Matrix& a);

  std::vector<double> Solve(std::span<const double> b) const;
  double LogDeterminant() const;
  const Matrix& lower() const { return lower_; }

 private:
  explicit Cholesky(Matrix lower) : lower_(std::move(lower)) {}
  Matrix lower_;
};

// Solves A x = b for symmetric positive-definite A. A must be symmetric to
// 1e-10 (kDomain otherwise).
std::vector<double> SolveSpd(const Matrix& a, std::span<const double> b);

// Inverse of an SPD matrix via its Cholesky factor.
Matrix InverseSpd(const Matrix& a);

}  // namespace ofuse

#endif  // OFUSE_NUMERIC_LINALG_H_
