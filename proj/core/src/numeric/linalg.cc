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

#include "ofuse/numeric/linalg.h"

#include <cmath>

#include "ofuse/error.h"

namespace ofuse {

std::optional<Cholesky> Cholesky::TryFactor(const Matrix& a) {
  Require(a.rows() == a.cols(), ErrorKind::kShape, "cholesky of non-square matrix");
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0)) return std::nullopt;
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / ljj;
    }
  }
  return Cholesky(std::move(l));
}

Cholesky Cholesky::Factor(const Matrix& a) {
  auto factor = TryFactor(a);
  if (!factor) Fail(ErrorKind::kNumeric, "matrix is not positive definite");
  return *std::move(factor);
}

std::vector<double> Cholesky::Solve(std::span<const double> b) const {
  const std::size_t n = lower_.rows();
  Require(b.size() == n, ErrorKind::kShape, "right-hand side length mismatch");
  std::vector<double> y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= lower_(i, k) * y[k];
    y[i] /= lower_(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n; ++k) y[ii] -= lower_(k, ii) * y[k];
    y[ii] /= lower_(ii, ii);
  }
  return y;
}

double Cholesky::LogDeterminant() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < lower_.rows(); ++i) sum += std::log(lower_(i, i));
  return 2.0 * sum;
}

std::vector<double> SolveSpd(const Matrix& a, std::span<const double> b) {
  Require(a.rows() == a.cols(), ErrorKind::kShape, "solve_spd needs a square matrix");
  Require(b.size() == a.rows(), ErrorKind::kShape, "solve_spd right-hand side mismatch");
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      Require(std::abs(a(i, j) - a(j, i)) <= 1e-10, ErrorKind::kDomain,
              "solve_spd matrix is not symmetric");
    }
  }
  return Cholesky::Factor(a).Solve(b);
}

Matrix InverseSpd(const Matrix& a) {
  const Cholesky chol = Cholesky::Factor(a);
  const std::size_t n = a.rows();
  Matrix inv(n, n);
  std::vector<double> e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const std::vector<double> col = chol.Solve(e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    e[j] = 0.0;
  }
  return inv;
}

}  // namespace ofuse
