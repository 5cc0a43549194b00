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

#ifndef OFUSE_NUMERIC_MATRIX_H_
#define OFUSE_NUMERIC_MATRIX_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ofuse {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  // Row-list constructor, mostly for tests: Matrix{{1, 2}, {3, 4}}.
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix Identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return values_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  std::vector<double> column(std::size_t c) const;

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  Matrix Transposed() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
std::vector<double> operator*(const Matrix& a, std::span<const double> x);

// Samples as rows, features as columns. Construction validates n >= 1,
// d >= 1 and that every value is finite.
class FeatureMatrix {
 public:
  explicit FeatureMatrix(Matrix values);
  FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t samples() const { return values_.rows(); }
  std::size_t features() const { return values_.cols(); }
  double operator()(std::size_t r, std::size_t c) const { return values_(r, c); }
  std::span<const double> sample(std::size_t r) const { return values_.row(r); }
  std::vector<double> feature(std::size_t c) const { return values_.column(c); }
  const Matrix& matrix() const { return values_; }

 private:
  Matrix values_;
};

double SquaredDistance(std::span<const double> a, std::span<const double> b);
double Dot(std::span<const double> a, std::span<const double> b);

}  // namespace ofuse

#endif  // OFUSE_NUMERIC_MATRIX_H_
