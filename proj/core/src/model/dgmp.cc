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

#include "ofuse/model/dgmp.h"

#include <cmath>
#include <optional>
#include <string>

#include "ofuse/error.h"
#include "ofuse/numeric/linalg.h"

namespace ofuse {
namespace {

struct Factored {
  Matrix gram;
  Cholesky chol;
};

Factored FactorSystem(const ActivationVolume& vol, double lambda) {
  ValidateVolume(vol);
  Require(std::isfinite(lambda) && lambda >= 0.0, ErrorKind::kDomain,
          "lambda must be finite and non-negative, got " + std::to_string(lambda));
  const std::size_t d = vol.channels, n = vol.plane();
  const Matrix phi(d, n, vol.data);
  Matrix gram = phi.Transposed() * phi;
  Matrix system = gram;
  for (std::size_t i = 0; i < n; ++i) system(i, i) += lambda;
  std::optional<Cholesky> chol = Cholesky::TryFactor(system);
  Require(chol.has_value(), ErrorKind::kNumeric,
          "singular Gram matrix (lambda = " + std::to_string(lambda) + ")");
  return {std::move(gram), std::move(*chol)};
}

}  // namespace

DgmpSolution DgmpForward(const ActivationVolume& vol, double lambda) {
  Factored f = FactorSystem(vol, lambda);
  const std::size_t d = vol.channels, n = vol.plane();
  DgmpSolution sol;
  sol.lambda = lambda;
  sol.alpha = f.chol.Solve(std::vector<double>(n, 1.0));
  sol.xi = Matrix(d, n, vol.data) * std::span<const double>(sol.alpha);
  sol.gram = std::move(f.gram);
  return sol;
}

ActivationVolume DgmpBackward(const ActivationVolume& vol, double lambda,
                              std::span<const double> upstream) {
  Require(upstream.size() == vol.channels, ErrorKind::kShape,
          "upstream gradient length must equal the volume depth");
  Factored f = FactorSystem(vol, lambda);
  const std::size_t d = vol.channels, n = vol.plane();
  const Matrix phi(d, n, vol.data);
  const std::vector<double> alpha = f.chol.Solve(std::vector<double>(n, 1.0));
  const std::vector<double> xi = phi * std::span<const double>(alpha);
  const std::vector<double> v = f.chol.Solve(phi.Transposed() * upstream);
  const std::vector<double> phi_v = phi * std::span<const double>(v);

  ActivationVolume grad(d, vol.height, vol.width);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      grad.data[c * n + i] = (upstream[c] - phi_v[c]) * alpha[i] - xi[c] * v[i];
    }
  }
  return grad;
}

}  // namespace ofuse
