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

#include "kernel_checks.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>

#include "ofuse/model/attention.h"
#include "ofuse/model/dgmp.h"
#include "ofuse/model/focal_loss.h"
#include "ofuse/numeric/rng.h"
#include "ofuse/outlier/fusion.h"

namespace ofuse::cli {
namespace {

constexpr std::size_t kInstances = 50;
constexpr double kStep = 1e-5;
constexpr double kGradTolerance = 1e-4;

using Objective = std::function<double(std::span<const double>)>;

double RelativeError(std::span<const double> analytic, const Objective& f,
                     std::vector<double> x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + kStep;
    const double up = f(x);
    x[i] = keep - kStep;
    const double down = f(x);
    x[i] = keep;
    const double numeric = (up - down) / (2.0 * kStep);
    const double scale = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-6});
    worst = std::max(worst, std::abs(analytic[i] - numeric) / scale);
  }
  return worst;
}

ActivationVolume RandomVolume(RngStream& rng, std::size_t d, std::size_t h, std::size_t w) {
  ActivationVolume v(d, h, w);
  for (double& x : v.data) x = rng.Uniform(-1.0, 1.0);
  return v;
}

template <typename P>
std::vector<double> Pack(P& p) {
  std::vector<double> out;
  p.ForEachTensor([&](const std::string&, const TensorShape&, std::span<double> v) {
    out.insert(out.end(), v.begin(), v.end());
  });
  return out;
}

template <typename P>
void Unpack(P& p, std::span<const double> flat) {
  std::size_t at = 0;
  p.ForEachTensor([&](const std::string&, const TensorShape&, std::span<double> v) {
    for (double& x : v) x = flat[at++];
  });
}

// Error of the gradient of <u, forward(vol, params)> over input and params.
template <typename P, typename Forward, typename Backward>
double LayerError(const ActivationVolume& vol, P params, RngStream& rng, Forward forward,
                  Backward backward) {
  const ActivationVolume u = RandomVolume(rng, vol.channels, vol.height, vol.width);
  const std::size_t nv = vol.data.size();
  std::vector<double> x = vol.data;
  const std::vector<double> packed = Pack(params);
  x.insert(x.end(), packed.begin(), packed.end());
  auto grads = backward(vol, params, u);
  std::vector<double> analytic = grads.input.data;
  const std::vector<double> gp = Pack(grads.params);
  analytic.insert(analytic.end(), gp.begin(), gp.end());
  const Objective f = [&](std::span<const double> z) {
    ActivationVolume v = vol;
    std::copy(z.begin(), z.begin() + nv, v.data.begin());
    P p = params;
    Unpack(p, z.subspan(nv));
    const ActivationVolume out = forward(v, p);
    return std::inner_product(u.data.begin(), u.data.end(), out.data.begin(), 0.0);
  };
  return RelativeError(analytic, f, std::move(x));
}

KernelCheck Repeat(const std::string& name, double tolerance, std::size_t instances,
                   const std::function<double()>& one) {
  KernelCheck check{name, instances, 0.0, tolerance};
  for (std::size_t i = 0; i < instances; ++i) check.max_error = std::max(check.max_error, one());
  return check;
}

}  // namespace

std::vector<KernelCheck> RunKernelChecks(std::uint64_t seed) {
  RngStream root(seed);
  std::vector<KernelCheck> checks;

  RngStream rng = root.Split(1);
  checks.push_back(Repeat("dgmp_unit_similarity", 1e-8, kInstances, [&] {
    const std::size_t n = 1 + rng.UniformIndex(6);
    const ActivationVolume vol = RandomVolume(rng, n + rng.UniformIndex(4), 1, n);
    const DgmpSolution s = DgmpForward(vol, 0.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double dot = 0.0;
      for (std::size_t c = 0; c < vol.channels; ++c) dot += vol.data[c * n + i] * s.xi[c];
      worst = std::max(worst, std::abs(dot - 1.0));
    }
    return worst;
  }));

  rng = root.Split(2);
  checks.push_back(Repeat("dgmp_backward", kGradTolerance, kInstances, [&] {
    const ActivationVolume vol =
        RandomVolume(rng, 1 + rng.UniformIndex(4), 1 + rng.UniformIndex(3), 1 + rng.UniformIndex(3));
    const double lambda = rng.Uniform(0.1, 2.0);
    const std::vector<double> g = [&] {
      std::vector<double> v(vol.channels);
      for (double& x : v) x = rng.Uniform(-1.0, 1.0);
      return v;
    }();
    const Objective f = [&](std::span<const double> z) {
      ActivationVolume v = vol;
      std::copy(z.begin(), z.end(), v.data.begin());
      const DgmpSolution s = DgmpForward(v, lambda);
      return std::inner_product(g.begin(), g.end(), s.xi.begin(), 0.0);
    };
    return RelativeError(DgmpBackward(vol, lambda, g).data, f, vol.data);
  }));

  rng = root.Split(3);
  checks.push_back(Repeat("focal_loss", kGradTolerance, kInstances, [&] {
    const std::size_t k = 2 + rng.UniformIndex(5);
    std::vector<double> logits(k);
    for (double& z : logits) z = rng.Uniform(-3.0, 3.0);
    FocalLossConfig cfg;
    cfg.gamma = rng.Uniform(0.0, 3.0);
    cfg.class_weights.resize(k);
    for (double& w : cfg.class_weights) w = rng.Uniform(0.5, 2.0);
    const std::size_t t = rng.UniformIndex(k);
    const Objective f = [&](std::span<const double> z) { return FocalLoss(Softmax(z), t, cfg).loss; };
    return RelativeError(FocalLoss(Softmax(logits), t, cfg).grad, f, logits);
  }));

  rng = root.Split(4);
  checks.push_back(Repeat("focal_gamma0_cross_entropy", 1e-12, 1000, [&] {
    const std::size_t k = 2 + rng.UniformIndex(9);
    std::vector<double> logits(k);
    for (double& z : logits) z = rng.Uniform(-4.0, 4.0);
    const std::vector<double> p = Softmax(logits);
    const std::size_t t = rng.UniformIndex(k);
    FocalLossConfig cfg;
    cfg.gamma = 0.0;
    return std::abs(FocalLoss(p, t, cfg).loss + std::log(p[t]));
  }));

  rng = root.Split(5);
  checks.push_back(Repeat("channel_attention", kGradTolerance, kInstances, [&] {
    const std::size_t r = 1 + rng.UniformIndex(2);
    const std::size_t d = r * (1 + rng.UniformIndex(3));
    const ActivationVolume vol = RandomVolume(rng, d, 1 + rng.UniformIndex(4), 2 + rng.UniformIndex(3));
    auto p = ChannelAttentionParams::Zeros(d, r);
    RandomizeParams(p, rng, 0.7);
    return LayerError(
        vol, p, rng, [](const auto& v, const auto& q) { return ChannelAttention(v, q).output; },
        [](const auto& v, const auto& q, const auto& g) { return ChannelAttentionBackward(v, q, g); });
  }));

  rng = root.Split(6);
  checks.push_back(Repeat("spatial_attention", kGradTolerance, kInstances, [&] {
    const ActivationVolume vol =
        RandomVolume(rng, 1 + rng.UniformIndex(4), 2 + rng.UniformIndex(5), 2 + rng.UniformIndex(5));
    auto p = SpatialAttentionParams::Zeros(rng.UniformIndex(2) ? 3 : 7);
    RandomizeParams(p, rng, 0.5);
    return LayerError(
        vol, p, rng, [](const auto& v, const auto& q) { return SpatialAttention(v, q).output; },
        [](const auto& v, const auto& q, const auto& g) { return SpatialAttentionBackward(v, q, g); });
  }));

  rng = root.Split(7);
  checks.push_back(Repeat("coordinate_attention", kGradTolerance, kInstances, [&] {
    const std::size_t r = 1 + rng.UniformIndex(2);
    const std::size_t d = r * (1 + rng.UniformIndex(3));
    const ActivationVolume vol = RandomVolume(rng, d, 1 + rng.UniformIndex(4), 1 + rng.UniformIndex(4));
    auto p = CoordinateAttentionParams::Zeros(d, r);
    RandomizeParams(p, rng, 0.7);
    return LayerError(
        vol, p, rng, [](const auto& v, const auto& q) { return CoordinateAttention(v, q).output; },
        [](const auto& v, const auto& q, const auto& g) {
          return CoordinateAttentionBackward(v, q, g);
        });
  }));

  rng = root.Split(8);
  checks.push_back(Repeat("multi_head_attention", kGradTolerance, kInstances, [&] {
    AttentionConfig cfg;
    cfg.reduction = 2;
    cfg.spatial_kernel = 3;
    const unsigned mask = 1 + unsigned(rng.UniformIndex(7));
    cfg.heads.clear();
    for (unsigned h = 0; h < 3; ++h)
      if (mask >> h & 1u) cfg.heads.push_back(AttentionHead(h));
    const std::size_t d = 2 * (1 + rng.UniformIndex(2));
    const ActivationVolume vol = RandomVolume(rng, d, 2 + rng.UniformIndex(3), 2 + rng.UniformIndex(3));
    MultiHeadParams p = MultiHeadParams::Init(d, cfg);
    RandomizeParams(p, rng, 0.6);
    return LayerError(
        vol, p, rng, [](const auto& v, const auto& q) { return MultiHeadAttention(v, q).output; },
        [](const auto& v, const auto& q, const auto& g) {
          return MultiHeadAttentionBackward(v, q, g);
        });
  }));

  // Every vote pattern of one sample; error counts mismatched verdicts.
  std::array<FlagVector, kDetectorCount> votes;
  for (unsigned mask = 0; mask < 32; ++mask)
    for (std::size_t j = 0; j < kDetectorCount; ++j) votes[j].push_back(mask >> j & 1u);
  const auto verdicts = FuseVotes(votes);
  double mismatches = 0.0;
  for (unsigned mask = 0; mask < 32; ++mask) {
    const bool want = std::popcount(mask) >= int(kFusionQuorum);
    mismatches += verdicts[mask].is_outlier != want;
  }
  checks.push_back({"fusion_truth_table", 32, mismatches, 0.0});
  return checks;
}

void WriteKernelReport(std::ostream& out, std::span<const KernelCheck> checks) {
  out << "check,instances,max_error,tolerance,status\n";
  char buf[64];
  for (const KernelCheck& c : checks) {
    out << c.name << ',' << c.instances << ',';
    std::snprintf(buf, sizeof buf, "%.6e,%.1e,", c.max_error, c.tolerance);
    out << buf << (c.passed() ? "pass" : "fail") << '\n';
  }
}

}  // namespace ofuse::cli
