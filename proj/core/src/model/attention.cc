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

#include "ofuse/model/attention.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "ofuse/error.h"
#include "ofuse/numeric/conv2d.h"

namespace ofuse {
namespace {

double Sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

double Swish(double x) { return x * Sigmoid(x); }

double SwishDerivative(double x) {
  const double s = Sigmoid(x);
  return s + x * s * (1.0 - s);
}

std::size_t ReducedWidth(std::size_t depth, std::size_t reduction) {
  Require(depth >= 1, ErrorKind::kShape, "attention needs depth >= 1");
  Require(reduction >= 1 && depth % reduction == 0, ErrorKind::kConfig,
          "reduction ratio " + std::to_string(reduction) + " does not divide depth " +
              std::to_string(depth));
  return depth / reduction;
}

void RequireSameShape(const ActivationVolume& a, const ActivationVolume& b) {
  Require(a.SameShape(b), ErrorKind::kShape, "upstream gradient shape differs from the input");
}

// y = W x + b for a row-major rows x cols W.
std::vector<double> Affine(std::span<const double> w, std::span<const double> b,
                           std::span<const double> x) {
  const std::size_t rows = b.size(), cols = x.size();
  std::vector<double> y(b.begin(), b.end());
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) y[r] += w[r * cols + c] * x[c];
  return y;
}

// Accumulates dW += dy x^T, db += dy and returns W^T dy.
std::vector<double> AffineBackward(std::span<const double> w, std::span<const double> x,
                                   std::span<const double> dy, std::span<double> dw,
                                   std::span<double> db) {
  const std::size_t rows = dy.size(), cols = x.size();
  std::vector<double> dx(cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    db[r] += dy[r];
    for (std::size_t c = 0; c < cols; ++c) {
      dw[r * cols + c] += dy[r] * x[c];
      dx[c] += w[r * cols + c] * dy[r];
    }
  }
  return dx;
}

// --- channel helpers ---

struct ChannelPools {
  std::vector<double> avg, max;
  std::vector<std::size_t> argmax;  // first maximum in the plane
};

ChannelPools PoolChannels(const ActivationVolume& vol) {
  ChannelPools pools;
  for (std::size_t c = 0; c < vol.channels; ++c) {
    const auto plane = vol.channel(c);
    double sum = 0.0;
    std::size_t best = 0;
    for (std::size_t i = 0; i < plane.size(); ++i) {
      sum += plane[i];
      if (plane[i] > plane[best]) best = i;
    }
    pools.avg.push_back(sum / double(plane.size()));
    pools.max.push_back(plane[best]);
    pools.argmax.push_back(best);
  }
  return pools;
}

struct MlpTrace {
  std::vector<double> pre;  // hidden pre-activation
  std::vector<double> out;
};

MlpTrace RunMlp(const ChannelAttentionParams& p, std::span<const double> v) {
  MlpTrace t;
  t.pre = Affine(p.w1, p.b1, v);
  std::vector<double> act(t.pre.size());
  for (std::size_t i = 0; i < act.size(); ++i) act[i] = std::max(0.0, t.pre[i]);
  t.out = Affine(p.w2, p.b2, act);
  return t;
}

std::vector<double> MlpBackward(const ChannelAttentionParams& p, std::span<const double> v,
                                const MlpTrace& t, std::span<const double> dout,
                                ChannelAttentionParams& g) {
  std::vector<double> act(t.pre.size());
  for (std::size_t i = 0; i < act.size(); ++i) act[i] = std::max(0.0, t.pre[i]);
  std::vector<double> dact = AffineBackward(p.w2, act, dout, g.w2, g.b2);
  for (std::size_t i = 0; i < dact.size(); ++i) {
    if (t.pre[i] <= 0.0) dact[i] = 0.0;
  }
  return AffineBackward(p.w1, v, dact, g.w1, g.b1);
}

void CheckChannelParams(const ActivationVolume& vol, const ChannelAttentionParams& p) {
  ValidateVolume(vol);
  Require(p.depth == vol.channels && p.w1.size() == p.hidden * p.depth &&
              p.b1.size() == p.hidden && p.w2.size() == p.depth * p.hidden &&
              p.b2.size() == p.depth,
          ErrorKind::kShape, "channel attention parameters do not match the volume depth");
}

// --- spatial helpers ---

struct SpatialTrace {
  Tensor3 descriptor;                // 2 x h x w: channel mean, channel max
  std::vector<std::size_t> argmax;   // channel of the first maximum per pixel
  std::vector<double> map;
};

SpatialTrace RunSpatial(const ActivationVolume& vol, const SpatialAttentionParams& p) {
  ValidateVolume(vol);
  Require(p.kernel.out == 1 && p.kernel.in == 2 && p.kernel.kh == p.kernel.kw &&
              p.kernel.kh % 2 == 1 && p.bias.size() == 1,
          ErrorKind::kShape, "spatial attention needs a 1 x 2 x k x k kernel with odd k");
  const std::size_t n = vol.plane();
  SpatialTrace t;
  t.descriptor = Tensor3(2, vol.height, vol.width);
  t.argmax.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t c = 0; c < vol.channels; ++c) {
      const double v = vol.data[c * n + i];
      sum += v;
      if (v > vol.data[t.argmax[i] * n + i]) t.argmax[i] = c;
    }
    t.descriptor.data[i] = sum / double(vol.channels);
    t.descriptor.data[n + i] = vol.data[t.argmax[i] * n + i];
  }
  const Tensor3 logits = Conv2d(t.descriptor, p.kernel, Padding::kSame);
  t.map.resize(n);
  for (std::size_t i = 0; i < n; ++i) t.map[i] = Sigmoid(logits.data[i] + p.bias[0]);
  return t;
}

// --- coordinate helpers ---

struct CoordinateTrace {
  std::vector<double> pooled;   // depth x (h + w): row means then column means
  std::vector<double> reduced;  // hidden x (h + w), pre-activation
  std::vector<double> row_map;  // depth x h
  std::vector<double> col_map;  // depth x w
};

void CheckCoordinateParams(const ActivationVolume& vol, const CoordinateAttentionParams& p) {
  ValidateVolume(vol);
  const std::size_t d = p.depth, m = p.hidden;
  Require(d == vol.channels && p.w_reduce.size() == m * d && p.b_reduce.size() == m &&
              p.w_rows.size() == d * m && p.b_rows.size() == d && p.w_cols.size() == d * m &&
              p.b_cols.size() == d,
          ErrorKind::kShape, "coordinate attention parameters do not match the volume depth");
}

CoordinateTrace RunCoordinate(const ActivationVolume& vol, const CoordinateAttentionParams& p) {
  CheckCoordinateParams(vol, p);
  const std::size_t d = p.depth, m = p.hidden, h = vol.height, w = vol.width, L = h + w;
  CoordinateTrace t;
  t.pooled.assign(d * L, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        const double v = vol.at(c, y, x);
        t.pooled[c * L + y] += v / double(w);
        t.pooled[c * L + h + x] += v / double(h);
      }
    }
  }
  t.reduced.assign(m * L, 0.0);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t l = 0; l < L; ++l) {
      double s = p.b_reduce[j];
      for (std::size_t c = 0; c < d; ++c) s += p.w_reduce[j * d + c] * t.pooled[c * L + l];
      t.reduced[j * L + l] = s;
    }
  t.row_map.assign(d * h, 0.0);
  t.col_map.assign(d * w, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t l = 0; l < L; ++l) {
      const bool row = l < h;
      const auto& wt = row ? p.w_rows : p.w_cols;
      double s = row ? p.b_rows[c] : p.b_cols[c];
      for (std::size_t j = 0; j < m; ++j) s += wt[c * m + j] * Swish(t.reduced[j * L + l]);
      if (row) {
        t.row_map[c * h + l] = Sigmoid(s);
      } else {
        t.col_map[c * w + (l - h)] = Sigmoid(s);
      }
    }
  }
  return t;
}

// --- multi-head helpers ---

void CheckMultiHead(const ActivationVolume& vol, const MultiHeadParams& p) {
  Require(!p.heads.empty(), ErrorKind::kConfig, "multi-head attention needs at least one head");
  ValidateVolume(vol);
  const std::size_t d = vol.channels;
  Require(p.depth == d && p.projection.size() == d * p.heads.size() * d &&
              p.projection_bias.size() == d,
          ErrorKind::kShape, "projection does not match the volume depth and head count");
  for (AttentionHead head : p.heads) {
    const bool present = head == AttentionHead::kChannel   ? p.channel.has_value()
                         : head == AttentionHead::kSpatial ? p.spatial.has_value()
                                                           : p.coordinate.has_value();
    Require(present, ErrorKind::kConfig,
            std::string("missing parameters for head ") + AttentionHeadName(head));
  }
}

ActivationVolume RunHead(AttentionHead head, const ActivationVolume& vol,
                         const MultiHeadParams& p) {
  switch (head) {
    case AttentionHead::kChannel:
      return ChannelAttention(vol, *p.channel).output;
    case AttentionHead::kSpatial:
      return SpatialAttention(vol, *p.spatial).output;
    case AttentionHead::kCoordinate:
      return CoordinateAttention(vol, *p.coordinate).output;
  }
  Fail(ErrorKind::kConfig, "unknown attention head");
}

}  // namespace

// --- channel -----------------------------------------------------------------

ChannelAttentionParams ChannelAttentionParams::Zeros(std::size_t depth, std::size_t reduction) {
  ChannelAttentionParams p;
  p.depth = depth;
  p.hidden = ReducedWidth(depth, reduction);
  p.w1.assign(p.hidden * depth, 0.0);
  p.b1.assign(p.hidden, 0.0);
  p.w2.assign(depth * p.hidden, 0.0);
  p.b2.assign(depth, 0.0);
  return p;
}

ChannelAttentionOutput ChannelAttention(const ActivationVolume& vol,
                                        const ChannelAttentionParams& p) {
  CheckChannelParams(vol, p);
  const ChannelPools pools = PoolChannels(vol);
  const MlpTrace a = RunMlp(p, pools.avg), m = RunMlp(p, pools.max);
  ChannelAttentionOutput out{vol, std::vector<double>(vol.channels)};
  for (std::size_t c = 0; c < vol.channels; ++c) {
    out.weights[c] = Sigmoid(a.out[c] + m.out[c]);
    for (double& v : out.output.channel(c)) v *= out.weights[c];
  }
  return out;
}

ChannelAttentionGrads ChannelAttentionBackward(const ActivationVolume& vol,
                                               const ChannelAttentionParams& p,
                                               const ActivationVolume& upstream) {
  CheckChannelParams(vol, p);
  RequireSameShape(vol, upstream);
  const ChannelPools pools = PoolChannels(vol);
  const MlpTrace a = RunMlp(p, pools.avg), m = RunMlp(p, pools.max);
  const std::size_t d = vol.channels, n = vol.plane();

  ChannelAttentionGrads g{ActivationVolume(d, vol.height, vol.width),
                          ChannelAttentionParams::Zeros(d, d / p.hidden)};
  std::vector<double> dlogit(d);
  for (std::size_t c = 0; c < d; ++c) {
    const double wc = Sigmoid(a.out[c] + m.out[c]);
    double dw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dw += upstream.data[c * n + i] * vol.data[c * n + i];
      g.input.data[c * n + i] = upstream.data[c * n + i] * wc;
    }
    dlogit[c] = dw * wc * (1.0 - wc);
  }
  const std::vector<double> davg = MlpBackward(p, pools.avg, a, dlogit, g.params);
  const std::vector<double> dmax = MlpBackward(p, pools.max, m, dlogit, g.params);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t i = 0; i < n; ++i) g.input.data[c * n + i] += davg[c] / double(n);
    g.input.data[c * n + pools.argmax[c]] += dmax[c];
  }
  return g;
}

// --- spatial -----------------------------------------------------------------

SpatialAttentionParams SpatialAttentionParams::Zeros(std::size_t kernel_size) {
  Require(kernel_size % 2 == 1, ErrorKind::kConfig,
          "spatial kernel size must be odd, got " + std::to_string(kernel_size));
  SpatialAttentionParams p;
  p.kernel = Tensor4(1, 2, kernel_size, kernel_size);
  return p;
}

SpatialAttentionOutput SpatialAttention(const ActivationVolume& vol,
                                        const SpatialAttentionParams& p) {
  SpatialTrace t = RunSpatial(vol, p);
  SpatialAttentionOutput out{vol, std::move(t.map)};
  const std::size_t n = vol.plane();
  for (std::size_t c = 0; c < vol.channels; ++c)
    for (std::size_t i = 0; i < n; ++i) out.output.data[c * n + i] *= out.map[i];
  return out;
}

SpatialAttentionGrads SpatialAttentionBackward(const ActivationVolume& vol,
                                               const SpatialAttentionParams& p,
                                               const ActivationVolume& upstream) {
  const SpatialTrace t = RunSpatial(vol, p);
  RequireSameShape(vol, upstream);
  const std::size_t d = vol.channels, n = vol.plane();
  SpatialAttentionGrads g{ActivationVolume(d, vol.height, vol.width),
                          SpatialAttentionParams::Zeros(p.kernel.kh)};

  Tensor3 dlogit(1, vol.height, vol.width);
  for (std::size_t i = 0; i < n; ++i) {
    double dmap = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      dmap += upstream.data[c * n + i] * vol.data[c * n + i];
      g.input.data[c * n + i] = upstream.data[c * n + i] * t.map[i];
    }
    dlogit.data[i] = dmap * t.map[i] * (1.0 - t.map[i]);
    g.params.bias[0] += dlogit.data[i];
  }
  Conv2dGrads conv = Conv2dBackward(t.descriptor, p.kernel, Padding::kSame, dlogit);
  g.params.kernel = std::move(conv.kernel);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < d; ++c) g.input.data[c * n + i] += conv.input.data[i] / double(d);
    g.input.data[t.argmax[i] * n + i] += conv.input.data[n + i];
  }
  return g;
}

// --- coordinate --------------------------------------------------------------

CoordinateAttentionParams CoordinateAttentionParams::Zeros(std::size_t depth,
                                                           std::size_t reduction) {
  CoordinateAttentionParams p;
  p.depth = depth;
  p.hidden = ReducedWidth(depth, reduction);
  p.w_reduce.assign(p.hidden * depth, 0.0);
  p.b_reduce.assign(p.hidden, 0.0);
  p.w_rows.assign(depth * p.hidden, 0.0);
  p.b_rows.assign(depth, 0.0);
  p.w_cols.assign(depth * p.hidden, 0.0);
  p.b_cols.assign(depth, 0.0);
  return p;
}

CoordinateAttentionOutput CoordinateAttention(const ActivationVolume& vol,
                                              const CoordinateAttentionParams& p) {
  CoordinateTrace t = RunCoordinate(vol, p);
  CoordinateAttentionOutput out{vol, std::move(t.row_map), std::move(t.col_map)};
  const std::size_t h = vol.height, w = vol.width;
  for (std::size_t c = 0; c < vol.channels; ++c)
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x)
        out.output.at(c, y, x) *= out.row_map[c * h + y] * out.col_map[c * w + x];
  return out;
}

CoordinateAttentionGrads CoordinateAttentionBackward(const ActivationVolume& vol,
                                                     const CoordinateAttentionParams& p,
                                                     const ActivationVolume& upstream) {
  const CoordinateTrace t = RunCoordinate(vol, p);
  RequireSameShape(vol, upstream);
  const std::size_t d = p.depth, m = p.hidden, h = vol.height, w = vol.width, L = h + w;
  CoordinateAttentionGrads g{ActivationVolume(d, h, w),
                             CoordinateAttentionParams::Zeros(d, d / m)};
  CoordinateAttentionParams& gp = g.params;

  // Through the product x * row * col.
  std::vector<double> drow(d * h, 0.0), dcol(d * w, 0.0);
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x) {
        const double u = upstream.at(c, y, x), v = vol.at(c, y, x);
        const double r = t.row_map[c * h + y], k = t.col_map[c * w + x];
        g.input.at(c, y, x) = u * r * k;
        drow[c * h + y] += u * v * k;
        dcol[c * w + x] += u * v * r;
      }

  // Through the sigmoids and per-direction expansions.
  std::vector<double> dact(m * L, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t l = 0; l < L; ++l) {
      const bool row = l < h;
      const double s = row ? t.row_map[c * h + l] : t.col_map[c * w + (l - h)];
      const double ds = (row ? drow[c * h + l] : dcol[c * w + (l - h)]) * s * (1.0 - s);
      const auto& wt = row ? p.w_rows : p.w_cols;
      auto& gw = row ? gp.w_rows : gp.w_cols;
      (row ? gp.b_rows : gp.b_cols)[c] += ds;
      for (std::size_t j = 0; j < m; ++j) {
        gw[c * m + j] += ds * Swish(t.reduced[j * L + l]);
        dact[j * L + l] += wt[c * m + j] * ds;
      }
    }
  }

  // Through swish and the shared reduction.
  std::vector<double> dpooled(d * L, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t l = 0; l < L; ++l) {
      const double dz = dact[j * L + l] * SwishDerivative(t.reduced[j * L + l]);
      gp.b_reduce[j] += dz;
      for (std::size_t c = 0; c < d; ++c) {
        gp.w_reduce[j * d + c] += dz * t.pooled[c * L + l];
        dpooled[c * L + l] += p.w_reduce[j * d + c] * dz;
      }
    }
  }

  // Through the directional means.
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x)
        g.input.at(c, y, x) +=
            dpooled[c * L + y] / double(w) + dpooled[c * L + h + x] / double(h);
  return g;
}

// --- multi-head --------------------------------------------------------------

const char* AttentionHeadName(AttentionHead head) {
  switch (head) {
    case AttentionHead::kChannel:
      return "channel";
    case AttentionHead::kSpatial:
      return "spatial";
    case AttentionHead::kCoordinate:
      return "coordinate";
  }
  return "unknown";
}

const char* AttentionPlacementName(AttentionPlacement placement) {
  return placement == AttentionPlacement::kSelf ? "self" : "traditional";
}

void AttentionConfig::Validate() const {
  Require(!heads.empty(), ErrorKind::kConfig, "attention needs at least one head");
  Require(reduction >= 1, ErrorKind::kConfig, "reduction ratio must be >= 1");
  Require(spatial_kernel % 2 == 1, ErrorKind::kConfig, "spatial kernel size must be odd");
  for (std::size_t i = 1; i < heads.size(); ++i) {
    Require(heads[i - 1] < heads[i], ErrorKind::kConfig,
            "attention heads must be distinct and in channel, spatial, coordinate order");
  }
}

MultiHeadParams MultiHeadParams::Init(std::size_t depth, const AttentionConfig& cfg) {
  cfg.Validate();
  MultiHeadParams p;
  p.heads = cfg.heads;
  p.depth = depth;
  for (AttentionHead head : cfg.heads) {
    if (head == AttentionHead::kChannel) p.channel = ChannelAttentionParams::Zeros(depth, cfg.reduction);
    if (head == AttentionHead::kSpatial) p.spatial = SpatialAttentionParams::Zeros(cfg.spatial_kernel);
    if (head == AttentionHead::kCoordinate)
      p.coordinate = CoordinateAttentionParams::Zeros(depth, cfg.reduction);
  }
  const std::size_t k = cfg.heads.size();
  p.projection.assign(depth * k * depth, 0.0);
  for (std::size_t c = 0; c < depth; ++c)
    for (std::size_t h = 0; h < k; ++h) p.projection[c * k * depth + h * depth + c] = 1.0 / double(k);
  p.projection_bias.assign(depth, 0.0);
  return p;
}

MultiHeadOutput MultiHeadAttention(const ActivationVolume& vol, const MultiHeadParams& p) {
  CheckMultiHead(vol, p);
  const std::size_t d = vol.channels, n = vol.plane(), cols = p.heads.size() * d;
  MultiHeadOutput out{ActivationVolume(d, vol.height, vol.width),
                      ActivationVolume(cols, vol.height, vol.width)};
  for (std::size_t h = 0; h < p.heads.size(); ++h) {
    const ActivationVolume head = RunHead(p.heads[h], vol, p);
    std::copy(head.data.begin(), head.data.end(), out.concatenated.data.begin() + h * d * n);
  }
  for (std::size_t c = 0; c < d; ++c) {
    auto dst = out.output.channel(c);
    std::fill(dst.begin(), dst.end(), p.projection_bias[c]);
    for (std::size_t j = 0; j < cols; ++j) {
      const double wcj = p.projection[c * cols + j];
      if (wcj == 0.0) continue;
      const auto src = out.concatenated.channel(j);
      for (std::size_t i = 0; i < n; ++i) dst[i] += wcj * src[i];
    }
  }
  return out;
}

MultiHeadGrads MultiHeadAttentionBackward(const ActivationVolume& vol, const MultiHeadParams& p,
                                          const ActivationVolume& upstream) {
  const MultiHeadOutput fwd = MultiHeadAttention(vol, p);
  RequireSameShape(vol, upstream);
  const std::size_t d = vol.channels, n = vol.plane(), cols = p.heads.size() * d;

  MultiHeadGrads g{ActivationVolume(d, vol.height, vol.width), p};
  g.params.ForEachTensor([](const std::string&, const TensorShape&, std::span<double> v) {
    std::fill(v.begin(), v.end(), 0.0);
  });
  ActivationVolume dconcat(cols, vol.height, vol.width);
  for (std::size_t c = 0; c < d; ++c) {
    const auto up = upstream.channel(c);
    for (std::size_t i = 0; i < n; ++i) g.params.projection_bias[c] += up[i];
    for (std::size_t j = 0; j < cols; ++j) {
      const auto src = fwd.concatenated.channel(j);
      auto dst = dconcat.channel(j);
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += up[i] * src[i];
        dst[i] += p.projection[c * cols + j] * up[i];
      }
      g.params.projection[c * cols + j] = acc;
    }
  }

  for (std::size_t h = 0; h < p.heads.size(); ++h) {
    ActivationVolume head_up(d, vol.height, vol.width);
    std::copy(dconcat.data.begin() + h * d * n, dconcat.data.begin() + (h + 1) * d * n,
              head_up.data.begin());
    ActivationVolume dx;
    switch (p.heads[h]) {
      case AttentionHead::kChannel: {
        auto hg = ChannelAttentionBackward(vol, *p.channel, head_up);
        dx = std::move(hg.input);
        g.params.channel = std::move(hg.params);
        break;
      }
      case AttentionHead::kSpatial: {
        auto hg = SpatialAttentionBackward(vol, *p.spatial, head_up);
        dx = std::move(hg.input);
        g.params.spatial = std::move(hg.params);
        break;
      }
      case AttentionHead::kCoordinate: {
        auto hg = CoordinateAttentionBackward(vol, *p.coordinate, head_up);
        dx = std::move(hg.input);
        g.params.coordinate = std::move(hg.params);
        break;
      }
    }
    for (std::size_t i = 0; i < g.input.data.size(); ++i) g.input.data[i] += dx.data[i];
  }
  return g;
}

}  // namespace ofuse
