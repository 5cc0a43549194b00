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

#ifndef OFUSE_MODEL_ATTENTION_H_
#define OFUSE_MODEL_ATTENTION_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ofuse/model/volume.h"
#include "ofuse/numeric/rng.h"
#include "ofuse/numeric/tensor.h"

namespace ofuse {

// Visitors below call f(name, shape, values) once per trainable tensor, in
// a fixed order; gradient structs share the parameter type so both walk in
// lockstep.
using TensorShape = std::vector<std::size_t>;

// Fills every visited tensor with N(0, scale^2) draws.
template <typename Params>
void RandomizeParams(Params& p, RngStream& rng, double scale) {
  p.ForEachTensor([&](const std::string&, const TensorShape&, std::span<double> v) {
    for (double& x : v) x = scale * rng.Normal();
  });
}

// --- channel -----------------------------------------------------------------

// Shared two-layer MLP, d -> d/r -> d, with ReLU in between.
struct ChannelAttentionParams {
  std::size_t depth = 0;
  std::size_t hidden = 0;
  std::vector<double> w1;  // hidden x depth
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // depth x hidden
  std::vector<double> b2;  // depth

  // kConfig unless r >= 1 divides depth.
  static ChannelAttentionParams Zeros(std::size_t depth, std::size_t reduction);

  template <typename F>
  void ForEachTensor(F&& f) {
    f("w1", TensorShape{hidden, depth}, std::span<double>(w1));
    f("b1", TensorShape{hidden}, std::span<double>(b1));
    f("w2", TensorShape{depth, hidden}, std::span<double>(w2));
    f("b2", TensorShape{depth}, std::span<double>(b2));
  }
};

struct ChannelAttentionOutput {
  ActivationVolume output;
  std::vector<double> weights;  // per channel, in (0, 1)
};

ChannelAttentionOutput ChannelAttention(const ActivationVolume& vol,
                                        const ChannelAttentionParams& p);

struct ChannelAttentionGrads {
  ActivationVolume input;
  ChannelAttentionParams params;
};

ChannelAttentionGrads ChannelAttentionBackward(const ActivationVolume& vol,
                                               const ChannelAttentionParams& p,
                                               const ActivationVolume& upstream);

// --- spatial -----------------------------------------------------------------

// k x k same-padded convolution over [channel mean; channel max] plus bias.
struct SpatialAttentionParams {
  Tensor4 kernel;  // 1 x 2 x k x k
  std::vector<double> bias = {0.0};

  // kConfig unless the kernel size is odd.
  static SpatialAttentionParams Zeros(std::size_t kernel_size);

  template <typename F>
  void ForEachTensor(F&& f) {
    f("kernel", TensorShape{kernel.out, kernel.in, kernel.kh, kernel.kw},
      std::span<double>(kernel.data));
    f("bias", TensorShape{1}, std::span<double>(bias));
  }
};

struct SpatialAttentionOutput {
  ActivationVolume output;
  std::vector<double> map;  // height x width, in (0, 1)
};

SpatialAttentionOutput SpatialAttention(const ActivationVolume& vol,
                                        const SpatialAttentionParams& p);

struct SpatialAttentionGrads {
  ActivationVolume input;
  SpatialAttentionParams params;
};

SpatialAttentionGrads SpatialAttentionBackward(const ActivationVolume& vol,
                                               const SpatialAttentionParams& p,
                                               const ActivationVolume& upstream);

// --- coordinate --------------------------------------------------------------

// Directional pooling, shared 1x1 reduction d -> d/r with swish, then one
// 1x1 expansion per direction followed by a sigmoid.
struct CoordinateAttentionParams {
  std::size_t depth = 0;
  std::size_t hidden = 0;
  std::vector<double> w_reduce;  // hidden x depth
  std::vector<double> b_reduce;  // hidden
  std::vector<double> w_rows;    // depth x hidden
  std::vector<double> b_rows;    // depth
  std::vector<double> w_cols;    // depth x hidden
  std::vector<double> b_cols;    // depth

  static CoordinateAttentionParams Zeros(std::size_t depth, std::size_t reduction);

  template <typename F>
  void ForEachTensor(F&& f) {
    f("w_reduce", TensorShape{hidden, depth}, std::span<double>(w_reduce));
    f("b_reduce", TensorShape{hidden}, std::span<double>(b_reduce));
    f("w_rows", TensorShape{depth, hidden}, std::span<double>(w_rows));
    f("b_rows", TensorShape{depth}, std::span<double>(b_rows));
    f("w_cols", TensorShape{depth, hidden}, std::span<double>(w_cols));
    f("b_cols", TensorShape{depth}, std::span<double>(b_cols));
  }
};

struct CoordinateAttentionOutput {
  ActivationVolume output;
  std::vector<double> row_map;  // depth x height
  std::vector<double> col_map;  // depth x width
};

CoordinateAttentionOutput CoordinateAttention(const ActivationVolume& vol,
                                              const CoordinateAttentionParams& p);

struct CoordinateAttentionGrads {
  ActivationVolume input;
  CoordinateAttentionParams params;
};

CoordinateAttentionGrads CoordinateAttentionBackward(const ActivationVolume& vol,
                                                     const CoordinateAttentionParams& p,
                                                     const ActivationVolume& upstream);

// --- multi-head --------------------------------------------------------------

enum class AttentionHead { kChannel, kSpatial, kCoordinate };
enum class AttentionPlacement { kSelf, kTraditional };

const char* AttentionHeadName(AttentionHead head);
const char* AttentionPlacementName(AttentionPlacement placement);

struct AttentionConfig {
  std::size_t reduction = 16;
  std::size_t spatial_kernel = 7;
  AttentionPlacement placement = AttentionPlacement::kTraditional;
  // Kept in channel, spatial, coordinate order; duplicates are an error.
  std::vector<AttentionHead> heads = {AttentionHead::kChannel, AttentionHead::kSpatial,
                                      AttentionHead::kCoordinate};

  void Validate() const;
};

// Head outputs are concatenated along depth in head order and projected
// back to d channels by a 1x1 transform.
struct MultiHeadParams {
  std::vector<AttentionHead> heads;
  std::optional<ChannelAttentionParams> channel;
  std::optional<SpatialAttentionParams> spatial;
  std::optional<CoordinateAttentionParams> coordinate;
  std::size_t depth = 0;
  std::vector<double> projection;       // depth x (heads * depth)
  std::vector<double> projection_bias;  // depth

  // Zero head parameters, projection averaging the heads channel by channel.
  static MultiHeadParams Init(std::size_t depth, const AttentionConfig& cfg);

  template <typename F>
  void ForEachTensor(F&& f) {
    const auto prefixed = [&](const char* head) {
      return [&f, head](const std::string& name, const TensorShape& shape,
                        std::span<double> v) { f(std::string(head) + "." + name, shape, v); };
    };
    if (channel) channel->ForEachTensor(prefixed("channel"));
    if (spatial) spatial->ForEachTensor(prefixed("spatial"));
    if (coordinate) coordinate->ForEachTensor(prefixed("coordinate"));
    f("projection.weight", TensorShape{depth, heads.size() * depth},
      std::span<double>(projection));
    f("projection.bias", TensorShape{depth}, std::span<double>(projection_bias));
  }
};

struct MultiHeadOutput {
  ActivationVolume output;
  ActivationVolume concatenated;  // (heads * depth) x h x w
};

MultiHeadOutput MultiHeadAttention(const ActivationVolume& vol, const MultiHeadParams& p);

struct MultiHeadGrads {
  ActivationVolume input;
  MultiHeadParams params;
};

MultiHeadGrads MultiHeadAttentionBackward(const ActivationVolume& vol, const MultiHeadParams& p,
                                          const ActivationVolume& upstream);

}  // namespace ofuse

#endif  // OFUSE_MODEL_ATTENTION_H_
