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

#ifndef OFUSE_NUMERIC_CONV2D_H_
#define OFUSE_NUMERIC_CONV2D_H_

#include "ofuse/numeric/tensor.h"

namespace ofuse {

enum class Padding { kSame, kValid };

// Direct cross-correlation with zero padding. `kSame` requires odd kernel
// extents and preserves H x W; `kValid` yields (H-kh+1) x (W-kw+1).
Tensor3 Conv2d(const Tensor3& input, const Tensor4& kernel, Padding padding);

struct Conv2dGrads {
  Tensor3 input;
  Tensor4 kernel;
};

// Gradients of <upstream, Conv2d(input, kernel)> with respect to both operands.
Conv2dGrads Conv2dBackward(const Tensor3& input, const Tensor4& kernel,
                           Padding padding, const Tensor3& upstream);

}  // namespace ofuse

#endif  // OFUSE_NUMERIC_CONV2D_H_
