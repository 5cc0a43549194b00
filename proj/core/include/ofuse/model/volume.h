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

#ifndef OFUSE_MODEL_VOLUME_H_
#define OFUSE_MODEL_VOLUME_H_

#include "ofuse/numeric/tensor.h"

namespace ofuse {

// Depth d x height h x width w activations. Viewed as a d x n matrix Phi
// (n = h * w) whose columns are the local embeddings, the storage is
// already row-major Phi: Phi(c, i) == data[c * n + i].
using ActivationVolume = Tensor3;

// kShape when an extent is zero, kDomain when a value is not finite.
void ValidateVolume(const ActivationVolume& vol);

}  // namespace ofuse

#endif  // OFUSE_MODEL_VOLUME_H_
