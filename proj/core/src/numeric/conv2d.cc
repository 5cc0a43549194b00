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

#include "ofuse/numeric/conv2d.h"

#include <algorithm>
#include <string>

#include "ofuse/error.h"

namespace ofuse {
namespace {

struct Geometry {
  std::size_t out_h;
  std::size_t out_w;
  long pad_y;
  long pad_x;
};

Geometry Check(const Tensor3& input, const Tensor4& kernel, Padding padding) {
  Require(kernel.in == input.channels, ErrorKind::kShape,
          "conv2d channel mismatch: kernel expects " + std::to_string(kernel.in) +
              ", input has " + std::to_string(input.channels));
  Require(kernel.kh >= 1 && kernel.kw >= 1, ErrorKind::kShape, "empty conv2d kernel");
  if (padding == Padding::kSame) {
    Require(kernel.kh % 2 == 1 && kernel.kw % 2 == 1, ErrorKind::kShape,
            "same padding needs odd kernel extents");
    return {input.height, input.width, static_cast<long>(kernel.kh / 2),
            static_cast<long>(kernel.kw / 2)};
  }
  Require(input.height >= kernel.kh && input.width >= kernel.kw, ErrorKind::kShape,
          "valid conv2d kernel larger than input");
  return {input.height - kernel.kh + 1, input.width - kernel.kw + 1, 0, 0};
}

// Output rows/cols [lo, hi) whose tap at offset k lands inside the input.
struct Span {
  long lo;
  long hi;
};

Span ValidRange(long k, long pad, long in_extent, long out_extent) {
  const long shift = k - pad;  // input index = output index + shift
  return {std::max(0L, -shift), std::min(out_extent, in_extent - shift)};
}

}  // namespace

// Loops run tap by tap so the innermost loop walks contiguous rows.
Tensor3 Conv2d(const Tensor3& input, const Tensor4& kernel, Padding padding) {
  const Geometry g = Check(input, kernel, padding);
  const long h = static_cast<long>(input.height), w = static_cast<long>(input.width);
  const long oh = static_cast<long>(g.out_h), ow = static_cast<long>(g.out_w);
  Tensor3 out(kernel.out, g.out_h, g.out_w);
  for (std::size_t o = 0; o < kernel.out; ++o) {
    double* dst = out.data.data() + o * g.out_h * g.out_w;
    for (std::size_t c = 0; c < kernel.in; ++c) {
      const double* src = input.data.data() + c * input.plane();
      for (std::size_t ky = 0; ky < kernel.kh; ++ky) {
        const Span ys = ValidRange(long(ky), g.pad_y, h, oh);
        for (std::size_t kx = 0; kx < kernel.kw; ++kx) {
          const Span xs = ValidRange(long(kx), g.pad_x, w, ow);
          const double k = kernel.at(o, c, ky, kx);
          const long sy = long(ky) - g.pad_y, sx = long(kx) - g.pad_x;
          for (long y = ys.lo; y < ys.hi; ++y) {
            double* row = dst + y * ow;
            const double* in_row = src + (y + sy) * w + sx;
            for (long x = xs.lo; x < xs.hi; ++x) row[x] += k * in_row[x];
          }
        }
      }
    }
  }
  return out;
}

Conv2dGrads Conv2dBackward(const Tensor3& input, const Tensor4& kernel,
                           Padding padding, const Tensor3& upstream) {
  const Geometry g = Check(input, kernel, padding);
  Require(upstream.channels == kernel.out && upstream.height == g.out_h &&
              upstream.width == g.out_w,
          ErrorKind::kShape, "conv2d upstream gradient shape mismatch");
  const long h = static_cast<long>(input.height), w = static_cast<long>(input.width);
  const long oh = static_cast<long>(g.out_h), ow = static_cast<long>(g.out_w);
  Conv2dGrads grads{Tensor3(input.channels, input.height, input.width),
                    Tensor4(kernel.out, kernel.in, kernel.kh, kernel.kw)};
  for (std::size_t o = 0; o < kernel.out; ++o) {
    const double* up = upstream.data.data() + o * g.out_h * g.out_w;
    for (std::size_t c = 0; c < kernel.in; ++c) {
      const double* src = input.data.data() + c * input.plane();
      double* dsrc = grads.input.data.data() + c * input.plane();
      for (std::size_t ky = 0; ky < kernel.kh; ++ky) {
        const Span ys = ValidRange(long(ky), g.pad_y, h, oh);
        for (std::size_t kx = 0; kx < kernel.kw; ++kx) {
          const Span xs = ValidRange(long(kx), g.pad_x, w, ow);
          const double k = kernel.at(o, c, ky, kx);
          const long sy = long(ky) - g.pad_y, sx = long(kx) - g.pad_x;
          double dk = 0.0;
          for (long y = ys.lo; y < ys.hi; ++y) {
            const double* up_row = up + y * ow;
            const double* in_row = src + (y + sy) * w + sx;
            double* din_row = dsrc + (y + sy) * w + sx;
            for (long x = xs.lo; x < xs.hi; ++x) {
              dk += up_row[x] * in_row[x];
              din_row[x] += k * up_row[x];
            }
          }
          grads.kernel.at(o, c, ky, kx) += dk;
        }
      }
    }
  }
  return grads;
}

}  // namespace ofuse
