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

#ifndef OFUSE_NUMERIC_TENSOR_H_
#define OFUSE_NUMERIC_TENSOR_H_

#include <cstddef>
#include <span>
#include <vector>

namespace ofuse {

// Channel-major C x H x W grid.
struct Tensor3 {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> data;

  Tensor3() = default;
  Tensor3(std::size_t c, std::size_t h, std::size_t w, double fill = 0.0)
      : channels(c), height(h), width(w), data(c * h * w, fill) {}

  std::size_t size() const { return data.size(); }
  std::size_t plane() const { return height * width; }
  double& at(std::size_t c, std::size_t y, std::size_t x) {
    return data[(c * height + y) * width + x];
  }
  double at(std::size_t c, std::size_t y, std::size_t x) const {
    return data[(c * height + y) * width + x];
  }
  std::span<double> channel(std::size_t c) { return {data.data() + c * plane(), plane()}; }
  std::span<const double> channel(std::size_t c) const {
    return {data.data() + c * plane(), plane()};
  }
  bool SameShape(const Tensor3& o) const {
    return channels == o.channels && height == o.height && width == o.width;
  }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;
};

// Convolution kernel, out x in x kh x kw.
struct Tensor4 {
  std::size_t out = 0;
  std::size_t in = 0;
  std::size_t kh = 0;
  std::size_t kw = 0;
  std::vector<double> data;

  Tensor4() = default;
  Tensor4(std::size_t o, std::size_t i, std::size_t h, std::size_t w, double fill = 0.0)
      : out(o), in(i), kh(h), kw(w), data(o * i * h * w, fill) {}

  std::size_t size() const { return data.size(); }
  double& at(std::size_t o, std::size_t i, std::size_t y, std::size_t x) {
    return data[((o * in + i) * kh + y) * kw + x];
  }
  double at(std::size_t o, std::size_t i, std::size_t y, std::size_t x) const {
    return data[((o * in + i) * kh + y) * kw + x];
  }

  friend bool operator==(const Tensor4&, const Tensor4&) = default;
};

}  // namespace ofuse

#endif  // OFUSE_NUMERIC_TENSOR_H_
