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

#ifndef OFUSE_METADATA_IMAGE_H_
#define OFUSE_METADATA_IMAGE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "ofuse/numeric/rng.h"

namespace ofuse {

// Grayscale image, row-major. Raw images hold values in [0, 1]; normalized
// ones need only be finite.
class ImageArray {
 public:
  ImageArray(std::size_t height, std::size_t width, double fill = 0.0);
  ImageArray(std::size_t height, std::size_t width, std::vector<double> pixels);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  double& at(std::size_t y, std::size_t x) { return pixels_[y * width_ + x]; }
  double at(std::size_t y, std::size_t x) const { return pixels_[y * width_ + x]; }
  std::span<const double> pixels() const { return pixels_; }

  friend bool operator==(const ImageArray&, const ImageArray&) = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<double> pixels_;
};

// Half-pixel-centre bilinear resampling with edge clamping. Same-size
// resizing returns the input unchanged.
ImageArray ResizeBilinear(const ImageArray& image, std::size_t height, std::size_t width);

struct Normalization {
  double mean = 0.0;
  double stddev = 1.0;
};

// Population mean and standard deviation over every pixel of every image.
Normalization FitNormalization(std::span<const ImageArray> images);

struct AugmentConfig {
  double max_rotation_degrees = 5.0;
  double min_scale = 0.9;
  double max_scale = 1.1;
  std::size_t target_height = 224;
  std::size_t target_width = 224;
  bool normalize = true;
  Normalization normalization;
};

// resize -> normalize -> random rotation about the centre with independent
// random width and height scales. The warp samples bilinearly and clamps at
// the border, so constant images stay constant.
ImageArray Augment(const ImageArray& image, const AugmentConfig& cfg, RngStream& rng);

}  // namespace ofuse

#endif  // OFUSE_METADATA_IMAGE_H_
