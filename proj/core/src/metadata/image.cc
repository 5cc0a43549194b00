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

#include "ofuse/metadata/image.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ofuse/error.h"

namespace ofuse {
namespace {

void RequireExtent(std::size_t height, std::size_t width) {
  Require(height >= 1 && width >= 1, ErrorKind::kDomain,
          "image extents must be positive, got " + std::to_string(height) + "x" +
              std::to_string(width));
}

double SampleClamped(const ImageArray& image, double y, double x) {
  const double max_y = double(image.height() - 1);
  const double max_x = double(image.width() - 1);
  y = std::clamp(y, 0.0, max_y);
  x = std::clamp(x, 0.0, max_x);
  const auto y0 = static_cast<std::size_t>(y);
  const auto x0 = static_cast<std::size_t>(x);
  const std::size_t y1 = std::min(y0 + 1, image.height() - 1);
  const std::size_t x1 = std::min(x0 + 1, image.width() - 1);
  const double fy = y - double(y0);
  const double fx = x - double(x0);
  const double top = image.at(y0, x0) + fx * (image.at(y0, x1) - image.at(y0, x0));
  const double bottom = image.at(y1, x0) + fx * (image.at(y1, x1) - image.at(y1, x0));
  return top + fy * (bottom - top);
}

}  // namespace

ImageArray::ImageArray(std::size_t height, std::size_t width, double fill)
    : height_(height), width_(width), pixels_(height * width, fill) {
  RequireExtent(height, width);
}

ImageArray::ImageArray(std::size_t height, std::size_t width, std::vector<double> pixels)
    : height_(height), width_(width), pixels_(std::move(pixels)) {
  RequireExtent(height, width);
  Require(pixels_.size() == height * width, ErrorKind::kShape,
          "pixel count does not match image extents");
  for (double v : pixels_) Require(std::isfinite(v), ErrorKind::kDomain, "non-finite pixel");
}

ImageArray ResizeBilinear(const ImageArray& image, std::size_t height, std::size_t width) {
  RequireExtent(height, width);
  if (height == image.height() && width == image.width()) return image;
  ImageArray out(height, width);
  const double sy = double(image.height()) / double(height);
  const double sx = double(image.width()) / double(width);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      out.at(y, x) = SampleClamped(image, (y + 0.5) * sy - 0.5, (x + 0.5) * sx - 0.5);
    }
  }
  return out;
}

Normalization FitNormalization(std::span<const ImageArray> images) {
  double count = 0.0, sum = 0.0;
  for (const auto& im : images) {
    for (double v : im.pixels()) sum += v;
    count += double(im.pixels().size());
  }
  Require(count > 0.0, ErrorKind::kDomain, "no images to fit normalization on");
  const double mean = sum / count;
  double ss = 0.0;
  for (const auto& im : images)
    for (double v : im.pixels()) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / count);
  return {mean, sd > 0.0 ? sd : 1.0};
}

ImageArray Augment(const ImageArray& image, const AugmentConfig& cfg, RngStream& rng) {
  Require(cfg.max_rotation_degrees >= 0.0, ErrorKind::kDomain, "negative rotation range");
  Require(cfg.min_scale > 0.0 && cfg.min_scale <= cfg.max_scale, ErrorKind::kDomain,
          "scale range must satisfy 0 < min <= max");
  Require(cfg.normalization.stddev > 0.0, ErrorKind::kDomain,
          "normalization stddev must be positive");
  ImageArray resized = ResizeBilinear(image, cfg.target_height, cfg.target_width);
  if (cfg.normalize) {
    for (std::size_t y = 0; y < resized.height(); ++y)
      for (std::size_t x = 0; x < resized.width(); ++x)
        resized.at(y, x) =
            (resized.at(y, x) - cfg.normalization.mean) / cfg.normalization.stddev;
  }

  const double degrees = rng.Uniform(-cfg.max_rotation_degrees, cfg.max_rotation_degrees);
  const double scale_x = rng.Uniform(cfg.min_scale, cfg.max_scale);
  const double scale_y = rng.Uniform(cfg.min_scale, cfg.max_scale);
  const double theta = degrees * std::numbers::pi / 180.0;
  const double c = std::cos(theta), s = std::sin(theta);
  const double cy = (double(resized.height()) - 1.0) / 2.0;
  const double cx = (double(resized.width()) - 1.0) / 2.0;

  // Inverse map: undo rotation, then undo scaling.
  ImageArray out(resized.height(), resized.width());
  for (std::size_t y = 0; y < out.height(); ++y) {
    for (std::size_t x = 0; x < out.width(); ++x) {
      const double dx = double(x) - cx, dy = double(y) - cy;
      const double rx = c * dx + s * dy;
      const double ry = -s * dx + c * dy;
      out.at(y, x) = SampleClamped(resized, cy + ry / scale_y, cx + rx / scale_x);
    }
  }
  return out;
}

}  // namespace ofuse
