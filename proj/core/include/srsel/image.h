// Copyright 2026 The sr-select Authors
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

#ifndef SRSEL_IMAGE_H_
#define SRSEL_IMAGE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "srsel/error.h"

namespace srsel {

// Immutable interleaved pixel buffer. Samples are doubles in [0, 1], stored
// row-major with channels interleaved: index = (y * width + x) * channels + c.
class Image {
 public:
  // Constant-filled image.
  Image(int width, int height, int channels, double fill = 0.0);
  // Takes ownership of `samples`; throws unless every invariant holds.
  Image(int width, int height, int channels, std::vector<double> samples);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t sample_count() const { return samples_.size(); }
  std::span<const double> samples() const { return samples_; }

  double at(int x, int y, int c = 0) const {
    return samples_[(static_cast<std::size_t>(y) * width_ + x) * channels_ +
                    c];
  }

  bool SameShape(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_;
  int height_;
  int channels_;
  std::vector<double> samples_;
};

// Integer up/down-scaling factor (>= 1).
class ScaleFactor {
 public:
  explicit ScaleFactor(int value);
  int value() const { return value_; }
  friend bool operator==(ScaleFactor, ScaleFactor) = default;

 private:
  int value_;
};

struct ResampleSpec {
  int target_width = 0;
  int target_height = 0;
  bool antialias = true;
};

// Throws kShapeMismatch naming `what` unless a and b have the same shape.
void RequireSameShape(const Image& a, const Image& b, const char* what);

}  // namespace srsel

#endif  // SRSEL_IMAGE_H_
