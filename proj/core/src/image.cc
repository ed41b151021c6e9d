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

#include "srsel/image.h"

#include <cmath>
#include <string>

namespace srsel {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kShapeMismatch:
      return "shape_mismatch";
    case ErrorCode::kOutOfRange:
      return "out_of_range";
    case ErrorCode::kParse:
      return "parse_error";
    case ErrorCode::kIo:
      return "io_error";
    case ErrorCode::kDuplicate:
      return "duplicate";
    case ErrorCode::kNotFound:
      return "not_found";
    case ErrorCode::kFailedPrecondition:
      return "failed_precondition";
  }
  return "unknown";
}

namespace {

void CheckGeometry(int width, int height, int channels) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "image dimensions must be >= 1, got " + std::to_string(width) +
                    "x" + std::to_string(height));
  }
  if (channels != 1 && channels != 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "image must have 1 or 3 channels, got " +
                    std::to_string(channels));
  }
}

}  // namespace

Image::Image(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  CheckGeometry(width, height, channels);
  if (!std::isfinite(fill) || fill < 0.0 || fill > 1.0) {
    throw Error(ErrorCode::kOutOfRange, "fill value outside [0, 1]");
  }
  samples_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

Image::Image(int width, int height, int channels, std::vector<double> samples)
    : width_(width),
      height_(height),
      channels_(channels),
      samples_(std::move(samples)) {
  CheckGeometry(width, height, channels);
  const std::size_t expected =
      static_cast<std::size_t>(width) * height * channels;
  if (samples_.size() != expected) {
    throw Error(ErrorCode::kShapeMismatch,
                "sample buffer has " + std::to_string(samples_.size()) +
                    " entries, expected " + std::to_string(expected));
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const double v = samples_[i];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw Error(ErrorCode::kOutOfRange,
                  "sample " + std::to_string(i) + " outside [0, 1]");
    }
  }
}

ScaleFactor::ScaleFactor(int value) : value_(value) {
  if (value < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "scale factor must be >= 1, got " + std::to_string(value));
  }
}

void RequireSameShape(const Image& a, const Image& b, const char* what) {
  if (!a.SameShape(b)) {
    throw Error(ErrorCode::kShapeMismatch,
                std::string(what) + ": shape mismatch (" +
                    std::to_string(a.width()) + "x" +
                    std::to_string(a.height()) + "x" +
                    std::to_string(a.channels()) + " vs " +
                    std::to_string(b.width()) + "x" +
                    std::to_string(b.height()) + "x" +
                    std::to_string(b.channels()) + ")");
  }
}

}  // namespace srsel
