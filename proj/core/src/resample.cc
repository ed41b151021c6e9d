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

#include "srsel/resample.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace srsel {
namespace {

constexpr double kCubicA = -0.5;

struct Tap {
  int index;
  double weight;
};

// Normalised taps for every output position along one axis.
std::vector<std::vector<Tap>> AxisTaps(int in_len, int out_len,
                                       bool antialias) {
  const double scale = static_cast<double>(in_len) / out_len;
  const double stretch = (antialias && scale > 1.0) ? scale : 1.0;
  const double support = 2.0 * stretch;

  std::vector<std::vector<Tap>> taps(out_len);
  for (int i = 0; i < out_len; ++i) {
    const double center = (i + 0.5) * scale - 0.5;
    const int first = static_cast<int>(std::floor(center - support));
    const int last = static_cast<int>(std::ceil(center + support));
    double total = 0.0;
    auto& row = taps[i];
    for (int j = first; j <= last; ++j) {
      const double w = CubicKernel((center - j) / stretch);
      if (w == 0.0) continue;
      row.push_back({std::clamp(j, 0, in_len - 1), w});
      total += w;
    }
    for (Tap& t : row) t.weight /= total;
  }
  return taps;
}

}  // namespace

double CubicKernel(double x) {
  const double ax = std::abs(x);
  const double ax2 = ax * ax;
  const double ax3 = ax2 * ax;
  if (ax <= 1.0) return (kCubicA + 2.0) * ax3 - (kCubicA + 3.0) * ax2 + 1.0;
  if (ax < 2.0) {
    return kCubicA * ax3 - 5.0 * kCubicA * ax2 + 8.0 * kCubicA * ax -
           4.0 * kCubicA;
  }
  return 0.0;
}

Image BicubicResize(const Image& src, const ResampleSpec& spec) {
  if (spec.target_width < 1 || spec.target_height < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "resample target must be at least 1x1");
  }
  const int in_w = src.width();
  const int in_h = src.height();
  const int out_w = spec.target_width;
  const int out_h = spec.target_height;
  const int ch = src.channels();
  const auto xtaps = AxisTaps(in_w, out_w, spec.antialias);
  const auto ytaps = AxisTaps(in_h, out_h, spec.antialias);
  const auto in = src.samples();

  // Horizontal pass into an in_h x out_w intermediate, unclamped.
  std::vector<double> mid(static_cast<std::size_t>(in_h) * out_w * ch);
  for (int y = 0; y < in_h; ++y) {
    const double* row = in.data() + static_cast<std::size_t>(y) * in_w * ch;
    double* out_row = mid.data() + static_cast<std::size_t>(y) * out_w * ch;
    for (int x = 0; x < out_w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (const Tap& t : xtaps[x]) acc += t.weight * row[t.index * ch + c];
        out_row[x * ch + c] = acc;
      }
    }
  }

  std::vector<double> out(static_cast<std::size_t>(out_h) * out_w * ch, 0.0);
  const std::size_t stride = static_cast<std::size_t>(out_w) * ch;
  for (int y = 0; y < out_h; ++y) {
    double* out_row = out.data() + y * stride;
    for (const Tap& t : ytaps[y]) {
      const double* mid_row = mid.data() + t.index * stride;
      for (std::size_t i = 0; i < stride; ++i) {
        out_row[i] += t.weight * mid_row[i];
      }
    }
    for (std::size_t i = 0; i < stride; ++i) {
      out_row[i] = std::clamp(out_row[i], 0.0, 1.0);
    }
  }
  return Image(out_w, out_h, ch, std::move(out));
}

Image Degrade(const Image& hr, ScaleFactor factor) {
  const int f = factor.value();
  if (hr.width() % f != 0 || hr.height() % f != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "image " + std::to_string(hr.width()) + "x" +
                    std::to_string(hr.height()) + " is not divisible by " +
                    std::to_string(f));
  }
  return BicubicResize(hr, {hr.width() / f, hr.height() / f, true});
}

Image TileReplicate(const Image& src, int reps_horizontal, int reps_vertical) {
  if (reps_horizontal < 1 || reps_vertical < 1) {
    throw Error(ErrorCode::kInvalidArgument, "tile repetitions must be >= 1");
  }
  const int w = src.width();
  const int h = src.height();
  const int ch = src.channels();
  const int out_w = w * reps_horizontal;
  const int out_h = h * reps_vertical;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(out_w) * out_h * ch);
  const auto in = src.samples();
  for (int y = 0; y < out_h; ++y) {
    const auto row = in.subspan(static_cast<std::size_t>(y % h) * w * ch,
                                static_cast<std::size_t>(w) * ch);
    for (int r = 0; r < reps_horizontal; ++r) {
      out.insert(out.end(), row.begin(), row.end());
    }
  }
  return Image(out_w, out_h, ch, std::move(out));
}

Image Crop(const Image& src, int x, int y, int w, int h) {
  if (x < 0 || y < 0 || w < 1 || h < 1 || x + w > src.width() ||
      y + h > src.height()) {
    throw Error(ErrorCode::kOutOfRange,
                "crop rectangle (" + std::to_string(x) + "," +
                    std::to_string(y) + "," + std::to_string(w) + "," +
                    std::to_string(h) + ") exceeds " +
                    std::to_string(src.width()) + "x" +
                    std::to_string(src.height()));
  }
  const int ch = src.channels();
  const auto in = src.samples();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(w) * h * ch);
  for (int row = y; row < y + h; ++row) {
    const auto begin =
        in.begin() + (static_cast<std::size_t>(row) * src.width() + x) * ch;
    out.insert(out.end(), begin, begin + static_cast<std::ptrdiff_t>(w) * ch);
  }
  return Image(w, h, ch, std::move(out));
}

Image ToLuma(const Image& src) {
  if (src.channels() != 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "luma conversion needs a 3-channel image");
  }
  const auto in = src.samples();
  std::vector<double> out(in.size() / 3);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double y =
        0.299 * in[3 * i] + 0.587 * in[3 * i + 1] + 0.114 * in[3 * i + 2];
    out[i] = std::clamp(y, 0.0, 1.0);
  }
  return Image(src.width(), src.height(), 1, std::move(out));
}

}  // namespace srsel
