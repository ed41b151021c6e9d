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

#ifndef SRSEL_RESAMPLE_H_
#define SRSEL_RESAMPLE_H_

#include "srsel/image.h"

namespace srsel {

// Cubic-convolution kernel with a = -0.5 (the kernel MATLAB's imresize
// calls "bicubic").
double CubicKernel(double x);

// Separable bicubic resampling with half-pixel-centred sampling.
// Taps falling outside the source clamp to the nearest edge pixel. When
// `spec.antialias` is set and an axis shrinks, the kernel is stretched by the
// shrink factor along that axis. Weights are renormalised to sum to 1 and
// the output is clamped to [0, 1].
Image BicubicResize(const Image& src, const ResampleSpec& spec);

// HR -> LR degradation: antialiased bicubic shrink by `factor`. Dimensions
// must be divisible by the factor; nothing is cropped or padded.
Image Degrade(const Image& hr, ScaleFactor factor);

// Periodic tiling: out(x, y) = src(x mod w, y mod h).
Image TileReplicate(const Image& src, int reps_horizontal, int reps_vertical);

// Exact copy of the w x h rectangle at (x, y); the rectangle must lie inside
// the source.
Image Crop(const Image& src, int x, int y, int w, int h);

// Rec.601 luma, Y = 0.299 R + 0.587 G + 0.114 B. Requires 3 channels.
Image ToLuma(const Image& src);

}  // namespace srsel

#endif  // SRSEL_RESAMPLE_H_
