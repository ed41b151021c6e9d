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

#ifndef SRSEL_METRICS_H_
#define SRSEL_METRICS_H_

#include <map>
#include <string>

#include "srsel/external_scores.h"
#include "srsel/image.h"

namespace srsel {

// Reported in place of +inf when two images are (numerically) identical.
inline constexpr double kPsnrCapDb = 100.0;
// Below this MSE the PSNR is reported as kPsnrCapDb.
inline constexpr double kMseFloor = 1e-10;

enum class PsnrMode {
  kRgbJoint,  // all samples of all channels, data range 1.0
  kLuma,      // Rec.601 luma of 3-channel inputs; 1-channel inputs unchanged
};

double Mse(const Image& a, const Image& b);
double PsnrFromMse(double mse);
double Psnr(const Image& a, const Image& b, PsnrMode mode = PsnrMode::kRgbJoint);

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;
};

// Mean SSIM over every position where the Gaussian window fits entirely
// inside the image. 3-channel inputs are compared on luma.
double Ssim(const Image& a, const Image& b, const SsimParams& params = {});

// PSNR between the degraded SR image and the observed LR image.
double LrConsistency(const Image& sr, const Image& lr, ScaleFactor factor);

struct MetricReport {
  std::string image_id;
  double psnr_db = 0.0;
  double ssim = 0.0;
  double mse = 0.0;
  double lr_consistency_db = 0.0;
  std::map<std::string, double> external;
};

MetricReport BuildReport(const std::string& image_id, const Image& sr,
                         const Image& hr, const Image& lr, ScaleFactor factor,
                         const ExternalScoreTable& external,
                         PsnrMode mode = PsnrMode::kRgbJoint);

}  // namespace srsel

#endif  // SRSEL_METRICS_H_
