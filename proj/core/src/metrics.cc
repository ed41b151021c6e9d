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

#include "srsel/metrics.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "srsel/resample.h"

namespace srsel {
namespace {

std::vector<double> GaussianWindow(int size, double sigma) {
  std::vector<double> w(size);
  const double center = (size - 1) / 2.0;
  double total = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - center;
    w[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    total += w[i];
  }
  for (double& v : w) v /= total;
  return w;
}

// Separable "valid" filtering: out is (w - k + 1) x (h - k + 1).
std::vector<double> FilterValid(const std::vector<double>& in, int w, int h,
                                const std::vector<double>& kernel) {
  const int k = static_cast<int>(kernel.size());
  const int ow = w - k + 1;
  const int oh = h - k + 1;
  std::vector<double> mid(static_cast<std::size_t>(h) * ow);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < k; ++i) acc += kernel[i] * in[y * w + x + i];
      mid[y * ow + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < k; ++i) acc += kernel[i] * mid[(y + i) * ow + x];
      out[y * ow + x] = acc;
    }
  }
  return out;
}

Image LumaOrSelf(const Image& img) {
  return img.channels() == 3 ? ToLuma(img) : img;
}

}  // namespace

double Mse(const Image& a, const Image& b) {
  RequireSameShape(a, b, "mse");
  const auto sa = a.samples();
  const auto sb = b.samples();
  double acc = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const double d = sa[i] - sb[i];
    acc += d * d;
  }
  return acc / static_cast<double>(sa.size());
}

double PsnrFromMse(double mse) {
  if (mse < kMseFloor) return kPsnrCapDb;
  return std::min(kPsnrCapDb, 10.0 * std::log10(1.0 / mse));
}

double Psnr(const Image& a, const Image& b, PsnrMode mode) {
  RequireSameShape(a, b, "psnr");
  if (mode == PsnrMode::kLuma) {
    return PsnrFromMse(Mse(LumaOrSelf(a), LumaOrSelf(b)));
  }
  return PsnrFromMse(Mse(a, b));
}

double Ssim(const Image& a, const Image& b, const SsimParams& params) {
  RequireSameShape(a, b, "ssim");
  const int k = params.window;
  if (a.width() < k || a.height() < k) {
    throw Error(ErrorCode::kInvalidArgument,
                "ssim needs images of at least " + std::to_string(k) + "x" +
                    std::to_string(k));
  }
  const Image ya = LumaOrSelf(a);
  const Image yb = LumaOrSelf(b);
  const int w = ya.width();
  const int h = ya.height();
  const std::vector<double> x(ya.samples().begin(), ya.samples().end());
  const std::vector<double> y(yb.samples().begin(), yb.samples().end());
  std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto kernel = GaussianWindow(k, params.sigma);
  const auto mu_x = FilterValid(x, w, h, kernel);
  const auto mu_y = FilterValid(y, w, h, kernel);
  const auto e_xx = FilterValid(xx, w, h, kernel);
  const auto e_yy = FilterValid(yy, w, h, kernel);
  const auto e_xy = FilterValid(xy, w, h, kernel);

  const double c1 = std::pow(params.k1 * params.dynamic_range, 2);
  const double c2 = std::pow(params.k2 * params.dynamic_range, 2);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_x.size(); ++i) {
    const double mx = mu_x[i];
    const double my = mu_y[i];
    const double var_x = e_xx[i] - mx * mx;
    const double var_y = e_yy[i] - my * my;
    const double cov = e_xy[i] - mx * my;
    const double num = (2.0 * mx * my + c1) * (2.0 * cov + c2);
    const double den = (mx * mx + my * my + c1) * (var_x + var_y + c2);
    total += num / den;
  }
  return std::clamp(total / static_cast<double>(mu_x.size()), -1.0, 1.0);
}

double LrConsistency(const Image& sr, const Image& lr, ScaleFactor factor) {
  const int f = factor.value();
  if (sr.width() != lr.width() * f || sr.height() != lr.height() * f ||
      sr.channels() != lr.channels()) {
    throw Error(ErrorCode::kShapeMismatch,
                "lr_consistency: SR " + std::to_string(sr.width()) + "x" +
                    std::to_string(sr.height()) + " is not LR " +
                    std::to_string(lr.width()) + "x" +
                    std::to_string(lr.height()) + " times " +
                    std::to_string(f));
  }
  return Psnr(Degrade(sr, factor), lr);
}

MetricReport BuildReport(const std::string& image_id, const Image& sr,
                         const Image& hr, const Image& lr, ScaleFactor factor,
                         const ExternalScoreTable& external, PsnrMode mode) {
  MetricReport report;
  report.image_id = image_id;
  report.mse = Mse(sr, hr);
  report.psnr_db = Psnr(sr, hr, mode);
  report.ssim = Ssim(sr, hr);
  report.lr_consistency_db = LrConsistency(sr, lr, factor);
  report.external = external.ScoresFor(image_id);
  return report;
}

}  // namespace srsel
