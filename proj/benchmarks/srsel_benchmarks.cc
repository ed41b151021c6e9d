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

#include <random>
#include <string>
#include <vector>

#include "benchmark/benchmark.h"
#include "srsel/ensemble.h"
#include "srsel/metrics.h"
#include "srsel/resample.h"
#include "srsel/study.h"

namespace srsel {
namespace {

Image Noise(int w, int h, int c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<double> s(static_cast<std::size_t>(w) * h * c);
  for (double& v : s) v = dist(rng);
  return Image(w, h, c, std::move(s));
}

void BM_Degrade(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const Image hr = Noise(size, size, 3, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Degrade(hr, ScaleFactor(4)));
  }
  state.SetItemsProcessed(state.iterations() * size * size);
}
BENCHMARK(BM_Degrade)->Arg(128)->Arg(512);

void BM_Upscale(benchmark::State& state) {
  const Image lr = Noise(64, 64, 3, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(BicubicResize(lr, {256, 256, true}));
  }
}
BENCHMARK(BM_Upscale);

void BM_Ssim(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const Image a = Noise(size, size, 3, 3);
  const Image b = Noise(size, size, 3, 4);
  for (auto _ : state) benchmark::DoNotOptimize(Ssim(a, b));
  state.SetItemsProcessed(state.iterations() * size * size);
}
BENCHMARK(BM_Ssim)->Arg(128)->Arg(512);

void BM_Tally(benchmark::State& state) {
  const int voters = static_cast<int>(state.range(0));
  constexpr int kCandidates = 324;
  std::mt19937_64 rng(5);
  std::vector<Ballot> ballots;
  for (int v = 0; v < voters; ++v) {
    const int a = static_cast<int>(rng() % kCandidates);
    const int b = (a + 1 + static_cast<int>(rng() % (kCandidates - 1))) % kCandidates;
    ballots.push_back(Ballot{"v" + std::to_string(v), "s", {a, b},
                             v % 3 ? "5" : "6", std::nullopt});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(Tally(ballots, "s", kCandidates, 2));
  }
  state.SetItemsProcessed(state.iterations() * voters);
}
BENCHMARK(BM_Tally)->Arg(30)->Arg(10000);

void BM_PixelAverage(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  std::vector<Image> images;
  for (int i = 0; i < k; ++i) images.push_back(Noise(256, 256, 3, 10 + i));
  for (auto _ : state) benchmark::DoNotOptimize(PixelAverage(images));
}
BENCHMARK(BM_PixelAverage)->Arg(3)->Arg(5);

void BM_DisplayPermutation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(DisplayPermutation(7, "session", 0, n));
  }
}
BENCHMARK(BM_DisplayPermutation)->Arg(15)->Arg(1024);

}  // namespace
}  // namespace srsel

BENCHMARK_MAIN();
