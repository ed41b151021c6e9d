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

#ifndef SRSEL_TESTS_TESTING_REFERENCE_VALUES_H_
#define SRSEL_TESTS_TESTING_REFERENCE_VALUES_H_

#include <vector>

#include "srsel/image.h"

namespace srsel::testing {

// Reference values from scikit-image's structural_similarity (Gaussian
// weights, sigma 1.5, population covariance, data_range 1.0); see
// tests/data/make_fixtures.py.
inline constexpr double kSsimConst02vs07 = 0.528390869647;       // 16x16
inline constexpr double kSsimCheckerVsInverted = -0.985702938840;  // 16x16
inline constexpr double kSsimDigitVsBlurred = 0.655753249612;

inline Image Checkerboard(int size, bool inverted) {
  std::vector<double> s(static_cast<std::size_t>(size) * size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const bool even = (x + y) % 2 == 0;
      s[y * size + x] = (even != inverted) ? 0.25 : 0.75;
    }
  }
  return Image(size, size, 1, std::move(s));
}

}  // namespace srsel::testing

#endif  // SRSEL_TESTS_TESTING_REFERENCE_VALUES_H_
