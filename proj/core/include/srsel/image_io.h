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

#ifndef SRSEL_IMAGE_IO_H_
#define SRSEL_IMAGE_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "srsel/image.h"

namespace srsel {

// 8-bit PNG, gray or RGB. Images with an alpha channel (including palettes
// with transparency) and 16-bit files are rejected. Samples decode as v/255.
Image LoadPng(const std::filesystem::path& path);
Image DecodePng(std::span<const std::uint8_t> bytes);

// Quantises each sample as round-half-away-from-zero(v * 255).
void SavePng(const Image& image, const std::filesystem::path& path);
std::vector<std::uint8_t> EncodePng(const Image& image);

std::uint8_t QuantizeSample(double v);

// Raw float dump: 16-byte header of little-endian u32 (width, height,
// channels, reserved = 0) followed by little-endian float32 samples in planar
// order (all of channel 0, then channel 1, ...).
Image LoadRawF32(const std::filesystem::path& path);
void SaveRawF32(const Image& image, const std::filesystem::path& path);

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path);

}  // namespace srsel

#endif  // SRSEL_IMAGE_IO_H_
