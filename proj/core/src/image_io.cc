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

#include "srsel/image_io.h"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace srsel {
namespace {

class PngImage {
 public:
  PngImage() {
    std::memset(&image_, 0, sizeof(image_));
    image_.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&image_); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;

  png_image* get() { return &image_; }
  png_image* operator->() { return &image_; }

 private:
  png_image image_;
};

Image DecodeWith(PngImage& png, const std::string& what) {
  const png_uint_32 format = png->format;
  if (format & PNG_FORMAT_FLAG_ALPHA) {
    throw Error(ErrorCode::kInvalidArgument,
                what + ": PNG has an alpha channel");
  }
  if (format & PNG_FORMAT_FLAG_LINEAR) {
    throw Error(ErrorCode::kInvalidArgument, what + ": PNG is not 8-bit");
  }
  const int channels = (format & PNG_FORMAT_FLAG_COLOR) ? 3 : 1;
  png->format = channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(*png.get()));
  if (!png_image_finish_read(png.get(), nullptr, buffer.data(), 0, nullptr)) {
    throw Error(ErrorCode::kParse,
                what + ": PNG decode failed: " + png->message);
  }
  std::vector<double> samples(buffer.size());
  std::transform(buffer.begin(), buffer.end(), samples.begin(),
                 [](png_byte b) { return b / 255.0; });
  return Image(static_cast<int>(png->width), static_cast<int>(png->height),
               channels, std::move(samples));
}

std::vector<png_byte> ToBytes(const Image& image) {
  const auto in = image.samples();
  std::vector<png_byte> bytes(in.size());
  std::transform(in.begin(), in.end(), bytes.begin(), QuantizeSample);
  return bytes;
}

void PutU32(std::ostream& os, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff),
                     static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff),
                     static_cast<char>((v >> 24) & 0xff)};
  os.write(b, 4);
}

std::uint32_t GetU32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

std::uint8_t QuantizeSample(double v) {
  const double scaled = std::clamp(v * 255.0, 0.0, 255.0);
  // std::round rounds halves away from zero.
  return static_cast<std::uint8_t>(std::round(scaled));
}

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

Image DecodePng(std::span<const std::uint8_t> bytes) {
  PngImage png;
  if (!png_image_begin_read_from_memory(png.get(), bytes.data(),
                                        bytes.size())) {
    throw Error(ErrorCode::kParse,
                std::string("not a readable PNG: ") + png->message);
  }
  return DecodeWith(png, "<memory>");
}

Image LoadPng(const std::filesystem::path& path) {
  const auto bytes = ReadFileBytes(path);
  PngImage png;
  if (!png_image_begin_read_from_memory(png.get(), bytes.data(),
                                        bytes.size())) {
    throw Error(ErrorCode::kParse,
                path.string() + ": not a readable PNG: " + png->message);
  }
  return DecodeWith(png, path.string());
}

std::vector<std::uint8_t> EncodePng(const Image& image) {
  PngImage png;
  png->width = static_cast<png_uint_32>(image.width());
  png->height = static_cast<png_uint_32>(image.height());
  png->format = image.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const auto bytes = ToBytes(image);
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(*png.get(), size, 0, bytes.data(), 0,
                                       nullptr)) {
    throw Error(ErrorCode::kIo, std::string("PNG encode failed: ") +
                                    png->message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(png.get(), out.data(), &size, 0, bytes.data(),
                                 0, nullptr)) {
    throw Error(ErrorCode::kIo, std::string("PNG encode failed: ") +
                                    png->message);
  }
  out.resize(size);
  return out;
}

void SavePng(const Image& image, const std::filesystem::path& path) {
  const auto bytes = EncodePng(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

Image LoadRawF32(const std::filesystem::path& path) {
  const auto bytes = ReadFileBytes(path);
  if (bytes.size() < 16) {
    throw Error(ErrorCode::kParse, path.string() + ": truncated header");
  }
  const auto width = GetU32(bytes.data());
  const auto height = GetU32(bytes.data() + 4);
  const auto channels = GetU32(bytes.data() + 8);
  const std::size_t count = static_cast<std::size_t>(width) * height * channels;
  if (bytes.size() != 16 + 4 * count) {
    throw Error(ErrorCode::kParse, path.string() + ": payload size mismatch");
  }
  const std::size_t plane = static_cast<std::size_t>(width) * height;
  std::vector<double> samples(count);
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t i = 0; i < plane; ++i) {
      const std::uint32_t bits = GetU32(bytes.data() + 16 + 4 * (c * plane + i));
      samples[i * channels + c] = std::bit_cast<float>(bits);
    }
  }
  return Image(static_cast<int>(width), static_cast<int>(height),
               static_cast<int>(channels), std::move(samples));
}

void SaveRawF32(const Image& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  PutU32(out, static_cast<std::uint32_t>(image.width()));
  PutU32(out, static_cast<std::uint32_t>(image.height()));
  PutU32(out, static_cast<std::uint32_t>(image.channels()));
  PutU32(out, 0);
  const int ch = image.channels();
  const std::size_t plane =
      static_cast<std::size_t>(image.width()) * image.height();
  for (int c = 0; c < ch; ++c) {
    for (std::size_t i = 0; i < plane; ++i) {
      const float v = static_cast<float>(image.samples()[i * ch + c]);
      PutU32(out, std::bit_cast<std::uint32_t>(v));
    }
  }
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

}  // namespace srsel
