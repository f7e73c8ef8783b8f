// Copyright 2026 The tonekit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tonekit/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <memory>

#include "tonekit/error.hpp"
#include "tonekit/text.hpp"

namespace tonekit {
namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

[[noreturn]] void corrupt(const std::string& why) {
  throw Error(ErrorKind::kCorruptFile, why);
}

struct PngImageGuard {
  png_image* img;
  ~PngImageGuard() { png_image_free(img); }
};

// Reads one whitespace/comment separated unsigned integer from a PPM header.
unsigned long ppm_number(std::span<const std::uint8_t> b, std::size_t& pos) {
  while (pos < b.size()) {
    if (b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n') ++pos;
    } else if (std::isspace(b[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  if (pos >= b.size() || !std::isdigit(b[pos])) corrupt("bad PPM header");
  unsigned long v = 0;
  while (pos < b.size() && std::isdigit(b[pos])) {
    v = v * 10 + (b[pos] - '0');
    if (v > (1UL << 24)) corrupt("PPM dimension out of range");
    ++pos;
  }
  return v;
}

}  // namespace

Image::Image(int w, int h) : width(w), height(h), rgb(3 * static_cast<std::size_t>(w) * h, 0.0) {}

Image Image::filled(int w, int h, double r, double g, double b) {
  Image img(w, h);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    img.rgb[3 * i] = r;
    img.rgb[3 * i + 1] = g;
    img.rgb[3 * i + 2] = b;
  }
  return img;
}

double from_u8(std::uint8_t v) { return v / 255.0; }

std::uint8_t to_u8(double c) {
  const double scaled = std::floor(std::clamp(c, 0.0, 1.0) * 255.0 + 0.5);
  return static_cast<std::uint8_t>(scaled);
}

Image decode_png(std::span<const std::uint8_t> bytes) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  PngImageGuard guard{&img};
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    corrupt(std::string("PNG: ") + img.message);
  }
  const bool alpha = (img.format & PNG_FORMAT_FLAG_ALPHA) != 0;
  img.format = alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;
  const int channels = alpha ? 4 : 3;
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr)) {
    corrupt(std::string("PNG: ") + img.message);
  }
  Image out(static_cast<int>(img.width), static_cast<int>(img.height));
  if (alpha) out.alpha.resize(out.pixel_count());
  for (std::size_t i = 0; i < out.pixel_count(); ++i) {
    for (int c = 0; c < 3; ++c) out.rgb[3 * i + c] = from_u8(buf[channels * i + c]);
    if (alpha) out.alpha[i] = buf[channels * i + 3];
  }
  return out;
}

std::vector<std::uint8_t> encode_png(const Image& image) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width);
  img.height = static_cast<png_uint_32>(image.height);
  const bool alpha = image.has_alpha();
  img.format = alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;
  const int channels = alpha ? 4 : 3;
  std::vector<std::uint8_t> buf(image.pixel_count() * channels);
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    for (int c = 0; c < 3; ++c) buf[channels * i + c] = to_u8(image.rgb[3 * i + c]);
    if (alpha) buf[channels * i + 3] = image.alpha[i];
  }
  // Fast filtering/compression; one pass into a worst-case sized buffer.
  img.flags |= PNG_IMAGE_FLAG_FAST;
  png_alloc_size_t size = PNG_IMAGE_PNG_SIZE_MAX(img);
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, buf.data(), 0, nullptr)) {
    throw Error(ErrorKind::kIo, std::string("PNG encode: ") + img.message);
  }
  out.resize(size);
  png_image_free(&img);
  return out;
}

Image decode_ppm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    throw Error(ErrorKind::kUnsupportedFormat, "not a binary PPM (P6)");
  }
  std::size_t pos = 2;
  const unsigned long w = ppm_number(bytes, pos);
  const unsigned long h = ppm_number(bytes, pos);
  const unsigned long maxval = ppm_number(bytes, pos);
  if (w == 0 || h == 0) corrupt("PPM with zero dimension");
  if (maxval != 255) {
    throw Error(ErrorKind::kUnsupportedFormat,
                "PPM maxval " + std::to_string(maxval) + " unsupported (only 255)");
  }
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) corrupt("bad PPM header terminator");
  ++pos;
  const std::size_t need = 3 * static_cast<std::size_t>(w) * h;
  if (bytes.size() - pos < need) corrupt("truncated PPM data");
  Image out(static_cast<int>(w), static_cast<int>(h));
  for (std::size_t i = 0; i < need; ++i) out.rgb[i] = from_u8(bytes[pos + i]);
  return out;
}

std::vector<std::uint8_t> encode_ppm(const Image& image) {
  const std::string header =
      "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(header.size() + image.rgb.size());
  for (double c : image.rgb) out.push_back(to_u8(c));
  return out;
}

Image decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) corrupt("empty image file");
  if (bytes.size() >= 8 && std::equal(std::begin(kPngSignature), std::end(kPngSignature), bytes.begin())) {
    return decode_png(bytes);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') return decode_ppm(bytes);
  if (bytes.size() < 8) corrupt("image file too short");
  throw Error(ErrorKind::kUnsupportedFormat, "unrecognized image format");
}

Image load_image(const std::string& path) {
  const std::string data = read_file(path);
  try {
    return decode_image(
        {reinterpret_cast<const std::uint8_t*>(data.data()), data.size()});
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what(), {path});
  }
}

void save_image(const Image& image, const std::string& path) {
  const std::string ext = to_lower_ascii(std::filesystem::path(path).extension().string());
  std::vector<std::uint8_t> bytes;
  if (ext == ".png") {
    bytes = encode_png(image);
  } else if (ext == ".ppm" || ext == ".pnm") {
    bytes = encode_ppm(image);
  } else {
    throw Error(ErrorKind::kUnsupportedFormat, "cannot infer image format from " + path, {path});
  }
  write_file(path, {reinterpret_cast<const char*>(bytes.data()), bytes.size()});
}

}  // namespace tonekit
