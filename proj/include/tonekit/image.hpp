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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tonekit {

// Row-major interleaved RGB with channels in [0, 1]. Alpha, when present, is
// carried through every operation untouched.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> rgb;
  std::vector<std::uint8_t> alpha;  // empty, or width * height entries

  Image() = default;
  Image(int w, int h);

  static Image filled(int w, int h, double r, double g, double b);

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  double* pixel(int x, int y) { return rgb.data() + 3 * (static_cast<std::size_t>(y) * width + x); }
  const double* pixel(int x, int y) const {
    return rgb.data() + 3 * (static_cast<std::size_t>(y) * width + x);
  }
  bool has_alpha() const { return !alpha.empty(); }

  bool operator==(const Image&) const = default;
};

// v / 255 on the way in; round half up of v * 255 on the way out.
double from_u8(std::uint8_t v);
std::uint8_t to_u8(double c);

// Format is sniffed from the content (PNG signature or "P6"). Throws
// CorruptFile for empty/truncated data and UnsupportedFormat otherwise.
Image load_image(const std::string& path);
// Format chosen by extension: .png, .ppm or .pnm.
void save_image(const Image& image, const std::string& path);

Image decode_image(std::span<const std::uint8_t> bytes);
Image decode_png(std::span<const std::uint8_t> bytes);
Image decode_ppm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_png(const Image& image);
std::vector<std::uint8_t> encode_ppm(const Image& image);

}  // namespace tonekit
