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

// Random generators and scratch-directory helpers shared by the test suites.

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "tonekit/image.hpp"
#include "tonekit/tool_schema.hpp"

namespace tonekit::testing {

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline AdjustParams random_adjust(std::mt19937_64& rng) {
  AdjustParams p;
  for (const auto& f : kAdjustFields) {
    // Half the fields stay at zero so sparse plans are exercised too.
    p.*f.member = uniform_int(rng, 0, 1) ? uniform_int(rng, f.range.lo, f.range.hi) : 0;
  }
  return p;
}

inline SelectiveAdjustParams random_selective(std::mt19937_64& rng) {
  SelectiveAdjustParams p;
  for (auto& b : p.bands) {
    if (uniform_int(rng, 0, 1)) b.saturation = uniform_int(rng, -100, 100);
    if (uniform_int(rng, 0, 1)) b.luminance = uniform_int(rng, -100, 100);
  }
  return p;
}

inline FilterParams random_filter(std::mt19937_64& rng) {
  return {std::string(kFilterPresets[uniform_int(rng, 0, kFilterPresets.size() - 1)]), uniform_int(rng, 0, 100)};
}

// Each tool is present with probability 3/4; unused sections are dropped.
inline EditPlan random_plan(std::mt19937_64& rng) {
  EditPlan plan;
  if (uniform_int(rng, 0, 3)) plan.adjust = random_adjust(rng);
  if (uniform_int(rng, 0, 3)) plan.selective = random_selective(rng);
  if (uniform_int(rng, 0, 3)) plan.filter = random_filter(rng);
  return without_unused(plan);
}

// 8-bit quantized values, like anything decoded from a file.
inline Image random_image(std::mt19937_64& rng, int w, int h, bool alpha = false) {
  Image img(w, h);
  for (auto& c : img.rgb) c = from_u8(static_cast<std::uint8_t>(uniform_int(rng, 0, 255)));
  if (alpha) {
    img.alpha.resize(img.pixel_count());
    for (auto& a : img.alpha) a = static_cast<std::uint8_t>(uniform_int(rng, 0, 255));
  }
  return img;
}

inline double max_abs_diff(const Image& a, const Image& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.rgb.size(); ++i) m = std::max(m, std::abs(a.rgb[i] - b.rgb[i]));
  return m;
}

// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("tonekit_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace tonekit::testing
