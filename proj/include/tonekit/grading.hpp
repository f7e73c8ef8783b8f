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

// Deterministic application of an EditPlan to an image. Tools run in the
// fixed order adjust -> selective adjust -> LUT filter; a tool whose
// parameters are not used is skipped entirely, so unused tools are exact
// identities.
//
// Adjust sub-operations, in order (v = value / 100, luma L = Rec. 709):
//   linearOffset  c + 0.25 v
//   exposure      c * 2^v
//   contrast      0.5 + (c - 0.5)(1 + v)
//   brightness    c + 0.5 v
//   highlights    c + 0.25 v smoothstep(0.5, 1, L)
//   shadows       c + 0.25 v (1 - smoothstep(0, 0.5, L))
//   temperature   R + 0.1 v, B - 0.1 v
//   tint          G - 0.1 v, R + 0.05 v, B + 0.05 v
//   hue           HSL hue rotation by the value in degrees
//   saturation    L + (c - L)(1 + v)
//   vibrance      L + (c - L)(1 + v (1 - s)), s = HSL saturation
//   bloom         c + v * box(max(c - 0.8, 0) * 5, radius 2)
//   sharpen       c + v (c - box(c, radius 1))
//   structure     c + v (c - box(c, radius 4))
// Every sub-operation clamps to [0, 1]. Box blurs clamp at the borders.
//
// Selective bands use triangular hue membership (full weight within 15
// degrees of the band center, zero beyond 45). The weighted sums of the band
// saturation and luminance values, clamped to [-1, 1], drive the saturation
// and brightness formulas above. Achromatic pixels have no hue and are left
// alone.
//
// Filter: out = (1 - a) in + a preset(in), a = intensity / 100.
//
// Kernels are OpenMP-parallel over rows. Every output pixel depends only on
// the input buffer of its pass, so results are bit-identical for any thread
// count.

#include <array>
#include <cstddef>

#include "tonekit/image.hpp"
#include "tonekit/presets.hpp"
#include "tonekit/tool_schema.hpp"

namespace tonekit {

struct EngineOptions {
  std::size_t max_pixels = 64'000'000;
  int threads = 0;  // 0: OpenMP default
  std::array<bool, 3> tools = {true, true, true};  // indexed by Tool
};

// Throws ImageTooLarge when the image exceeds options.max_pixels.
Image apply_plan(const Image& image, const EditPlan& plan,
                 const PresetRegistry& registry = PresetRegistry::builtin(),
                 const EngineOptions& options = {});

Image apply_adjust(const Image& image, const AdjustParams& params, const EngineOptions& options = {});
Image apply_selective(const Image& image, const SelectiveAdjustParams& params,
                      const EngineOptions& options = {});
// Throws UnknownPreset.
Image apply_filter(const Image& image, const FilterParams& params,
                   const PresetRegistry& registry = PresetRegistry::builtin(),
                   const EngineOptions& options = {});
// The preset at full strength.
Image apply_preset(const Image& image, const PresetDefinition& preset, const EngineOptions& options = {});

// Serial, unfused implementation of the same math with naive 2-D box blurs.
// Kept as the test oracle and benchmark baseline for the kernels above.
namespace reference {

Image apply_plan(const Image& image, const EditPlan& plan,
                 const PresetRegistry& registry = PresetRegistry::builtin());
Image apply_adjust(const Image& image, const AdjustParams& params);
Image apply_selective(const Image& image, const SelectiveAdjustParams& params);
Image apply_filter(const Image& image, const FilterParams& params,
                   const PresetRegistry& registry = PresetRegistry::builtin());

}  // namespace reference

}  // namespace tonekit
