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

// Parametric stand-ins for the LUT presets. A preset is a short program of
// engine operations; the registry file is the authoritative definition.
//
// Registry grammar (one directive per line, '#' starts a comment):
//
//   preset <name>
//     adjust <param>=<int> ...            # AdjustParams field names
//     band <color> [saturation=<int>] [luminance=<int>]
//     invert
//     duotone <r> <g> <b> <r> <g> <b>     # dark then light endpoint, 0..255
//     gain <r> <g> <b>                    # per-channel multiplier, 0..4
//     offset <r> <g> <b>                  # per-channel addend, -1..1
//   end
//
// Every preset name except "none" must be defined exactly once; "none" is the
// identity and may not be defined.

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tonekit/tool_schema.hpp"

namespace tonekit {

struct PresetOp {
  enum class Kind { kAdjust, kBand, kInvert, kDuotone, kGain, kOffset };

  Kind kind = Kind::kInvert;
  AdjustParams adjust;              // kAdjust
  SelectiveAdjustParams selective;  // kBand
  std::array<double, 3> a{};        // duotone dark / gain / offset
  std::array<double, 3> b{};        // duotone light
};

struct PresetDefinition {
  std::string name;
  std::vector<PresetOp> ops;
};

class PresetRegistry {
 public:
  // Throws InvalidInput with the offending line number.
  static PresetRegistry parse(std::string_view text, std::string_view source = "<registry>");
  static PresetRegistry load(const std::string& path);
  // The registry shipped in assets/presets.txt.
  static const PresetRegistry& builtin();

  // nullptr for "none"; throws UnknownPreset for names not in the registry.
  const PresetDefinition* find(std::string_view name) const;
  std::size_t size() const { return presets_.size(); }

 private:
  std::map<std::string, PresetDefinition, std::less<>> presets_;
};

}  // namespace tonekit
