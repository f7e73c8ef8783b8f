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

// Typed parameter sets for the three tonal tools (global adjust, selective
// adjust, LUT filter), range validation, and canonical serialization.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tonekit/text.hpp"

namespace tonekit {

enum class Tool { kAdjust, kSelective, kFilter };

inline constexpr std::array<Tool, 3> kAllTools = {Tool::kAdjust, Tool::kSelective,
                                                  Tool::kFilter};

// Short name used on the command line, in logs and in reports.
std::string_view tool_name(Tool tool);
// Section key inside a serialized plan ("adjust", "selectiveAdjust", "filter").
std::string_view plan_key(Tool tool);
// Accepts short names and plan keys.
std::optional<Tool> parse_tool(std::string_view name);

struct ParamRange {
  int lo;
  int hi;
};

struct AdjustParams {
  int exposure = 0;
  int contrast = 0;
  int brightness = 0;
  int highlights = 0;
  int shadows = 0;
  int saturation = 0;
  int vibrance = 0;
  int temperature = 0;
  int tint = 0;
  int linear_offset = 0;
  int hue = 0;
  int bloom = 0;
  int sharpen = 0;
  int structure = 0;

  bool operator==(const AdjustParams&) const = default;
};

struct AdjustField {
  std::string_view name;
  int AdjustParams::*member;
  ParamRange range;
};

// Declared field order; also the order of the 14-dim vector used by cosine
// scoring.
inline constexpr std::array<AdjustField, 14> kAdjustFields = {{
    {"exposure", &AdjustParams::exposure, {-100, 100}},
    {"contrast", &AdjustParams::contrast, {-100, 100}},
    {"brightness", &AdjustParams::brightness, {-100, 100}},
    {"highlights", &AdjustParams::highlights, {-100, 100}},
    {"shadows", &AdjustParams::shadows, {-100, 100}},
    {"saturation", &AdjustParams::saturation, {-100, 100}},
    {"vibrance", &AdjustParams::vibrance, {-100, 100}},
    {"temperature", &AdjustParams::temperature, {-100, 100}},
    {"tint", &AdjustParams::tint, {-100, 100}},
    {"linearOffset", &AdjustParams::linear_offset, {-100, 100}},
    {"hue", &AdjustParams::hue, {0, 360}},
    {"bloom", &AdjustParams::bloom, {0, 100}},
    {"sharpen", &AdjustParams::sharpen, {0, 100}},
    {"structure", &AdjustParams::structure, {0, 100}},
}};

std::array<double, 14> to_vector(const AdjustParams& p);

enum class ColorBand { kRed, kOrange, kYellow, kGreen, kCyan, kBlue };

inline constexpr std::array<std::string_view, 6> kBandNames = {"red",  "orange", "yellow",
                                                               "green", "cyan",  "blue"};
inline constexpr ParamRange kBandRange = {-100, 100};

struct BandParams {
  int saturation = 0;
  int luminance = 0;

  bool operator==(const BandParams&) const = default;
};

struct SelectiveAdjustParams {
  std::array<BandParams, 6> bands{};

  BandParams& operator[](ColorBand b) { return bands[static_cast<std::size_t>(b)]; }
  const BandParams& operator[](ColorBand b) const { return bands[static_cast<std::size_t>(b)]; }
  bool operator==(const SelectiveAdjustParams&) const = default;
};

// red.sat, red.lum, orange.sat, ... blue.lum
std::array<double, 12> to_vector(const SelectiveAdjustParams& p);

// Closed preset list offered to the teacher. "teal_and_orange_1" is listed
// twice in the original prompt; it is a single preset here.
inline constexpr std::array<std::string_view, 34> kFilterPresets = {
    "none",          "lovely_day",        "action",            "vivid",
    "north",         "purple_rain",       "winter",            "faded_Retro",
    "faded_HighNoon", "faded_Mist",       "faded_Terra",       "faded_Vista",
    "faded_C1",      "faded_AL2",         "teal_and_orange_1", "teal_and_orange_2",
    "teal_and_orange_3", "teal_and_orange_4", "teal_and_orange_5", "teal_and_orange_6",
    "fortune",       "duotone_red",       "spring",            "duotone_pink",
    "enchanted",     "duotone_green",     "ultra",             "duotone_yellow",
    "firecracker",   "duotone_orange",    "cyberpunk",         "darkness",
    "night_vision",  "negative"};

inline constexpr std::string_view kNoPreset = "none";
inline constexpr ParamRange kIntensityRange = {0, 100};

bool is_known_preset(std::string_view name);

struct FilterParams {
  std::string name{kNoPreset};
  int intensity = 0;

  bool operator==(const FilterParams&) const = default;
};

// One optional parameter set per tool; an absent tool is "not used".
struct EditPlan {
  std::optional<AdjustParams> adjust;
  std::optional<SelectiveAdjustParams> selective;
  std::optional<FilterParams> filter;

  bool operator==(const EditPlan&) const = default;
};

bool is_used(const AdjustParams& p);
bool is_used(const SelectiveAdjustParams& p);
bool is_used(const FilterParams& p);
template <typename Params>
bool is_used(const std::optional<Params>& p) {
  return p.has_value() && is_used(*p);
}
bool is_used(const EditPlan& plan, Tool tool);

// Filter name with absent/unused mapped to "none".
std::string_view effective_filter_name(const EditPlan& plan);

// Keeps only the given tool's section.
EditPlan section_of(const EditPlan& plan, Tool tool);
// Drops sections whose is_used is false.
EditPlan without_unused(const EditPlan& plan);

struct ValidationWarning {
  std::string field;    // e.g. "adjust.saturation"
  std::string message;  // e.g. "150 clamped to 100"
};

struct ValidatedPlan {
  EditPlan plan;
  std::vector<ValidationWarning> warnings;
};

// Validates a loosely-typed plan tree {"adjust": {...}, "selectiveAdjust":
// {...}, "filter": {...}}. Numbers are rounded half away from zero, then
// clamped into range with a warning. Unknown parameter names throw
// UnknownParameter listing every offender; unknown presets throw
// UnknownPreset; non-numbers throw NonNumericValue. Null or empty-object
// sections mean the tool is absent.
ValidatedPlan validate(const Json& raw_plan);

// Same rules for a single tool section; the result holds only that tool.
ValidatedPlan validate_section(Tool tool, const Json& raw_section);

// Serialized forms follow the prompt figures' key layouts and order.
Json to_json(const AdjustParams& p);
Json to_json(const SelectiveAdjustParams& p);
Json to_json(const FilterParams& p);
Json to_json(const EditPlan& plan);

// Compact, key-ordered text. Absent tools are omitted.
std::string canonical_serialize(const EditPlan& plan);
// The tool's section alone; empty string when the tool is absent.
std::string canonical_serialize(const EditPlan& plan, Tool tool);

}  // namespace tonekit
