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

#include "tonekit/tool_schema.hpp"

#include <algorithm>
#include <cmath>

#include "tonekit/error.hpp"

namespace tonekit {
namespace {

// Key order of the adjust JSON in the prompt figures (linearOffset last).
constexpr std::array<std::size_t, 14> kAdjustSerializationOrder = {0, 1, 2, 3,  4,  5,  6,
                                                                   7, 8, 10, 11, 12, 13, 9};

struct Collector {
  std::vector<ValidationWarning>* warnings;
  std::vector<std::string> unknown;
};

// Rounds half away from zero, then clamps. The clamp happens on the double so
// huge values never overflow int.
int coerce(const Json& value, std::string_view field, ParamRange range, Collector& c) {
  if (!value.is_number()) {
    throw Error(ErrorKind::kNonNumericValue,
                "non-numeric value for " + std::string(field) + ": " + value.dump(),
                {std::string(field)});
  }
  const double raw = value.get<double>();
  if (!std::isfinite(raw)) {
    throw Error(ErrorKind::kNonNumericValue, "non-finite value for " + std::string(field),
                {std::string(field)});
  }
  const double rounded = std::round(raw);
  const double clamped =
      std::clamp(rounded, static_cast<double>(range.lo), static_cast<double>(range.hi));
  if (clamped != rounded) {
    c.warnings->push_back({std::string(field), Json(raw).dump() + " clamped to " +
                                                    std::to_string(static_cast<int>(clamped))});
  }
  return static_cast<int>(clamped);
}

void require_object(const Json& j, std::string_view where) {
  if (!j.is_object()) {
    throw Error(ErrorKind::kInvalidInput,
                std::string(where) + " must be an object, got " + std::string(j.type_name()),
                {std::string(where)});
  }
}

void throw_if_unknown(const Collector& c) {
  if (c.unknown.empty()) return;
  std::string msg = "unknown parameter(s):";
  for (const auto& u : c.unknown) msg += " " + u;
  throw Error(ErrorKind::kUnknownParameter, msg, c.unknown);
}

AdjustParams parse_adjust(const Json& j, Collector& c) {
  require_object(j, "adjust");
  AdjustParams p;
  for (const auto& [key, value] : j.items()) {
    auto it = std::find_if(kAdjustFields.begin(), kAdjustFields.end(),
                           [&](const AdjustField& f) { return f.name == key; });
    if (it == kAdjustFields.end()) {
      c.unknown.push_back("adjust." + key);
      continue;
    }
    p.*(it->member) = coerce(value, "adjust." + key, it->range, c);
  }
  return p;
}

SelectiveAdjustParams parse_selective(const Json& j, Collector& c) {
  require_object(j, "selectiveAdjust");
  SelectiveAdjustParams p;
  for (const auto& [color, band] : j.items()) {
    auto it = std::find(kBandNames.begin(), kBandNames.end(), color);
    if (it == kBandNames.end()) {
      c.unknown.push_back("selectiveAdjust." + color);
      continue;
    }
    const std::string prefix = "selectiveAdjust." + color;
    require_object(band, prefix);
    BandParams& bp = p.bands[static_cast<std::size_t>(it - kBandNames.begin())];
    for (const auto& [key, value] : band.items()) {
      if (key == "saturation") {
        bp.saturation = coerce(value, prefix + ".saturation", kBandRange, c);
      } else if (key == "luminance") {
        bp.luminance = coerce(value, prefix + ".luminance", kBandRange, c);
      } else {
        c.unknown.push_back(prefix + "." + key);
      }
    }
  }
  return p;
}

FilterParams parse_filter(const Json& j, Collector& c) {
  require_object(j, "filter");
  FilterParams p;
  for (const auto& [key, value] : j.items()) {
    if (key == "name") {
      if (!value.is_string()) {
        throw Error(ErrorKind::kUnknownPreset, "filter.name must be a string", {value.dump()});
      }
      const std::string name = value.get<std::string>();
      if (is_known_preset(name)) {
        p.name = name;
        continue;
      }
      // Case drift ("Faded_retro") resolves to the canonical spelling.
      const std::string folded = to_lower_ascii(name);
      auto it = std::find_if(kFilterPresets.begin(), kFilterPresets.end(),
                             [&](std::string_view n) { return to_lower_ascii(n) == folded; });
      if (it == kFilterPresets.end()) {
        throw Error(ErrorKind::kUnknownPreset, "unknown filter preset '" + name + "'", {name});
      }
      p.name = std::string(*it);
      c.warnings->push_back({"filter.name", "'" + name + "' resolved to '" + p.name + "'"});
    } else if (key == "intensity") {
      p.intensity = coerce(value, "filter.intensity", kIntensityRange, c);
    } else {
      c.unknown.push_back("filter." + key);
    }
  }
  return p;
}

bool is_absent_marker(const Json& j) { return j.is_null() || (j.is_object() && j.empty()); }

void validate_into(Tool tool, const Json& raw, EditPlan& plan, Collector& c) {
  if (is_absent_marker(raw)) return;
  switch (tool) {
    case Tool::kAdjust: plan.adjust = parse_adjust(raw, c); break;
    case Tool::kSelective: plan.selective = parse_selective(raw, c); break;
    case Tool::kFilter: plan.filter = parse_filter(raw, c); break;
  }
}

}  // namespace

std::string_view tool_name(Tool tool) {
  switch (tool) {
    case Tool::kAdjust: return "adjust";
    case Tool::kSelective: return "selective";
    case Tool::kFilter: return "filter";
  }
  return "";
}

std::string_view plan_key(Tool tool) {
  switch (tool) {
    case Tool::kAdjust: return "adjust";
    case Tool::kSelective: return "selectiveAdjust";
    case Tool::kFilter: return "filter";
  }
  return "";
}

std::optional<Tool> parse_tool(std::string_view name) {
  for (Tool t : kAllTools) {
    if (name == tool_name(t) || name == plan_key(t)) return t;
  }
  if (name == "selective_adjust") return Tool::kSelective;
  return std::nullopt;
}

std::array<double, 14> to_vector(const AdjustParams& p) {
  std::array<double, 14> v{};
  for (std::size_t i = 0; i < kAdjustFields.size(); ++i) v[i] = p.*(kAdjustFields[i].member);
  return v;
}

std::array<double, 12> to_vector(const SelectiveAdjustParams& p) {
  std::array<double, 12> v{};
  for (std::size_t b = 0; b < 6; ++b) {
    v[2 * b] = p.bands[b].saturation;
    v[2 * b + 1] = p.bands[b].luminance;
  }
  return v;
}

bool is_known_preset(std::string_view name) {
  return std::find(kFilterPresets.begin(), kFilterPresets.end(), name) != kFilterPresets.end();
}

bool is_used(const AdjustParams& p) { return p != AdjustParams{}; }
bool is_used(const SelectiveAdjustParams& p) { return p != SelectiveAdjustParams{}; }
bool is_used(const FilterParams& p) { return p.name != kNoPreset; }

bool is_used(const EditPlan& plan, Tool tool) {
  switch (tool) {
    case Tool::kAdjust: return is_used(plan.adjust);
    case Tool::kSelective: return is_used(plan.selective);
    case Tool::kFilter: return is_used(plan.filter);
  }
  return false;
}

std::string_view effective_filter_name(const EditPlan& plan) {
  return plan.filter ? std::string_view(plan.filter->name) : kNoPreset;
}

EditPlan section_of(const EditPlan& plan, Tool tool) {
  EditPlan out;
  switch (tool) {
    case Tool::kAdjust: out.adjust = plan.adjust; break;
    case Tool::kSelective: out.selective = plan.selective; break;
    case Tool::kFilter: out.filter = plan.filter; break;
  }
  return out;
}

EditPlan without_unused(const EditPlan& plan) {
  EditPlan out;
  if (is_used(plan.adjust)) out.adjust = plan.adjust;
  if (is_used(plan.selective)) out.selective = plan.selective;
  if (is_used(plan.filter)) out.filter = plan.filter;
  return out;
}

ValidatedPlan validate(const Json& raw_plan) {
  require_object(raw_plan, "plan");
  ValidatedPlan out;
  Collector c{&out.warnings, {}};
  for (const auto& [key, section] : raw_plan.items()) {
    const auto tool = parse_tool(key);
    if (!tool || key == "selective" || key == "selective_adjust") {
      c.unknown.push_back(key);
      continue;
    }
    validate_into(*tool, section, out.plan, c);
  }
  throw_if_unknown(c);
  return out;
}

ValidatedPlan validate_section(Tool tool, const Json& raw_section) {
  ValidatedPlan out;
  Collector c{&out.warnings, {}};
  validate_into(tool, raw_section, out.plan, c);
  throw_if_unknown(c);
  return out;
}

Json to_json(const AdjustParams& p) {
  Json j = Json::object();
  for (std::size_t idx : kAdjustSerializationOrder) {
    const auto& f = kAdjustFields[idx];
    j[std::string(f.name)] = p.*(f.member);
  }
  return j;
}

Json to_json(const SelectiveAdjustParams& p) {
  Json j = Json::object();
  for (std::size_t b = 0; b < 6; ++b) {
    Json band = Json::object();
    band["saturation"] = p.bands[b].saturation;
    band["luminance"] = p.bands[b].luminance;
    j[std::string(kBandNames[b])] = std::move(band);
  }
  return j;
}

Json to_json(const FilterParams& p) {
  Json j = Json::object();
  j["name"] = p.name;
  j["intensity"] = p.intensity;
  return j;
}

Json to_json(const EditPlan& plan) {
  Json j = Json::object();
  if (plan.adjust) j["adjust"] = to_json(*plan.adjust);
  if (plan.selective) j["selectiveAdjust"] = to_json(*plan.selective);
  if (plan.filter) j["filter"] = to_json(*plan.filter);
  return j;
}

std::string canonical_serialize(const EditPlan& plan) { return to_json(plan).dump(); }

std::string canonical_serialize(const EditPlan& plan, Tool tool) {
  switch (tool) {
    case Tool::kAdjust: return plan.adjust ? to_json(*plan.adjust).dump() : std::string();
    case Tool::kSelective: return plan.selective ? to_json(*plan.selective).dump() : std::string();
    case Tool::kFilter: return plan.filter ? to_json(*plan.filter).dump() : std::string();
  }
  return {};
}

}  // namespace tonekit
