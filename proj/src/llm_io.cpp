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

#include "tonekit/llm_io.hpp"

#include <algorithm>
#include <array>

#include "tonekit/assets.hpp"
#include "tonekit/error.hpp"

namespace tonekit {
namespace {

constexpr std::array<std::string_view, 2> kOutputMarkers = {"JSON:", "Parameters:"};
constexpr std::string_view kRationaleMarker = "TOOL:";
constexpr int kMaxNesting = 64;

std::string asset_name(Role role, std::optional<Tool> tool) {
  std::string name = "prompts/" + std::string(role_name(role));
  if (tool) name += "_" + std::string(tool_name(*tool));
  return name + ".txt";
}

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

struct MarkerHit {
  std::size_t begin = std::string_view::npos;
  std::size_t end = std::string_view::npos;
};

MarkerHit find_output_marker(std::string_view text) {
  MarkerHit hit;
  for (auto marker : kOutputMarkers) {
    const auto pos = ifind(text, marker);
    if (pos < hit.begin) hit = {pos, pos + marker.size()};
  }
  return hit;
}

enum class ScanResult { kBalanced, kUnterminated, kTooDeep };

// Finds the matching close brace for the '{' at `open`, honoring JSON string
// escapes. On success `close` is the index of the matching '}'.
ScanResult scan_object(std::string_view text, std::size_t open, std::size_t& close) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{' || c == '[') {
      if (++depth > kMaxNesting) return ScanResult::kTooDeep;
    } else if (c == '}' || c == ']') {
      if (--depth == 0) {
        close = i;
        return ScanResult::kBalanced;
      }
    }
  }
  return ScanResult::kUnterminated;
}

bool is_empty_string_literal(std::string_view s) {
  s = trim(s);
  return s.empty() || s == "\"\"" || s == "''";
}

[[noreturn]] void malformed(std::size_t pos, const std::string& why) {
  throw Error(ErrorKind::kMalformedObject,
              "malformed object at byte " + std::to_string(pos) + ": " + why,
              {std::to_string(pos)});
}

}  // namespace

std::string_view role_name(Role role) {
  switch (role) {
    case Role::kTeacher: return "teacher";
    case Role::kStudent: return "student";
    case Role::kAugmenter: return "augmenter";
    case Role::kComparator: return "comparator";
  }
  return "";
}

PromptTemplate builtin_template(Role role, std::optional<Tool> tool) {
  const bool needs_tool = role == Role::kTeacher || role == Role::kStudent;
  if (needs_tool != tool.has_value()) {
    throw Error(ErrorKind::kInvalidInput,
                std::string(role_name(role)) +
                    (needs_tool ? " templates need a tool" : " templates take no tool"));
  }
  return {role, tool, std::string(embedded_asset(asset_name(role, tool)))};
}

PromptTemplate load_template(const std::string& path, Role role, std::optional<Tool> tool) {
  PromptTemplate t{role, tool, read_file(path)};
  if (count_occurrences(t.text, kIntentPlaceholder) != 1) {
    throw Error(ErrorKind::kInvalidInput,
                path + ": template must contain " + std::string(kIntentPlaceholder) +
                    " exactly once",
                {path});
  }
  return t;
}

std::string render_prompt(const PromptTemplate& tmpl, std::string_view intent) {
  const auto trimmed = trim(intent);
  if (trimmed.empty()) throw Error(ErrorKind::kEmptyIntent, "intent is empty");
  const auto pos = tmpl.text.find(kIntentPlaceholder);
  if (pos == std::string::npos) {
    throw Error(ErrorKind::kInvalidInput, "template has no intent placeholder");
  }
  std::string out;
  out.reserve(tmpl.text.size() + trimmed.size());
  out.append(tmpl.text, 0, pos);
  out.append(trimmed);
  out.append(tmpl.text, pos + kIntentPlaceholder.size());
  return out;
}

ParsedToolOutput parse_model_output(std::string_view text, Role role, Tool tool) {
  ParsedToolOutput out;
  out.tool = tool;

  if (role == Role::kStudent && is_empty_string_literal(text)) {
    out.diagnostics.push_back("empty output: tool not used");
    return out;
  }

  const MarkerHit marker = find_output_marker(text);
  std::size_t search_from = 0;
  if (marker.begin != std::string_view::npos) {
    search_from = marker.end;
    if (role == Role::kTeacher) {
      const auto r = ifind(text.substr(0, marker.begin), kRationaleMarker);
      if (r != std::string_view::npos) {
        const auto body =
            trim(text.substr(r + kRationaleMarker.size(), marker.begin - r - kRationaleMarker.size()));
        if (!body.empty()) out.rationale = std::string(body);
      }
    }
    if (role == Role::kStudent && is_empty_string_literal(text.substr(search_from))) {
      out.diagnostics.push_back("marker without parameters: tool not used");
      return out;
    }
  } else {
    out.diagnostics.push_back("no output marker; scanning whole text");
  }

  std::size_t first_candidate = std::string_view::npos;
  std::size_t pos = text.find('{', search_from);
  if (pos == std::string_view::npos) {
    throw Error(ErrorKind::kNoObjectFound, "no JSON object in model output");
  }
  while (pos != std::string_view::npos) {
    if (first_candidate == std::string_view::npos) first_candidate = pos;
    std::size_t close = 0;
    switch (scan_object(text, pos, close)) {
      case ScanResult::kUnterminated: malformed(pos, "unterminated object");
      case ScanResult::kTooDeep: malformed(pos, "nesting too deep");
      case ScanResult::kBalanced: break;
    }
    Json parsed = Json::parse(text.substr(pos, close - pos + 1), nullptr, /*allow_exceptions=*/false);
    if (!parsed.is_discarded() && parsed.is_object()) {
      if (!parsed.empty()) out.raw_params = std::move(parsed);
      else out.diagnostics.push_back("empty object: tool not used");
      return out;
    }
    out.diagnostics.push_back("skipped ill-formed object at byte " + std::to_string(pos));
    pos = text.find('{', close + 1);
  }
  malformed(first_candidate, "no well-formed object after marker");
}

AssembledPlan assemble_plan(std::span<const ParsedToolOutput> outputs) {
  AssembledPlan out;
  std::array<bool, 3> seen{};
  for (const auto& o : outputs) {
    const auto idx = static_cast<std::size_t>(o.tool);
    if (seen[idx]) {
      throw Error(ErrorKind::kInvalidInput,
                  "more than one output for tool " + std::string(tool_name(o.tool)),
                  {std::string(tool_name(o.tool))});
    }
    seen[idx] = true;
    if (o.not_used()) continue;
    ValidatedPlan v;
    try {
      v = validate_section(o.tool, *o.raw_params);
    } catch (const Error& e) {
      std::vector<std::string> details = {std::string(tool_name(o.tool))};
      details.insert(details.end(), e.details().begin(), e.details().end());
      throw Error(e.kind(), std::string(tool_name(o.tool)) + ": " + e.what(), std::move(details));
    }
    switch (o.tool) {
      case Tool::kAdjust: out.plan.adjust = v.plan.adjust; break;
      case Tool::kSelective: out.plan.selective = v.plan.selective; break;
      case Tool::kFilter: out.plan.filter = v.plan.filter; break;
    }
    out.warnings.insert(out.warnings.end(), v.warnings.begin(), v.warnings.end());
  }
  out.plan = without_unused(out.plan);
  return out;
}

std::optional<std::string> parse_similar_request(std::string_view reply) {
  constexpr std::string_view kMarker = "SIMILAR_USER_REQUEST:";
  const auto m = irfind(reply, kMarker);
  // Completion-style replies continue after the template's trailing marker.
  std::string_view rest = m == std::string_view::npos ? reply : reply.substr(m + kMarker.size());
  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    std::string_view line = trim(rest.substr(0, nl));
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    if (line.empty()) continue;
    if (line.size() >= 2 && (line.front() == '"' || line.front() == '\'') &&
        line.back() == line.front()) {
      line = trim(line.substr(1, line.size() - 2));
    }
    if (line.empty()) return std::nullopt;
    return std::string(line);
  }
  return std::nullopt;
}

}  // namespace tonekit
