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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tonekit/text.hpp"
#include "tonekit/tool_schema.hpp"

namespace tonekit {

enum class Role { kTeacher, kStudent, kAugmenter, kComparator };

std::string_view role_name(Role role);

// Every shipped template contains this placeholder exactly once.
inline constexpr std::string_view kIntentPlaceholder = "<user_request>";

struct PromptTemplate {
  Role role;
  std::optional<Tool> tool;  // unset for augmenter and comparator
  std::string text;
};

// Templates compiled in from assets/prompts/<role>_<tool>.txt.
PromptTemplate builtin_template(Role role, std::optional<Tool> tool = std::nullopt);
// Loads a replacement template; throws InvalidInput unless the placeholder
// occurs exactly once.
PromptTemplate load_template(const std::string& path, Role role, std::optional<Tool> tool);

// Substitutes the trimmed intent for the placeholder. Throws EmptyIntent.
std::string render_prompt(const PromptTemplate& tmpl, std::string_view intent);

struct ParsedToolOutput {
  Tool tool = Tool::kAdjust;
  std::optional<std::string> rationale;  // teacher "TOOL:" section
  std::optional<Json> raw_params;        // unset means "tool not used"
  std::vector<std::string> diagnostics;

  bool not_used() const { return !raw_params.has_value(); }
};

// Extracts the first well-formed JSON object after the first "JSON:" or
// "Parameters:" marker (case-insensitive; falls back to the whole text when no
// marker is present). Surrounding prose and code fences are ignored. An empty
// object, and for student outputs an empty string, mean "not used".
// Throws NoObjectFound or MalformedObject (details[0] = byte offset).
ParsedToolOutput parse_model_output(std::string_view text, Role role, Tool tool);

struct AssembledPlan {
  EditPlan plan;
  std::vector<ValidationWarning> warnings;
};

// Merges up to one parsed output per tool into a plan. Sections that are not
// used (markers, all-zero values, filter "none") become absent tools.
// Validation errors are re-thrown with the tool name prepended to the message
// and as details[0].
AssembledPlan assemble_plan(std::span<const ParsedToolOutput> outputs);

// First non-empty line after the last SIMILAR_USER_REQUEST marker, or of the
// whole reply when the model simply continued the prompt. Quotes are stripped.
std::optional<std::string> parse_similar_request(std::string_view reply);

}  // namespace tonekit
