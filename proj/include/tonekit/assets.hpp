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

#include <string_view>
#include <vector>

namespace tonekit {

// Text assets compiled into the library, keyed by their path under assets/
// (e.g. "prompts/student_filter.txt", "presets.txt"). Throws InvalidInput for
// unknown names.
std::string_view embedded_asset(std::string_view name);
std::vector<std::string_view> embedded_asset_names();

}  // namespace tonekit
