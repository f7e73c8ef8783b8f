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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace tonekit {

// Insertion-ordered JSON keeps serializations stable and in declared order.
using Json = nlohmann::ordered_json;

std::string_view trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);

// Case-insensitive (ASCII) search. Returns npos when absent.
std::size_t ifind(std::string_view haystack, std::string_view needle, std::size_t from = 0);
std::size_t irfind(std::string_view haystack, std::string_view needle);

// Intent identity: ASCII case-folded, whitespace runs collapsed to one space,
// leading/trailing whitespace removed.
std::string normalize_intent(std::string_view intent);

// 64-bit FNV-1a. Stable across platforms; used for stub lookups and digests.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);
std::vector<std::string> read_lines(const std::string& path);

}  // namespace tonekit
