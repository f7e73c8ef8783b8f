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

#include "tonekit/assets.hpp"

#include <string>

#include "tonekit/error.hpp"

namespace tonekit {
namespace {

struct EmbeddedAsset {
  std::string_view name;
  std::string_view contents;
};

#include "tonekit/assets.inc"

}  // namespace

std::string_view embedded_asset(std::string_view name) {
  for (const auto& a : kEmbeddedAssets) {
    if (a.name == name) return a.contents;
  }
  throw Error(ErrorKind::kInvalidInput, "no embedded asset named " + std::string(name),
              {std::string(name)});
}

std::vector<std::string_view> embedded_asset_names() {
  std::vector<std::string_view> names;
  for (const auto& a : kEmbeddedAssets) names.push_back(a.name);
  return names;
}

}  // namespace tonekit
