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

#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "tonekit/error.hpp"
#include "tonekit/tool_schema.hpp"

namespace tonekit {
namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::kIo;
}

TEST(ToolSchema, ToolNamesAndKeys) {
  EXPECT_EQ(plan_key(Tool::kSelective), "selectiveAdjust");
  EXPECT_EQ(parse_tool("selective"), Tool::kSelective);
  EXPECT_EQ(parse_tool("selectiveAdjust"), Tool::kSelective);
  EXPECT_FALSE(parse_tool("curves").has_value());
}

TEST(ToolSchema, PresetListHasNoDuplicates) {
  std::set<std::string_view> names(kFilterPresets.begin(), kFilterPresets.end());
  EXPECT_EQ(names.size(), kFilterPresets.size());
  EXPECT_TRUE(is_known_preset("teal_and_orange_1"));
  EXPECT_TRUE(is_known_preset("none"));
}

TEST(ToolSchema, ClampsOutOfRangeWithWarning) {
  const auto v = validate(Json::parse(R"({"adjust":{"saturation":150,"exposure":-20}})"));
  ASSERT_TRUE(v.plan.adjust);
  EXPECT_EQ(v.plan.adjust->saturation, 100);
  EXPECT_EQ(v.plan.adjust->exposure, -20);
  ASSERT_EQ(v.warnings.size(), 1u);
  EXPECT_EQ(v.warnings[0].field, "adjust.saturation");
}

TEST(ToolSchema, RoundsHalfAwayFromZero) {
  const auto v = validate(Json::parse(R"({"adjust":{"contrast":12.5,"brightness":-12.5,"tint":3.49}})"));
  EXPECT_EQ(v.plan.adjust->contrast, 13);
  EXPECT_EQ(v.plan.adjust->brightness, -13);
  EXPECT_EQ(v.plan.adjust->tint, 3);
  EXPECT_TRUE(v.warnings.empty());
}

TEST(ToolSchema, HueAndDetailRanges) {
  const auto v = validate(Json::parse(R"({"adjust":{"hue":-5,"bloom":101,"sharpen":-1,"structure":50}})"));
  EXPECT_EQ(v.plan.adjust->hue, 0);
  EXPECT_EQ(v.plan.adjust->bloom, 100);
  EXPECT_EQ(v.plan.adjust->sharpen, 0);
  EXPECT_EQ(v.warnings.size(), 3u);
}

TEST(ToolSchema, UnknownParametersListedTogether) {
  try {
    validate(Json::parse(R"({"adjust":{"glow":1,"exposure":2},"selectiveAdjust":{"purple":{"saturation":1}},
                            "filter":{"name":"winter","strength":3}})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnknownParameter);
    EXPECT_EQ(e.details(), (std::vector<std::string>{"adjust.glow", "selectiveAdjust.purple", "filter.strength"}));
  }
}

TEST(ToolSchema, ErrorKinds) {
  EXPECT_EQ(kind_of([] { validate(Json::parse(R"({"filter":{"name":"sepia_dream"}})")); }),
            ErrorKind::kUnknownPreset);
  EXPECT_EQ(kind_of([] { validate(Json::parse(R"({"adjust":{"exposure":"high"}})")); }),
            ErrorKind::kNonNumericValue);
  EXPECT_EQ(kind_of([] { validate(Json::parse(R"({"adjust":[1,2]})")); }), ErrorKind::kInvalidInput);
  EXPECT_EQ(kind_of([] { validate(Json::parse(R"({"curves":{}})")); }), ErrorKind::kUnknownParameter);
  EXPECT_EQ(kind_of([] { validate(Json::parse("[]")); }), ErrorKind::kInvalidInput);
}

TEST(ToolSchema, PresetCaseDriftResolvesWithWarning) {
  const auto v = validate(Json::parse(R"({"filter":{"name":"Faded_retro","intensity":40}})"));
  EXPECT_EQ(v.plan.filter->name, "faded_Retro");
  ASSERT_EQ(v.warnings.size(), 1u);
}

TEST(ToolSchema, EmptyAndNullSectionsAreAbsent) {
  const auto v = validate(Json::parse(R"({"adjust":{},"selectiveAdjust":null})"));
  EXPECT_FALSE(v.plan.adjust);
  EXPECT_FALSE(v.plan.selective);
  EXPECT_FALSE(v.plan.filter);
}

TEST(ToolSchema, IsUsed) {
  EXPECT_FALSE(is_used(AdjustParams{}));
  EXPECT_FALSE(is_used(SelectiveAdjustParams{}));
  EXPECT_FALSE(is_used(FilterParams{"none", 80}));
  EXPECT_TRUE(is_used(FilterParams{"winter", 0}));
  EditPlan p;
  p.filter = FilterParams{"none", 50};
  EXPECT_EQ(effective_filter_name(p), "none");
  EXPECT_FALSE(without_unused(p).filter);
}

TEST(ToolSchema, SerializationOrderMatchesPromptLayout) {
  EditPlan p;
  p.adjust = AdjustParams{};
  p.adjust->linear_offset = 5;
  const std::string s = canonical_serialize(p, Tool::kAdjust);
  EXPECT_EQ(s.rfind("{\"exposure\":0,", 0), 0u);
  EXPECT_NE(s.find("\"structure\":0,\"linearOffset\":5}"), std::string::npos);
  EXPECT_EQ(canonical_serialize(p, Tool::kFilter), "");
}

TEST(ToolSchema, VectorsFollowDeclaredOrder) {
  AdjustParams a;
  a.exposure = 1;
  a.structure = 14;
  const auto v = to_vector(a);
  EXPECT_EQ(v[0], 1);
  EXPECT_EQ(v[13], 14);
  SelectiveAdjustParams s;
  s[ColorBand::kRed].luminance = 2;
  s[ColorBand::kBlue].saturation = 11;
  const auto w = to_vector(s);
  EXPECT_EQ(w[1], 2);
  EXPECT_EQ(w[10], 11);
}

// validate(to_json(p)) == p with no warnings, for random valid plans.
TEST(ToolSchemaProperty, JsonRoundTrip) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const EditPlan p = testing::random_plan(rng);
    const auto v = validate(Json::parse(canonical_serialize(p)));
    EXPECT_EQ(v.plan, p);
    EXPECT_TRUE(v.warnings.empty());
  }
}

// Validation is idempotent: re-validating a clamped plan changes nothing.
TEST(ToolSchemaProperty, ClampIsIdempotent) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> wild(-1000, 1000);
  for (int i = 0; i < 300; ++i) {
    Json adj = Json::object();
    for (const auto& f : kAdjustFields) adj[std::string(f.name)] = wild(rng);
    const auto once = validate(Json{{"adjust", adj}});
    for (const auto& f : kAdjustFields) {
      const int v = once.plan.adjust.value_or(AdjustParams{}).*f.member;
      EXPECT_GE(v, f.range.lo);
      EXPECT_LE(v, f.range.hi);
    }
    const auto twice = validate(to_json(once.plan));
    EXPECT_EQ(twice.plan, once.plan);
    EXPECT_TRUE(twice.warnings.empty());
  }
}

}  // namespace
}  // namespace tonekit
