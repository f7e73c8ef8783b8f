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

#include <fstream>
#include <random>

#include "oracles.hpp"
#include "tonekit/error.hpp"

namespace tonekit {
namespace {

EditPlan with_filter(const std::string& name) {
  EditPlan p;
  p.filter = FilterParams{name, 50};
  return p;
}

EvalSample sample(EditPlan truth, EditPlan pred, std::int64_t calls = 1) {
  static int n = 0;
  return {"s" + std::to_string(n++), calls, std::move(truth), std::move(pred)};
}

TEST(Selection, CountsAndF1) {
  std::vector<EvalSample> s;
  for (int i = 0; i < 3; ++i) s.push_back(sample(with_filter("winter"), with_filter("winter")));
  s.push_back(sample({}, with_filter("north")));
  for (int i = 0; i < 2; ++i) s.push_back(sample(with_filter("action"), {}));
  s.push_back(sample({}, {}));
  const auto r = selection_f1(s, Tool::kFilter);
  EXPECT_EQ(r.tp, 3u);
  EXPECT_EQ(r.fp, 1u);
  EXPECT_EQ(r.fn, 2u);
  EXPECT_EQ(r.tn, 1u);
  EXPECT_DOUBLE_EQ(r.precision, 0.75);
  EXPECT_DOUBLE_EQ(r.recall, 0.6);
  EXPECT_NEAR(r.f1, 2.0 / 3.0, 1e-15);
}

TEST(Selection, DegenerateCases) {
  const auto none = selection_f1({sample({}, {})}, Tool::kAdjust);
  EXPECT_EQ(none.f1, 1.0);
  const auto wrong = selection_f1({sample(with_filter("winter"), {}), sample({}, with_filter("north"))}, Tool::kFilter);
  EXPECT_EQ(wrong.precision, 0.0);
  EXPECT_EQ(wrong.recall, 0.0);
  EXPECT_EQ(wrong.f1, 0.0);
  try {
    selection_f1({}, Tool::kAdjust);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptySampleSet);
  }
}

TEST(Quality, FilterNameAccuracy) {
  const std::vector<EvalSample> s = {sample(with_filter("winter"), with_filter("winter")),
                                     sample(with_filter("north"), with_filter("winter")),
                                     sample(with_filter("north"), {}), sample({}, {})};
  const auto both = quality_filter(s);
  EXPECT_EQ(both.n, 2u);
  EXPECT_DOUBLE_EQ(*both.value, 0.5);
  const auto all = quality_filter(s, FilterQualityMode::kAll);
  EXPECT_EQ(all.n, 4u);
  EXPECT_DOUBLE_EQ(*all.value, 0.5);  // winter=winter, none=none
}

TEST(Quality, Cosine) {
  const double a[] = {1, 0}, b[] = {0, 3}, z[] = {0, 0};
  EXPECT_DOUBLE_EQ(cosine(a, b, 2), 0.0);
  EXPECT_DOUBLE_EQ(cosine(a, a, 2), 1.0);
  EXPECT_DOUBLE_EQ(cosine(z, z, 2), 1.0);
  EXPECT_DOUBLE_EQ(cosine(a, z, 2), 0.0);
  const double c[] = {3, 4}, d[] = {4, 3};
  EXPECT_DOUBLE_EQ(cosine(c, d, 2), 24.0 / 25.0);
}

TEST(Quality, CosineMatchesNaiveOracle) {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> a(12), b(12);
    for (auto& v : a) v = testing::uniform_int(rng, -100, 100);
    for (auto& v : b) v = testing::uniform_int(rng, -100, 100);
    double dot = 0, na = 0, nb = 0;
    for (int k = 0; k < 12; ++k) {
      dot += a[k] * b[k];
      na += a[k] * a[k];
      nb += b[k] * b[k];
    }
    EXPECT_NEAR(cosine(a.data(), b.data(), 12), dot / std::sqrt(na * nb), 1e-12);
  }
}

TEST(Final, HarmonicMean) {
  EXPECT_NEAR(final_score(0.95, 0.63), 0.7576, 1e-4);
  EXPECT_EQ(round2(final_score(0.95, 0.63)), 0.76);
  EXPECT_EQ(final_score(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(final_score(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(overall({0.76, 0.70, 0.76}), (0.76 + 0.70 + 0.76) / 3);
}

TEST(Display, RoundingAndFormat) {
  EXPECT_EQ(round2(0.745), 0.75);
  EXPECT_EQ(round2(0.7449), 0.74);
  EXPECT_EQ(format2(0.7576), ".76");
  EXPECT_EQ(format2(1.0), "1.00");
}

TEST(Evaluate, MatchesBruteForceOracle) {
  std::mt19937_64 rng(52);
  const auto samples = testing::synthetic_samples(rng, 200);
  const EvalReport r = evaluate(samples);
  double sum = 0;
  for (Tool t : kAllTools) {
    const auto o = testing::brute_force_tool(samples, t);
    const auto& tr = r.tools[static_cast<std::size_t>(t)];
    EXPECT_NEAR(tr.selection.precision, o.precision, 1e-12);
    EXPECT_NEAR(tr.selection.recall, o.recall, 1e-12);
    EXPECT_NEAR(tr.selection.f1, o.f1, 1e-12);
    ASSERT_TRUE(tr.quality.value);
    EXPECT_NEAR(*tr.quality.value, o.quality, 1e-12);
    EXPECT_NEAR(tr.final, o.final, 1e-12);
    sum += o.final;
  }
  EXPECT_NEAR(r.overall, sum / 3, 1e-12);
}

TEST(Evaluate, MinCallsFilter) {
  std::vector<EvalSample> s;
  for (int c : {1, 3, 5, 7}) s.push_back(sample(with_filter("winter"), with_filter("winter"), c));
  EvalOptions o;
  o.min_calls = 5;
  EXPECT_EQ(evaluate(s, o).samples, 2u);
  o.min_calls = 8;
  EXPECT_THROW(evaluate(s, o), Error);
}

TEST(Evaluate, NoOverlapForcesZero) {
  const std::vector<EvalSample> s = {sample(with_filter("winter"), {}), sample({}, with_filter("north"))};
  const auto r = evaluate(s);
  const auto& f = r.tools[static_cast<std::size_t>(Tool::kFilter)];
  EXPECT_TRUE(f.no_overlap);
  EXPECT_EQ(f.final, 0.0);
  EXPECT_FALSE(f.quality.value);
}

// Every score lies in [0, 1]; final lies between min(s, q) and max(s, q).
TEST(EvaluateProperty, ScoresBounded) {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 40; ++i) {
    const auto r = evaluate(testing::synthetic_samples(rng, 1 + i * 3));
    for (const auto& t : r.tools) {
      for (double v : {t.selection.precision, t.selection.recall, t.selection.f1, t.final}) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
      if (!t.quality.value) continue;
      const double s = t.selection.f1, q = *t.quality.value;
      EXPECT_GE(t.final, std::min(s, q) - 1e-12);
      EXPECT_LE(t.final, std::max(s, q) + 1e-12);
    }
    EXPECT_GE(r.overall, 0.0);
    EXPECT_LE(r.overall, 1.0);
  }
}

TEST(Predictions, PlanAndRawOutputs) {
  std::size_t bad = 0;
  const Json plan_line = Json::parse(R"({"intent": "a", "plan": {"filter": {"name": "winter", "intensity": 40}}})");
  EXPECT_EQ(prediction_plan(plan_line, bad).filter->name, "winter");
  const Json raw_line = Json::parse(
      R"({"intent": "a", "outputs": {"adjust": "Parameters: {\"exposure\": 7}", "selective": "", "filter": "garbage"}})");
  const EditPlan p = prediction_plan(raw_line, bad);
  EXPECT_EQ(p.adjust->exposure, 7);
  EXPECT_FALSE(p.filter);
  EXPECT_EQ(bad, 1u);
}

TEST(Predictions, LoadJoinsOnNormalizedIntent) {
  testing::ScratchDir dir("eval");
  std::ofstream(dir.file("truth.jsonl")) << R"({"intent": "Golden Hour", "plan": {"filter": {"name": "fortune", "intensity": 40}}, "calls": 3})"
                                         << "\n";
  std::ofstream(dir.file("pred.jsonl")) << R"({"intent": "golden  hour", "plan": {}})" << "\n"
                                        << R"({"intent": "other", "plan": {}})" << "\n";
  const auto loaded = load_samples(dir.file("truth.jsonl"), dir.file("pred.jsonl"));
  ASSERT_EQ(loaded.samples.size(), 1u);
  EXPECT_EQ(loaded.samples[0].calls, 3);
  EXPECT_EQ(loaded.extra_predictions, 1u);
  std::ofstream(dir.file("empty.jsonl")) << "";
  EXPECT_THROW(load_samples(dir.file("truth.jsonl"), dir.file("empty.jsonl")), Error);
}

TEST(Pairs, ScoresStoredPairs) {
  const Json j = Json::parse(R"([{"label": "x", "adjust": [0.95, 0.63], "selective": [0.75, 0.66], "filter": [0.81, 0.71]}])");
  const auto rows = score_pairs(j);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(round2(rows[0].final[0]), 0.76);
  EXPECT_EQ(round2(rows[0].final[1]), 0.70);
  EXPECT_EQ(round2(rows[0].final[2]), 0.76);
  EXPECT_EQ(round2(rows[0].overall), 0.74);
}

}  // namespace
}  // namespace tonekit
