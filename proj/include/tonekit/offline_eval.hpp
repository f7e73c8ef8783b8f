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

// Offline scoring of predicted edit plans against ground truth: tool-selection
// F1, per-tool quality, their harmonic mean, and the overall average.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tonekit/text.hpp"
#include "tonekit/tool_schema.hpp"

namespace tonekit {

struct EvalSample {
  std::string intent;
  std::int64_t calls = 1;
  EditPlan truth;
  EditPlan prediction;
};

struct SelectionScore {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  double precision = 1;  // 0/0 counts as 1
  double recall = 1;
  double f1 = 1;  // 0 when precision = recall = 0
};

// Throws EmptySampleSet.
SelectionScore selection_f1(const std::vector<EvalSample>& samples, Tool tool);

enum class FilterQualityMode {
  kBothUsed,  // name accuracy over samples where both sides use the filter
  kAll,       // name accuracy over all samples, unused counting as "none"
};

struct QualityScore {
  std::optional<double> value;  // unset when no sample qualifies
  std::size_t n = 0;            // samples in the denominator
};

QualityScore quality_filter(const std::vector<EvalSample>& samples,
                            FilterQualityMode mode = FilterQualityMode::kBothUsed);

// Cosine of two parameter vectors; both zero gives 1, exactly one zero gives 0.
double cosine(const double* a, const double* b, std::size_t n);
double sample_cosine(const EvalSample& s, Tool tool);

// Mean per-sample cosine over samples where both sides use the tool.
QualityScore quality_cosine(const std::vector<EvalSample>& samples, Tool tool);

// Harmonic mean; 0 when s + q = 0.
double final_score(double selection, double quality);
double overall(const std::array<double, 3>& finals);

struct ToolReport {
  SelectionScore selection;
  QualityScore quality;
  double final = 0;
  bool no_overlap = false;  // quality undefined; final forced to 0
};

struct EvalOptions {
  std::int64_t min_calls = 1;
  FilterQualityMode filter_mode = FilterQualityMode::kBothUsed;
};

struct EvalReport {
  EvalOptions options;
  std::size_t samples = 0;
  std::array<ToolReport, 3> tools;  // indexed by Tool
  double overall = 0;
};

// Keeps samples with calls >= min_calls. Throws EmptySampleSet.
EvalReport evaluate(const std::vector<EvalSample>& samples, const EvalOptions& options = {});

// Half-up rounding to two decimals for display.
double round2(double v);
std::string format2(double v);

Json to_json(const EvalReport& report);
// One line per report in the (selection, quality, final) layout.
std::string format_table(const std::vector<std::pair<std::string, EvalReport>>& rows);

// Truth rows (curated JSONL) joined by normalized intent with predictions.
// Prediction lines are {"intent", "plan": {...}} or {"intent", "outputs":
// {"adjust": "<raw text>", ...}}; raw outputs that fail to parse count as
// "tool not used". Throws InvalidInput when a truth intent has no prediction.
struct LoadedSamples {
  std::vector<EvalSample> samples;
  std::size_t unparseable_outputs = 0;
  std::size_t extra_predictions = 0;  // predictions with no truth row
};
LoadedSamples load_samples(const std::string& truth_path, const std::string& prediction_path);

// Parses a prediction line's plan (see load_samples). Counts parse failures.
EditPlan prediction_plan(const Json& line, std::size_t& unparseable);

// Stored (selection, quality) pairs per tool, e.g. from a reported score table:
// [{"label": ..., "adjust": [s, q], "selective": [s, q], "filter": [s, q]}].
// Returns one row per entry with finals and overall filled in.
struct PairRow {
  std::string label;
  std::array<double, 3> selection{}, quality{}, final{};
  double overall = 0;
};
std::vector<PairRow> score_pairs(const Json& pairs);
Json to_json(const PairRow& row);

}  // namespace tonekit
