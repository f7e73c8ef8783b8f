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

#include "tonekit/offline_eval.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdio>
#include <map>

#include "tonekit/dataset.hpp"
#include "tonekit/error.hpp"
#include "tonekit/llm_io.hpp"

namespace tonekit {
namespace {

std::size_t idx(Tool t) { return static_cast<std::size_t>(t); }

double ratio_or_one(std::size_t num, std::size_t den) {
  return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

SelectionScore selection_f1(const std::vector<EvalSample>& samples, Tool tool) {
  if (samples.empty()) throw Error(ErrorKind::kEmptySampleSet, "no samples to score");
  SelectionScore s;
  for (const auto& x : samples) {
    const bool t = is_used(x.truth, tool);
    const bool p = is_used(x.prediction, tool);
    if (t && p) ++s.tp;
    else if (!t && p) ++s.fp;
    else if (t && !p) ++s.fn;
    else ++s.tn;
  }
  s.precision = ratio_or_one(s.tp, s.tp + s.fp);
  s.recall = ratio_or_one(s.tp, s.tp + s.fn);
  const double pr = s.precision + s.recall;
  s.f1 = pr == 0 ? 0.0 : 2 * s.precision * s.recall / pr;
  return s;
}

QualityScore quality_filter(const std::vector<EvalSample>& samples, FilterQualityMode mode) {
  QualityScore q;
  std::size_t correct = 0;
  for (const auto& x : samples) {
    if (mode == FilterQualityMode::kBothUsed &&
        !(is_used(x.truth, Tool::kFilter) && is_used(x.prediction, Tool::kFilter))) {
      continue;
    }
    ++q.n;
    if (effective_filter_name(x.truth) == effective_filter_name(x.prediction)) ++correct;
  }
  if (q.n > 0) q.value = static_cast<double>(correct) / static_cast<double>(q.n);
  return q;
}

double cosine(const double* a, const double* b, std::size_t n) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 && nb == 0) return 1.0;
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double sample_cosine(const EvalSample& s, Tool tool) {
  if (tool == Tool::kAdjust) {
    const auto a = to_vector(s.truth.adjust.value_or(AdjustParams{}));
    const auto b = to_vector(s.prediction.adjust.value_or(AdjustParams{}));
    return cosine(a.data(), b.data(), a.size());
  }
  if (tool == Tool::kSelective) {
    const auto a = to_vector(s.truth.selective.value_or(SelectiveAdjustParams{}));
    const auto b = to_vector(s.prediction.selective.value_or(SelectiveAdjustParams{}));
    return cosine(a.data(), b.data(), a.size());
  }
  throw Error(ErrorKind::kInvalidInput, "cosine quality applies to adjust and selective only");
}

QualityScore quality_cosine(const std::vector<EvalSample>& samples, Tool tool) {
  QualityScore q;
  double sum = 0;
  for (const auto& x : samples) {
    if (!(is_used(x.truth, tool) && is_used(x.prediction, tool))) continue;
    sum += sample_cosine(x, tool);
    ++q.n;
  }
  if (q.n > 0) q.value = sum / static_cast<double>(q.n);
  return q;
}

double final_score(double selection, double quality) {
  const double d = selection + quality;
  return d == 0 ? 0.0 : 2 * selection * quality / d;
}

double overall(const std::array<double, 3>& finals) { return (finals[0] + finals[1] + finals[2]) / 3.0; }

EvalReport evaluate(const std::vector<EvalSample>& samples, const EvalOptions& options) {
  std::vector<EvalSample> kept;
  for (const auto& s : samples) {
    if (s.calls >= options.min_calls) kept.push_back(s);
  }
  if (kept.empty()) {
    throw Error(ErrorKind::kEmptySampleSet,
                "no samples with at least " + std::to_string(options.min_calls) + " calls");
  }
  EvalReport r;
  r.options = options;
  r.samples = kept.size();
  std::array<double, 3> finals{};
  for (Tool t : kAllTools) {
    ToolReport& tr = r.tools[idx(t)];
    tr.selection = selection_f1(kept, t);
    tr.quality = t == Tool::kFilter ? quality_filter(kept, options.filter_mode) : quality_cosine(kept, t);
    if (!tr.quality.value) {
      tr.no_overlap = true;
      tr.final = 0;
      spdlog::warn("{}: no sample where both sides use the tool; quality undefined, final score 0",
                   tool_name(t));
    } else {
      tr.final = final_score(tr.selection.f1, *tr.quality.value);
    }
    finals[idx(t)] = tr.final;
  }
  r.overall = overall(finals);
  return r;
}

double round2(double v) { return std::floor(v * 100.0 + 0.5 + 1e-9) / 100.0; }

std::string format2(double v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.2f", round2(v));
  std::string s(buf);
  if (s.rfind("0.", 0) == 0) s.erase(0, 1);
  return s;
}

Json to_json(const EvalReport& report) {
  Json j = Json::object();
  j["min_calls"] = report.options.min_calls;
  j["filter_quality_mode"] = report.options.filter_mode == FilterQualityMode::kAll ? "all" : "both-used";
  j["samples"] = report.samples;
  Json tools = Json::object();
  for (Tool t : kAllTools) {
    const ToolReport& tr = report.tools[idx(t)];
    Json x = Json::object();
    x["precision"] = tr.selection.precision;
    x["recall"] = tr.selection.recall;
    x["selection"] = tr.selection.f1;
    x["quality"] = tr.quality.value ? Json(*tr.quality.value) : Json(nullptr);
    x["final"] = tr.final;
    x["n_both_used"] = tr.quality.n;
    x["confusion"] = {{"tp", tr.selection.tp}, {"fp", tr.selection.fp}, {"fn", tr.selection.fn},
                      {"tn", tr.selection.tn}};
    if (tr.no_overlap) x["no_overlap"] = true;
    tools[std::string(tool_name(t))] = std::move(x);
  }
  j["tools"] = std::move(tools);
  j["overall"] = report.overall;
  return j;
}

std::string format_table(const std::vector<std::pair<std::string, EvalReport>>& rows) {
  std::string out = "Test        | Adjust            | Selective Adjust  | Filter            | Overall\n";
  for (const auto& [label, r] : rows) {
    char head[32];
    std::snprintf(head, sizeof head, "%-11s", label.c_str());
    out += head;
    for (Tool t : kAllTools) {
      const ToolReport& tr = r.tools[idx(t)];
      const std::string q = tr.quality.value ? format2(*tr.quality.value) : " n/a";
      out += " | (" + format2(tr.selection.f1) + ", " + q + ", " + format2(tr.final) + ")";
    }
    out += " | " + format2(r.overall) + "\n";
  }
  return out;
}

EditPlan prediction_plan(const Json& line, std::size_t& unparseable) {
  if (line.contains("plan")) return without_unused(validate(line["plan"]).plan);
  if (!line.contains("outputs") || !line["outputs"].is_object()) {
    throw Error(ErrorKind::kInvalidInput, "prediction needs \"plan\" or \"outputs\"");
  }
  std::vector<ParsedToolOutput> parsed;
  for (const auto& [k, v] : line["outputs"].items()) {
    const auto tool = parse_tool(k);
    if (!tool) throw Error(ErrorKind::kInvalidInput, "unknown tool in outputs: " + k, {k});
    if (!v.is_string()) throw Error(ErrorKind::kInvalidInput, "output for " + k + " must be text", {k});
    try {
      ParsedToolOutput p = parse_model_output(v.get<std::string>(), Role::kStudent, *tool);
      const std::vector<ParsedToolOutput> one = {p};
      assemble_plan(one);  // validate now so a bad section only affects its tool
      parsed.push_back(std::move(p));
    } catch (const Error& e) {
      ++unparseable;
      spdlog::debug("prediction output for {} unparseable ({}); counted as not used", k, e.what());
    }
  }
  return assemble_plan(parsed).plan;
}

LoadedSamples load_samples(const std::string& truth_path, const std::string& prediction_path) {
  LoadedSamples out;
  std::map<std::string, EditPlan> predictions;
  int n = 0;
  for (const auto& raw : read_lines(prediction_path)) {
    ++n;
    if (trim(raw).empty()) continue;
    const std::string where = prediction_path + ":" + std::to_string(n);
    const Json j = Json::parse(raw, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("intent") || !j["intent"].is_string()) {
      throw Error(ErrorKind::kInvalidInput, where + ": needs a string \"intent\"", {where});
    }
    try {
      predictions[normalize_intent(j["intent"].get<std::string>())] = prediction_plan(j, out.unparseable_outputs);
    } catch (const Error& e) {
      throw Error(e.kind(), where + ": " + e.what(), e.details());
    }
  }
  std::size_t matched = 0;
  std::vector<std::string> missing;
  for (const auto& row : read_rows(truth_path)) {
    const auto it = predictions.find(normalize_intent(row.intent));
    if (it == predictions.end()) {
      missing.push_back(row.intent);
      continue;
    }
    ++matched;
    out.samples.push_back({row.intent, row.calls, row.plan, it->second});
  }
  if (!missing.empty()) {
    throw Error(ErrorKind::kInvalidInput,
                std::to_string(missing.size()) + " truth intents have no prediction, e.g. '" + missing[0] + "'",
                missing);
  }
  out.extra_predictions = predictions.size() - matched;
  return out;
}

std::vector<PairRow> score_pairs(const Json& pairs) {
  if (!pairs.is_array()) throw Error(ErrorKind::kInvalidInput, "pairs file must be a JSON array");
  std::vector<PairRow> rows;
  for (const auto& e : pairs) {
    PairRow r;
    r.label = e.value("label", "");
    for (Tool t : kAllTools) {
      const std::string key(tool_name(t));
      if (!e.contains(key) || !e[key].is_array() || e[key].size() < 2 || !e[key][0].is_number() ||
          !e[key][1].is_number()) {
        throw Error(ErrorKind::kInvalidInput, "pair entry '" + r.label + "' needs " + key + ": [s, q]", {key});
      }
      r.selection[idx(t)] = e[key][0].get<double>();
      r.quality[idx(t)] = e[key][1].get<double>();
      r.final[idx(t)] = final_score(r.selection[idx(t)], r.quality[idx(t)]);
    }
    r.overall = overall(r.final);
    rows.push_back(std::move(r));
  }
  return rows;
}

Json to_json(const PairRow& row) {
  Json j = Json::object();
  j["label"] = row.label;
  for (Tool t : kAllTools) {
    j[std::string(tool_name(t))] = {{"selection", row.selection[idx(t)]},
                                    {"quality", row.quality[idx(t)]},
                                    {"final", row.final[idx(t)]}};
  }
  j["overall"] = row.overall;
  return j;
}

}  // namespace tonekit
