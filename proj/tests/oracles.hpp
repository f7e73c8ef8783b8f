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

// Independent, deliberately naive re-implementations used as test oracles,
// plus synthetic fixture generators.

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <tuple>

#include "support.hpp"
#include "tonekit/dataset.hpp"
#include "tonekit/offline_eval.hpp"

namespace tonekit::testing {

// ---- synthetic interaction logs -------------------------------------------

// Spelling variants of the same intent exercise normalization.
inline std::string spelling_variant(const std::string& base, int k) {
  switch (k % 3) {
    case 0: return base;
    case 1: {
      std::string up = base;
      for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      return "  " + up;
    }
    default: {
      std::string spaced;
      for (char c : base) spaced += c == ' ' ? std::string("   ") : std::string(1, c);
      return spaced + " ";
    }
  }
}

inline std::string teacher_output(const EditPlan& section, Tool tool) {
  const std::string body = canonical_serialize(section, tool);
  return "TOOL: reasoning about the look.\nJSON: " + (body.empty() ? std::string("{}") : body);
}

// `n` log lines over `intents` distinct intents with random exports/calls.
inline std::vector<std::string> synthetic_log(std::mt19937_64& rng, int n, int intents) {
  std::vector<std::string> lines;
  for (int i = 0; i < n; ++i) {
    const int id = uniform_int(rng, 0, intents - 1);
    const Tool tool = kAllTools[uniform_int(rng, 0, 2)];
    const EditPlan section = section_of(random_plan(rng), tool);
    const int calls = uniform_int(rng, 1, 6);
    // Zero exports are common, as in real logs.
    const int exports = uniform_int(rng, 0, 2) == 0 ? uniform_int(rng, 1, calls) : 0;
    Json j = {{"intent_id", "i" + std::to_string(id)},
              {"intent", spelling_variant("look number " + std::to_string(id), uniform_int(rng, 0, 2))},
              {"tool", std::string(tool_name(tool))},
              {"output", teacher_output(section, tool)},
              {"exports", exports},
              {"calls", calls},
              {"ts", "2024-01-01T00:00:" + std::to_string(i % 60)}};
    lines.push_back(j.dump());
  }
  return lines;
}

// ---- curation oracle ------------------------------------------------------

inline std::string collapse(const std::string& s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

// Groups by folded intent, keeps per tool the best exported output by
// (rate desc, calls desc, serialization asc), drops intents with nothing kept.
inline std::vector<CuratedRow> brute_force_curate(const std::vector<InteractionRecord>& records) {
  std::map<std::string, std::vector<const InteractionRecord*>> groups;
  for (const auto& r : records) groups[collapse(r.intent)].push_back(&r);
  std::vector<CuratedRow> rows;
  for (const auto& [key, recs] : groups) {
    CuratedRow row;
    std::vector<std::string> spellings;
    std::array<std::int64_t, 3> calls{};
    for (const auto* r : recs) {
      std::string t = r->intent;
      t.erase(0, t.find_first_not_of(" \t\r\n"));
      t.erase(t.find_last_not_of(" \t\r\n") + 1);
      spellings.push_back(t);
      calls[static_cast<std::size_t>(r->tool)] += r->calls;
    }
    row.intent = *std::min_element(spellings.begin(), spellings.end());
    row.calls = *std::max_element(calls.begin(), calls.end());
    bool any = false;
    for (Tool tool : kAllTools) {
      std::vector<std::tuple<double, std::int64_t, std::string, const InteractionRecord*>> c;
      for (const auto* r : recs) {
        if (r->tool != tool || r->exports == 0) continue;
        c.emplace_back(-static_cast<double>(r->exports) / r->calls, -r->calls,
                       canonical_serialize(r->section, tool), r);
      }
      if (c.empty()) continue;
      std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a), std::get<2>(a)) <
               std::tie(std::get<0>(b), std::get<1>(b), std::get<2>(b));
      });
      const auto* best = std::get<3>(c.front());
      any = true;
      row.export_rate[static_cast<std::size_t>(tool)] = static_cast<double>(best->exports) / best->calls;
      const EditPlan s = section_of(best->section, tool);
      if (tool == Tool::kAdjust) row.plan.adjust = s.adjust;
      if (tool == Tool::kSelective) row.plan.selective = s.selective;
      if (tool == Tool::kFilter) row.plan.filter = s.filter;
    }
    if (!any) continue;
    row.plan = without_unused(row.plan);
    rows.push_back(row);
  }
  return rows;
}

// ---- evaluation oracle ----------------------------------------------------

struct BruteToolScores {
  double precision, recall, f1;
  double quality;  // NaN when undefined
  double final;
};

inline std::vector<double> vector_of(const EditPlan& p, Tool tool) {
  std::vector<double> v;
  if (tool == Tool::kAdjust) {
    const AdjustParams a = p.adjust.value_or(AdjustParams{});
    for (const auto& f : kAdjustFields) v.push_back(a.*f.member);
  } else {
    const SelectiveAdjustParams s = p.selective.value_or(SelectiveAdjustParams{});
    for (const auto& b : s.bands) {
      v.push_back(b.saturation);
      v.push_back(b.luminance);
    }
  }
  return v;
}

inline bool uses(const EditPlan& p, Tool tool) {
  switch (tool) {
    case Tool::kAdjust: return p.adjust && *p.adjust != AdjustParams{};
    case Tool::kSelective: return p.selective && *p.selective != SelectiveAdjustParams{};
    case Tool::kFilter: return p.filter && p.filter->name != "none";
  }
  return false;
}

inline BruteToolScores brute_force_tool(const std::vector<EvalSample>& samples, Tool tool) {
  double tp = 0, fp = 0, fn = 0;
  double qsum = 0, qn = 0;
  for (const auto& s : samples) {
    const bool t = uses(s.truth, tool), p = uses(s.prediction, tool);
    tp += t && p;
    fp += !t && p;
    fn += t && !p;
    if (!(t && p)) continue;
    qn += 1;
    if (tool == Tool::kFilter) {
      qsum += s.truth.filter->name == s.prediction.filter->name ? 1.0 : 0.0;
    } else {
      const auto a = vector_of(s.truth, tool), b = vector_of(s.prediction, tool);
      double dot = 0, na = 0, nb = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
      }
      qsum += dot / std::sqrt(na * nb);
    }
  }
  BruteToolScores r{};
  r.precision = tp + fp == 0 ? 1.0 : tp / (tp + fp);
  r.recall = tp + fn == 0 ? 1.0 : tp / (tp + fn);
  r.f1 = r.precision + r.recall == 0 ? 0.0 : 2 * r.precision * r.recall / (r.precision + r.recall);
  r.quality = qn == 0 ? std::nan("") : qsum / qn;
  r.final = qn == 0 ? 0.0 : (r.f1 + r.quality == 0 ? 0.0 : 2 * r.f1 * r.quality / (r.f1 + r.quality));
  return r;
}

// Predictions perturb the truth: drop or add tools, jitter values, swap names.
inline std::vector<EvalSample> synthetic_samples(std::mt19937_64& rng, int n) {
  std::vector<EvalSample> out;
  for (int i = 0; i < n; ++i) {
    EvalSample s;
    s.intent = "sample " + std::to_string(i);
    s.calls = uniform_int(rng, 1, 8);
    s.truth = random_plan(rng);
    s.prediction = s.truth;
    if (uniform_int(rng, 0, 4) == 0) s.prediction.adjust.reset();
    if (uniform_int(rng, 0, 4) == 0) s.prediction.selective = random_selective(rng);
    if (uniform_int(rng, 0, 3) == 0) s.prediction.filter = random_filter(rng);
    if (s.prediction.adjust && uniform_int(rng, 0, 1)) {
      s.prediction.adjust->contrast = uniform_int(rng, -100, 100);
    }
    s.prediction = without_unused(s.prediction);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace tonekit::testing
