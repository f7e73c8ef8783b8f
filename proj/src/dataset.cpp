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

#include "tonekit/dataset.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "tonekit/error.hpp"
#include "tonekit/llm_io.hpp"
#include "tonekit/rng.hpp"

namespace tonekit {
namespace {

std::size_t idx(Tool t) { return static_cast<std::size_t>(t); }

// Reads a non-negative integer, accepting integral floats such as 3.0.
std::optional<std::int64_t> as_count(const Json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) {
    const double d = j.get<double>();
    if (std::isfinite(d) && d == std::floor(d)) return static_cast<std::int64_t>(d);
  }
  return std::nullopt;
}

std::string field_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) return j.dump();
  return {};
}

EditPlan parse_logged_output(const std::string& output, Tool tool) {
  const auto body = trim(output);
  if (body.empty() || body == "\"\"") return {};
  const ParsedToolOutput parsed = parse_model_output(output, Role::kTeacher, tool);
  const std::vector<ParsedToolOutput> one = {parsed};
  return assemble_plan(one).plan;
}

// a beats b for the same tool and intent.
bool better(const InteractionRecord& a, const std::string& a_ser, const InteractionRecord& b,
            const std::string& b_ser) {
  // Compare exports/calls exactly by cross-multiplication.
  const auto lhs = static_cast<__int128>(a.exports) * b.calls;
  const auto rhs = static_cast<__int128>(b.exports) * a.calls;
  if (lhs != rhs) return lhs > rhs;
  if (a.calls != b.calls) return a.calls > b.calls;
  return a_ser < b_ser;
}

ParamStats summarize(const std::vector<double>& v) {
  ParamStats s;
  s.n = v.size();
  if (v.empty()) return s;
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  double sum = 0;
  for (double x : v) sum += x;
  s.mean = sum / v.size();
  double ss = 0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(ss / v.size());
  return s;
}

Json to_json(const ParamStats& s) {
  return Json{{"n", s.n}, {"min", s.min}, {"max", s.max}, {"mean", s.mean}, {"stddev", s.stddev}};
}

}  // namespace

IngestResult ingest_lines(const std::vector<std::string>& lines) {
  IngestResult out;
  auto& rep = out.report;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (trim(lines[n]).empty()) continue;
    ++rep.lines;
    const std::string where = "line " + std::to_string(n + 1) + ": ";
    auto bad = [&](const std::string& why) {
      ++rep.malformed;
      rep.problems.push_back(where + why);
    };
    const Json j = Json::parse(lines[n], nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      bad("not a JSON object");
      continue;
    }
    InteractionRecord r;
    if (!j.contains("intent") || !j["intent"].is_string() || trim(j["intent"].get<std::string>()).empty()) {
      bad("missing intent");
      continue;
    }
    r.intent = j["intent"].get<std::string>();
    const auto tool = j.contains("tool") && j["tool"].is_string()
                          ? parse_tool(j["tool"].get<std::string>())
                          : std::nullopt;
    if (!tool) {
      bad("missing or unknown tool");
      continue;
    }
    r.tool = *tool;
    if (!j.contains("output") || !j["output"].is_string()) {
      bad("missing output");
      continue;
    }
    r.output = j["output"].get<std::string>();
    r.exports = (j.contains("exports") ? as_count(j["exports"]) : std::nullopt).value_or(-1);
    r.calls = (j.contains("calls") ? as_count(j["calls"]) : std::nullopt).value_or(0);
    if (r.exports < 0 || r.calls < 1 || r.exports > r.calls) {
      bad("exports/calls must satisfy 0 <= exports <= calls, calls >= 1");
      continue;
    }
    if (j.contains("intent_id")) r.intent_id = field_text(j["intent_id"]);
    if (j.contains("ts")) r.ts = field_text(j["ts"]);
    try {
      r.section = parse_logged_output(r.output, r.tool);
    } catch (const Error& e) {
      ++rep.unparseable;
      rep.problems.push_back(where + std::string(to_string(e.kind())) + ": " + e.what());
      continue;
    }
    out.records.push_back(std::move(r));
  }
  rep.records = out.records.size();
  if (rep.lines > 0 && rep.malformed * 2 > rep.lines) {
    throw Error(ErrorKind::kSchemaViolation,
                std::to_string(rep.malformed) + " of " + std::to_string(rep.lines) +
                    " lines are malformed; is this an interaction log?",
                rep.problems);
  }
  return out;
}

IngestResult ingest(const std::string& log_path) {
  IngestResult r = ingest_lines(read_lines(log_path));
  if (r.report.malformed + r.report.unparseable > 0) {
    spdlog::warn("{}: {} malformed and {} unparseable lines skipped", log_path, r.report.malformed,
                 r.report.unparseable);
  }
  return r;
}

Json to_json(const CuratedRow& row) {
  Json j = Json::object();
  j["intent"] = row.intent;
  j["plan"] = to_json(row.plan);
  Json rates = Json::object();
  for (Tool t : kAllTools) {
    if (row.export_rate[idx(t)]) rates[std::string(tool_name(t))] = *row.export_rate[idx(t)];
  }
  j["export_rate"] = std::move(rates);
  j["calls"] = row.calls;
  if (row.source_intent) j["source_intent"] = *row.source_intent;
  return j;
}

CuratedRow curated_row_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("intent") || !j["intent"].is_string()) {
    throw Error(ErrorKind::kInvalidInput, "row needs a string \"intent\"");
  }
  CuratedRow row;
  row.intent = j["intent"].get<std::string>();
  row.plan = without_unused(validate(j.value("plan", Json::object())).plan);
  if (j.contains("export_rate") && j["export_rate"].is_object()) {
    for (const auto& [k, v] : j["export_rate"].items()) {
      const auto t = parse_tool(k);
      if (t && v.is_number()) row.export_rate[idx(*t)] = v.get<double>();
    }
  }
  if (j.contains("calls")) {
    const auto c = as_count(j["calls"]);
    if (!c) throw Error(ErrorKind::kInvalidInput, "row \"calls\" must be an integer");
    row.calls = *c;
  }
  if (j.contains("source_intent") && j["source_intent"].is_string()) {
    row.source_intent = j["source_intent"].get<std::string>();
  }
  return row;
}

std::vector<CuratedRow> read_rows(const std::string& path) {
  std::vector<CuratedRow> rows;
  int n = 0;
  for (const auto& line : read_lines(path)) {
    ++n;
    if (trim(line).empty()) continue;
    const Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      const std::string where = path + ":" + std::to_string(n);
      throw Error(ErrorKind::kInvalidInput, where + ": not JSON", {where});
    }
    try {
      rows.push_back(curated_row_from_json(j));
    } catch (const Error& e) {
      throw Error(e.kind(), path + ":" + std::to_string(n) + ": " + e.what(), e.details());
    }
  }
  return rows;
}

std::string rows_to_jsonl(const std::vector<CuratedRow>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += to_json(r).dump();
    out += '\n';
  }
  return out;
}

CurationResult curate(const std::vector<InteractionRecord>& records) {
  struct Group {
    std::string text;
    std::array<const InteractionRecord*, 3> best{};
    std::array<std::string, 3> best_ser;
    std::array<std::int64_t, 3> calls{};
  };
  CurationResult out;
  out.report.records_in = records.size();
  std::map<std::string, Group> groups;
  for (const auto& r : records) {
    const std::string key = normalize_intent(r.intent);
    auto [it, fresh] = groups.try_emplace(key);
    Group& g = it->second;
    const std::string text(trim(r.intent));
    if (fresh || text < g.text) g.text = text;
    const std::size_t t = idx(r.tool);
    g.calls[t] += r.calls;
    if (r.exports == 0) {
      ++out.report.zero_export_records;
      continue;
    }
    std::string ser = canonical_serialize(r.section, r.tool);
    if (!g.best[t] || better(r, ser, *g.best[t], g.best_ser[t])) {
      g.best[t] = &r;
      g.best_ser[t] = std::move(ser);
    }
  }
  out.report.intents = groups.size();
  for (auto& [key, g] : groups) {
    CuratedRow row;
    row.intent = g.text;
    bool any = false;
    for (Tool t : kAllTools) {
      const InteractionRecord* b = g.best[idx(t)];
      if (!b) continue;
      any = true;
      row.export_rate[idx(t)] = b->export_rate();
      const EditPlan s = section_of(b->section, t);
      if (t == Tool::kAdjust) row.plan.adjust = s.adjust;
      if (t == Tool::kSelective) row.plan.selective = s.selective;
      if (t == Tool::kFilter) row.plan.filter = s.filter;
    }
    if (!any) {
      ++out.report.intents_without_exports;
      continue;
    }
    row.plan = without_unused(row.plan);
    row.calls = *std::max_element(g.calls.begin(), g.calls.end());
    out.rows.push_back(std::move(row));
  }
  out.report.rows_out = out.rows.size();
  return out;
}

DatasetSplit split(std::vector<CuratedRow> rows, std::size_t test_size, std::uint64_t seed) {
  if (test_size >= rows.size()) {
    throw Error(ErrorKind::kTestSizeTooLarge,
                "test size " + std::to_string(test_size) + " needs more than " +
                    std::to_string(rows.size()) + " rows");
  }
  std::vector<std::pair<std::string, CuratedRow>> keyed;
  keyed.reserve(rows.size());
  for (auto& r : rows) keyed.emplace_back(normalize_intent(r.intent), std::move(r));
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < keyed.size(); ++i) {
    if (keyed[i].first == keyed[i - 1].first) {
      throw Error(ErrorKind::kDuplicateIntent, "intent appears twice: " + keyed[i].first,
                  {keyed[i].first});
    }
  }
  Xoshiro256ss rng(seed);
  shuffle(keyed, rng);
  DatasetSplit s;
  s.seed = seed;
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    (i < test_size ? s.test : s.train).push_back(std::move(keyed[i].second));
  }
  return s;
}

SetStats stats(const std::vector<CuratedRow>& rows) {
  SetStats s;
  s.rows = rows.size();
  std::map<std::string, std::size_t> filters;
  std::vector<std::vector<double>> adjust(kAdjustFields.size());
  std::vector<std::vector<double>> selective(12);
  for (const auto& r : rows) {
    for (Tool t : kAllTools) s.used[idx(t)] += is_used(r.plan, t) ? 1 : 0;
    ++filters[std::string(effective_filter_name(r.plan))];
    if (is_used(r.plan.adjust)) {
      const auto v = to_vector(*r.plan.adjust);
      for (std::size_t i = 0; i < v.size(); ++i) adjust[i].push_back(v[i]);
    }
    if (is_used(r.plan.selective)) {
      const auto v = to_vector(*r.plan.selective);
      for (std::size_t i = 0; i < v.size(); ++i) selective[i].push_back(v[i]);
    }
  }
  s.filter_ranking.assign(filters.begin(), filters.end());
  std::stable_sort(s.filter_ranking.begin(), s.filter_ranking.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (std::size_t i = 0; i < kAdjustFields.size(); ++i) {
    s.adjust[std::string(kAdjustFields[i].name)] = summarize(adjust[i]);
  }
  for (std::size_t b = 0; b < kBandNames.size(); ++b) {
    s.selective[std::string(kBandNames[b]) + ".saturation"] = summarize(selective[2 * b]);
    s.selective[std::string(kBandNames[b]) + ".luminance"] = summarize(selective[2 * b + 1]);
  }
  return s;
}

Json to_json(const SetStats& s) {
  Json j = Json::object();
  j["rows"] = s.rows;
  Json used = Json::object();
  for (Tool t : kAllTools) used[std::string(tool_name(t))] = {{"used", s.used[idx(t)]}, {"all", s.rows}};
  j["tools"] = std::move(used);
  Json ranking = Json::array();
  for (const auto& [name, count] : s.filter_ranking) {
    ranking.push_back({{"name", name},
                       {"count", count},
                       {"share", s.rows == 0 ? 0.0 : static_cast<double>(count) / s.rows}});
  }
  j["filters"] = std::move(ranking);
  Json adj = Json::object();
  for (const auto& f : kAdjustFields) adj[std::string(f.name)] = to_json(s.adjust.at(std::string(f.name)));
  j["adjust"] = std::move(adj);
  Json sel = Json::object();
  for (const auto& band : kBandNames) {
    for (const char* p : {".saturation", ".luminance"}) {
      const std::string key = std::string(band) + p;
      sel[key] = to_json(s.selective.at(key));
    }
  }
  j["selective"] = std::move(sel);
  return j;
}

std::vector<SftRecord> export_sft(const std::vector<CuratedRow>& rows) {
  std::array<PromptTemplate, 3> templates = {builtin_template(Role::kStudent, Tool::kAdjust),
                                             builtin_template(Role::kStudent, Tool::kSelective),
                                             builtin_template(Role::kStudent, Tool::kFilter)};
  const std::string unused_filter = "Parameters: " + to_json(FilterParams{}).dump();
  std::vector<SftRecord> out;
  out.reserve(rows.size() * 3);
  for (const auto& r : rows) {
    for (Tool t : kAllTools) {
      SftRecord rec{t, render_prompt(templates[idx(t)], r.intent), {}};
      if (is_used(r.plan, t)) {
        rec.completion = "Parameters: " + canonical_serialize(r.plan, t);
      } else if (t == Tool::kFilter) {
        rec.completion = unused_filter;
      }
      out.push_back(std::move(rec));
    }
  }
  return out;
}

std::string sft_to_jsonl(const std::vector<SftRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    Json j = Json::object();
    j["tool"] = std::string(tool_name(r.tool));
    j["prompt"] = r.prompt;
    j["completion"] = r.completion;
    out += j.dump();
    out += '\n';
  }
  return out;
}

CompletionRate completion_rate_lines(const std::vector<std::string>& lines) {
  std::set<std::string> started, exported;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (trim(lines[n]).empty()) continue;
    const Json j = Json::parse(lines[n], nullptr, false);
    const std::string where = "event line " + std::to_string(n + 1);
    if (j.is_discarded() || !j.is_object() || !j.contains("project_id") || !j.contains("event") ||
        !j["event"].is_string()) {
      throw Error(ErrorKind::kInvalidInput, where + ": needs project_id and event", {where});
    }
    const std::string id = field_text(j["project_id"]);
    const std::string ev = j["event"].get<std::string>();
    if (ev == "started") started.insert(id);
    else if (ev == "exported") exported.insert(id);
    else throw Error(ErrorKind::kInvalidInput, where + ": unknown event '" + ev + "'", {where});
  }
  if (started.empty()) throw Error(ErrorKind::kZeroStarted, "no project was started");
  CompletionRate r;
  r.started = started.size();
  for (const auto& id : exported) {
    if (started.count(id)) {
      ++r.exported;
    } else {
      ++r.orphan_exports;
      spdlog::warn("project {} exported without a start event; ignored", id);
    }
  }
  r.rate = static_cast<double>(r.exported) / r.started;
  return r;
}

CompletionRate completion_rate(const std::string& events_path) {
  return completion_rate_lines(read_lines(events_path));
}

}  // namespace tonekit
