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

// Interaction-log ingestion, behavioral curation, seeded train/test split,
// dataset statistics and SFT export.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tonekit/text.hpp"
#include "tonekit/tool_schema.hpp"

namespace tonekit {

// One logged teacher output for one tool. `section` holds the parsed plan
// section (absent when the output chose not to use the tool).
struct InteractionRecord {
  std::string intent_id;
  std::string intent;
  Tool tool = Tool::kAdjust;
  std::string output;
  std::int64_t exports = 0;
  std::int64_t calls = 1;
  std::string ts;
  EditPlan section;

  double export_rate() const { return static_cast<double>(exports) / static_cast<double>(calls); }
};

struct IngestReport {
  std::size_t lines = 0;  // non-blank lines
  std::size_t records = 0;
  std::size_t malformed = 0;    // not an object, missing or ill-typed fields
  std::size_t unparseable = 0;  // well-formed record whose output has no valid plan
  std::vector<std::string> problems;  // "line N: reason"
};

struct IngestResult {
  std::vector<InteractionRecord> records;
  IngestReport report;
};

// Throws UnreadableFile, or SchemaViolation when more than half of the
// non-blank lines are malformed.
IngestResult ingest(const std::string& log_path);
IngestResult ingest_lines(const std::vector<std::string>& lines);

struct CuratedRow {
  std::string intent;
  EditPlan plan;  // ground truth; only used sections are present
  // Export rate of the retained output per tool (indexed by Tool); unset when
  // every output for that tool had zero exports.
  std::array<std::optional<double>, 3> export_rate{};
  std::int64_t calls = 0;
  std::optional<std::string> source_intent;  // set for augmented rows

  bool operator==(const CuratedRow&) const = default;
};

Json to_json(const CuratedRow& row);
CuratedRow curated_row_from_json(const Json& j);
std::vector<CuratedRow> read_rows(const std::string& path);
std::string rows_to_jsonl(const std::vector<CuratedRow>& rows);

struct CurationReport {
  std::size_t records_in = 0;
  std::size_t zero_export_records = 0;
  std::size_t intents = 0;
  std::size_t rows_out = 0;
  std::size_t intents_without_exports = 0;  // dropped: no tool had an exported output

  double zero_export_fraction() const {
    return records_in == 0 ? 0.0 : static_cast<double>(zero_export_records) / records_in;
  }
};

struct CurationResult {
  std::vector<CuratedRow> rows;  // sorted by normalized intent
  CurationReport report;
};

// Per normalized intent and tool: drop zero-export outputs and keep the one
// with the highest export rate; ties go to more calls, then to the smaller
// canonical serialization. The row's text is the lexicographically smallest
// trimmed spelling of the intent; its calls are the largest per-tool total.
// Independent of record order.
CurationResult curate(const std::vector<InteractionRecord>& records);

struct DatasetSplit {
  std::vector<CuratedRow> train;
  std::vector<CuratedRow> test;
  std::uint64_t seed = 0;
};

// Rows are ordered by normalized intent, shuffled with Xoshiro256ss(seed),
// and the first test_size go to test. Throws TestSizeTooLarge unless
// test_size < rows.size().
DatasetSplit split(std::vector<CuratedRow> rows, std::size_t test_size, std::uint64_t seed);

struct ParamStats {
  std::size_t n = 0;
  double min = 0, max = 0, mean = 0, stddev = 0;  // population stddev
};

struct SetStats {
  std::size_t rows = 0;
  std::array<std::size_t, 3> used{};  // indexed by Tool
  // (name, count) by descending count, then name; absent filters count as "none".
  std::vector<std::pair<std::string, std::size_t>> filter_ranking;
  std::map<std::string, ParamStats> adjust;     // over rows using adjust
  std::map<std::string, ParamStats> selective;  // "red.saturation", ... over rows using selective
};

SetStats stats(const std::vector<CuratedRow>& rows);
Json to_json(const SetStats& s);

struct SftRecord {
  Tool tool;
  std::string prompt;
  std::string completion;
};

// Three records per row (adjust, selective, filter) rendered with the student
// templates. Completions: "Parameters: <canonical section>" for used tools,
// "" for unused adjust/selective, and the "none" preset for an unused filter.
std::vector<SftRecord> export_sft(const std::vector<CuratedRow>& rows);
std::string sft_to_jsonl(const std::vector<SftRecord>& records);

struct CompletionRate {
  std::size_t started = 0;
  std::size_t exported = 0;  // exported projects that were also started
  std::size_t orphan_exports = 0;  // exported without a start; ignored
  double rate = 0;
};

// Events: {"project_id": ..., "event": "started" | "exported"} per line.
// Throws ZeroStarted.
CompletionRate completion_rate(const std::string& events_path);
CompletionRate completion_rate_lines(const std::vector<std::string>& lines);

}  // namespace tonekit
