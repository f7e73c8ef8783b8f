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

// Hard-example augmentation: find training intents where the student departs
// from the teacher, ask a generator for a similar intent, and add it to the
// training set with the teacher's original plan.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tonekit/dataset.hpp"
#include "tonekit/model_client.hpp"
#include "tonekit/offline_eval.hpp"

namespace tonekit {

// Mean cosine quality of the un-augmented student, per tool.
struct Baselines {
  std::optional<double> adjust;
  std::optional<double> selective;
};

// {"adjust": m, "selective": m}. Missing values stay unset.
Baselines baselines_from_json(const Json& j);
Json to_json(const Baselines& b);
Baselines baselines_from_report(const EvalReport& report);

struct MistakeRecord {
  std::string intent;
  std::vector<Tool> tools;  // failing tools, in Tool order
  Json evidence;            // per tool name
};

Json to_json(const MistakeRecord& m);

struct MistakeOptions {
  std::size_t sample_size = 1000;
  std::uint64_t seed = 0;
  // Also flag tools that one side uses and the other does not.
  bool selection_mismatch = true;
};

// Samples min(sample_size, n) intents (sorted by normalized intent, shuffled
// with Xoshiro256ss(seed)) and flags per tool: a different filter name, or a
// cosine below the tool's baseline, when both sides use the tool. Results are
// ordered by normalized intent. Throws MissingBaseline.
std::vector<MistakeRecord> detect_mistakes(const std::vector<EvalSample>& samples,
                                           const Baselines& baselines, const MistakeOptions& options);

struct Augmentation {
  std::string source_intent;
  std::string intent;
  EditPlan plan;  // the source row's teacher plan, unchanged
  std::string reply_digest;
};

struct GenerationFailure {
  std::string source_intent;
  std::string reason;
};

struct AugmentationBatch {
  int iteration = 0;
  std::vector<Augmentation> items;
  std::vector<GenerationFailure> failures;
};

Json to_json(const Augmentation& a);

// One generated intent per mistake. A reply without a usable intent, or one
// that normalizes to its source, is retried once and then recorded as a
// failure. Endpoint errors propagate.
AugmentationBatch generate_similar(const std::vector<MistakeRecord>& mistakes,
                                   const std::vector<CuratedRow>& train, ModelClient& generator,
                                   int iteration = 0);

struct Bookkeeping {
  std::size_t before = 0;
  std::size_t augmentations = 0;
  std::size_t after = 0;
  std::size_t duplicates_skipped = 0;   // already in train or earlier in the batch
  std::size_t test_collisions_skipped = 0;
  std::size_t generation_failures = 0;

  // Share of the augmented set that is new, in percent.
  double percentage() const {
    return after == 0 ? 0.0 : 100.0 * static_cast<double>(augmentations) / static_cast<double>(after);
  }
};

Json to_json(const Bookkeeping& b);

struct AugmentedTrain {
  std::vector<CuratedRow> train;
  Bookkeeping bookkeeping;
};

// Appends the batch's rows to train. Generated intents already present in
// train, in test, or earlier in the batch are skipped and counted.
AugmentedTrain apply_augmentation(const std::vector<CuratedRow>& train, const AugmentationBatch& batch,
                                  const std::vector<CuratedRow>& test = {});

struct IterationConfig {
  std::string train_path;
  std::string predictions_path;
  std::string baselines_path;
  std::string test_path;  // optional; guards against test leakage
  std::string state_dir;
  MistakeOptions mistakes;
  int iteration = 0;
};

struct IterationResult {
  std::vector<MistakeRecord> mistakes;
  AugmentationBatch batch;
  Bookkeeping bookkeeping;
};

// detect -> generate -> apply, writing into state_dir: baselines.json,
// mistakes.jsonl, batch.jsonl, train_augmented.jsonl and bookkeeping.json.
IterationResult run_iteration(const IterationConfig& config, ModelClient& generator);

}  // namespace tonekit
