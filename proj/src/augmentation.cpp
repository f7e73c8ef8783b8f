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

#include "tonekit/augmentation.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

#include "tonekit/error.hpp"
#include "tonekit/llm_io.hpp"
#include "tonekit/rng.hpp"

namespace tonekit {
namespace {

std::optional<double> number_or_none(const Json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if (!j[key].is_number()) throw Error(ErrorKind::kInvalidInput, std::string("baseline ") + key + " must be a number");
  return j[key].get<double>();
}

std::string joined_lines(const std::vector<Json>& items) {
  std::string out;
  for (const auto& j : items) {
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace

Baselines baselines_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kInvalidInput, "baselines must be a JSON object");
  return {number_or_none(j, "adjust"), number_or_none(j, "selective")};
}

Json to_json(const Baselines& b) {
  Json j = Json::object();
  j["adjust"] = b.adjust ? Json(*b.adjust) : Json(nullptr);
  j["selective"] = b.selective ? Json(*b.selective) : Json(nullptr);
  return j;
}

Baselines baselines_from_report(const EvalReport& report) {
  return {report.tools[static_cast<std::size_t>(Tool::kAdjust)].quality.value,
          report.tools[static_cast<std::size_t>(Tool::kSelective)].quality.value};
}

Json to_json(const MistakeRecord& m) {
  Json tools = Json::array();
  for (Tool t : m.tools) tools.push_back(std::string(tool_name(t)));
  return Json{{"intent", m.intent}, {"tools", std::move(tools)}, {"evidence", m.evidence}};
}

std::vector<MistakeRecord> detect_mistakes(const std::vector<EvalSample>& samples,
                                           const Baselines& baselines, const MistakeOptions& options) {
  if (!baselines.adjust || !baselines.selective) {
    throw Error(ErrorKind::kMissingBaseline,
                std::string("baseline mean cosine missing for ") + (!baselines.adjust ? "adjust" : "selective"));
  }
  std::vector<const EvalSample*> order;
  order.reserve(samples.size());
  for (const auto& s : samples) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(), [](const EvalSample* a, const EvalSample* b) {
    return normalize_intent(a->intent) < normalize_intent(b->intent);
  });
  Xoshiro256ss rng(options.seed);
  shuffle(order, rng);
  order.resize(std::min(options.sample_size, order.size()));
  std::stable_sort(order.begin(), order.end(), [](const EvalSample* a, const EvalSample* b) {
    return normalize_intent(a->intent) < normalize_intent(b->intent);
  });

  std::vector<MistakeRecord> out;
  for (const EvalSample* s : order) {
    MistakeRecord m{s->intent, {}, Json::object()};
    for (Tool t : kAllTools) {
      const bool tu = is_used(s->truth, t);
      const bool pu = is_used(s->prediction, t);
      Json ev;
      if (tu && pu) {
        if (t == Tool::kFilter) {
          const auto a = effective_filter_name(s->truth);
          const auto b = effective_filter_name(s->prediction);
          if (a != b) ev = {{"truth", std::string(a)}, {"predicted", std::string(b)}};
        } else {
          const double c = sample_cosine(*s, t);
          const double base = t == Tool::kAdjust ? *baselines.adjust : *baselines.selective;
          if (c < base) ev = {{"cosine", c}, {"baseline", base}};
        }
      } else if (tu != pu && options.selection_mismatch) {
        ev = {{"truth_used", tu}, {"predicted_used", pu}};
      }
      if (!ev.is_null()) {
        m.tools.push_back(t);
        m.evidence[std::string(tool_name(t))] = std::move(ev);
      }
    }
    if (!m.tools.empty()) out.push_back(std::move(m));
  }
  return out;
}

Json to_json(const Augmentation& a) {
  Json j = Json::object();
  j["source_intent"] = a.source_intent;
  j["intent"] = a.intent;
  j["plan"] = to_json(a.plan);
  j["reply_digest"] = a.reply_digest;
  return j;
}

AugmentationBatch generate_similar(const std::vector<MistakeRecord>& mistakes,
                                   const std::vector<CuratedRow>& train, ModelClient& generator,
                                   int iteration) {
  std::map<std::string, const CuratedRow*> by_intent;
  for (const auto& r : train) by_intent.emplace(normalize_intent(r.intent), &r);
  const PromptTemplate tmpl = builtin_template(Role::kAugmenter);

  AugmentationBatch batch;
  batch.iteration = iteration;
  for (const auto& m : mistakes) {
    const std::string source_key = normalize_intent(m.intent);
    const auto row = by_intent.find(source_key);
    if (row == by_intent.end()) {
      throw Error(ErrorKind::kInvalidInput, "mistake intent not in the training set: " + m.intent, {m.intent});
    }
    const std::string prompt = render_prompt(tmpl, m.intent);
    std::string reason;
    bool done = false;
    for (int attempt = 0; attempt < 2 && !done; ++attempt) {
      const std::string reply = generator.complete(prompt);
      const auto similar = parse_similar_request(reply);
      if (!similar || trim(*similar).empty()) {
        reason = "reply has no SIMILAR_USER_REQUEST line";
      } else if (normalize_intent(*similar) == source_key) {
        reason = "generated intent repeats its source";
      } else {
        batch.items.push_back({m.intent, std::string(trim(*similar)), row->second->plan, hex64(fnv1a64(reply))});
        done = true;
      }
    }
    if (!done) {
      spdlog::warn("GenerationFailed for '{}': {}", m.intent, reason);
      batch.failures.push_back({m.intent, reason});
    }
  }
  return batch;
}

Json to_json(const Bookkeeping& b) {
  Json j = Json::object();
  j["train_size_before"] = b.before;
  j["augmentations"] = b.augmentations;
  j["percentage"] = b.percentage();
  j["train_size_after"] = b.after;
  j["duplicates_skipped"] = b.duplicates_skipped;
  j["test_collisions_skipped"] = b.test_collisions_skipped;
  j["generation_failures"] = b.generation_failures;
  return j;
}

AugmentedTrain apply_augmentation(const std::vector<CuratedRow>& train, const AugmentationBatch& batch,
                                  const std::vector<CuratedRow>& test) {
  AugmentedTrain out;
  out.train = train;
  out.bookkeeping.before = train.size();
  out.bookkeeping.generation_failures = batch.failures.size();
  std::set<std::string> seen, test_keys;
  std::map<std::string, const CuratedRow*> sources;
  for (const auto& r : train) {
    seen.insert(normalize_intent(r.intent));
    sources.emplace(normalize_intent(r.intent), &r);
  }
  for (const auto& r : test) test_keys.insert(normalize_intent(r.intent));
  for (const auto& a : batch.items) {
    const std::string key = normalize_intent(a.intent);
    if (test_keys.count(key)) {
      ++out.bookkeeping.test_collisions_skipped;
      spdlog::info("skipping generated intent '{}': it is a test intent", a.intent);
      continue;
    }
    if (!seen.insert(key).second) {
      ++out.bookkeeping.duplicates_skipped;
      spdlog::info("DuplicateIntent: skipping generated intent '{}'", a.intent);
      continue;
    }
    CuratedRow row;
    row.intent = a.intent;
    row.plan = a.plan;
    row.source_intent = a.source_intent;
    if (const auto src = sources.find(normalize_intent(a.source_intent)); src != sources.end()) {
      row.export_rate = src->second->export_rate;
      row.calls = src->second->calls;
    }
    out.train.push_back(std::move(row));
    ++out.bookkeeping.augmentations;
  }
  out.bookkeeping.after = out.train.size();
  return out;
}

IterationResult run_iteration(const IterationConfig& config, ModelClient& generator) {
  const Baselines baselines = baselines_from_json(Json::parse(read_file(config.baselines_path), nullptr, false));
  const std::vector<CuratedRow> train = read_rows(config.train_path);
  const std::vector<CuratedRow> test = config.test_path.empty() ? std::vector<CuratedRow>{}
                                                                : read_rows(config.test_path);
  const LoadedSamples loaded = load_samples(config.train_path, config.predictions_path);

  IterationResult r;
  r.mistakes = detect_mistakes(loaded.samples, baselines, config.mistakes);
  spdlog::info("{} of {} sampled intents have at least one mistake", r.mistakes.size(),
               std::min(config.mistakes.sample_size, loaded.samples.size()));
  r.batch = generate_similar(r.mistakes, train, generator, config.iteration);
  AugmentedTrain augmented = apply_augmentation(train, r.batch, test);
  r.bookkeeping = augmented.bookkeeping;

  const std::filesystem::path dir(config.state_dir);
  std::vector<Json> lines;
  for (const auto& m : r.mistakes) lines.push_back(to_json(m));
  write_file((dir / "mistakes.jsonl").string(), joined_lines(lines));
  lines.clear();
  for (const auto& a : r.batch.items) lines.push_back(to_json(a));
  write_file((dir / "batch.jsonl").string(), joined_lines(lines));
  write_file((dir / "train_augmented.jsonl").string(), rows_to_jsonl(augmented.train));
  write_file((dir / "baselines.json").string(), to_json(baselines).dump(2) + "\n");
  Json book = to_json(r.bookkeeping);
  book["iteration"] = config.iteration;
  book["seed"] = config.mistakes.seed;
  book["sample_size"] = config.mistakes.sample_size;
  book["mistakes"] = r.mistakes.size();
  Json failures = Json::array();
  for (const auto& f : r.batch.failures) failures.push_back({{"source_intent", f.source_intent}, {"reason", f.reason}});
  book["failures"] = std::move(failures);
  write_file((dir / "bookkeeping.json").string(), book.dump(2) + "\n");
  return r;
}

}  // namespace tonekit
