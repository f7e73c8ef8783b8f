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

// tonekit: command-line front end for the color-grading tool pipeline.
//
// Exit codes: 0 success, 1 runtime error, 2 invalid input, 3 endpoint failure.
// Failures also print one JSON line {"error", "message", "details"} on stderr.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "tonekit/augmentation.hpp"
#include "tonekit/dataset.hpp"
#include "tonekit/error.hpp"
#include "tonekit/grading.hpp"
#include "tonekit/image.hpp"
#include "tonekit/llm_io.hpp"
#include "tonekit/model_client.hpp"
#include "tonekit/offline_eval.hpp"
#include "tonekit/presets.hpp"
#include "tonekit/tool_schema.hpp"

namespace fs = std::filesystem;
using namespace tonekit;

namespace {

constexpr const char* kApiKeyEnv = "TONEKIT_API_KEY";

struct Settings {
  EndpointConfig endpoint;
  std::uint64_t seed = 0;
  int threads = 0;
  std::size_t test_size = 1000;
  std::size_t sample_size = 1000;
};

Json to_json(const Settings& s) {
  Json j = tonekit::to_json(s.endpoint);
  j["seed"] = s.seed;
  j["threads"] = s.threads;
  j["test_size"] = s.test_size;
  j["sample_size"] = s.sample_size;
  return j;
}

void merge_file(Settings& s, const std::string& path) {
  const Json j = Json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorKind::kInvalidInput, path + ": config must be a JSON object", {path});
  }
  merge_endpoint_config(s.endpoint, j);
  for (const auto& [k, v] : j.items()) {
    if (k == "endpoint" || k.rfind("endpoint.", 0) == 0) continue;
    try {
      if (k == "seed") s.seed = v.get<std::uint64_t>();
      else if (k == "threads") s.threads = v.get<int>();
      else if (k == "test_size") s.test_size = v.get<std::size_t>();
      else if (k == "sample_size") s.sample_size = v.get<std::size_t>();
      else throw Error(ErrorKind::kUnknownParameter, path + ": unknown config key " + k, {k});
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorKind::kInvalidInput, path + ": bad value for " + k, {k});
    }
  }
}

Json load_json_file(const std::string& path) {
  const Json j = Json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::kInvalidInput, path + ": not valid JSON", {path});
  return j;
}

std::string jsonl(const std::vector<Json>& items) {
  std::string out;
  for (const auto& j : items) out += j.dump() + "\n";
  return out;
}

std::array<bool, 3> parse_tool_list(const std::vector<std::string>& names) {
  if (names.empty()) return {true, true, true};
  std::array<bool, 3> on{};
  for (const auto& n : names) {
    const auto t = parse_tool(n);
    if (!t) throw Error(ErrorKind::kInvalidInput, "unknown tool '" + n + "'", {n});
    on[static_cast<std::size_t>(*t)] = true;
  }
  return on;
}

// Options shared by subcommands that talk to a model.
struct ModelFlags {
  std::string url;
  std::string model;
  std::string stub;
  std::uint64_t stub_seed = 0;

  void add(CLI::App* cmd) {
    auto* e = cmd->add_option("--endpoint", url, "Chat-completions base URL");
    auto* s = cmd->add_option("--stub", stub, "Scripted stub responder (JSONL rules) instead of an endpoint");
    e->excludes(s);
    cmd->add_option("--model", model, "Model name sent to the endpoint");
    cmd->add_option("--stub-seed", stub_seed, "Seed for the stub's fallback choice");
  }

  std::unique_ptr<ModelClient> make(const Settings& settings) const {
    if (!stub.empty()) return std::make_unique<StubModel>(StubModel::load(stub, stub_seed));
    EndpointConfig c = settings.endpoint;
    if (!url.empty()) c.url = url;
    if (!model.empty()) c.model = model;
    if (c.url.empty()) {
      throw Error(ErrorKind::kInvalidInput, "no model: pass --endpoint, --stub or set endpoint.url in --config");
    }
    if (const char* key = std::getenv(kApiKeyEnv)) c.api_key = key;
    return std::make_unique<ChatCompletionsClient>(c);
  }
};

void print_warnings(const std::vector<ValidationWarning>& warnings) {
  for (const auto& w : warnings) spdlog::warn("{}: {}", w.field, w.message);
}

int run_validate(const std::string& plan_path) {
  const ValidatedPlan v = validate(load_json_file(plan_path));
  print_warnings(v.warnings);
  std::cout << canonical_serialize(v.plan) << "\n";
  return 0;
}

struct ApplyArgs {
  std::string image, plan, out, presets;
  std::vector<std::string> tools;
  std::size_t max_pixels = EngineOptions{}.max_pixels;
};

int run_apply(const ApplyArgs& a, const Settings& s) {
  const ValidatedPlan v = validate(load_json_file(a.plan));
  print_warnings(v.warnings);
  EngineOptions opts;
  opts.threads = s.threads;
  opts.max_pixels = a.max_pixels;
  opts.tools = parse_tool_list(a.tools);
  const Image img = load_image(a.image);
  const PresetRegistry custom = a.presets.empty() ? PresetRegistry{} : PresetRegistry::load(a.presets);
  const PresetRegistry& registry = a.presets.empty() ? PresetRegistry::builtin() : custom;
  save_image(apply_plan(img, v.plan, registry, opts), a.out);
  spdlog::info("wrote {} ({}x{})", a.out, img.width, img.height);
  return 0;
}

struct BuildArgs {
  std::string logs, out_dir;
};

int run_dataset_build(const BuildArgs& a, const Settings& s) {
  const IngestResult in = ingest(a.logs);
  const CurationResult cur = curate(in.records);
  const DatasetSplit sp = split(cur.rows, s.test_size, s.seed);
  const fs::path dir(a.out_dir);
  write_file((dir / "train.jsonl").string(), rows_to_jsonl(sp.train));
  write_file((dir / "test.jsonl").string(), rows_to_jsonl(sp.test));
  write_file((dir / "sft_train.jsonl").string(), sft_to_jsonl(export_sft(sp.train)));

  Json summary = Json::object();
  summary["seed"] = s.seed;
  summary["test_size"] = s.test_size;
  summary["ingest"] = {{"lines", in.report.lines},
                       {"records", in.report.records},
                       {"malformed", in.report.malformed},
                       {"unparseable", in.report.unparseable},
                       {"problems", in.report.problems}};
  summary["curation"] = {{"records_in", cur.report.records_in},
                         {"zero_export_records", cur.report.zero_export_records},
                         {"zero_export_fraction", cur.report.zero_export_fraction()},
                         {"intents", cur.report.intents},
                         {"intents_without_exports", cur.report.intents_without_exports},
                         {"rows", cur.report.rows_out}};
  Json counts = Json::object();
  for (const auto& [name, rows] : {std::pair{"train", &sp.train}, std::pair{"test", &sp.test}}) {
    const SetStats st = stats(*rows);
    counts[name] = to_json(st)["tools"];
  }
  summary["split"] = std::move(counts);
  write_file((dir / "summary.json").string(), summary.dump(2) + "\n");
  spdlog::info("{} records -> {} rows ({} train, {} test) in {}", in.records.size(), cur.rows.size(),
               sp.train.size(), sp.test.size(), a.out_dir);
  return 0;
}

int run_dataset_stats(const std::string& data, const std::string& report) {
  Json out = Json::object();
  if (fs::is_directory(data)) {
    for (const char* part : {"train", "test"}) {
      const fs::path p = fs::path(data) / (std::string(part) + ".jsonl");
      if (fs::exists(p)) out[part] = to_json(stats(read_rows(p.string())));
    }
    if (out.empty()) throw Error(ErrorKind::kUnreadableFile, data + " has no train.jsonl or test.jsonl", {data});
  } else {
    out = to_json(stats(read_rows(data)));
  }
  if (report.empty()) std::cout << out.dump(2) << "\n";
  else write_file(report, out.dump(2) + "\n");
  return 0;
}

int run_sft_export(const std::string& train, const std::string& out) {
  const auto records = export_sft(read_rows(train));
  write_file(out, sft_to_jsonl(records));
  spdlog::info("wrote {} SFT records to {}", records.size(), out);
  return 0;
}

struct EvalArgs {
  std::string truth, pred, report, pairs, baselines_out;
  std::vector<std::int64_t> min_calls{1};
  std::string filter_mode = "both-used";
};

std::string subset_label(std::int64_t min_calls) {
  return min_calls <= 1 ? "All" : "r" + std::to_string(min_calls);
}

int run_eval(const EvalArgs& a) {
  if (!a.pairs.empty()) {
    Json rows = Json::array();
    std::string table = "Row         | Adjust            | Selective Adjust  | Filter            | Overall\n";
    for (const auto& r : score_pairs(load_json_file(a.pairs))) {
      rows.push_back(to_json(r));
      char head[32];
      std::snprintf(head, sizeof head, "%-11s", r.label.c_str());
      table += head;
      for (std::size_t t = 0; t < 3; ++t) {
        table += " | (" + format2(r.selection[t]) + ", " + format2(r.quality[t]) + ", " + format2(r.final[t]) + ")";
      }
      table += " | " + format2(r.overall) + "\n";
    }
    std::cout << table;
    if (!a.report.empty()) write_file(a.report, Json{{"rows", rows}}.dump(2) + "\n");
    return 0;
  }
  if (a.truth.empty() || a.pred.empty()) {
    throw Error(ErrorKind::kInvalidInput, "eval needs --truth and --pred (or --pairs)");
  }
  EvalOptions opts;
  if (a.filter_mode == "all") opts.filter_mode = FilterQualityMode::kAll;
  else if (a.filter_mode != "both-used") {
    throw Error(ErrorKind::kInvalidInput, "--filter-quality-mode must be both-used or all", {a.filter_mode});
  }
  const LoadedSamples loaded = load_samples(a.truth, a.pred);
  if (loaded.unparseable_outputs > 0) {
    spdlog::warn("{} prediction outputs could not be parsed and count as 'tool not used'",
                 loaded.unparseable_outputs);
  }
  std::vector<std::pair<std::string, EvalReport>> reports;
  Json subsets = Json::array();
  for (std::int64_t m : a.min_calls) {
    opts.min_calls = m;
    reports.emplace_back(subset_label(m), evaluate(loaded.samples, opts));
    subsets.push_back(to_json(reports.back().second));
  }
  std::cout << format_table(reports);
  Json doc = Json::object();
  doc["unparseable_outputs"] = loaded.unparseable_outputs;
  doc["subsets"] = std::move(subsets);
  if (!a.report.empty()) write_file(a.report, doc.dump(2) + "\n");
  if (!a.baselines_out.empty()) {
    write_file(a.baselines_out, to_json(baselines_from_report(reports.front().second)).dump(2) + "\n");
  }
  return 0;
}

struct AugmentArgs {
  std::string train, pred, baselines, test, state_dir;
  int iteration = 0;
  bool no_selection_mistakes = false;
  ModelFlags model;
};

int run_augment(const AugmentArgs& a, const Settings& s) {
  IterationConfig c;
  c.train_path = a.train;
  c.predictions_path = a.pred;
  c.baselines_path = a.baselines;
  c.test_path = a.test;
  c.state_dir = a.state_dir;
  c.iteration = a.iteration;
  c.mistakes.sample_size = s.sample_size;
  c.mistakes.seed = s.seed;
  c.mistakes.selection_mismatch = !a.no_selection_mistakes;
  auto client = a.model.make(s);
  const IterationResult r = run_iteration(c, *client);
  std::cout << to_json(r.bookkeeping).dump(2) << "\n";
  return 0;
}

struct CompareArgs {
  std::string intent, source, a, b, manifest, out;
  ModelFlags model;
};

int run_compare(const CompareArgs& a, const Settings& s) {
  auto client = a.model.make(s);
  if (a.manifest.empty()) {
    if (a.intent.empty() || a.source.empty() || a.a.empty() || a.b.empty()) {
      throw Error(ErrorKind::kInvalidInput, "compare-images needs --intent, --source, --a and --b (or --manifest)");
    }
    const ComparisonResult r =
        compare_images(*client, a.intent, load_image(a.source), load_image(a.a), load_image(a.b));
    const Json j = {{"winner", r.winner}, {"transcript", r.transcript}};
    if (!a.out.empty()) write_file(a.out, j.dump(2) + "\n");
    std::cout << r.winner << "\n";
    return 0;
  }
  const fs::path base = fs::path(a.manifest).parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? p : (base / p).string(); };
  std::vector<std::string> winners;
  std::vector<Json> results;
  std::size_t undecided = 0;
  int n = 0;
  for (const auto& line : read_lines(a.manifest)) {
    ++n;
    if (trim(line).empty()) continue;
    const Json j = Json::parse(line, nullptr, false);
    const std::string where = a.manifest + ":" + std::to_string(n);
    if (j.is_discarded() || !j.is_object()) throw Error(ErrorKind::kInvalidInput, where + ": not an object", {where});
    for (const char* k : {"intent", "source", "a", "b"}) {
      if (!j.contains(k) || !j[k].is_string()) {
        throw Error(ErrorKind::kInvalidInput, where + ": needs string \"" + std::string(k) + "\"", {where});
      }
    }
    Json rec = {{"intent", j["intent"]}};
    try {
      const ComparisonResult r = compare_images(*client, j["intent"].get<std::string>(),
                                                load_image(resolve(j["source"])), load_image(resolve(j["a"])),
                                                load_image(resolve(j["b"])));
      winners.push_back(r.winner);
      rec["winner"] = r.winner;
      rec["transcript"] = r.transcript;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kUndecidableReply) throw;
      ++undecided;
      spdlog::warn("{}: comparator named no winner; excluded from the tally", where);
      rec["winner"] = nullptr;
      rec["transcript"] = e.details().empty() ? "" : e.details()[0];
    }
    results.push_back(std::move(rec));
  }
  Json tally = Json::object();
  for (const auto& [label, count] : tally_wins(winners)) tally[label] = count;
  tally["undecidable"] = undecided;
  std::cout << tally.dump() << "\n";
  if (!a.out.empty()) write_file(a.out, jsonl(results));
  return 0;
}

int run_completion_rate(const std::string& events) {
  const CompletionRate r = completion_rate(events);
  std::cout << Json{{"started", r.started}, {"exported", r.exported}, {"orphan_exports", r.orphan_exports},
                    {"rate", r.rate}}
                   .dump()
            << "\n";
  return 0;
}

int exit_code(ErrorKind k) {
  switch (classify(k)) {
    case ErrorClass::kInvalidInput: return 2;
    case ErrorClass::kEndpoint: return 3;
    case ErrorClass::kRuntime: return 1;
  }
  return 1;
}

void report_error(std::string_view kind, std::string_view message, const std::vector<std::string>& details) {
  std::cerr << Json{{"error", kind}, {"message", message}, {"details", details}}.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("tonekit");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");

  CLI::App app{"tonekit: color-grading tool plans, datasets and evaluation"};
  app.require_subcommand(0, 1);
  std::string config_path, log_level = "info";
  bool show_config = false;
  Settings settings;
  std::optional<std::uint64_t> seed_flag;
  std::optional<int> threads_flag;
  app.add_option("--config", config_path, "JSON config file (endpoint.*, seed, threads, test_size, sample_size)");
  app.add_flag("--show-config", show_config, "Print the effective configuration and exit");
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off");
  app.add_option("--threads", threads_flag, "Worker threads for image kernels (0: all cores)");
  app.add_option("--seed", seed_flag, "Seed for splits and sampling");

  auto* validate_cmd = app.add_subcommand("validate", "Check a plan file and print its canonical form");
  std::string plan_path;
  validate_cmd->add_option("plan", plan_path, "Plan JSON file")->required();

  auto* apply_cmd = app.add_subcommand("apply", "Apply a plan to an image");
  ApplyArgs apply_args;
  apply_cmd->add_option("--image", apply_args.image, "Input PNG or PPM")->required();
  apply_cmd->add_option("--plan", apply_args.plan, "Plan JSON file")->required();
  apply_cmd->add_option("--out", apply_args.out, "Output image (.png, .ppm)")->required();
  apply_cmd->add_option("--tools", apply_args.tools, "Restrict to these tools")->delimiter(',');
  apply_cmd->add_option("--presets", apply_args.presets, "Replacement preset registry file");
  apply_cmd->add_option("--max-pixels", apply_args.max_pixels, "Refuse larger images");

  auto* dataset_cmd = app.add_subcommand("dataset", "Build or describe a dataset");
  dataset_cmd->require_subcommand(1);
  auto* build_cmd = dataset_cmd->add_subcommand("build", "Ingest logs, curate, split and export");
  BuildArgs build_args;
  std::optional<std::size_t> test_size_flag;
  build_cmd->add_option("--logs", build_args.logs, "Interaction log (JSONL)")->required();
  build_cmd->add_option("--out-dir", build_args.out_dir, "Output directory")->required();
  build_cmd->add_option("--test-size", test_size_flag, "Rows held out for test (default 1000)");
  build_cmd->add_option("--seed", seed_flag, "Split seed");
  auto* stats_cmd = dataset_cmd->add_subcommand("stats", "Usage counts and parameter statistics");
  std::string stats_data, stats_report;
  stats_cmd->add_option("--data", stats_data, "Rows file or dataset directory")->required();
  stats_cmd->add_option("--report", stats_report, "Write the report here instead of stdout");

  auto* sft_cmd = app.add_subcommand("sft-export", "Write prompt/completion pairs for fine-tuning");
  std::string sft_train, sft_out;
  sft_cmd->add_option("--train", sft_train, "Curated rows (JSONL)")->required();
  sft_cmd->add_option("--out", sft_out, "Output JSONL")->required();

  auto* eval_cmd = app.add_subcommand("eval", "Score predictions against ground truth");
  EvalArgs eval_args;
  eval_cmd->add_option("--truth", eval_args.truth, "Ground-truth rows (JSONL)");
  eval_cmd->add_option("--pred", eval_args.pred, "Predictions (JSONL)");
  eval_cmd->add_option("--report", eval_args.report, "Write the JSON report here");
  eval_cmd->add_option("--min-calls", eval_args.min_calls, "Popularity subsets, e.g. 1 3 5");
  eval_cmd->add_option("--filter-quality-mode", eval_args.filter_mode, "both-used (default) or all")
      ->check(CLI::IsMember({"both-used", "all"}));
  eval_cmd->add_option("--baselines-out", eval_args.baselines_out, "Write mean cosine baselines here");
  eval_cmd->add_option("--pairs", eval_args.pairs, "Score stored (selection, quality) pairs instead");

  auto* augment_cmd = app.add_subcommand("augment", "Run one augmentation iteration");
  AugmentArgs aug_args;
  std::optional<std::size_t> sample_flag;
  augment_cmd->add_option("--train", aug_args.train, "Training rows (JSONL)")->required();
  augment_cmd->add_option("--pred", aug_args.pred, "Student predictions on the training intents")->required();
  augment_cmd->add_option("--baselines", aug_args.baselines, "Baseline mean cosines (JSON)")->required();
  augment_cmd->add_option("--test", aug_args.test, "Test rows; generated intents colliding with them are skipped");
  augment_cmd->add_option("--state-dir", aug_args.state_dir, "Iteration output directory")->required();
  augment_cmd->add_option("--sample", sample_flag, "Intents sampled for mistake detection (default 1000)");
  augment_cmd->add_option("--seed", seed_flag, "Sampling seed");
  augment_cmd->add_option("--iteration", aug_args.iteration, "Iteration index recorded in the batch");
  augment_cmd->add_flag("--no-selection-mistakes", aug_args.no_selection_mistakes,
                        "Only count quality mistakes, not tool-selection disagreements");
  aug_args.model.add(augment_cmd);

  auto* compare_cmd = app.add_subcommand("compare-images", "Ask a multimodal model which edit fits better");
  CompareArgs cmp_args;
  compare_cmd->add_option("--intent", cmp_args.intent, "User intent");
  compare_cmd->add_option("--source", cmp_args.source, "Original image (A)");
  compare_cmd->add_option("--a", cmp_args.a, "First candidate (B)");
  compare_cmd->add_option("--b", cmp_args.b, "Second candidate (C)");
  compare_cmd->add_option("--manifest", cmp_args.manifest, "JSONL of {intent, source, a, b}; prints a tally");
  compare_cmd->add_option("--out", cmp_args.out, "Write verdicts and transcripts here");
  cmp_args.model.add(compare_cmd);

  auto* rate_cmd = app.add_subcommand("completion-rate", "Exported projects over started projects");
  std::string events_path;
  rate_cmd->add_option("--events", events_path, "Event log (JSONL)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return 0;
    report_error("InvalidInput", e.what(), {});
    return 2;
  }

  try {
    const auto level = spdlog::level::from_str(log_level);
    if (level == spdlog::level::off && log_level != "off") {
      throw Error(ErrorKind::kInvalidInput, "unknown log level " + log_level, {log_level});
    }
    spdlog::set_level(level);

    if (!config_path.empty()) merge_file(settings, config_path);
    if (seed_flag) settings.seed = *seed_flag;
    if (threads_flag) settings.threads = *threads_flag;
    if (test_size_flag) settings.test_size = *test_size_flag;
    if (sample_flag) settings.sample_size = *sample_flag;

    if (show_config) {
      std::cout << to_json(settings).dump(2) << "\n";
      return 0;
    }
    if (*validate_cmd) return run_validate(plan_path);
    if (*apply_cmd) return run_apply(apply_args, settings);
    if (*build_cmd) return run_dataset_build(build_args, settings);
    if (*stats_cmd) return run_dataset_stats(stats_data, stats_report);
    if (*sft_cmd) return run_sft_export(sft_train, sft_out);
    if (*eval_cmd) return run_eval(eval_args);
    if (*augment_cmd) return run_augment(aug_args, settings);
    if (*compare_cmd) return run_compare(cmp_args, settings);
    if (*rate_cmd) return run_completion_rate(events_path);
    std::cout << app.help();
    return 0;
  } catch (const Error& e) {
    report_error(to_string(e.kind()), e.what(), e.details());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    report_error("RuntimeError", e.what(), {});
    return 1;
  }
}
