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

// Acceptance checks. One PASS/FAIL line per criterion; exit status is non-zero
// when any selected criterion fails.
//
//   tonekit_acceptance            run all
//   tonekit_acceptance --only 4   run one

#include <omp.h>
#include <spdlog/spdlog.h>
#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "tonekit/augmentation.hpp"
#include "tonekit/color.hpp"
#include "tonekit/error.hpp"
#include "tonekit/grading.hpp"
#include "tonekit/llm_io.hpp"

namespace {

using namespace tonekit;
using tonekit::testing::ScratchDir;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects sub-check failures so each criterion prints a single verdict.
struct Check {
  std::vector<std::string> failures;
  bool skipped = false;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

char buf[256];
#define FMT(...) (std::snprintf(buf, sizeof buf, __VA_ARGS__), std::string(buf))

// 1. Final and overall arithmetic of the reference score table.
std::string criterion_1(Check& c) {
  constexpr double kTol = 0.005;
  const Json fixture = Json::parse(slurp(std::string(TONEKIT_TEST_DATA) + "/score_pairs.json"));
  const auto t0 = Clock::now();
  const auto rows = score_pairs(fixture);
  int cells = 0, ok_cells = 0, in_interval = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Json& printed = fixture[i]["printed"];
    double printed_mean = 0;
    for (std::size_t t = 0; t < 3; ++t) {
      const double want = printed["final"][t].get<double>();
      const double got = rows[i].final[t];
      printed_mean += want / 3;
      ++cells;
      if (std::abs(got - want) <= kTol) {
        ++ok_cells;
      } else {
        c.expect(false, FMT("%s %s: H(%.2f, %.2f) = %.4f, printed %.2f", rows[i].label.c_str(),
                            std::string(tool_name(kAllTools[t])).c_str(), rows[i].selection[t],
                            rows[i].quality[t], got, want));
      }
      // Informational: is the printed value reachable from inputs that
      // themselves were rounded to two decimals?
      const double s = rows[i].selection[t], q = rows[i].quality[t];
      const double lo = final_score(s - 0.005, q - 0.005), hi = final_score(s + 0.005, q + 0.005);
      in_interval += want >= lo - kTol && want <= hi + kTol;
    }
    const double want = printed["overall"].get<double>();
    ++cells;
    if (std::abs(printed_mean - want) <= kTol) {
      ++ok_cells;
    } else {
      c.expect(false, FMT("%s overall: mean of printed finals %.4f, printed %.2f", rows[i].label.c_str(),
                          printed_mean, want));
    }
  }
  const double secs = seconds_since(t0);
  c.expect(secs < 1.0, FMT("runtime %.3fs", secs));
  return FMT("%d/%d cells within +-%.3f; %d/18 finals consistent with rounded inputs; %.4fs", ok_cells, cells,
             kTol, in_interval, secs);
}

// 3. Identity plans leave random images bit-identical.
std::string criterion_3(Check& c) {
  std::mt19937_64 rng(301);
  const auto t0 = Clock::now();
  int checks = 0;
  for (int i = 0; i < 100; ++i) {
    const Image img = tonekit::testing::random_image(rng, tonekit::testing::uniform_int(rng, 1, 64),
                                                     tonekit::testing::uniform_int(rng, 1, 64), i % 2 == 0);
    std::vector<EditPlan> plans(4);
    plans[1].adjust = AdjustParams{};
    plans[2].selective = SelectiveAdjustParams{};
    plans[3].filter = FilterParams{"none", tonekit::testing::uniform_int(rng, 0, 100)};
    for (auto name : kFilterPresets) {
      EditPlan p;
      p.filter = FilterParams{std::string(name), 0};
      plans.push_back(p);
    }
    for (const auto& p : plans) {
      ++checks;
      c.expect(apply_plan(img, p) == img, FMT("image %d, plan %s", i, canonical_serialize(p).c_str()));
    }
  }
  const double secs = seconds_since(t0);
  c.expect(secs < 30.0, FMT("runtime %.2fs", secs));
  return FMT("%d image/plan pairs bit-identical; %.2fs (limit 30s)", checks, secs);
}

// 4. Every metric equals the brute-force reference.
std::string criterion_4(Check& c) {
  constexpr double kTol = 1e-12;
  std::mt19937_64 rng(401);
  const auto samples = tonekit::testing::synthetic_samples(rng, 200);
  const auto t0 = Clock::now();
  const EvalReport r = evaluate(samples);
  double worst = 0, sum = 0;
  auto cmp = [&](double got, double want, const std::string& what) {
    const double d = std::abs(got - want);
    worst = std::max(worst, d);
    c.expect(d <= kTol, FMT("%s: %.17g vs %.17g", what.c_str(), got, want));
  };
  for (Tool t : kAllTools) {
    const auto o = tonekit::testing::brute_force_tool(samples, t);
    const auto& tr = r.tools[static_cast<std::size_t>(t)];
    const std::string n(tool_name(t));
    cmp(tr.selection.precision, o.precision, n + " precision");
    cmp(tr.selection.recall, o.recall, n + " recall");
    cmp(tr.selection.f1, o.f1, n + " f1");
    c.expect(tr.quality.value.has_value(), n + " quality undefined");
    if (tr.quality.value) cmp(*tr.quality.value, o.quality, n + " quality");
    cmp(tr.final, o.final, n + " final");
    sum += o.final;
  }
  cmp(r.overall, sum / 3, "overall");
  const double secs = seconds_since(t0);
  c.expect(secs < 5.0, FMT("runtime %.3fs", secs));
  return FMT("200 samples, max |diff| %.3g (tol 1e-12); %.4fs (limit 5s)", worst, secs);
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(TONEKIT_CLI) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 5. Curation matches the rule; dataset build is reproducible.
std::string criterion_5(Check& c) {
  std::mt19937_64 rng(501);
  const auto lines = tonekit::testing::synthetic_log(rng, 200, 60);
  const auto ingested = ingest_lines(lines);
  c.expect(ingested.records.size() == 200, "not every synthetic record was ingested");
  const auto rows = curate(ingested.records).rows;
  c.expect(rows == tonekit::testing::brute_force_curate(ingested.records), "curation differs from the rule");

  ScratchDir dir("acceptance5");
  {
    std::ofstream out(dir.file("logs.jsonl"));
    for (const auto& l : lines) out << l << "\n";
  }
  std::string first;
  for (int i = 0; i < 2; ++i) {
    const std::string out = dir.file("run" + std::to_string(i));
    const int rc = run_cli("dataset build --logs " + dir.file("logs.jsonl") + " --out-dir " + out +
                           " --test-size 10 --seed 11");
    c.expect(rc == 0, FMT("dataset build exited %d", rc));
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(out)) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::string all;
    for (const auto& f : files) all += f.filename().string() + "\n" + slurp(f.string());
    if (i == 0) first = all;
    c.expect(all == first, "second build differs");
  }
  return FMT("%zu rows from 200 records equal the rule; two builds byte-identical (%zu bytes)", rows.size(),
             first.size());
}

// 6. Augmentation flags the known mistakes and adds one row each; growth
//    table identities.
std::string criterion_6(Check& c) {
  ScratchDir dir("acceptance6");
  std::vector<CuratedRow> train;
  std::set<std::string> expected;
  std::vector<StubModel::Rule> rules;
  std::ofstream pred(dir.file("pred.jsonl"));
  for (int i = 0; i < 60; ++i) {
    CuratedRow r;
    r.intent = FMT("look %02d", i);
    r.plan.adjust = AdjustParams{};
    r.plan.adjust->exposure = 10;
    r.plan.adjust->contrast = 10;
    r.plan.filter = FilterParams{"winter", 50};
    r.calls = 3;
    EditPlan p = r.plan;
    switch (i % 4) {
      case 1: p.filter->name = "north"; break;            // wrong name
      case 2: p.adjust->contrast = -10; break;            // cosine 0 < baseline
      case 3: p.adjust->exposure = 12; break;             // cosine 0.995, fine
      default: break;
    }
    if (i % 4 == 1 || i % 4 == 2) expected.insert(r.intent);
    pred << Json{{"intent", r.intent}, {"plan", to_json(p)}}.dump() << "\n";
    rules.push_back({"INPUT_USER_REQUEST:\n" + r.intent + "\nOutputs:\nSIMILAR_USER_REQUEST:\\s*$", true,
                     r.intent + " reimagined\n"});
    train.push_back(r);
  }
  pred.close();
  std::ofstream(dir.file("train.jsonl")) << rows_to_jsonl(train);
  std::ofstream(dir.file("baselines.json")) << to_json(Baselines{0.57, 0.57}).dump();
  StubModel stub(rules, {});
  IterationConfig cfg;
  cfg.train_path = dir.file("train.jsonl");
  cfg.predictions_path = dir.file("pred.jsonl");
  cfg.baselines_path = dir.file("baselines.json");
  cfg.state_dir = dir.file("state");
  cfg.mistakes.seed = 6;
  const auto r = run_iteration(cfg, stub);

  std::set<std::string> flagged;
  for (const auto& m : r.mistakes) flagged.insert(m.intent);
  c.expect(flagged == expected, FMT("flagged %zu intents, expected %zu", flagged.size(), expected.size()));
  c.expect(r.batch.items.size() == expected.size(), "not one augmentation per mistake");
  for (const auto& a : r.batch.items) c.expect(a.intent == a.source_intent + " reimagined", "bad generated intent");
  c.expect(r.bookkeeping.after == train.size() + expected.size(), "augmented size");
  c.expect(read_rows(cfg.state_dir + "/train_augmented.jsonl").size() == r.bookkeeping.after,
           "train_augmented.jsonl size");

  struct Row {
    std::size_t before, added, after;
    double pct;
  };
  for (const Row row : {Row{8252, 0, 8252, 0.0}, Row{4126, 781, 4907, 15.9}, Row{2063, 784, 2847, 27.5},
                        Row{1031, 806, 1837, 43.8}}) {
    Bookkeeping b;
    b.before = row.before;
    b.augmentations = row.added;
    b.after = row.before + row.added;
    c.expect(b.after == row.after, FMT("%zu + %zu != %zu", row.before, row.added, row.after));
    c.expect(std::abs(b.percentage() - row.pct) <= 0.1,
             FMT("%zu/%zu = %.2f%%, printed %.1f%%", row.added, row.after, b.percentage(), row.pct));
  }
  return FMT("%zu/%zu expected mistakes flagged, %zu rows added; growth table identities hold", flagged.size(),
             expected.size(), r.batch.items.size());
}

// 7. Parser round trip and truncation fuzz.
std::string criterion_7(Check& c) {
  std::mt19937_64 rng(701);
  int round_trips = 0;
  for (int i = 0; i < 1000; ++i) {
    const EditPlan p = tonekit::testing::random_plan(rng);
    std::vector<ParsedToolOutput> outs;
    try {
      for (Tool t : kAllTools) {
        outs.push_back(parse_model_output("Parameters: " + canonical_serialize(p, t), Role::kStudent, t));
      }
      const bool ok = assemble_plan(outs).plan == p;
      round_trips += ok;
      c.expect(ok, "round trip changed " + canonical_serialize(p));
    } catch (const Error& e) {
      c.expect(false, std::string("round trip threw ") + e.what());
    }
  }
  std::size_t truncations = 0, typed_errors = 0;
  for (int i = 0; i < 100; ++i) {
    const EditPlan p = tonekit::testing::random_plan(rng);
    const Tool tool = kAllTools[i % 3];
    const std::string full = "TOOL: rationale.\nJSON: " + canonical_serialize(p, tool);
    for (std::size_t n = 0; n <= full.size(); ++n) {
      ++truncations;
      try {
        parse_model_output(std::string_view(full).substr(0, n), Role::kTeacher, tool);
      } catch (const Error&) {
        ++typed_errors;
      } catch (const std::exception& e) {
        c.expect(false, FMT("untyped exception at byte %zu: %s", n, e.what()));
      }
    }
  }
  return FMT("%d/1000 round trips; %zu truncations, %zu typed errors, no crashes", round_trips, truncations,
             typed_errors);
}

// 8. Range safety, blend exactness, hue composition.
std::string criterion_8(Check& c) {
  std::mt19937_64 rng(801);
  for (int i = 0; i < 1000; ++i) {
    const Image out = apply_plan(tonekit::testing::random_image(rng, 32, 32), tonekit::testing::random_plan(rng));
    bool in_range = true;
    for (double v : out.rgb) in_range &= v >= 0.0 && v <= 1.0;
    c.expect(in_range, FMT("pair %d left [0, 1]", i));
  }
  const Image img = tonekit::testing::random_image(rng, 32, 32);
  for (auto name : kFilterPresets) {
    if (name == "none") continue;
    const Image look = apply_preset(img, *PresetRegistry::builtin().find(name));
    for (int intensity : {0, 25, 50, 100}) {
      const double a = intensity / 100.0;
      const Image out = apply_filter(img, {std::string(name), intensity});
      bool exact = true;
      for (std::size_t k = 0; k < img.rgb.size(); ++k) {
        exact &= out.rgb[k] == color::clamp01((1.0 - a) * img.rgb[k] + a * look.rgb[k]);
      }
      c.expect(exact, FMT("blend %s at %d", std::string(name).c_str(), intensity));
    }
  }
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    AdjustParams a, b, ab;
    a.hue = tonekit::testing::uniform_int(rng, 0, 360);
    b.hue = tonekit::testing::uniform_int(rng, 0, 360);
    ab.hue = (a.hue + b.hue) % 360;
    worst = std::max(worst, tonekit::testing::max_abs_diff(apply_adjust(apply_adjust(img, a), b), apply_adjust(img, ab)));
  }
  c.expect(worst < 1e-6, FMT("hue composition error %.3g", worst));
  return FMT("1000 pairs in range; blends exact at 0/.25/.5/1; hue composition max error %.3g (tol 1e-6)", worst);
}

// 9. `apply` on a 1920x1080 image with all three tools in under a second.
std::string criterion_9(Check& c) {
  ScratchDir dir("acceptance9");
  std::mt19937_64 rng(901);
  // A smooth gradient with mild noise, closer to a photograph than pure noise.
  Image img(1920, 1080);
  std::uniform_real_distribution<double> noise(-0.03, 0.03);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double* p = img.pixel(x, y);
      p[0] = from_u8(to_u8(0.2 + 0.6 * x / img.width + noise(rng)));
      p[1] = from_u8(to_u8(0.3 + 0.4 * y / img.height + noise(rng)));
      p[2] = from_u8(to_u8(0.7 - 0.5 * x / img.width + noise(rng)));
    }
  }
  save_image(img, dir.file("in.png"));
  EditPlan plan;
  plan.adjust = AdjustParams{};
  for (const auto& f : kAdjustFields) (*plan.adjust).*f.member = f.range.hi / 2;
  plan.selective = SelectiveAdjustParams{};
  for (auto& b : plan.selective->bands) b = {30, -20};
  plan.filter = FilterParams{"cyberpunk", 70};
  std::ofstream(dir.file("plan.json")) << canonical_serialize(plan);

  auto t0 = Clock::now();
  const Image out = apply_plan(img, plan);
  const double engine = seconds_since(t0);
  t0 = Clock::now();
  const int rc = run_cli("apply --image " + dir.file("in.png") + " --plan " + dir.file("plan.json") + " --out " +
                         dir.file("out.png"));
  const double cli = seconds_since(t0);
  c.expect(rc == 0, FMT("apply exited %d", rc));
  c.expect(cli < 1.0, FMT("apply took %.3fs", cli));
  c.expect(engine < 1.0, FMT("engine took %.3fs", engine));
  return FMT("tonekit apply %.3fs end to end (engine %.3fs, %d threads); limit 1s", cli, engine,
             omp_get_max_threads());
}

// 10. Public-dataset statistics; warning only.
std::string criterion_10(Check& c) {
  const char* path = std::getenv("TONEKIT_PUBLIC_LOGS");
  if (!path) {
    c.skipped = true;
    return "TONEKIT_PUBLIC_LOGS not set; public dataset check skipped (optional)";
  }
  const auto in = ingest(path);
  const auto cur = curate(in.records);
  const SetStats s = stats(cur.rows);
  double none = 0;
  for (const auto& [name, n] : s.filter_ranking) {
    if (name == "none") none = 100.0 * n / s.rows;
  }
  c.expect(cur.report.intents == 9252 && in.records.size() == 27756 && std::abs(none - 33.8) <= 0.5,
           "differs from the reference counts");
  return FMT("%zu intents, %zu tool-level records, none filter %.1f%% (reference 9252 / 27756 / 33.8%%)",
             cur.report.intents, in.records.size(), none);
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::err);
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0) only = std::atoi(argv[i + 1]);
  }
  const std::vector<std::pair<int, std::function<std::string(Check&)>>> criteria = {
      {1, criterion_1}, {3, criterion_3}, {4, criterion_4}, {5, criterion_5}, {6, criterion_6},
      {7, criterion_7}, {8, criterion_8}, {9, criterion_9}, {10, criterion_10}};
  bool all_ok = true;
  for (const auto& [n, fn] : criteria) {
    if (only && n != only) continue;
    Check c;
    std::string summary;
    try {
      summary = fn(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("threw: ") + e.what());
    }
    const bool optional = n == 10;
    const bool ok = c.failures.empty();
    const char* verdict = c.skipped ? "SKIP" : ok ? "PASS" : optional ? "WARN" : "FAIL";
    std::printf("%s criterion %d: %s\n", verdict, n, summary.c_str());
    for (const auto& f : c.failures) std::printf("    %s\n", f.c_str());
    all_ok &= ok || optional;
  }
  return all_ok ? 0 : 1;
}
