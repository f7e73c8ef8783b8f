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

// Serial reference vs OpenMP kernels on a full-HD frame.

#include <benchmark/benchmark.h>

#include <random>

#include "tonekit/grading.hpp"

namespace {

using namespace tonekit;

const Image& frame() {
  static const Image img = [] {
    Image im(1920, 1080);
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> d(0, 255);
    for (auto& c : im.rgb) c = from_u8(static_cast<std::uint8_t>(d(rng)));
    return im;
  }();
  return img;
}

EditPlan full_plan() {
  EditPlan p;
  p.adjust = AdjustParams{};
  for (const auto& f : kAdjustFields) (*p.adjust).*f.member = f.range.hi / 2;
  p.selective = SelectiveAdjustParams{};
  for (auto& b : p.selective->bands) b = {30, -20};
  p.filter = FilterParams{"cyberpunk", 70};
  return p;
}

void BM_Reference(benchmark::State& state) {
  const EditPlan plan = full_plan();
  for (auto _ : state) benchmark::DoNotOptimize(reference::apply_plan(frame(), plan));
}

void BM_Kernel(benchmark::State& state) {
  const EditPlan plan = full_plan();
  EngineOptions o;
  o.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(apply_plan(frame(), plan, PresetRegistry::builtin(), o));
}

void BM_KernelFilterOnly(benchmark::State& state) {
  EditPlan plan;
  plan.filter = FilterParams{"winter", 60};
  for (auto _ : state) benchmark::DoNotOptimize(apply_plan(frame(), plan));
}

}  // namespace

BENCHMARK(BM_Reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Kernel)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KernelFilterOnly)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
