// Copyright 2026 The mia-audit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "mia_audit/calibration.h"
#include "mia_audit/lira_engine.h"
#include "mia_audit/synth.h"

namespace mia_audit {
namespace {

ScoreBundle MakeBundle(int n, int m, int a) {
  SynthSpec spec;
  spec.n_samples = n;
  spec.n_models = m;
  spec.n_augmentations = a;
  spec.separation = 1.0;
  spec.seed = 1;
  return *GenerateBundle(spec);
}

const Variant kVariants[] = {
    {AttackKind::kOnline, VarianceMode::kPerSample},
    {AttackKind::kOnline, VarianceMode::kFixed},
    {AttackKind::kOffline, VarianceMode::kPerSample},
    {AttackKind::kGlobal, VarianceMode::kPerSample},
};

// One full attack on a target model; items are samples.
void BM_Attack(benchmark::State& state) {
  const ScoreBundle bundle = MakeBundle(state.range(0), state.range(1), 2);
  const LiraEngine engine(bundle);
  const Variant variant = kVariants[state.range(2)];
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.Attack(0, variant));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.SetLabel(VariantName(variant));
}
BENCHMARK(BM_Attack)
    ->ArgsProduct({{1000, 10000}, {16, 64}, {0, 1, 2, 3}})
    ->Unit(benchmark::kMillisecond);

void BM_EngineConstruction(benchmark::State& state) {
  const ScoreBundle bundle = MakeBundle(state.range(0), 16, 2);
  for (auto _ : state) {
    LiraEngine engine(bundle);
    benchmark::DoNotOptimize(engine.phi(0, 0, 0));
  }
  state.SetItemsProcessed(state.iterations() * bundle.confidences.size());
}
BENCHMARK(BM_EngineConstruction)->Arg(10000)->Unit(benchmark::kMillisecond);

// Shadow calibration for one target: M - 1 leave-two-out attacks.
void BM_ShadowThreshold(benchmark::State& state) {
  const ScoreBundle bundle = MakeBundle(state.range(0), state.range(1), 1);
  const LiraEngine engine(bundle);
  const double alphas[] = {1e-5, 1e-3};
  const Variant variant{AttackKind::kOnline, VarianceMode::kPerSample};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ShadowThresholds(engine, 0, variant, alphas));
  }
}
BENCHMARK(BM_ShadowThreshold)
    ->Args({10000, 16})
    ->Args({2000, 64})
    ->Unit(benchmark::kMillisecond);

void BM_GenerateBundle(benchmark::State& state) {
  SynthSpec spec;
  spec.n_samples = state.range(0);
  spec.n_models = 16;
  for (auto _ : state) {
    benchmark::DoNotOptimize(GenerateBundle(spec));
  }
  state.SetItemsProcessed(state.iterations() * spec.n_samples * 16);
}
BENCHMARK(BM_GenerateBundle)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace mia_audit

BENCHMARK_MAIN();
