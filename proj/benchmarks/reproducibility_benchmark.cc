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

#include <random>
#include <vector>

#include "mia_audit/reproducibility.h"

namespace mia_audit {
namespace {

std::vector<SampleSet> RandomSets(int runs, int n, double density) {
  std::mt19937_64 rng(3);
  std::bernoulli_distribution keep(density);
  std::vector<SampleSet> sets(runs);
  for (SampleSet& s : sets) {
    for (int i = 0; i < n; ++i) {
      if (keep(rng)) s.push_back(i);
    }
  }
  return sets;
}

// Exhaustive k-wise agreement; state.range(1) is k.
void BM_KwiseAgreement(benchmark::State& state) {
  const std::vector<SampleSet> sets = RandomSets(state.range(0), 50000, 0.01);
  for (auto _ : state) {
    benchmark::DoNotOptimize(KwiseAgreement(sets, state.range(1)));
  }
}
BENCHMARK(BM_KwiseAgreement)
    ->Args({6, 2})
    ->Args({6, 3})
    ->Args({16, 8})
    ->Unit(benchmark::kMillisecond);

void BM_GlobalSpearman(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  std::vector<double> a(state.range(0)), b(state.range(0));
  for (size_t i = 0; i < a.size(); ++i) {
    a[i] = normal(rng);
    b[i] = a[i] + normal(rng);
  }
  const GapRanking ra = RankByGap("a", GapKind::kMedian, a);
  const GapRanking rb = RankByGap("b", GapKind::kMedian, b);
  for (auto _ : state) {
    benchmark::DoNotOptimize(GlobalSpearman(ra, rb));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GlobalSpearman)->Arg(50000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace mia_audit
