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

#include "mia_audit/reproducibility.h"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>
#include <random>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "mia_audit/parallel.h"
#include "mia_audit/undefined.h"

namespace mia_audit {
namespace {

// Tolerance for percent arithmetic such as q * N / 100.
constexpr double kPercentSlack = 1e-9;

// C(n, k), saturating at `cap + 1`.
int64_t CappedBinomial(int n, int k, int64_t cap) {
  k = std::min(k, n - k);
  double value = 1.0;
  for (int i = 1; i <= k; ++i) {
    value = value * (n - k + i) / i;
    if (value > static_cast<double>(cap)) return cap + 1;
  }
  return static_cast<int64_t>(std::llround(value));
}

// Uniform integer in [0, bound) from a fully specified engine.
uint64_t UniformBelow(std::mt19937_64& rng, uint64_t bound) {
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

struct SubsetTally {
  double intersection = 0.0;
  double union_size = 0.0;
  double jaccard = 0.0;
  int64_t jaccard_count = 0;
  int64_t subsets = 0;

  void Add(std::span<const SampleSet> sets, std::span<const int> members) {
    SampleSet inter = sets[members[0]];
    SampleSet uni = sets[members[0]];
    SampleSet scratch;
    for (size_t j = 1; j < members.size(); ++j) {
      const SampleSet& next = sets[members[j]];
      scratch.clear();
      std::set_intersection(inter.begin(), inter.end(), next.begin(),
                            next.end(), std::back_inserter(scratch));
      inter.swap(scratch);
      scratch.clear();
      std::set_union(uni.begin(), uni.end(), next.begin(), next.end(),
                     std::back_inserter(scratch));
      uni.swap(scratch);
    }
    intersection += inter.size();
    union_size += uni.size();
    if (!uni.empty()) {
      jaccard += static_cast<double>(inter.size()) / uni.size();
      ++jaccard_count;
    }
    ++subsets;
  }
};

bool IsSortedUnique(const SampleSet& set) {
  return std::adjacent_find(set.begin(), set.end(), std::greater_equal<>()) ==
         set.end();
}

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) {
      ++j;
    }
    const double average = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t t = i; t <= j; ++t) ranks[order[t]] = average;
    i = j + 1;
  }
  return ranks;
}

absl::Status CheckPercent(double q) {
  if (!(q > 0.0 && q <= 100.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("top-q percentage %g must lie in (0,100]", q));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<std::vector<VulnerableSet>> SupportCountsForAlphas(
    const ScoreBundle& bundle, Variant variant, CalibrationSource source,
    std::span<const double> alphas, int threads, EngineOptions options) {
  if (absl::Status s = ValidateBundle(bundle); !s.ok()) return s;
  if (alphas.empty()) {
    return absl::InvalidArgumentError("no alpha values given");
  }
  const int n_models = bundle.n_models;
  const int n_samples = bundle.n_samples;
  LiraEngine engine(bundle, options);

  // flagged[m][k] holds model m's flags at alphas[k].
  std::vector<std::vector<std::vector<uint8_t>>> flagged(n_models);
  std::vector<absl::Status> errors(n_models);
  ParallelFor(n_models, threads, [&](int m) {
    absl::StatusOr<AttackResult> attack = engine.Attack(m, variant);
    if (!attack.ok()) {
      errors[m] = attack.status();
      return;
    }
    std::vector<double> taus(alphas.size());
    if (source == CalibrationSource::kShadow) {
      auto calibrated = ShadowThresholds(engine, m, variant, alphas);
      if (!calibrated.ok()) {
        errors[m] = calibrated.status();
        return;
      }
      for (size_t k = 0; k < alphas.size(); ++k) {
        taus[k] = (*calibrated)[k].tau;
      }
    } else {
      const ScoredSamples scored = NonSkipped(*attack);
      for (size_t k = 0; k < alphas.size(); ++k) {
        auto t = TargetThreshold(scored.scores, scored.is_member, alphas[k]);
        if (!t.ok()) {
          errors[m] = t.status();
          return;
        }
        taus[k] = t->tau;
      }
    }
    flagged[m].assign(alphas.size(), std::vector<uint8_t>(n_samples, 0));
    for (size_t k = 0; k < alphas.size(); ++k) {
      for (int n = 0; n < n_samples; ++n) {
        const double score = attack->scores[n];
        flagged[m][k][n] = !IsUndefined(score) && score > taus[k];
      }
    }
  });
  for (int m = 0; m < n_models; ++m) {
    if (!errors[m].ok()) {
      return absl::Status(errors[m].code(),
                          absl::StrCat("model ", m, ": ", errors[m].message()));
    }
  }

  std::vector<VulnerableSet> out(alphas.size());
  for (size_t k = 0; k < alphas.size(); ++k) {
    VulnerableSet& vset = out[k];
    vset.run_id = bundle.run_id;
    vset.tp_count.assign(n_samples, 0);
    vset.fp_count.assign(n_samples, 0);
    vset.in_models.assign(n_samples, 0);
    vset.out_models.assign(n_samples, 0);
    for (int m = 0; m < n_models; ++m) {
      for (int n = 0; n < n_samples; ++n) {
        const bool member = bundle.is_member(m, n);
        (member ? vset.in_models : vset.out_models)[n] += 1;
        if (flagged[m][k][n]) (member ? vset.tp_count : vset.fp_count)[n] += 1;
      }
    }
    for (int n = 0; n < n_samples; ++n) {
      if (vset.tp_count[n] >= 1) vset.sample_ids.push_back(n);
    }
  }
  return out;
}

absl::StatusOr<VulnerableSet> SupportCounts(const ScoreBundle& bundle,
                                            Variant variant, TauPolicy policy,
                                            int threads,
                                            EngineOptions options) {
  const double alphas[] = {policy.alpha};
  auto out = SupportCountsForAlphas(bundle, variant, policy.source, alphas,
                                    threads, options);
  if (!out.ok()) return out.status();
  return std::move(out->front());
}

absl::StatusOr<SampleSet> FilterSet(const VulnerableSet& vset, int x,
                                    bool require_zero_fp) {
  if (x < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("support threshold x=%d must be >= 1", x));
  }
  if (vset.fp_count.size() != vset.tp_count.size()) {
    return absl::InvalidArgumentError("tp/fp count arrays differ in length");
  }
  SampleSet out;
  for (size_t n = 0; n < vset.tp_count.size(); ++n) {
    if (vset.tp_count[n] >= x && (!require_zero_fp || vset.fp_count[n] == 0)) {
      out.push_back(static_cast<int>(n));
    }
  }
  return out;
}

double Jaccard(const SampleSet& a, const SampleSet& b) {
  if (a.empty() && b.empty()) return kUndefined;
  SampleSet inter;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(inter));
  const size_t union_size = a.size() + b.size() - inter.size();
  return static_cast<double>(inter.size()) / union_size;
}

absl::StatusOr<AgreementStat> KwiseAgreement(std::span<const SampleSet> sets,
                                             int k, KwiseOptions options) {
  const int K = static_cast<int>(sets.size());
  if (k < 2 || k > K) {
    return absl::InvalidArgumentError(
        absl::StrFormat("k=%d outside [2, K=%d]", k, K));
  }
  for (int r = 0; r < K; ++r) {
    if (!IsSortedUnique(sets[r])) {
      return absl::InvalidArgumentError(
          absl::StrFormat("set %d is not sorted and duplicate-free", r));
    }
  }
  if (options.enumeration_cap < 1) {
    return absl::InvalidArgumentError("enumeration_cap must be positive");
  }
  SubsetTally tally;
  AgreementStat stat;
  stat.k = k;
  const int64_t total = CappedBinomial(K, k, options.enumeration_cap);
  std::vector<int> members(k);
  if (total <= options.enumeration_cap) {
    std::iota(members.begin(), members.end(), 0);
    while (true) {
      tally.Add(sets, members);
      int i = k - 1;
      while (i >= 0 && members[i] == K - k + i) --i;
      if (i < 0) break;
      ++members[i];
      for (int j = i + 1; j < k; ++j) members[j] = members[j - 1] + 1;
    }
    stat.exhaustive = true;
  } else {
    std::mt19937_64 rng(options.seed);
    std::vector<int> pool(K);
    for (int64_t s = 0; s < options.enumeration_cap; ++s) {
      std::iota(pool.begin(), pool.end(), 0);
      for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(UniformBelow(rng, K - i));
        std::swap(pool[i], pool[j]);
      }
      std::copy(pool.begin(), pool.begin() + k, members.begin());
      std::sort(members.begin(), members.end());
      tally.Add(sets, members);
    }
    stat.exhaustive = false;
  }
  stat.subsets_evaluated = tally.subsets;
  stat.mean_intersection = tally.intersection / tally.subsets;
  stat.mean_union = tally.union_size / tally.subsets;
  stat.mean_jaccard = tally.jaccard_count > 0
                          ? tally.jaccard / tally.jaccard_count
                          : kUndefined;
  return stat;
}

absl::StatusOr<GapKind> ParseGapKind(std::string_view name) {
  if (name == "median") return GapKind::kMedian;
  if (name == "mean") return GapKind::kMean;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown gap kind '", std::string(name), "' (expected median or mean)"));
}

std::string GapKindName(GapKind kind) {
  return kind == GapKind::kMedian ? "median" : "mean";
}

GapRanking RankByGap(std::string run_id, GapKind kind,
                     std::vector<double> gap) {
  GapRanking ranking;
  ranking.run_id = std::move(run_id);
  ranking.kind = kind;
  ranking.gap = std::move(gap);
  const std::vector<double>& g = ranking.gap;
  ranking.order.resize(g.size());
  std::iota(ranking.order.begin(), ranking.order.end(), 0);
  std::sort(ranking.order.begin(), ranking.order.end(), [&](int a, int b) {
    const bool ua = IsUndefined(g[a]), ub = IsUndefined(g[b]);
    if (ua != ub) return ub;
    if (!ua && g[a] != g[b]) return g[a] > g[b];
    return a < b;
  });
  ranking.rank.resize(g.size());
  for (size_t i = 0; i < ranking.order.size(); ++i) {
    ranking.rank[ranking.order[i]] = static_cast<int>(i) + 1;
  }
  return ranking;
}

double GapFromLogRatios(std::span<const double> in, std::span<const double> out,
                        GapKind kind) {
  if (in.empty() || out.empty()) return kUndefined;
  auto statistic = [kind](std::span<const double> v) {
    if (kind == GapKind::kMedian) {
      return Median(std::vector<double>(v.begin(), v.end()));
    }
    return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  };
  return statistic(in) - statistic(out);
}

absl::StatusOr<GapRanking> ComputeGapRanking(const ScoreBundle& bundle,
                                             GapKind kind, Variant variant,
                                             int threads,
                                             EngineOptions options) {
  if (absl::Status s = ValidateBundle(bundle); !s.ok()) return s;
  LiraEngine engine(bundle, options);
  std::vector<std::vector<double>> scores(bundle.n_models);
  std::vector<absl::Status> errors(bundle.n_models);
  ParallelFor(bundle.n_models, threads, [&](int m) {
    absl::StatusOr<AttackResult> attack = engine.Attack(m, variant);
    if (!attack.ok()) {
      errors[m] = attack.status();
      return;
    }
    scores[m] = std::move(attack->scores);
  });
  for (const absl::Status& s : errors) {
    if (!s.ok()) return s;
  }
  std::vector<double> gap(bundle.n_samples);
  std::vector<double> in, out;
  for (int n = 0; n < bundle.n_samples; ++n) {
    in.clear();
    out.clear();
    for (int m = 0; m < bundle.n_models; ++m) {
      const double score = scores[m][n];
      if (IsUndefined(score)) continue;
      (bundle.is_member(m, n) ? in : out).push_back(score);
    }
    gap[n] = GapFromLogRatios(in, out, kind);
  }
  return RankByGap(bundle.run_id, kind, std::move(gap));
}

int TopQCount(int n_samples, double q) {
  return static_cast<int>(std::floor(q * n_samples / 100.0 + kPercentSlack));
}

absl::StatusOr<SampleSet> TopQ(const GapRanking& ranking, double q) {
  if (absl::Status s = CheckPercent(q); !s.ok()) return s;
  const int count = std::min(TopQCount(ranking.n_samples(), q),
                             static_cast<int>(ranking.order.size()));
  SampleSet out(ranking.order.begin(), ranking.order.begin() + count);
  std::sort(out.begin(), out.end());
  return out;
}

double SpearmanCorrelation(std::span<const double> x,
                           std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return kUndefined;
  const std::vector<double> rx = AverageRanks(x);
  const std::vector<double> ry = AverageRanks(y);
  const double n = static_cast<double>(rx.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return kUndefined;
  return sxy / std::sqrt(sxx * syy);
}

double TailSpearman(const GapRanking& r, const GapRanking& s, double q) {
  if (r.n_samples() != s.n_samples()) return kUndefined;
  absl::StatusOr<SampleSet> top_r = TopQ(r, q);
  absl::StatusOr<SampleSet> top_s = TopQ(s, q);
  if (!top_r.ok() || !top_s.ok()) return kUndefined;
  SampleSet inter;
  std::set_intersection(top_r->begin(), top_r->end(), top_s->begin(),
                        top_s->end(), std::back_inserter(inter));
  std::vector<double> x, y;
  for (int n : inter) {
    if (IsUndefined(r.gap[n]) || IsUndefined(s.gap[n])) continue;
    x.push_back(r.gap[n]);
    y.push_back(s.gap[n]);
  }
  return SpearmanCorrelation(x, y);
}

double GlobalSpearman(const GapRanking& r, const GapRanking& s) {
  if (r.n_samples() != s.n_samples()) return kUndefined;
  std::vector<double> x, y;
  for (int n = 0; n < r.n_samples(); ++n) {
    if (IsUndefined(r.gap[n]) || IsUndefined(s.gap[n])) continue;
    x.push_back(r.gap[n]);
    y.push_back(s.gap[n]);
  }
  return SpearmanCorrelation(x, y);
}

double AllRunsTailSpearman(std::span<const GapRanking> runs, double q) {
  if (runs.size() < 2) return kUndefined;
  SampleSet common;
  for (size_t r = 0; r < runs.size(); ++r) {
    if (runs[r].n_samples() != runs[0].n_samples()) return kUndefined;
    absl::StatusOr<SampleSet> top = TopQ(runs[r], q);
    if (!top.ok()) return kUndefined;
    if (r == 0) {
      common = *std::move(top);
      continue;
    }
    SampleSet scratch;
    std::set_intersection(common.begin(), common.end(), top->begin(),
                          top->end(), std::back_inserter(scratch));
    common.swap(scratch);
  }
  double sum = 0.0;
  int defined = 0;
  for (size_t r = 0; r < runs.size(); ++r) {
    for (size_t s = r + 1; s < runs.size(); ++s) {
      std::vector<double> x, y;
      for (int n : common) {
        if (IsUndefined(runs[r].gap[n]) || IsUndefined(runs[s].gap[n])) {
          continue;
        }
        x.push_back(runs[r].gap[n]);
        y.push_back(runs[s].gap[n]);
      }
      const double rho = SpearmanCorrelation(x, y);
      if (IsUndefined(rho)) continue;
      sum += rho;
      ++defined;
    }
  }
  return defined > 0 ? sum / defined : kUndefined;
}

absl::StatusOr<std::vector<std::optional<std::vector<double>>>>
RankDisplacement(std::span<const GapRanking> runs, double q,
                 std::span<const double> deltas) {
  if (runs.empty()) return absl::InvalidArgumentError("no runs given");
  if (absl::Status s = CheckPercent(q); !s.ok()) return s;
  for (double delta : deltas) {
    if (delta < 0.0 || q + delta > 100.0 + kPercentSlack) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "delta %g invalid for q=%g (need 0 <= delta, q + delta <= 100)",
          delta, q));
    }
  }
  const int n_samples = runs.front().n_samples();
  std::vector<SampleSet> tops;
  for (const GapRanking& run : runs) {
    if (run.n_samples() != n_samples) {
      return absl::InvalidArgumentError(
          absl::StrCat("run '", run.run_id, "' has a different sample count"));
    }
    absl::StatusOr<SampleSet> top = TopQ(run, q);
    if (!top.ok()) return top.status();
    tops.push_back(*std::move(top));
  }
  std::set<int> any_top;
  for (const SampleSet& top : tops) any_top.insert(top.begin(), top.end());

  std::vector<std::optional<std::vector<double>>> out;
  for (size_t r = 0; r < runs.size(); ++r) {
    std::vector<int> displaced;
    std::set_difference(any_top.begin(), any_top.end(), tops[r].begin(),
                        tops[r].end(), std::back_inserter(displaced));
    if (displaced.empty()) {
      out.emplace_back(std::nullopt);
      continue;
    }
    std::vector<double> fractions;
    for (double delta : deltas) {
      int within = 0;
      for (int n : displaced) {
        const double percentile = 100.0 * runs[r].rank[n] / n_samples;
        if (percentile <= q + delta + kPercentSlack) ++within;
      }
      fractions.push_back(static_cast<double>(within) / displaced.size());
    }
    out.emplace_back(std::move(fractions));
  }
  return out;
}

}  // namespace mia_audit
