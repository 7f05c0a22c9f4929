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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "mia_audit/calibration.h"
#include "mia_audit/lira_engine.h"
#include "mia_audit/metrics.h"
#include "mia_audit/reproducibility.h"
#include "mia_audit/synth.h"
#include "mia_audit/undefined.h"
#include "mia_audit_cli/commands.h"
#include "test_util.h"

namespace mia_audit {
namespace {

using ::mia_audit::testing::NearlyEqual;
using ::mia_audit::testing::RandomToyBundle;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

constexpr Variant kOnline{AttackKind::kOnline, VarianceMode::kPerSample};
constexpr Variant kGlobal{AttackKind::kGlobal, VarianceMode::kPerSample};

// Every variant on 24 random toy bundles against the brute-force oracle.
Outcome OracleEquivalence() {
  Outcome o;
  std::mt19937_64 rng(2026);
  int bundles = 0, attacks = 0;
  double worst = 0.0;
  for (int t = 0; t < 24; ++t) {
    const int n = 4 + rng() % 61;
    const int m = 3 + rng() % 6;
    const int a = 1 + rng() % 3;
    const ScoreBundle b = RandomToyBundle(rng(), n, m, a, t % 2 == 0);
    const LiraEngine engine(b);
    ++bundles;
    for (Variant v : kAllVariants) {
      for (int target = 0; target < m; ++target) {
        absl::StatusOr<AttackResult> got = engine.Attack(target, v);
        absl::StatusOr<AttackResult> want = BruteOracle(b, target, v);
        o.Require(got.ok() == want.ok(), "status mismatch");
        if (!got.ok() || !want.ok()) continue;
        ++attacks;
        for (int x = 0; x < n; ++x) {
          const double g = got->scores[x], w = want->scores[x];
          o.Require(
              NearlyEqual(g, w, 1e-9),
              absl::StrFormat("bundle %d %s target %d sample %d: %g vs %g", t,
                              VariantName(v), target, x, g, w));
          if (std::isfinite(g) && std::isfinite(w)) {
            worst =
                std::max(worst, std::abs(g - w) /
                                    std::max({1.0, std::abs(g), std::abs(w)}));
          }
        }
      }
    }
  }
  if (o.pass) {
    o.detail = absl::StrFormat("%d bundles, %d attacks, max rel err %.2g",
                               bundles, attacks, worst);
  }
  return o;
}

// Binomial std of a rate estimated from n_pos members at a threshold set on
// n_neg non-members.
double BinomialStd(double rate, int n_pos, int n_neg) {
  return std::sqrt(rate * (1.0 - rate) * (1.0 / n_pos + 1.0 / n_neg));
}

Outcome NullCalibration() {
  Outcome o;
  SynthSpec spec;
  spec.n_samples = 20000;
  spec.n_models = 16;
  spec.separation = 0.0;
  spec.seed = 17;
  const ScoreBundle b = *GenerateBundle(spec);
  const LiraEngine engine(b);
  const double alphas[] = {1e-3, 1e-2};
  std::vector<double> aucs;
  std::vector<std::vector<double>> tprs(2);
  int n_pos = 0, n_neg = 0;
  for (int target = 0; target < b.n_models; ++target) {
    const ScoredSamples s = NonSkipped(*engine.Attack(target, kOnline));
    const RocCurve curve = *ComputeRocCurve(s.scores, s.is_member);
    const double auc = Auc(curve);
    aucs.push_back(auc);
    o.Require(std::abs(auc - 0.5) <= 0.02,
              absl::StrFormat("target %d AUC %.4f", target, auc));
    n_pos = std::count(s.is_member.begin(), s.is_member.end(), 1);
    n_neg = s.is_member.size() - n_pos;
    for (int k = 0; k < 2; ++k) {
      tprs[k].push_back(TprAtFpr(curve, alphas[k], TprInterpolation::kStep));
    }
  }
  std::string detail = absl::StrFormat("mean AUC %.4f", Aggregate(aucs)->mean);
  for (int k = 0; k < 2; ++k) {
    const double mean = Aggregate(tprs[k])->mean;
    const double bound = 3.0 * BinomialStd(alphas[k], n_pos, n_neg);
    o.Require(std::abs(mean - alphas[k]) <= bound,
              absl::StrFormat("TPR@%g = %.5f outside %g +- %.5f", alphas[k],
                              mean, alphas[k], bound));
    absl::StrAppendFormat(&detail, ", TPR@%g %.5f (+-%.5f)", alphas[k], mean,
                          bound);
  }
  if (o.pass) o.detail = detail;
  return o;
}

// The global score of a homogeneous bundle is a draw from N(0,1) or N(2,1).
Outcome AnalyticRocMatch() {
  Outcome o;
  SynthSpec spec;
  spec.n_samples = 100000;
  spec.n_models = 2;
  spec.separation = 2.0;
  spec.sigma = 1.0;
  spec.mu_out_std = 0.0;
  spec.seed = 23;
  const ScoreBundle b = *GenerateBundle(spec);
  const AnalyticRoc roc = *MakeAnalyticRoc(2.0, 1.0);
  const LiraEngine engine(b);
  const std::vector<double> alphas = {1e-3, 3e-3, 1e-2, 3e-2,
                                      0.1,  0.2,  0.3,  0.5};
  double worst_z = 0.0;
  for (int target = 0; target < b.n_models; ++target) {
    const ScoredSamples s = NonSkipped(*engine.Attack(target, kGlobal));
    const int n_pos = std::count(s.is_member.begin(), s.is_member.end(), 1);
    const int n_neg = s.is_member.size() - n_pos;
    for (double alpha : alphas) {
      const double tau = TargetThreshold(s.scores, s.is_member, alpha)->tau;
      const AchievedRates r = *ComputeAchievedRates(s.scores, s.is_member, tau);
      const double want = roc(r.fpr);
      // TPR noise plus FPR noise carried through the ROC slope.
      // The ROC slope is the likelihood ratio at tau: exp(d tau - d^2 / 2).
      const double slope = std::exp(2.0 * tau - 2.0);
      const double sd =
          std::sqrt(want * (1.0 - want) / n_pos +
                    slope * slope * r.fpr * (1.0 - r.fpr) / n_neg);
      const double z = std::abs(r.tpr - want) / sd;
      worst_z = std::max(worst_z, z);
      o.Require(z <= 3.0,
                absl::StrFormat("target %d alpha %g: TPR %.5f vs analytic %.5f",
                                target, alpha, r.tpr, want));
    }
  }
  if (o.pass) {
    o.detail = absl::StrFormat("%d alphas x 2 targets, worst |z| %.2f",
                               alphas.size(), worst_z);
  }
  return o;
}

// A target is separable when every member outscores every non-member.
bool Separable(const ScoredSamples& s) {
  double min_in = INFINITY, max_out = -INFINITY;
  for (size_t i = 0; i < s.scores.size(); ++i) {
    if (s.is_member[i]) {
      min_in = std::min(min_in, s.scores[i]);
    } else {
      max_out = std::max(max_out, s.scores[i]);
    }
  }
  return min_in > max_out;
}

Outcome PpvIdentities() {
  Outcome o;
  const double priors[] = {0.01, 0.1, 0.5};
  cli::AttackOptions options;
  options.alphas = {1e-5};
  options.priors = {std::begin(priors), std::end(priors)};
  options.calibration = CalibrationSource::kTarget;

  // Separable bundles: PPV is exactly 1 at every prior.
  std::vector<ScoreBundle> separable;
  ScoreBundle toy = RandomToyBundle(5, 64, 8, 2, true);
  for (size_t i = 0; i < toy.confidences.size(); ++i) {
    toy.confidences[i] = toy.membership[i / toy.n_augmentations] ? 0.9f : 0.2f;
  }
  separable.push_back(toy);
  for (uint64_t seed : {1, 2, 3}) {
    SynthSpec spec;
    spec.n_samples = 2000;
    spec.n_models = 8;
    spec.separation = 12.0;
    spec.mu_out_std = 0.0;
    spec.seed = seed;
    spec.run_id = absl::StrCat("separable-", seed);
    separable.push_back(*GenerateBundle(spec));
  }
  int checked = 0, separable_targets = 0, total_targets = 0;
  for (const ScoreBundle& b : separable) {
    const LiraEngine engine(b);
    for (Variant v : {kOnline, kGlobal}) {
      const absl::StatusOr<std::vector<cli::TargetMetrics>> targets =
          cli::EvaluateTargets(b, v, options);
      o.Require(targets.ok(), std::string(targets.status().message()));
      if (!targets.ok()) return o;
      for (const cli::TargetMetrics& t : *targets) {
        const bool sep = Separable(NonSkipped(*engine.Attack(t.target, v)));
        // The bundles are built so the global score always separates.
        if (v.kind == AttackKind::kGlobal) {
          o.Require(sep, absl::StrFormat("bundle %s target %d not separable",
                                         b.run_id, t.target));
        }
        ++total_targets;
        if (!sep) continue;
        ++separable_targets;
        o.Require(t.fpr_prime[0] == 0.0 && t.tpr_prime[0] == 1.0,
                  absl::StrFormat("target %d: TPR' %g FPR' %g", t.target,
                                  t.tpr_prime[0], t.fpr_prime[0]));
        for (int p = 0; p < 3; ++p) {
          o.Require(t.ppv[0][p] == 1.0,
                    absl::StrFormat("target %d PPV %g", t.target, t.ppv[0][p]));
          ++checked;
        }
      }
    }
  }

  // On the baseline-like preset FPR' is still 0; PPV is 1 wherever a member
  // clears the threshold and undefined otherwise.
  const ScoreBundle b = *GenerateBundle(*ScenarioPreset("baseline-like"));
  const absl::StatusOr<std::vector<cli::TargetMetrics>> targets =
      cli::EvaluateTargets(b, kOnline, options);
  o.Require(targets.ok(), std::string(targets.status().message()));
  if (!targets.ok()) return o;
  int undefined = 0;
  for (const cli::TargetMetrics& t : *targets) {
    o.Require(t.fpr_prime[0] == 0.0, absl::StrFormat("preset target %d FPR' %g",
                                                     t.target, t.fpr_prime[0]));
    for (int p = 0; p < 3; ++p) {
      if (t.tpr_prime[0] > 0.0) {
        o.Require(t.ppv[0][p] == 1.0, "preset PPV != 1");
      } else {
        o.Require(IsUndefined(t.ppv[0][p]), "PPV defined with TPR' = 0");
      }
    }
    undefined += t.tpr_prime[0] > 0.0 ? 0 : 1;
  }

  double worst = 0.0;
  for (double rate = 1e-6; rate <= 1.0; rate *= 1.7) {
    for (double prior : {0.001, 0.01, 0.1, 0.5, 0.9}) {
      worst = std::max(worst, std::abs(Ppv(rate, rate, prior) - prior));
    }
  }
  o.Require(worst <= 1e-12, absl::StrFormat("ppv(t,t,pi) off by %g", worst));
  if (o.pass) {
    o.detail = absl::StrFormat(
        "%d PPV cells equal 1.0 on %d/%d separable targets; preset FPR' 0 "
        "on 16 targets (%d with TPR' 0); max |ppv(t,t,pi)-pi| %.1g",
        checked, separable_targets, total_targets, undefined, worst);
  }
  return o;
}

Outcome LossRatioArithmetic() {
  Outcome o;
  struct Row {
    double train, test, published;
  };
  const Row rows[] = {{0.0032, 0.2272, 71.0}, {0.1351, 0.2535, 1.88},
                      {0.1210, 0.1647, 1.36}, {0.1198, 1.2172, 10.16},
                      {0.8007, 1.2037, 1.50}, {0.3373, 0.6214, 1.84},
                      {0.0448, 0.0614, 1.37}, {0.3145, 0.3175, 1.01},
                      {0.1096, 0.1861, 1.70}, {0.2266, 0.2763, 1.22}};
  double worst = 0.0;
  for (const Row& r : rows) {
    const double ratio = *LossRatio(r.train, r.test);
    worst = std::max(worst, std::abs(ratio - r.published));
    o.Require(std::abs(ratio - r.published) <= 0.05,
              absl::StrFormat("%g/%g = %.4f vs %g", r.test, r.train, ratio,
                              r.published));
  }
  if (o.pass) o.detail = absl::StrFormat("10 ratios, max error %.4f", worst);
  return o;
}

Outcome DirectionalEffect() {
  Outcome o;
  std::vector<double> tpr;
  std::map<std::string, std::pair<double, double>> ppv;
  for (const std::string& name : ScenarioNames()) {
    const ScoreBundle b = *GenerateBundle(*ScenarioPreset(name));
    cli::AttackOptions options;
    options.alphas = {1e-3};
    options.priors = {0.01};
    options.threads = 0;
    options.calibration = CalibrationSource::kTarget;
    const cli::ReportTable table = *cli::RunAttack(b, options);
    tpr.push_back(table.Mean("online", cli::TprAtFprMetric(1e-3)));
    if (name == "baseline-like" || name == "tl-like") {
      cli::AttackOptions shadow = options;
      shadow.alphas = {1e-5};
      shadow.calibration = CalibrationSource::kShadow;
      const cli::ReportTable t = *cli::RunAttack(b, shadow);
      for (const cli::ReportRow& row : t.rows()) {
        if (row.metric == cli::PpvMetric(1e-5, 0.01)) {
          ppv[name] = {row.mean, row.std};
        }
      }
    }
  }
  o.Require(tpr[0] > tpr[1] && tpr[1] > tpr[2],
            absl::StrFormat("TPR@0.1%% not strictly decreasing: %g %g %g",
                            tpr[0], tpr[1], tpr[2]));
  const auto [base_mean, base_std] = ppv["baseline-like"];
  const auto [tl_mean, tl_std] = ppv["tl-like"];
  o.Require(
      tl_mean < base_mean,
      absl::StrFormat("PPV mean tl %g >= baseline %g", tl_mean, base_mean));
  o.Require(tl_std > base_std,
            absl::StrFormat("PPV std tl %g <= baseline %g", tl_std, base_std));
  if (o.pass) {
    o.detail = absl::StrFormat(
        "TPR@0.1%% %.4f > %.4f > %.4f; PPV@pi=1%% %.3f+-%.3f vs %.3f+-%.3f",
        tpr[0], tpr[1], tpr[2], base_mean, base_std, tl_mean, tl_std);
  }
  return o;
}

Outcome ReproducibilityShape() {
  Outcome o;
  std::vector<ScoreBundle> bundles;
  for (int seed = 1; seed <= 6; ++seed) {
    SynthSpec spec = *ScenarioPreset("aof-like");
    spec.seed = seed;
    spec.run_id = absl::StrCat("aof-seed", seed);
    bundles.push_back(*GenerateBundle(spec));
  }
  cli::ReproOptions options;
  options.alphas = {1e-5, 1e-3};
  options.support_x = 1;
  options.zero_fp = true;
  options.calibration = CalibrationSource::kShadow;
  options.top_q = {1.0};
  options.threads = 0;
  const cli::ReportTable table =
      *cli::RunRepro(*MakeRunSet(std::move(bundles)), options);
  const std::string v = VariantName(options.variant);
  for (const char* a : {"1e-05", "0.001"}) {
    for (int k = 3; k <= 6; ++k) {
      const double i0 =
          table.Mean(v, absl::StrCat("kwise_intersection@", a, "/k=", k - 1));
      const double i1 =
          table.Mean(v, absl::StrCat("kwise_intersection@", a, "/k=", k));
      const double u0 =
          table.Mean(v, absl::StrCat("kwise_union@", a, "/k=", k - 1));
      const double u1 =
          table.Mean(v, absl::StrCat("kwise_union@", a, "/k=", k));
      o.Require(i1 <= i0, absl::StrFormat("alpha %s: intersection rises at "
                                          "k=%d (%g > %g)",
                                          a, k, i1, i0));
      o.Require(u1 >= u0,
                absl::StrFormat("alpha %s: union falls at k=%d", a, k));
    }
  }
  const double j5 = table.Mean(v, "pairwise_jaccard@1e-05");
  const double j3 = table.Mean(v, "pairwise_jaccard@0.001");
  const double rho = table.Mean(v, "global_spearman/median");
  o.Require(j5 < j3,
            absl::StrFormat("Jaccard %g at 1e-5 vs %g at 1e-3", j5, j3));
  o.Require(rho > j5, absl::StrFormat("Spearman %g vs Jaccard %g", rho, j5));
  if (o.pass) {
    o.detail = absl::StrFormat(
        "Jaccard %.4f (1e-5) < %.4f (1e-3); Spearman %.4f", j5, j3, rho);
  }
  return o;
}

// Hand oracles on small K x N universes.
SampleSet RandomSet(std::mt19937_64& rng, int n) {
  SampleSet s;
  for (int i = 0; i < n; ++i) {
    if (rng() % 3 == 0) s.push_back(i);
  }
  return s;
}

std::vector<int> BruteOrder(const std::vector<double>& g) {
  std::vector<int> ids(g.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::stable_sort(ids.begin(), ids.end(),
                   [&](int a, int b) { return g[a] > g[b]; });
  return ids;
}

double BruteSpearman(const std::vector<double>& x,
                     const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
      double less = 0, equal = 0;
      for (double w : v) {
        less += w < v[i];
        equal += w == v[i];
      }
      r[i] = less + (equal + 1.0) / 2.0;
    }
    return r;
  };
  if (x.size() < 2) return kUndefined;
  const std::vector<double> rx = ranks(x), ry = ranks(y);
  const double mean = (rx.size() + 1.0) / 2.0;
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0 || syy == 0) return kUndefined;
  return sxy / std::sqrt(sxx * syy);
}

Outcome SetRankingAlgebra() {
  Outcome o;
  std::mt19937_64 rng(77);
  int cases = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 4 + rng() % 17;
    const int k_runs = 2 + rng() % 3;
    std::vector<SampleSet> sets;
    for (int r = 0; r < k_runs; ++r) sets.push_back(RandomSet(rng, n));

    // Jaccard by bit counting.
    for (int r = 1; r < k_runs; ++r) {
      std::set<int> u(sets[0].begin(), sets[0].end());
      int inter = 0;
      for (int x : sets[r]) inter += !u.insert(x).second;
      const double want =
          u.empty() ? kUndefined : static_cast<double>(inter) / u.size();
      o.Require(NearlyEqual(Jaccard(sets[0], sets[r]), want, 0.0),
                "jaccard mismatch");
    }

    // k-wise agreement over every k-subset by bitmask.
    for (int k = 2; k <= k_runs; ++k) {
      double inter = 0, uni = 0, jac = 0;
      int count = 0, jcount = 0;
      for (int mask = 0; mask < (1 << k_runs); ++mask) {
        if (__builtin_popcount(mask) != k) continue;
        std::map<int, int> hits;
        for (int r = 0; r < k_runs; ++r) {
          if (mask >> r & 1) {
            for (int x : sets[r]) ++hits[x];
          }
        }
        int i = 0;
        for (auto [x, h] : hits) i += h == k;
        inter += i;
        uni += hits.size();
        if (!hits.empty()) {
          jac += static_cast<double>(i) / hits.size();
          ++jcount;
        }
        ++count;
      }
      const AgreementStat got = *KwiseAgreement(sets, k);
      o.Require(NearlyEqual(got.mean_intersection, inter / count, 1e-15) &&
                    NearlyEqual(got.mean_union, uni / count, 1e-15) &&
                    NearlyEqual(got.mean_jaccard,
                                jcount ? jac / jcount : kUndefined, 1e-15) &&
                    got.subsets_evaluated == count,
                "kwise mismatch");
    }

    // Rankings with ties.
    std::vector<std::vector<double>> gaps(k_runs, std::vector<double>(n));
    std::vector<GapRanking> runs;
    for (int r = 0; r < k_runs; ++r) {
      for (double& g : gaps[r]) g = static_cast<double>(rng() % 6);
      runs.push_back(RankByGap("r", GapKind::kMedian, gaps[r]));
    }
    const double q = 10.0 * (1 + rng() % 5);
    const int count = TopQCount(n, q);
    o.Require(count == static_cast<int>(std::floor(q * n / 100.0 + 1e-9)),
              "top-q count");
    std::vector<std::set<int>> tops;
    for (int r = 0; r < k_runs; ++r) {
      const std::vector<int> order = BruteOrder(gaps[r]);
      tops.emplace_back(order.begin(), order.begin() + count);
      const SampleSet got = *TopQ(runs[r], q);
      o.Require(std::set<int>(got.begin(), got.end()) == tops[r],
                "top_q mismatch");
    }

    // Tail Spearman on the common top-q set.
    std::vector<double> x, y;
    for (int i : tops[0]) {
      if (tops[1].count(i)) {
        x.push_back(gaps[0][i]);
        y.push_back(gaps[1][i]);
      }
    }
    o.Require(NearlyEqual(TailSpearman(runs[0], runs[1], q),
                          BruteSpearman(x, y), 1e-15),
              absl::StrFormat("tail_spearman mismatch at trial %d", trial));

    // Displacement: fraction of other runs' top-q samples within q + delta.
    const double deltas[] = {0.0, 5.0, 20.0, 100.0 - q};
    const auto displacement = RankDisplacement(runs, q, deltas);
    o.Require(displacement.ok(), std::string(displacement.status().message()));
    if (!displacement.ok()) return o;
    const auto& got = *displacement;
    for (int r = 0; r < k_runs; ++r) {
      const std::vector<int> order = BruteOrder(gaps[r]);
      std::vector<int> position(n);
      for (int p = 0; p < n; ++p) position[order[p]] = p + 1;
      std::set<int> displaced;
      for (int s = 0; s < k_runs; ++s) {
        for (int i : tops[s]) {
          if (!tops[r].count(i)) displaced.insert(i);
        }
      }
      if (displaced.empty()) {
        o.Require(!got[r].has_value(), "displacement should be vacuous");
        continue;
      }
      o.Require(got[r].has_value(), "displacement missing");
      if (!got[r].has_value()) continue;
      for (int d = 0; d < 4; ++d) {
        int within = 0;
        for (int i : displaced) {
          within += 100.0 * position[i] / n <= q + deltas[d] + 1e-9;
        }
        o.Require(
            (*got[r])[d] == static_cast<double>(within) / displaced.size(),
            "rank_displacement mismatch");
      }
      o.Require((*got[r])[3] == 1.0, "delta = 100 - q must give 1");
    }
    ++cases;
  }
  if (o.pass) o.detail = absl::StrFormat("%d random toy cases", cases);
  return o;
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
  double budget_seconds;
};

int Main() {
  const Criterion criteria[] = {
      {"oracle-equivalence", OracleEquivalence, 60.0},
      {"null-calibration", NullCalibration, 120.0},
      {"analytic-roc", AnalyticRocMatch, 0.0},
      {"ppv-identities", PpvIdentities, 0.0},
      {"loss-ratio-arithmetic", LossRatioArithmetic, 0.0},
      {"directional-aof-tl", DirectionalEffect, 0.0},
      {"reproducibility-shape", ReproducibilityShape, 0.0},
      {"set-ranking-algebra", SetRankingAlgebra, 0.0},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome = c.run();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (c.budget_seconds > 0 && seconds > c.budget_seconds) {
      outcome.Require(false, absl::StrFormat("took %.1fs, budget %.0fs",
                                             seconds, c.budget_seconds));
    }
    failures += outcome.pass ? 0 : 1;
    std::printf("%s %s: %s [%.2fs]\n", outcome.pass ? "PASS" : "FAIL", c.name,
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace mia_audit

int main() { return mia_audit::Main(); }
