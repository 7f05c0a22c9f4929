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

#include "mia_audit_cli/commands.h"

#include <algorithm>
#include <cmath>
#include <optional>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "mia_audit/parallel.h"
#include "mia_audit/undefined.h"

namespace mia_audit::cli {
namespace {

// Label for rows that do not depend on an attack variant.
constexpr char kNoVariant[] = "-";

std::string Num(double value) { return absl::StrFormat("%g", value); }

absl::Status WithTarget(int target, const absl::Status& status) {
  return absl::Status(status.code(), absl::StrCat("target model ", target, ": ",
                                                  status.message()));
}

absl::StatusOr<TargetMetrics> EvaluateTarget(const LiraEngine& engine,
                                             int target, Variant variant,
                                             const AttackOptions& options) {
  absl::StatusOr<AttackResult> attack = engine.Attack(target, variant);
  if (!attack.ok()) return attack.status();
  const ScoredSamples scored = NonSkipped(*attack);
  absl::StatusOr<RocCurve> roc =
      ComputeRocCurve(scored.scores, scored.is_member);
  if (!roc.ok()) return roc.status();

  std::vector<double> taus;
  if (options.calibration == CalibrationSource::kShadow) {
    auto calibrated = ShadowThresholds(engine, target, variant, options.alphas);
    if (!calibrated.ok()) return calibrated.status();
    for (const CalibratedThreshold& t : *calibrated) taus.push_back(t.tau);
  } else {
    for (double alpha : options.alphas) {
      auto t = TargetThreshold(scored.scores, scored.is_member, alpha);
      if (!t.ok()) return t.status();
      taus.push_back(t->tau);
    }
  }

  TargetMetrics out;
  out.target = target;
  out.skipped = static_cast<int>(attack->skipped.size());
  out.auc = Auc(*roc);
  for (size_t k = 0; k < options.alphas.size(); ++k) {
    out.tpr_at_fpr.push_back(
        TprAtFpr(*roc, options.alphas[k], options.interpolation));
    out.tau.push_back(taus[k]);
    absl::StatusOr<AchievedRates> rates =
        ComputeAchievedRates(scored.scores, scored.is_member, taus[k]);
    if (!rates.ok()) return rates.status();
    out.tpr_prime.push_back(rates->tpr);
    out.fpr_prime.push_back(rates->fpr);
    std::vector<double> ppv;
    for (double prior : options.priors) {
      ppv.push_back(Ppv(rates->tpr, rates->fpr, prior));
    }
    out.ppv.push_back(std::move(ppv));
  }
  return out;
}

absl::Status CheckFractions(const std::vector<double>& values,
                            std::string_view what) {
  if (values.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("no ", std::string(what), " values given"));
  }
  for (double v : values) {
    if (!(v > 0.0 && v < 1.0)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "%s value %g must lie in (0,1)", std::string(what), v));
    }
  }
  return absl::OkStatus();
}

// Values of `f` over all unordered pairs of [0, n).
template <typename F>
std::vector<double> OverPairs(int n, F f) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) out.push_back(f(i, j));
  }
  return out;
}

}  // namespace

std::string TprAtFprMetric(double alpha) {
  return absl::StrCat("tpr_at_fpr@", Num(alpha));
}
std::string TauMetric(double alpha) { return absl::StrCat("tau@", Num(alpha)); }
std::string TprPrimeMetric(double alpha) {
  return absl::StrCat("tpr_prime@", Num(alpha));
}
std::string FprPrimeMetric(double alpha) {
  return absl::StrCat("fpr_prime@", Num(alpha));
}
std::string PpvMetric(double alpha, double prior) {
  return absl::StrCat("ppv@", Num(alpha), "/pi=", Num(prior));
}

absl::StatusOr<std::vector<TargetMetrics>> EvaluateTargets(
    const ScoreBundle& bundle, Variant variant, const AttackOptions& options) {
  if (absl::Status s = ValidateBundle(bundle); !s.ok()) return s;
  if (absl::Status s = CheckFractions(options.alphas, "alpha"); !s.ok()) {
    return s;
  }
  if (absl::Status s = CheckFractions(options.priors, "prior"); !s.ok()) {
    return s;
  }
  const LiraEngine engine(bundle, options.engine);
  std::vector<std::optional<TargetMetrics>> results(bundle.n_models);
  std::vector<absl::Status> errors(bundle.n_models);
  ParallelFor(bundle.n_models, options.threads, [&](int m) {
    absl::StatusOr<TargetMetrics> metrics =
        EvaluateTarget(engine, m, variant, options);
    if (metrics.ok()) {
      results[m] = *std::move(metrics);
    } else {
      errors[m] = metrics.status();
    }
  });
  std::vector<TargetMetrics> out;
  for (int m = 0; m < bundle.n_models; ++m) {
    if (!errors[m].ok()) return WithTarget(m, errors[m]);
    out.push_back(*std::move(results[m]));
  }
  return out;
}

absl::StatusOr<ReportTable> RunAttack(const ScoreBundle& bundle,
                                      const AttackOptions& options) {
  if (options.variants.empty()) {
    return absl::InvalidArgumentError("no attack variant given");
  }
  const std::string benchmark =
      options.benchmark.empty() ? bundle.run_id : options.benchmark;
  ReportTable table;
  for (Variant variant : options.variants) {
    absl::StatusOr<std::vector<TargetMetrics>> targets =
        EvaluateTargets(bundle, variant, options);
    if (!targets.ok()) return targets.status();
    const std::string name = VariantName(variant);
    auto add = [&](std::string metric, auto get) {
      std::vector<double> values;
      for (const TargetMetrics& t : *targets) values.push_back(get(t));
      table.AddValues(benchmark, name, std::move(metric), values);
    };
    add("auc", [](const TargetMetrics& t) { return t.auc; });
    add("skipped",
        [](const TargetMetrics& t) { return static_cast<double>(t.skipped); });
    for (size_t k = 0; k < options.alphas.size(); ++k) {
      const double alpha = options.alphas[k];
      add(TprAtFprMetric(alpha),
          [k](const TargetMetrics& t) { return t.tpr_at_fpr[k]; });
      add(TauMetric(alpha), [k](const TargetMetrics& t) { return t.tau[k]; });
      add(TprPrimeMetric(alpha),
          [k](const TargetMetrics& t) { return t.tpr_prime[k]; });
      add(FprPrimeMetric(alpha),
          [k](const TargetMetrics& t) { return t.fpr_prime[k]; });
      for (size_t p = 0; p < options.priors.size(); ++p) {
        add(PpvMetric(alpha, options.priors[p]),
            [k, p](const TargetMetrics& t) { return t.ppv[k][p]; });
      }
    }
  }
  return table;
}

absl::StatusOr<ReportTable> RunRepro(const RunSet& runs,
                                     const ReproOptions& options) {
  const int n_runs = runs.size();
  if (n_runs < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("repro needs at least 2 runs, got %d", n_runs));
  }
  if (absl::Status s = CheckFractions(options.alphas, "alpha"); !s.ok()) {
    return s;
  }
  if (options.support_x < 1) {
    return absl::InvalidArgumentError("--support-x must be >= 1");
  }
  const std::string& bench = options.benchmark;
  const std::string variant = VariantName(options.variant);
  ReportTable table;

  // sets[k][r]: run r's thresholded set at alphas[k].
  std::vector<std::vector<SampleSet>> sets(options.alphas.size());
  for (const ScoreBundle& bundle : runs.bundles) {
    auto vsets =
        SupportCountsForAlphas(bundle, options.variant, options.calibration,
                               options.alphas, options.threads, options.engine);
    if (!vsets.ok()) {
      return absl::Status(vsets.status().code(),
                          absl::StrCat("run '", bundle.run_id,
                                       "': ", vsets.status().message()));
    }
    for (size_t k = 0; k < options.alphas.size(); ++k) {
      absl::StatusOr<SampleSet> set =
          FilterSet((*vsets)[k], options.support_x, options.zero_fp);
      if (!set.ok()) return set.status();
      sets[k].push_back(*std::move(set));
    }
  }
  const KwiseOptions kwise{.seed = options.seed};
  for (size_t k = 0; k < options.alphas.size(); ++k) {
    const std::string a = Num(options.alphas[k]);
    std::vector<double> sizes;
    for (const SampleSet& s : sets[k]) sizes.push_back(s.size());
    table.AddValues(bench, variant, absl::StrCat("set_size@", a), sizes);
    table.AddValues(bench, variant, absl::StrCat("pairwise_jaccard@", a),
                    OverPairs(n_runs, [&](int i, int j) {
                      return Jaccard(sets[k][i], sets[k][j]);
                    }));
    for (int kk = 2; kk <= n_runs; ++kk) {
      absl::StatusOr<AgreementStat> stat = KwiseAgreement(sets[k], kk, kwise);
      if (!stat.ok()) return stat.status();
      const std::string suffix = absl::StrCat("@", a, "/k=", kk);
      table.Add({bench, variant, absl::StrCat("kwise_intersection", suffix),
                 stat->mean_intersection, kUndefined});
      table.Add({bench, variant, absl::StrCat("kwise_union", suffix),
                 stat->mean_union, kUndefined});
      table.Add({bench, variant, absl::StrCat("kwise_jaccard", suffix),
                 stat->mean_jaccard, kUndefined});
    }
  }

  std::vector<GapRanking> rankings;
  for (const ScoreBundle& bundle : runs.bundles) {
    absl::StatusOr<GapRanking> ranking = ComputeGapRanking(
        bundle, options.gap, options.variant, options.threads, options.engine);
    if (!ranking.ok()) return ranking.status();
    rankings.push_back(*std::move(ranking));
  }
  const std::string gap = GapKindName(options.gap);
  table.AddValues(bench, variant, absl::StrCat("global_spearman/", gap),
                  OverPairs(n_runs, [&](int i, int j) {
                    return GlobalSpearman(rankings[i], rankings[j]);
                  }));
  for (double q : options.top_q) {
    const std::string qs = absl::StrCat("@", Num(q), "/", gap);
    std::vector<SampleSet> tops;
    for (const GapRanking& r : rankings) {
      absl::StatusOr<SampleSet> top = TopQ(r, q);
      if (!top.ok()) return top.status();
      tops.push_back(*std::move(top));
    }
    table.Add({bench, variant, absl::StrCat("topq_size", qs),
               static_cast<double>(tops.front().size()), 0.0});
    table.AddValues(bench, variant, absl::StrCat("topq_jaccard", qs),
                    OverPairs(n_runs, [&](int i, int j) {
                      return Jaccard(tops[i], tops[j]);
                    }));
    table.AddValues(bench, variant, absl::StrCat("tail_spearman", qs),
                    OverPairs(n_runs, [&](int i, int j) {
                      return TailSpearman(rankings[i], rankings[j], q);
                    }));
    table.Add({bench, variant, absl::StrCat("tail_spearman_all", qs),
               AllRunsTailSpearman(rankings, q), kUndefined});
    auto displacement = RankDisplacement(rankings, q, options.deltas);
    if (!displacement.ok()) return displacement.status();
    for (size_t d = 0; d < options.deltas.size(); ++d) {
      std::vector<double> fractions;
      for (const auto& run : *displacement) {
        fractions.push_back(run.has_value() ? (*run)[d] : kUndefined);
      }
      table.AddValues(bench, variant,
                      absl::StrCat("displaced_within", qs,
                                   "/delta=", Num(options.deltas[d])),
                      fractions);
    }
  }
  return table;
}

absl::StatusOr<ReportTable> RunLossRatio(
    const std::vector<ScoreBundle>& bundles, const LossRatioOptions& options) {
  if (bundles.empty()) return absl::InvalidArgumentError("no bundles given");
  ReportTable table;
  for (const ScoreBundle& bundle : bundles) {
    if (!bundle.model_stats.has_value()) {
      return absl::FailedPreconditionError(
          absl::StrCat("bundle '", bundle.run_id, "' has no model_stats.csv"));
    }
    const std::string& bench = bundle.run_id;
    std::vector<double> ratios;
    for (size_t m = 0; m < bundle.model_stats->size(); ++m) {
      const ModelStats& stats = (*bundle.model_stats)[m];
      absl::StatusOr<double> ratio =
          LossRatio(stats.train_loss, stats.test_loss);
      if (!ratio.ok()) return WithTarget(static_cast<int>(m), ratio.status());
      ratios.push_back(*ratio);
      table.Add({bench, kNoVariant, absl::StrCat("loss_ratio/model=", m),
                 *ratio, 0.0});
    }
    table.AddValues(bench, kNoVariant, "loss_ratio", ratios);
    if (!options.with_attack) continue;

    AttackOptions attack = options.attack;
    attack.alphas = {options.pair_alpha};
    const std::string metric = TprAtFprMetric(options.pair_alpha);
    for (Variant variant : attack.variants) {
      absl::StatusOr<std::vector<TargetMetrics>> targets =
          EvaluateTargets(bundle, variant, attack);
      if (!targets.ok()) return targets.status();
      const std::string name = VariantName(variant);
      std::vector<double> tprs;
      for (const TargetMetrics& t : *targets) {
        tprs.push_back(t.tpr_at_fpr.front());
        table.Add({bench, name, absl::StrCat(metric, "/model=", t.target),
                   t.tpr_at_fpr.front(), 0.0});
      }
      table.AddValues(bench, name, metric, tprs);
    }
  }
  return table;
}

}  // namespace mia_audit::cli
