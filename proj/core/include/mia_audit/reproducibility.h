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

// Cross-run stability of membership findings.
//
// Two families of per-run selections are compared across K runs that share
// a sample universe:
//  * thresholded sets: every model of a run is attacked once (leave-one-out)
//    at a calibrated threshold; a sample's support is how many of its IN
//    models flag it (tp) and how many of its OUT models do (fp);
//  * ranking sets: the top q% of samples by a per-sample gap between the
//    log-ratios the sample receives from its IN models and from its OUT
//    models.

#ifndef MIA_AUDIT_REPRODUCIBILITY_H_
#define MIA_AUDIT_REPRODUCIBILITY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "mia_audit/calibration.h"
#include "mia_audit/lira_engine.h"
#include "mia_audit/score_bundle.h"

namespace mia_audit {

// Ascending, duplicate-free sample ids.
using SampleSet = std::vector<int>;

struct VulnerableSet {
  std::string run_id;
  // Per sample: number of member models that flag it, non-member models that
  // flag it, and how many models of each kind could have.
  std::vector<int> tp_count;
  std::vector<int> fp_count;
  std::vector<int> in_models;
  std::vector<int> out_models;
  // Samples with tp_count >= 1.
  SampleSet sample_ids;
};

struct TauPolicy {
  CalibrationSource source = CalibrationSource::kShadow;
  double alpha = 1e-3;
};

// Leave-one-out support counts for one run. Skipped samples are never
// flagged.
absl::StatusOr<VulnerableSet> SupportCounts(const ScoreBundle& bundle,
                                            Variant variant, TauPolicy policy,
                                            int threads = 1,
                                            EngineOptions options = {});

// Support counts for several alphas sharing one attack sweep.
absl::StatusOr<std::vector<VulnerableSet>> SupportCountsForAlphas(
    const ScoreBundle& bundle, Variant variant, CalibrationSource source,
    std::span<const double> alphas, int threads = 1,
    EngineOptions options = {});

// Samples with tp_count >= x (and fp_count == 0 when required).
absl::StatusOr<SampleSet> FilterSet(const VulnerableSet& vset, int x,
                                    bool require_zero_fp);

// |A n B| / |A u B|; kUndefined when both are empty.
double Jaccard(const SampleSet& a, const SampleSet& b);

struct AgreementStat {
  int k = 0;
  double mean_intersection = 0.0;
  double mean_union = 0.0;
  // Over subsets with a non-empty union; kUndefined if there are none.
  double mean_jaccard = 0.0;
  int64_t subsets_evaluated = 0;
  bool exhaustive = true;
};

struct KwiseOptions {
  // Above this many subsets, `enumeration_cap` subsets are drawn uniformly
  // with a fixed seed instead of enumerating.
  int64_t enumeration_cap = 100000;
  uint64_t seed = 0;
};

absl::StatusOr<AgreementStat> KwiseAgreement(std::span<const SampleSet> sets,
                                             int k, KwiseOptions options = {});

enum class GapKind { kMedian, kMean };

absl::StatusOr<GapKind> ParseGapKind(std::string_view name);
std::string GapKindName(GapKind kind);

struct GapRanking {
  std::string run_id;
  GapKind kind = GapKind::kMedian;
  // Per sample; kUndefined for samples lacking IN or OUT log-ratios.
  std::vector<double> gap;
  // All sample ids by descending gap, ties by ascending id, undefined gaps
  // last.
  std::vector<int> order;
  // rank[sample] = 1-based position in `order`.
  std::vector<int> rank;

  int n_samples() const { return static_cast<int>(gap.size()); }
};

// Builds a ranking from per-sample gaps.
GapRanking RankByGap(std::string run_id, GapKind kind, std::vector<double> gap);

// Gap between the IN and OUT log-ratio arrays of one sample: median (or
// mean) of `in` minus the same statistic of `out`. kUndefined if either is
// empty.
double GapFromLogRatios(std::span<const double> in, std::span<const double> out,
                        GapKind kind);

// Attacks every model of the run as target and collects each sample's
// scores over its IN and OUT models.
absl::StatusOr<GapRanking> ComputeGapRanking(
    const ScoreBundle& bundle, GapKind kind,
    Variant variant = {AttackKind::kOnline, VarianceMode::kPerSample},
    int threads = 1, EngineOptions options = {});

// Number of samples in a top-q% set: floor(q * N / 100).
int TopQCount(int n_samples, double q);

// The floor(qN/100) highest-gap samples.
absl::StatusOr<SampleSet> TopQ(const GapRanking& ranking, double q);

// Spearman correlation with average ranks for ties; kUndefined for fewer
// than two points or a constant input.
double SpearmanCorrelation(std::span<const double> x,
                           std::span<const double> y);

// Spearman of the two runs' gaps on the intersection of their top-q% sets.
double TailSpearman(const GapRanking& r, const GapRanking& s, double q);

// Spearman of the two runs' gaps over every sample defined in both.
double GlobalSpearman(const GapRanking& r, const GapRanking& s);

// Mean pairwise Spearman over the intersection of every run's top-q set;
// kUndefined if fewer than two runs or no defined pair.
double AllRunsTailSpearman(std::span<const GapRanking> runs, double q);

// For each run r: the samples that sit in some run's top-q% but not in
// r's ("displaced"), and for each delta the fraction of them whose
// percentile rank in r (rank / N * 100) is within q + delta. nullopt marks
// a run with no displaced samples.
absl::StatusOr<std::vector<std::optional<std::vector<double>>>>
RankDisplacement(std::span<const GapRanking> runs, double q,
                 std::span<const double> deltas);

}  // namespace mia_audit

#endif  // MIA_AUDIT_REPRODUCIBILITY_H_
