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

// Subcommand implementations behind the mia_audit executable. Each takes
// parsed options and returns a report or a status; the executable maps
// statuses to exit codes.

#ifndef MIA_AUDIT_CLI_COMMANDS_H_
#define MIA_AUDIT_CLI_COMMANDS_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mia_audit/calibration.h"
#include "mia_audit/lira_engine.h"
#include "mia_audit/metrics.h"
#include "mia_audit/reproducibility.h"
#include "mia_audit/score_bundle.h"
#include "mia_audit_cli/report_table.h"

namespace mia_audit::cli {

inline constexpr double kDefaultAlphas[] = {1e-5, 1e-3};
inline constexpr double kDefaultPriors[] = {0.01, 0.1, 0.5};
inline constexpr double kDefaultTopQ[] = {0.1, 1.0, 10.0};
inline constexpr double kDefaultDeltas[] = {1.0, 5.0, 10.0};

// Metric names shared by reports and their readers.
std::string TprAtFprMetric(double alpha);
std::string TauMetric(double alpha);
std::string TprPrimeMetric(double alpha);
std::string FprPrimeMetric(double alpha);
std::string PpvMetric(double alpha, double prior);

struct AttackOptions {
  std::vector<Variant> variants = {Variant{}};
  CalibrationSource calibration = CalibrationSource::kTarget;
  std::vector<double> alphas{std::begin(kDefaultAlphas),
                             std::end(kDefaultAlphas)};
  std::vector<double> priors{std::begin(kDefaultPriors),
                             std::end(kDefaultPriors)};
  TprInterpolation interpolation = TprInterpolation::kStep;
  int threads = 1;
  // Report label; the bundle's run_id when empty.
  std::string benchmark;
  EngineOptions engine;
};

// Metrics of one target model under one variant.
struct TargetMetrics {
  int target = 0;
  int skipped = 0;
  double auc = 0.0;
  // Indexed by alpha, then prior.
  std::vector<double> tpr_at_fpr;
  std::vector<double> tau;
  std::vector<double> tpr_prime;
  std::vector<double> fpr_prime;
  std::vector<std::vector<double>> ppv;
};

// Attacks every model of `bundle` in turn, calibrating per `options`.
absl::StatusOr<std::vector<TargetMetrics>> EvaluateTargets(
    const ScoreBundle& bundle, Variant variant, const AttackOptions& options);

// Cross-target mean and std of every metric, one row per (variant, metric).
absl::StatusOr<ReportTable> RunAttack(const ScoreBundle& bundle,
                                      const AttackOptions& options);

struct ReproOptions {
  Variant variant;
  CalibrationSource calibration = CalibrationSource::kShadow;
  std::vector<double> alphas{std::begin(kDefaultAlphas),
                             std::end(kDefaultAlphas)};
  int support_x = 1;
  bool zero_fp = false;
  std::vector<double> top_q{std::begin(kDefaultTopQ), std::end(kDefaultTopQ)};
  std::vector<double> deltas{std::begin(kDefaultDeltas),
                             std::end(kDefaultDeltas)};
  GapKind gap = GapKind::kMedian;
  uint64_t seed = 0;
  int threads = 1;
  std::string benchmark = "runset";
  EngineOptions engine;
};

// Cross-run agreement of thresholded sets and gap rankings.
absl::StatusOr<ReportTable> RunRepro(const RunSet& runs,
                                     const ReproOptions& options);

struct LossRatioOptions {
  // Also attack each bundle and pair loss ratios with TPR at this FPR.
  bool with_attack = false;
  AttackOptions attack;
  double pair_alpha = 1e-3;
};

// Per-model and aggregate loss ratios for each bundle.
absl::StatusOr<ReportTable> RunLossRatio(
    const std::vector<ScoreBundle>& bundles, const LossRatioOptions& options);

}  // namespace mia_audit::cli

#endif  // MIA_AUDIT_CLI_COMMANDS_H_
