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

// Decision thresholds for a nominal false-positive rate alpha.
//
// Everywhere in this library a sample is flagged as a member iff its score
// is strictly greater than the threshold tau.
//
// Target calibration reads tau off the attacked model's own non-member
// scores, which an external attacker cannot do; it bounds attack
// performance from above. Shadow calibration treats every other model i in
// turn as the attacked one (its shadows exclude both i and the real target),
// computes tau_i the same way, and uses the median of the tau_i.

#ifndef MIA_AUDIT_CALIBRATION_H_
#define MIA_AUDIT_CALIBRATION_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "mia_audit/lira_engine.h"
#include "mia_audit/score_bundle.h"

namespace mia_audit {

enum class CalibrationSource { kTarget, kShadow };

absl::StatusOr<CalibrationSource> ParseCalibrationSource(std::string_view);
std::string CalibrationSourceName(CalibrationSource source);

enum class QuantileRule {
  // tau is the smallest non-member score whose strict exceedance count does
  // not exceed alpha * n_nonmembers; achieved FPR on the calibration data
  // never exceeds alpha.
  kConservativeCount,
};

struct ThresholdPolicy {
  double alpha = 1e-3;
  CalibrationSource source = CalibrationSource::kShadow;
  QuantileRule quantile_rule = QuantileRule::kConservativeCount;
};

struct CalibratedThreshold {
  double tau = 0.0;
  ThresholdPolicy policy;
  // Shadow source only; tau is their median.
  std::vector<double> per_shadow_taus;
};

struct AchievedRates {
  double tpr = 0.0;
  double fpr = 0.0;
};

absl::StatusOr<CalibratedThreshold> TargetThreshold(
    std::span<const double> scores, std::span<const uint8_t> is_member,
    double alpha);

// Shadow-calibrated thresholds for several alphas from one sweep over the
// shadows. Fails when fewer than two shadows yield a threshold.
absl::StatusOr<std::vector<CalibratedThreshold>> ShadowThresholds(
    const LiraEngine& engine, int target, Variant variant,
    std::span<const double> alphas);

absl::StatusOr<CalibratedThreshold> ShadowThreshold(const ScoreBundle& bundle,
                                                    int target, Variant variant,
                                                    double alpha,
                                                    EngineOptions options = {});

// Achieved TPR'/FPR' of the rule score > tau.
absl::StatusOr<AchievedRates> ComputeAchievedRates(
    std::span<const double> scores, std::span<const uint8_t> is_member,
    double tau);

// Median; the mean of the two middle values for even counts.
double Median(std::vector<double> values);

}  // namespace mia_audit

#endif  // MIA_AUDIT_CALIBRATION_H_
