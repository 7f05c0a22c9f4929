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

#include "mia_audit/calibration.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace mia_audit {
namespace {

absl::Status CheckScores(std::span<const double> scores,
                         std::span<const uint8_t> is_member) {
  if (scores.size() != is_member.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%d scores but %d membership labels", scores.size(), is_member.size()));
  }
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      return absl::InvalidArgumentError(
          absl::StrFormat("score %d is not finite", i));
    }
  }
  return absl::OkStatus();
}

absl::Status CheckAlpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("alpha %g must lie in (0,1)", alpha));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<CalibrationSource> ParseCalibrationSource(
    std::string_view name) {
  if (name == "target") return CalibrationSource::kTarget;
  if (name == "shadow") return CalibrationSource::kShadow;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown calibration source '", std::string(name),
                   "' (expected target or shadow)"));
}

std::string CalibrationSourceName(CalibrationSource source) {
  return source == CalibrationSource::kTarget ? "target" : "shadow";
}

absl::StatusOr<CalibratedThreshold> TargetThreshold(
    std::span<const double> scores, std::span<const uint8_t> is_member,
    double alpha) {
  if (absl::Status s = CheckScores(scores, is_member); !s.ok()) return s;
  if (absl::Status s = CheckAlpha(alpha); !s.ok()) return s;
  std::vector<double> negatives;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!is_member[i]) negatives.push_back(scores[i]);
  }
  if (negatives.empty()) {
    return absl::FailedPreconditionError(
        "threshold calibration needs at least one non-member");
  }
  std::sort(negatives.begin(), negatives.end(), std::greater<>());
  const double n = static_cast<double>(negatives.size());
  // Walk distinct values from the top; `above` counts scores strictly
  // greater than the current candidate. The count only grows as the
  // candidate decreases, so the last admissible candidate is the smallest.
  double tau = negatives.front();
  size_t i = 0;
  while (i < negatives.size()) {
    const double candidate = negatives[i];
    const size_t above = i;
    if (static_cast<double>(above) / n > alpha) break;
    tau = candidate;
    while (i < negatives.size() && negatives[i] == candidate) ++i;
  }
  CalibratedThreshold out;
  out.tau = tau;
  out.policy = ThresholdPolicy{alpha, CalibrationSource::kTarget,
                               QuantileRule::kConservativeCount};
  return out;
}

absl::StatusOr<std::vector<CalibratedThreshold>> ShadowThresholds(
    const LiraEngine& engine, int target, Variant variant,
    std::span<const double> alphas) {
  const ScoreBundle& bundle = engine.bundle();
  if (bundle.n_models < 3) {
    return absl::FailedPreconditionError(
        absl::StrFormat("shadow calibration needs M >= 3 models, bundle has %d",
                        bundle.n_models));
  }
  if (target < 0 || target >= bundle.n_models) {
    return absl::OutOfRangeError(absl::StrFormat(
        "target model %d outside [0,%d)", target, bundle.n_models));
  }
  for (double alpha : alphas) {
    if (absl::Status s = CheckAlpha(alpha); !s.ok()) return s;
  }
  std::vector<std::vector<double>> taus(alphas.size());
  const int excluded[] = {target};
  for (int shadow = 0; shadow < bundle.n_models; ++shadow) {
    if (shadow == target) continue;
    absl::StatusOr<AttackResult> attack =
        engine.Attack(shadow, variant, excluded);
    if (!attack.ok()) continue;
    const ScoredSamples scored = NonSkipped(*attack);
    for (size_t k = 0; k < alphas.size(); ++k) {
      absl::StatusOr<CalibratedThreshold> t =
          TargetThreshold(scored.scores, scored.is_member, alphas[k]);
      if (!t.ok()) break;
      taus[k].push_back(t->tau);
    }
  }
  std::vector<CalibratedThreshold> out;
  out.reserve(alphas.size());
  for (size_t k = 0; k < alphas.size(); ++k) {
    if (taus[k].size() < 2) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "shadow calibration for target %d: only %d usable shadows", target,
          taus[k].size()));
    }
    CalibratedThreshold t;
    t.tau = Median(taus[k]);
    t.policy = ThresholdPolicy{alphas[k], CalibrationSource::kShadow,
                               QuantileRule::kConservativeCount};
    t.per_shadow_taus = std::move(taus[k]);
    out.push_back(std::move(t));
  }
  return out;
}

absl::StatusOr<CalibratedThreshold> ShadowThreshold(const ScoreBundle& bundle,
                                                    int target, Variant variant,
                                                    double alpha,
                                                    EngineOptions options) {
  if (absl::Status s = ValidateBundle(bundle); !s.ok()) return s;
  LiraEngine engine(bundle, options);
  const double alphas[] = {alpha};
  absl::StatusOr<std::vector<CalibratedThreshold>> out =
      ShadowThresholds(engine, target, variant, alphas);
  if (!out.ok()) return out.status();
  return std::move(out->front());
}

absl::StatusOr<AchievedRates> ComputeAchievedRates(
    std::span<const double> scores, std::span<const uint8_t> is_member,
    double tau) {
  if (absl::Status s = CheckScores(scores, is_member); !s.ok()) return s;
  size_t pos = 0, neg = 0, tp = 0, fp = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    const bool flagged = scores[i] > tau;
    if (is_member[i]) {
      ++pos;
      tp += flagged ? 1 : 0;
    } else {
      ++neg;
      fp += flagged ? 1 : 0;
    }
  }
  if (pos == 0 || neg == 0) {
    return absl::FailedPreconditionError(
        "achieved rates need both members and non-members");
  }
  return AchievedRates{static_cast<double>(tp) / pos,
                       static_cast<double>(fp) / neg};
}

double Median(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace mia_audit
