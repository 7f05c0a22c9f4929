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

// Likelihood-ratio membership inference (LiRA) over a ScoreBundle.
//
// For a designated target model every other model acts as a shadow. For each
// sample the shadows that trained on it (IN) and those that did not (OUT)
// give per-augmentation Gaussian fits of the logit-scaled confidence phi.
// The target's own phi is then scored:
//
//   online   sum_a log N(phi_a; IN) - log N(phi_a; OUT)
//   offline  -sum_a log Pr[Z >= phi_a],  Z ~ N(OUT)
//   global   mean_a phi_a of the target alone, no shadows
//
// Augmentations are treated as independent dimensions (diagonal
// covariance). Higher scores are always more member-like.

#ifndef MIA_AUDIT_LIRA_ENGINE_H_
#define MIA_AUDIT_LIRA_ENGINE_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mia_audit/score_bundle.h"

namespace mia_audit {

enum class AttackKind { kOnline, kOffline, kGlobal };

enum class VarianceMode { kPerSample, kFixed };

struct Variant {
  AttackKind kind = AttackKind::kOnline;
  // Ignored by kGlobal.
  VarianceMode mode = VarianceMode::kPerSample;

  friend bool operator==(const Variant&, const Variant&) = default;
};

// "online", "online-fv", "offline", "offline-fv", "global". Underscores are
// accepted in place of the hyphen.
absl::StatusOr<Variant> ParseVariant(std::string_view name);
std::string VariantName(Variant variant);

inline constexpr Variant kAllVariants[] = {
    {AttackKind::kOnline, VarianceMode::kPerSample},
    {AttackKind::kOnline, VarianceMode::kFixed},
    {AttackKind::kOffline, VarianceMode::kPerSample},
    {AttackKind::kOffline, VarianceMode::kFixed},
    {AttackKind::kGlobal, VarianceMode::kPerSample},
};

struct EngineOptions {
  double logit_epsilon = kDefaultLogitEpsilon;
  double sigma_floor = 1e-6;
  // Minimum shadow observations per side for a usable fit.
  int min_obs = 2;
};

// Per-augmentation Gaussian fit of one side (IN or OUT) for one sample.
struct GaussianFit {
  std::vector<double> mu;
  std::vector<double> sigma;
  int n_obs = 0;
  bool valid = false;
};

struct AttackResult {
  int target = 0;
  Variant variant;
  // One score per sample; kUndefined (NaN) exactly at skipped samples.
  std::vector<double> scores;
  // The target's membership row.
  std::vector<uint8_t> is_member;
  // Ascending ids of samples without a usable fit.
  std::vector<int> skipped;

  bool IsSkipped(int sample) const;
};

// Scores and labels of the non-skipped samples, in sample order.
struct ScoredSamples {
  std::vector<double> scores;
  std::vector<uint8_t> is_member;
  std::vector<int> sample_ids;
};
ScoredSamples NonSkipped(const AttackResult& result);

// Attack engine bound to one bundle. Precomputes phi for the whole bundle so
// repeated attacks (leave-one-out sweeps, shadow calibration) share it. The
// bundle must outlive the engine. All methods are const and thread-safe.
class LiraEngine {
 public:
  // `bundle` is assumed to satisfy ValidateBundle.
  explicit LiraEngine(const ScoreBundle& bundle, EngineOptions options = {});

  const ScoreBundle& bundle() const { return *bundle_; }
  const EngineOptions& options() const { return options_; }

  double phi(int model, int sample, int augmentation) const {
    return phi_[bundle_->index(model, sample, augmentation)];
  }

  // Attacks `target` using every model except the target and `excluded` as
  // shadows.
  absl::StatusOr<AttackResult> Attack(int target, Variant variant,
                                      std::span<const int> excluded = {}) const;

  // IN and OUT fits for one sample with the given shadow exclusions. In
  // fixed mode sigma is the pooled estimate over all samples.
  absl::StatusOr<std::pair<GaussianFit, GaussianFit>> FitInOut(
      int target, int sample, VarianceMode mode,
      std::span<const int> excluded = {}) const;

 private:
  struct PooledSigma {
    std::vector<double> in;
    std::vector<double> out;
  };

  absl::Status CheckTarget(int target, std::span<const int> excluded) const;
  std::vector<int> ShadowModels(int target,
                                std::span<const int> excluded) const;
  // Per-sample moments; sigma left at the per-sample estimate.
  std::pair<GaussianFit, GaussianFit> SampleFits(
      int sample, std::span<const int> shadows) const;
  PooledSigma PoolSigma(std::span<const int> shadows) const;
  AttackResult GlobalAttack(int target) const;

  const ScoreBundle* bundle_;
  EngineOptions options_;
  std::vector<double> phi_;
};

// Sum over augmentations of the IN/OUT log-density difference.
absl::StatusOr<double> OnlineScore(std::span<const double> phi_obs,
                                   const GaussianFit& fit_in,
                                   const GaussianFit& fit_out);

// -sum_a log Pr[Z >= phi_a] under the OUT fit.
absl::StatusOr<double> OfflineScore(std::span<const double> phi_obs,
                                    const GaussianFit& fit_out);

// Raw right-tail probabilities p_out per augmentation. With a single
// augmentation, membership at FPR alpha is p_out < alpha.
absl::StatusOr<std::vector<double>> OfflineTailProbabilities(
    std::span<const double> phi_obs, const GaussianFit& fit_out);

// Single-bundle conveniences.
absl::StatusOr<std::pair<GaussianFit, GaussianFit>> FitInOut(
    const ScoreBundle& bundle, int target, int sample, VarianceMode mode,
    EngineOptions options = {});
absl::StatusOr<AttackResult> GlobalScore(const ScoreBundle& bundle, int target,
                                         EngineOptions options = {});
absl::StatusOr<AttackResult> AttackAll(const ScoreBundle& bundle, int target,
                                       Variant variant,
                                       EngineOptions options = {});

}  // namespace mia_audit

#endif  // MIA_AUDIT_LIRA_ENGINE_H_
