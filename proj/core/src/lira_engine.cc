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

#include "mia_audit/lira_engine.h"

#include <algorithm>
#include <cmath>
#include <optional>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "mia_audit/gaussian_tail.h"
#include "mia_audit/undefined.h"

namespace mia_audit {
namespace {

absl::Status CheckFit(const GaussianFit& fit, size_t n_aug, const char* side) {
  if (!fit.valid) {
    return absl::FailedPreconditionError(
        absl::StrCat(side, " fit is unavailable"));
  }
  if (fit.mu.size() != n_aug || fit.sigma.size() != n_aug) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s fit has %d augmentations, observation has %d", side,
                        fit.mu.size(), n_aug));
  }
  return absl::OkStatus();
}

double OnlineScoreUnchecked(std::span<const double> phi_obs,
                            const GaussianFit& fit_in,
                            const GaussianFit& fit_out) {
  double score = 0.0;
  for (size_t a = 0; a < phi_obs.size(); ++a) {
    score += LogNormalPdf(phi_obs[a], fit_in.mu[a], fit_in.sigma[a]) -
             LogNormalPdf(phi_obs[a], fit_out.mu[a], fit_out.sigma[a]);
  }
  return score;
}

double OfflineScoreUnchecked(std::span<const double> phi_obs,
                             const GaussianFit& fit_out) {
  double score = 0.0;
  for (size_t a = 0; a < phi_obs.size(); ++a) {
    score -=
        LogNormalUpperTail((phi_obs[a] - fit_out.mu[a]) / fit_out.sigma[a]);
  }
  return score;
}

}  // namespace

absl::StatusOr<Variant> ParseVariant(std::string_view name) {
  std::string key(name);
  std::replace(key.begin(), key.end(), '_', '-');
  for (const Variant& v : kAllVariants) {
    if (VariantName(v) == key) return v;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown variant '", std::string(name),
      "' (expected online, online-fv, offline, offline-fv or global)"));
}

std::string VariantName(Variant variant) {
  switch (variant.kind) {
    case AttackKind::kOnline:
      return variant.mode == VarianceMode::kFixed ? "online-fv" : "online";
    case AttackKind::kOffline:
      return variant.mode == VarianceMode::kFixed ? "offline-fv" : "offline";
    case AttackKind::kGlobal:
      return "global";
  }
  return "unknown";
}

bool AttackResult::IsSkipped(int sample) const {
  return std::binary_search(skipped.begin(), skipped.end(), sample);
}

ScoredSamples NonSkipped(const AttackResult& result) {
  ScoredSamples out;
  out.scores.reserve(result.scores.size());
  out.is_member.reserve(result.scores.size());
  out.sample_ids.reserve(result.scores.size());
  for (size_t i = 0; i < result.scores.size(); ++i) {
    if (IsUndefined(result.scores[i])) continue;
    out.scores.push_back(result.scores[i]);
    out.is_member.push_back(result.is_member[i]);
    out.sample_ids.push_back(static_cast<int>(i));
  }
  return out;
}

LiraEngine::LiraEngine(const ScoreBundle& bundle, EngineOptions options)
    : bundle_(&bundle), options_(options) {
  phi_.resize(bundle.confidences.size());
  for (size_t i = 0; i < phi_.size(); ++i) {
    phi_[i] = ClampedLogit(bundle.confidences[i], options_.logit_epsilon);
  }
}

absl::Status LiraEngine::CheckTarget(int target,
                                     std::span<const int> excluded) const {
  if (target < 0 || target >= bundle_->n_models) {
    return absl::OutOfRangeError(absl::StrFormat(
        "target model %d outside [0,%d)", target, bundle_->n_models));
  }
  for (int m : excluded) {
    if (m < 0 || m >= bundle_->n_models) {
      return absl::OutOfRangeError(absl::StrFormat(
          "excluded model %d outside [0,%d)", m, bundle_->n_models));
    }
  }
  return absl::OkStatus();
}

std::vector<int> LiraEngine::ShadowModels(int target,
                                          std::span<const int> excluded) const {
  std::vector<int> shadows;
  shadows.reserve(bundle_->n_models);
  for (int m = 0; m < bundle_->n_models; ++m) {
    if (m == target ||
        std::find(excluded.begin(), excluded.end(), m) != excluded.end()) {
      continue;
    }
    shadows.push_back(m);
  }
  return shadows;
}

std::pair<GaussianFit, GaussianFit> LiraEngine::SampleFits(
    int sample, std::span<const int> shadows) const {
  const int n_aug = bundle_->n_augmentations;
  GaussianFit in, out;
  for (GaussianFit* fit : {&in, &out}) {
    fit->mu.assign(n_aug, 0.0);
    fit->sigma.assign(n_aug, options_.sigma_floor);
  }
  for (int m : shadows) {
    GaussianFit& fit = bundle_->is_member(m, sample) ? in : out;
    ++fit.n_obs;
    for (int a = 0; a < n_aug; ++a) fit.mu[a] += phi(m, sample, a);
  }
  for (GaussianFit* fit : {&in, &out}) {
    fit->valid = fit->n_obs >= options_.min_obs;
    if (fit->n_obs > 0) {
      for (int a = 0; a < n_aug; ++a) fit->mu[a] /= fit->n_obs;
    }
  }
  std::vector<double> ss_in(n_aug, 0.0), ss_out(n_aug, 0.0);
  for (int m : shadows) {
    const bool member = bundle_->is_member(m, sample);
    const GaussianFit& fit = member ? in : out;
    std::vector<double>& ss = member ? ss_in : ss_out;
    for (int a = 0; a < n_aug; ++a) {
      const double d = phi(m, sample, a) - fit.mu[a];
      ss[a] += d * d;
    }
  }
  for (int a = 0; a < n_aug; ++a) {
    if (in.n_obs > 1) {
      in.sigma[a] =
          std::max(std::sqrt(ss_in[a] / (in.n_obs - 1)), options_.sigma_floor);
    }
    if (out.n_obs > 1) {
      out.sigma[a] = std::max(std::sqrt(ss_out[a] / (out.n_obs - 1)),
                              options_.sigma_floor);
    }
  }
  return {std::move(in), std::move(out)};
}

LiraEngine::PooledSigma LiraEngine::PoolSigma(
    std::span<const int> shadows) const {
  const int n_aug = bundle_->n_augmentations;
  std::vector<double> ss_in(n_aug, 0.0), ss_out(n_aug, 0.0);
  std::vector<double> mu_in(n_aug), mu_out(n_aug);
  long dof_in = 0, dof_out = 0;
  for (int n = 0; n < bundle_->n_samples; ++n) {
    int n_in = 0, n_out = 0;
    std::fill(mu_in.begin(), mu_in.end(), 0.0);
    std::fill(mu_out.begin(), mu_out.end(), 0.0);
    for (int m : shadows) {
      const bool member = bundle_->is_member(m, n);
      std::vector<double>& mu = member ? mu_in : mu_out;
      (member ? n_in : n_out) += 1;
      for (int a = 0; a < n_aug; ++a) mu[a] += phi(m, n, a);
    }
    const bool use_in = n_in >= options_.min_obs;
    const bool use_out = n_out >= options_.min_obs;
    for (int a = 0; a < n_aug; ++a) {
      if (use_in) mu_in[a] /= n_in;
      if (use_out) mu_out[a] /= n_out;
    }
    for (int m : shadows) {
      const bool member = bundle_->is_member(m, n);
      if (member ? !use_in : !use_out) continue;
      const std::vector<double>& mu = member ? mu_in : mu_out;
      std::vector<double>& ss = member ? ss_in : ss_out;
      for (int a = 0; a < n_aug; ++a) {
        const double d = phi(m, n, a) - mu[a];
        ss[a] += d * d;
      }
    }
    if (use_in) dof_in += n_in - 1;
    if (use_out) dof_out += n_out - 1;
  }
  PooledSigma pooled;
  pooled.in.assign(n_aug, options_.sigma_floor);
  pooled.out.assign(n_aug, options_.sigma_floor);
  for (int a = 0; a < n_aug; ++a) {
    if (dof_in > 0) {
      pooled.in[a] =
          std::max(std::sqrt(ss_in[a] / dof_in), options_.sigma_floor);
    }
    if (dof_out > 0) {
      pooled.out[a] =
          std::max(std::sqrt(ss_out[a] / dof_out), options_.sigma_floor);
    }
  }
  return pooled;
}

absl::StatusOr<std::pair<GaussianFit, GaussianFit>> LiraEngine::FitInOut(
    int target, int sample, VarianceMode mode,
    std::span<const int> excluded) const {
  if (absl::Status s = CheckTarget(target, excluded); !s.ok()) return s;
  if (sample < 0 || sample >= bundle_->n_samples) {
    return absl::OutOfRangeError(absl::StrFormat("sample %d outside [0,%d)",
                                                 sample, bundle_->n_samples));
  }
  const std::vector<int> shadows = ShadowModels(target, excluded);
  auto fits = SampleFits(sample, shadows);
  if (mode == VarianceMode::kFixed) {
    PooledSigma pooled = PoolSigma(shadows);
    fits.first.sigma = std::move(pooled.in);
    fits.second.sigma = std::move(pooled.out);
  }
  return fits;
}

AttackResult LiraEngine::GlobalAttack(int target) const {
  AttackResult result;
  result.target = target;
  result.variant = Variant{AttackKind::kGlobal, VarianceMode::kPerSample};
  const int n_aug = bundle_->n_augmentations;
  result.scores.resize(bundle_->n_samples);
  for (int n = 0; n < bundle_->n_samples; ++n) {
    double sum = 0.0;
    for (int a = 0; a < n_aug; ++a) sum += phi(target, n, a);
    result.scores[n] = sum / n_aug;
  }
  auto row = bundle_->MembershipRow(target);
  result.is_member.assign(row.begin(), row.end());
  return result;
}

absl::StatusOr<AttackResult> LiraEngine::Attack(
    int target, Variant variant, std::span<const int> excluded) const {
  if (absl::Status s = CheckTarget(target, excluded); !s.ok()) return s;
  if (variant.kind == AttackKind::kGlobal) {
    AttackResult result = GlobalAttack(target);
    return result;
  }

  const std::vector<int> shadows = ShadowModels(target, excluded);
  if (static_cast<int>(shadows.size()) < options_.min_obs) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "%s needs at least %d shadow models, have %d", VariantName(variant),
        options_.min_obs, shadows.size()));
  }
  std::optional<PooledSigma> pooled;
  if (variant.mode == VarianceMode::kFixed) pooled = PoolSigma(shadows);

  const int n_aug = bundle_->n_augmentations;
  AttackResult result;
  result.target = target;
  result.variant = variant;
  result.scores.assign(bundle_->n_samples, kUndefined);
  auto row = bundle_->MembershipRow(target);
  result.is_member.assign(row.begin(), row.end());

  std::vector<double> phi_obs(n_aug);
  for (int n = 0; n < bundle_->n_samples; ++n) {
    auto [fit_in, fit_out] = SampleFits(n, shadows);
    if (pooled.has_value()) {
      fit_in.sigma = pooled->in;
      fit_out.sigma = pooled->out;
    }
    const bool usable = variant.kind == AttackKind::kOnline
                            ? fit_in.valid && fit_out.valid
                            : fit_out.valid;
    if (!usable) {
      result.skipped.push_back(n);
      continue;
    }
    for (int a = 0; a < n_aug; ++a) phi_obs[a] = phi(target, n, a);
    result.scores[n] = variant.kind == AttackKind::kOnline
                           ? OnlineScoreUnchecked(phi_obs, fit_in, fit_out)
                           : OfflineScoreUnchecked(phi_obs, fit_out);
  }
  return result;
}

absl::StatusOr<double> OnlineScore(std::span<const double> phi_obs,
                                   const GaussianFit& fit_in,
                                   const GaussianFit& fit_out) {
  if (absl::Status s = CheckFit(fit_in, phi_obs.size(), "IN"); !s.ok()) {
    return s;
  }
  if (absl::Status s = CheckFit(fit_out, phi_obs.size(), "OUT"); !s.ok()) {
    return s;
  }
  return OnlineScoreUnchecked(phi_obs, fit_in, fit_out);
}

absl::StatusOr<double> OfflineScore(std::span<const double> phi_obs,
                                    const GaussianFit& fit_out) {
  if (absl::Status s = CheckFit(fit_out, phi_obs.size(), "OUT"); !s.ok()) {
    return s;
  }
  return OfflineScoreUnchecked(phi_obs, fit_out);
}

absl::StatusOr<std::vector<double>> OfflineTailProbabilities(
    std::span<const double> phi_obs, const GaussianFit& fit_out) {
  if (absl::Status s = CheckFit(fit_out, phi_obs.size(), "OUT"); !s.ok()) {
    return s;
  }
  std::vector<double> p_out(phi_obs.size());
  for (size_t a = 0; a < phi_obs.size(); ++a) {
    p_out[a] = NormalUpperTail((phi_obs[a] - fit_out.mu[a]) / fit_out.sigma[a]);
  }
  return p_out;
}

absl::StatusOr<std::pair<GaussianFit, GaussianFit>> FitInOut(
    const ScoreBundle& bundle, int target, int sample, VarianceMode mode,
    EngineOptions options) {
  if (absl::Status s = ValidateBundle(bundle); !s.ok()) return s;
  return LiraEngine(bundle, options).FitInOut(target, sample, mode);
}

absl::StatusOr<AttackResult> GlobalScore(const ScoreBundle& bundle, int target,
                                         EngineOptions options) {
  return AttackAll(bundle, target,
                   Variant{AttackKind::kGlobal, VarianceMode::kPerSample},
                   options);
}

absl::StatusOr<AttackResult> AttackAll(const ScoreBundle& bundle, int target,
                                       Variant variant, EngineOptions options) {
  if (absl::Status s = ValidateBundle(bundle); !s.ok()) return s;
  if (variant.kind != AttackKind::kGlobal && bundle.n_models < 3) {
    return absl::FailedPreconditionError(
        absl::StrFormat("%s needs M >= 3 models, bundle has %d",
                        VariantName(variant), bundle.n_models));
  }
  return LiraEngine(bundle, options).Attack(target, variant);
}

}  // namespace mia_audit
