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

// Synthetic score bundles and independent oracles.
//
// Each sample x has logit-space parameters (mu_in, mu_out, sigma). A model
// that trained on x reports phi ~ N(mu_in, sigma^2) for every augmentation,
// otherwise phi ~ N(mu_out, sigma^2); the stored confidence is sigmoid(phi).
// Every draw comes from a counter-based stream keyed by (seed, model, sample,
// augmentation), so a bundle does not depend on generation order.
//
// The per-sample parameters are drawn from `population_seed`, separately
// from the run `seed`: runs with different seeds over the same population
// emulate retraining on a fixed dataset.

#ifndef MIA_AUDIT_SYNTH_H_
#define MIA_AUDIT_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "mia_audit/lira_engine.h"
#include "mia_audit/score_bundle.h"

namespace mia_audit {

struct SamplePopulation {
  std::vector<double> mu_in;
  std::vector<double> mu_out;
  std::vector<double> sigma;
};

struct SynthSpec {
  int n_samples = 1000;
  int n_models = 16;
  int n_augmentations = 1;
  // Mean IN/OUT separation d = mu_in - mu_out.
  double separation = 1.0;
  // Log-normal spread of the per-sample separation: d_x = d * exp(s g -
  // s^2 / 2), g ~ N(0,1). Zero gives every sample the same d.
  double separation_spread = 0.0;
  double sigma = 1.0;
  // Log-normal spread of the per-sample sigma, same form as above.
  double sigma_spread = 0.0;
  // mu_out ~ N(mu_out_mean, mu_out_std^2) per sample.
  double mu_out_mean = 0.0;
  double mu_out_std = 1.0;
  double member_fraction = 0.5;
  uint64_t seed = 0;
  uint64_t population_seed = 0;
  std::string run_id = "synthetic";
  // When non-empty, used verbatim instead of drawing a population.
  SamplePopulation population;
};

absl::Status ValidateSynthSpec(const SynthSpec& spec);

// Per-sample parameters implied by `spec`.
absl::StatusOr<SamplePopulation> MakePopulation(const SynthSpec& spec);

absl::StatusOr<ScoreBundle> GenerateBundle(const SynthSpec& spec);

// Named presets: "baseline-like" (d = 3), "aof-like" (d = 0.8), "tl-like"
// (d = 0.3), ordered from most to least separable.
absl::StatusOr<SynthSpec> ScenarioPreset(std::string_view name);
std::vector<std::string> ScenarioNames();

// Reads a spec from a JSON object whose keys mirror SynthSpec's scalar
// fields. A "scenario" key selects a preset that the other keys override.
absl::StatusOr<SynthSpec> SynthSpecFromJson(std::string_view text);
absl::StatusOr<SynthSpec> LoadSynthSpec(const std::filesystem::path& path);

// Closed-form ROC of the equal-variance Gaussian test with separation d:
// TPR(alpha) = Q(Q^{-1}(alpha) - d / sigma), Q the standard normal upper
// tail.
class AnalyticRoc {
 public:
  AnalyticRoc(double separation, double sigma);
  double operator()(double alpha) const;

 private:
  double shift_;
};

absl::StatusOr<AnalyticRoc> MakeAnalyticRoc(double separation, double sigma);

// Upper limits on the oracle's input size.
inline constexpr int kOracleMaxSamples = 256;
inline constexpr int kOracleMaxModels = 16;

// Straight-line reimplementation of fit-and-score with no code shared with
// LiraEngine, for equivalence testing on toy bundles.
absl::StatusOr<AttackResult> BruteOracle(const ScoreBundle& bundle, int target,
                                         Variant variant,
                                         EngineOptions options = {});

}  // namespace mia_audit

#endif  // MIA_AUDIT_SYNTH_H_
