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

#include "mia_audit/synth.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "boost/math/distributions/normal.hpp"
#include "nlohmann/json.hpp"

namespace mia_audit {
namespace {

using json = nlohmann::json;

enum Stream : uint64_t {
  kStreamScore = 1,
  kStreamMembership = 2,
  kStreamMuOut = 3,
  kStreamSeparation = 4,
  kStreamSigma = 5,
};

uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

uint64_t CounterKey(uint64_t seed, Stream stream, uint64_t a, uint64_t b,
                    uint64_t c) {
  uint64_t h = SplitMix64(seed ^ SplitMix64(stream));
  h = SplitMix64(h ^ a);
  h = SplitMix64(h ^ (b + 0x632BE59BD9B4E019ull));
  return SplitMix64(h ^ (c + 0x85157AF5ull));
}

// Uniform in the open interval (0, 1).
double ToUnit(uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Box-Muller on two words derived from one key.
double StandardNormal(uint64_t key) {
  const double u1 = ToUnit(SplitMix64(key));
  const double u2 = ToUnit(SplitMix64(key ^ 0xD1B54A32D192ED03ull));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double LogNormalFactor(double spread, double g) {
  return std::exp(spread * g - 0.5 * spread * spread);
}

int MembersPerSample(const SynthSpec& spec) {
  return static_cast<int>(
      std::floor(spec.member_fraction * spec.n_models + 1e-9));
}

// ---- brute-force oracle ----------------------------------------------------
// Everything below is deliberately naive and independent of LiraEngine.

struct NaiveSide {
  std::vector<std::vector<double>> obs;  // [augmentation][observation]
};

double NaiveLogit(double p, double eps) {
  if (p < eps) p = eps;
  if (p > 1.0 - eps) p = 1.0 - eps;
  return std::log(p) - std::log(1.0 - p);
}

double NaiveMean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / v.size();
}

double NaiveSumSquares(const std::vector<double>& v) {
  const double mean = NaiveMean(v);
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s;
}

double NaiveLogDensity(double x, double mu, double sigma) {
  return -0.5 * std::log(2.0 * std::numbers::pi * sigma * sigma) -
         (x - mu) * (x - mu) / (2.0 * sigma * sigma);
}

double NaiveLogTail(double x, double mu, double sigma) {
  return std::log(0.5 * std::erfc((x - mu) / (sigma * std::sqrt(2.0))));
}

}  // namespace

absl::Status ValidateSynthSpec(const SynthSpec& spec) {
  if (spec.n_samples <= 0 || spec.n_models <= 0 || spec.n_augmentations <= 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("synthetic dimensions must be positive: N=%d M=%d A=%d",
                        spec.n_samples, spec.n_models, spec.n_augmentations));
  }
  if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma)) {
    return absl::InvalidArgumentError("sigma must be positive");
  }
  if (spec.separation_spread < 0.0 || spec.sigma_spread < 0.0 ||
      spec.mu_out_std < 0.0) {
    return absl::InvalidArgumentError("spreads must be non-negative");
  }
  if (!(spec.member_fraction >= 0.0 && spec.member_fraction <= 1.0)) {
    return absl::InvalidArgumentError("member_fraction must lie in [0,1]");
  }
  const SamplePopulation& pop = spec.population;
  if (!pop.mu_in.empty() || !pop.mu_out.empty() || !pop.sigma.empty()) {
    const size_t n = spec.n_samples;
    if (pop.mu_in.size() != n || pop.mu_out.size() != n ||
        pop.sigma.size() != n) {
      return absl::InvalidArgumentError(
          "explicit population arrays must each have n_samples entries");
    }
    for (double s : pop.sigma) {
      if (!(s > 0.0)) {
        return absl::InvalidArgumentError("population sigma must be > 0");
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<SamplePopulation> MakePopulation(const SynthSpec& spec) {
  if (absl::Status s = ValidateSynthSpec(spec); !s.ok()) return s;
  if (!spec.population.mu_in.empty()) return spec.population;
  SamplePopulation pop;
  const int n = spec.n_samples;
  pop.mu_in.resize(n);
  pop.mu_out.resize(n);
  pop.sigma.resize(n);
  const uint64_t seed = spec.population_seed;
  for (int x = 0; x < n; ++x) {
    const double g_mu = StandardNormal(CounterKey(seed, kStreamMuOut, x, 0, 0));
    const double g_sep =
        StandardNormal(CounterKey(seed, kStreamSeparation, x, 0, 0));
    const double g_sigma =
        StandardNormal(CounterKey(seed, kStreamSigma, x, 0, 0));
    pop.mu_out[x] = spec.mu_out_mean + spec.mu_out_std * g_mu;
    pop.mu_in[x] =
        pop.mu_out[x] +
        spec.separation * LogNormalFactor(spec.separation_spread, g_sep);
    pop.sigma[x] = spec.sigma * LogNormalFactor(spec.sigma_spread, g_sigma);
  }
  return pop;
}

absl::StatusOr<ScoreBundle> GenerateBundle(const SynthSpec& spec) {
  absl::StatusOr<SamplePopulation> pop = MakePopulation(spec);
  if (!pop.ok()) return pop.status();
  ScoreBundle bundle;
  bundle.n_samples = spec.n_samples;
  bundle.n_models = spec.n_models;
  bundle.n_augmentations = spec.n_augmentations;
  bundle.run_id = spec.run_id;
  bundle.seed = spec.seed;
  bundle.balanced = spec.member_fraction == 0.5;
  bundle.membership.assign(static_cast<size_t>(spec.n_models) * spec.n_samples,
                           0);
  bundle.confidences.resize(static_cast<size_t>(spec.n_models) *
                            spec.n_samples * spec.n_augmentations);

  const int members = MembersPerSample(spec);
  std::vector<int> pool(spec.n_models);
  for (int x = 0; x < spec.n_samples; ++x) {
    for (int m = 0; m < spec.n_models; ++m) pool[m] = m;
    for (int i = 0; i < members; ++i) {
      const double u =
          ToUnit(CounterKey(spec.seed, kStreamMembership, x, i, 0));
      const int span = spec.n_models - i;
      const int j = i + std::min(static_cast<int>(u * span), span - 1);
      std::swap(pool[i], pool[j]);
    }
    for (int i = 0; i < members; ++i) {
      bundle.membership[static_cast<size_t>(pool[i]) * spec.n_samples + x] = 1;
    }
  }

  for (int m = 0; m < spec.n_models; ++m) {
    for (int x = 0; x < spec.n_samples; ++x) {
      const bool member = bundle.is_member(m, x);
      const double mu = member ? pop->mu_in[x] : pop->mu_out[x];
      for (int a = 0; a < spec.n_augmentations; ++a) {
        const double z =
            mu + pop->sigma[x] * StandardNormal(CounterKey(
                                     spec.seed, kStreamScore, m, x, a));
        bundle.confidences[bundle.index(m, x, a)] =
            static_cast<float>(1.0 / (1.0 + std::exp(-z)));
      }
    }
  }
  return bundle;
}

std::vector<std::string> ScenarioNames() {
  return {"baseline-like", "aof-like", "tl-like"};
}

absl::StatusOr<SynthSpec> ScenarioPreset(std::string_view name) {
  SynthSpec spec;
  spec.n_samples = 10000;
  spec.n_models = 16;
  spec.n_augmentations = 1;
  spec.sigma = 1.0;
  spec.mu_out_mean = 0.0;
  spec.mu_out_std = 1.0;
  spec.separation_spread = 0.5;
  spec.run_id = std::string(name);
  if (name == "baseline-like") {
    spec.separation = 3.0;
  } else if (name == "aof-like") {
    spec.separation = 0.8;
  } else if (name == "tl-like") {
    spec.separation = 0.3;
  } else {
    return absl::NotFoundError(
        absl::StrCat("unknown scenario '", std::string(name),
                     "' (known: ", absl::StrJoin(ScenarioNames(), ", "), ")"));
  }
  return spec;
}

absl::StatusOr<SynthSpec> SynthSpecFromJson(std::string_view text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("synthetic spec: not a JSON object");
  }
  SynthSpec spec;
  if (auto it = doc.find("scenario"); it != doc.end()) {
    if (!it->is_string()) {
      return absl::InvalidArgumentError(
          "synthetic spec: 'scenario' must be a string");
    }
    absl::StatusOr<SynthSpec> preset = ScenarioPreset(it->get<std::string>());
    if (!preset.ok()) return preset.status();
    spec = *std::move(preset);
  }
  try {
    for (auto& [key, value] : doc.items()) {
      if (key == "scenario") continue;
      if (key == "n_samples")
        spec.n_samples = value.get<int>();
      else if (key == "n_models")
        spec.n_models = value.get<int>();
      else if (key == "n_augmentations")
        spec.n_augmentations = value.get<int>();
      else if (key == "separation")
        spec.separation = value.get<double>();
      else if (key == "separation_spread")
        spec.separation_spread = value.get<double>();
      else if (key == "sigma")
        spec.sigma = value.get<double>();
      else if (key == "sigma_spread")
        spec.sigma_spread = value.get<double>();
      else if (key == "mu_out_mean")
        spec.mu_out_mean = value.get<double>();
      else if (key == "mu_out_std")
        spec.mu_out_std = value.get<double>();
      else if (key == "member_fraction")
        spec.member_fraction = value.get<double>();
      else if (key == "seed")
        spec.seed = value.get<uint64_t>();
      else if (key == "population_seed")
        spec.population_seed = value.get<uint64_t>();
      else if (key == "run_id")
        spec.run_id = value.get<std::string>();
      else {
        return absl::InvalidArgumentError(
            absl::StrCat("synthetic spec: unknown key '", key, "'"));
      }
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("synthetic spec: ", e.what()));
  }
  if (absl::Status s = ValidateSynthSpec(spec); !s.ok()) return s;
  return spec;
}

absl::StatusOr<SynthSpec> LoadSynthSpec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open ", path.string()));
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return SynthSpecFromJson(text);
}

AnalyticRoc::AnalyticRoc(double separation, double sigma)
    : shift_(separation / sigma) {}

double AnalyticRoc::operator()(double alpha) const {
  if (alpha <= 0.0) return 0.0;
  if (alpha >= 1.0) return 1.0;
  const boost::math::normal standard;
  const double threshold =
      boost::math::quantile(boost::math::complement(standard, alpha));
  return boost::math::cdf(
      boost::math::complement(standard, threshold - shift_));
}

absl::StatusOr<AnalyticRoc> MakeAnalyticRoc(double separation, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(separation)) {
    return absl::InvalidArgumentError(
        "analytic ROC needs sigma > 0 and a finite separation");
  }
  return AnalyticRoc(separation, sigma);
}

absl::StatusOr<AttackResult> BruteOracle(const ScoreBundle& bundle, int target,
                                         Variant variant,
                                         EngineOptions options) {
  if (bundle.n_samples > kOracleMaxSamples ||
      bundle.n_models > kOracleMaxModels) {
    return absl::OutOfRangeError(absl::StrFormat(
        "oracle limited to N<=%d, M<=%d; got N=%d, M=%d", kOracleMaxSamples,
        kOracleMaxModels, bundle.n_samples, bundle.n_models));
  }
  if (target < 0 || target >= bundle.n_models) {
    return absl::OutOfRangeError("oracle target out of range");
  }
  const int N = bundle.n_samples;
  const int M = bundle.n_models;
  const int A = bundle.n_augmentations;
  const double eps = options.logit_epsilon;

  AttackResult result;
  result.target = target;
  result.variant = variant;
  result.scores.assign(N, std::nan(""));
  for (int x = 0; x < N; ++x) {
    result.is_member.push_back(bundle.membership[target * N + x]);
  }
  auto phi = [&](int m, int x, int a) {
    return NaiveLogit(bundle.confidences[(m * N + x) * A + a], eps);
  };

  if (variant.kind == AttackKind::kGlobal) {
    for (int x = 0; x < N; ++x) {
      double s = 0.0;
      for (int a = 0; a < A; ++a) s += phi(target, x, a);
      result.scores[x] = s / A;
    }
    return result;
  }

  // Observations per sample and side, target excluded.
  std::vector<NaiveSide> in(N), out(N);
  for (int x = 0; x < N; ++x) {
    in[x].obs.resize(A);
    out[x].obs.resize(A);
    for (int m = 0; m < M; ++m) {
      if (m == target) continue;
      NaiveSide& side = bundle.membership[m * N + x] ? in[x] : out[x];
      for (int a = 0; a < A; ++a) side.obs[a].push_back(phi(m, x, a));
    }
  }
  auto enough = [&](const NaiveSide& side) {
    return static_cast<int>(side.obs[0].size()) >= options.min_obs;
  };

  std::vector<double> pooled_in(A, options.sigma_floor);
  std::vector<double> pooled_out(A, options.sigma_floor);
  if (variant.mode == VarianceMode::kFixed) {
    for (int a = 0; a < A; ++a) {
      double ss_in = 0, dof_in = 0, ss_out = 0, dof_out = 0;
      for (int x = 0; x < N; ++x) {
        if (enough(in[x])) {
          ss_in += NaiveSumSquares(in[x].obs[a]);
          dof_in += in[x].obs[a].size() - 1.0;
        }
        if (enough(out[x])) {
          ss_out += NaiveSumSquares(out[x].obs[a]);
          dof_out += out[x].obs[a].size() - 1.0;
        }
      }
      if (dof_in > 0) {
        pooled_in[a] = std::max(std::sqrt(ss_in / dof_in), options.sigma_floor);
      }
      if (dof_out > 0) {
        pooled_out[a] =
            std::max(std::sqrt(ss_out / dof_out), options.sigma_floor);
      }
    }
  }
  auto sigma_of = [&](const NaiveSide& side, int a, bool is_in) {
    if (variant.mode == VarianceMode::kFixed) {
      return is_in ? pooled_in[a] : pooled_out[a];
    }
    const double n = side.obs[a].size();
    return std::max(std::sqrt(NaiveSumSquares(side.obs[a]) / (n - 1.0)),
                    options.sigma_floor);
  };

  for (int x = 0; x < N; ++x) {
    const bool online = variant.kind == AttackKind::kOnline;
    if (!enough(out[x]) || (online && !enough(in[x]))) {
      result.skipped.push_back(x);
      continue;
    }
    double score = 0.0;
    for (int a = 0; a < A; ++a) {
      const double obs = phi(target, x, a);
      const double mu_out = NaiveMean(out[x].obs[a]);
      const double sd_out = sigma_of(out[x], a, false);
      if (online) {
        const double mu_in = NaiveMean(in[x].obs[a]);
        const double sd_in = sigma_of(in[x], a, true);
        score += NaiveLogDensity(obs, mu_in, sd_in) -
                 NaiveLogDensity(obs, mu_out, sd_out);
      } else {
        score -= NaiveLogTail(obs, mu_out, sd_out);
      }
    }
    result.scores[x] = score;
  }
  return result;
}

}  // namespace mia_audit
