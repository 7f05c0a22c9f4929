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

#include "mia_audit_cli/cli.h"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "mia_audit/parallel.h"
#include "mia_audit/synth.h"
#include "mia_audit_cli/commands.h"

namespace mia_audit::cli {
namespace {

// A flag value that parsed but is not meaningful.
struct UsageError {
  std::string message;
};

std::vector<Variant> ParseVariants(const std::vector<std::string>& names) {
  std::vector<Variant> out;
  for (const std::string& name : names) {
    absl::StatusOr<Variant> v = ParseVariant(name);
    if (!v.ok()) throw UsageError{std::string(v.status().message())};
    out.push_back(*v);
  }
  return out;
}

CalibrationSource ParseSource(const std::string& name) {
  absl::StatusOr<CalibrationSource> source = ParseCalibrationSource(name);
  if (!source.ok()) throw UsageError{std::string(source.status().message())};
  return *source;
}

int Fail(std::ostream& err, const absl::Status& status) {
  err << "error: " << status.message() << "\n";
  return kExitValidation;
}

int Emit(const ReportTable& table, const std::string& out_path,
         std::ostream& out, std::ostream& err) {
  if (out_path.empty()) {
    out << table.ToCsv();
    return kExitOk;
  }
  if (absl::Status s = table.WriteCsv(out_path); !s.ok()) return Fail(err, s);
  return kExitOk;
}

absl::StatusOr<std::vector<ScoreBundle>> LoadAll(
    const std::vector<std::string>& dirs) {
  std::vector<ScoreBundle> out;
  for (const std::string& dir : dirs) {
    absl::StatusOr<ScoreBundle> bundle = LoadBundle(dir);
    if (!bundle.ok()) {
      return absl::Status(bundle.status().code(),
                          absl::StrCat(dir, ": ", bundle.status().message()));
    }
    out.push_back(*std::move(bundle));
  }
  return out;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Membership-inference audit engine", "mia_audit"};
  app.require_subcommand(1);

  int threads_flag = 0;
  std::string out_path;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--threads", threads_flag,
                    absl::StrCat("Worker threads (fallback: $", kThreadsEnvVar,
                                 ", then 1)"))
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--out", out_path, "Write the report here, not stdout");
  };

  std::vector<std::string> variant_names = {"online"};
  std::string calibration_name = "target";
  std::vector<double> alphas(std::begin(kDefaultAlphas),
                             std::end(kDefaultAlphas));
  std::vector<double> priors(std::begin(kDefaultPriors),
                             std::end(kDefaultPriors));
  auto add_variant = [&](CLI::App* cmd) {
    cmd->add_option("--variant", variant_names,
                    "online, online-fv, offline, offline-fv or global")
        ->delimiter(',');
  };
  auto add_calibration = [&](CLI::App* cmd) {
    cmd->add_option("--calibration", calibration_name, "target or shadow")
        ->check(CLI::IsMember({"target", "shadow"}));
  };
  auto add_alphas = [&](CLI::App* cmd) {
    cmd->add_option("--alpha", alphas, "Nominal FPR list")
        ->delimiter(',')
        ->check(CLI::Range(0.0, 1.0));
  };

  // validate
  CLI::App* validate = app.add_subcommand("validate", "Check a score bundle");
  std::string bundle_dir;
  validate->add_option("bundle", bundle_dir, "Bundle directory")->required();

  // attack
  CLI::App* attack = app.add_subcommand(
      "attack", "Attack every model in turn and report aggregate metrics");
  attack->add_option("bundle", bundle_dir, "Bundle directory")->required();
  add_variant(attack);
  add_calibration(attack);
  add_alphas(attack);
  attack->add_option("--prior", priors, "Membership prior list")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  bool linear = false;
  attack->add_flag("--linear-tpr", linear,
                   "Interpolate TPR@FPR linearly instead of stepwise");
  std::string benchmark;
  attack->add_option("--benchmark", benchmark,
                     "Benchmark label (default: the bundle's run_id)");
  add_common(attack);

  // repro
  CLI::App* repro =
      app.add_subcommand("repro", "Cross-run reproducibility report");
  std::vector<std::string> bundle_dirs;
  repro->add_option("bundles", bundle_dirs, "Bundle directories (>= 2)")
      ->required();
  add_variant(repro);
  add_calibration(repro);
  add_alphas(repro);
  int support_x = 1;
  repro->add_option("--support-x", support_x, "Minimum TP support")
      ->check(CLI::PositiveNumber);
  bool zero_fp = false;
  repro->add_flag("--zero-fp", zero_fp, "Require zero false positives");
  std::vector<double> top_q(std::begin(kDefaultTopQ), std::end(kDefaultTopQ));
  repro->add_option("--top-q", top_q, "Top-q percentages")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 100.0));
  std::vector<double> deltas(std::begin(kDefaultDeltas),
                             std::end(kDefaultDeltas));
  repro->add_option("--delta", deltas, "Displacement margins in percent")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 100.0));
  std::string gap_name = "median";
  repro->add_option("--gap", gap_name, "median or mean")
      ->check(CLI::IsMember({"median", "mean"}));
  uint64_t seed = 0;
  repro->add_option("--seed", seed, "Seed for sampled k-wise subsets");
  std::string repro_benchmark = "runset";
  repro->add_option("--benchmark", repro_benchmark, "Benchmark label");
  add_common(repro);

  // simulate
  CLI::App* simulate =
      app.add_subcommand("simulate", "Write a synthetic score bundle");
  std::string scenario, spec_path, run_id;
  auto* scenario_opt = simulate->add_option(
      "--scenario", scenario,
      absl::StrCat("Preset: ", absl::StrJoin(ScenarioNames(), ", ")));
  auto* spec_opt = simulate->add_option("--spec", spec_path, "JSON spec file")
                       ->check(CLI::ExistingFile);
  scenario_opt->excludes(spec_opt);
  std::optional<uint64_t> sim_seed;
  simulate->add_option("--seed", sim_seed, "Run seed (overrides the spec)");
  simulate->add_option("--run-id", run_id, "Run label (overrides the spec)");
  simulate->add_option("--out", out_path, "Output bundle directory")
      ->required();

  // lossratio
  CLI::App* lossratio = app.add_subcommand(
      "lossratio", "Loss ratios from model_stats, optionally paired with TPR");
  lossratio->add_option("bundles", bundle_dirs, "Bundle directories")
      ->required();
  bool with_attack = false;
  lossratio->add_flag("--with-attack", with_attack,
                      "Pair each model with its TPR at --pair-alpha");
  double pair_alpha = 1e-3;
  lossratio->add_option("--pair-alpha", pair_alpha, "FPR for pairing")
      ->check(CLI::Range(0.0, 1.0));
  add_variant(lossratio);
  add_calibration(lossratio);
  add_common(lossratio);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const int threads = ResolveThreadCount(threads_flag);
    if (validate->parsed()) {
      absl::StatusOr<ScoreBundle> bundle = LoadBundle(bundle_dir);
      if (!bundle.ok()) return Fail(err, bundle.status());
      out << "ok: " << bundle_dir << " N=" << bundle->n_samples
          << " M=" << bundle->n_models << " A=" << bundle->n_augmentations
          << (bundle->balanced ? " balanced" : "") << "\n";
      return kExitOk;
    }
    if (attack->parsed()) {
      AttackOptions options;
      options.variants = ParseVariants(variant_names);
      options.calibration = ParseSource(calibration_name);
      options.alphas = alphas;
      options.priors = priors;
      options.interpolation =
          linear ? TprInterpolation::kLinear : TprInterpolation::kStep;
      options.threads = threads;
      options.benchmark = benchmark;
      absl::StatusOr<ScoreBundle> bundle = LoadBundle(bundle_dir);
      if (!bundle.ok()) return Fail(err, bundle.status());
      absl::StatusOr<ReportTable> table = RunAttack(*bundle, options);
      if (!table.ok()) return Fail(err, table.status());
      return Emit(*table, out_path, out, err);
    }
    if (repro->parsed()) {
      ReproOptions options;
      const std::vector<Variant> variants = ParseVariants(variant_names);
      if (variants.size() != 1) throw UsageError{"repro takes one --variant"};
      options.variant = variants.front();
      options.calibration = ParseSource(calibration_name);
      options.alphas = alphas;
      options.support_x = support_x;
      options.zero_fp = zero_fp;
      options.top_q = top_q;
      options.deltas = deltas;
      options.gap = *ParseGapKind(gap_name);
      options.seed = seed;
      options.threads = threads;
      options.benchmark = repro_benchmark;
      absl::StatusOr<std::vector<ScoreBundle>> bundles = LoadAll(bundle_dirs);
      if (!bundles.ok()) return Fail(err, bundles.status());
      absl::StatusOr<RunSet> runs = MakeRunSet(*std::move(bundles));
      if (!runs.ok()) return Fail(err, runs.status());
      absl::StatusOr<ReportTable> table = RunRepro(*runs, options);
      if (!table.ok()) return Fail(err, table.status());
      return Emit(*table, out_path, out, err);
    }
    if (simulate->parsed()) {
      absl::StatusOr<SynthSpec> spec =
          !spec_path.empty()  ? LoadSynthSpec(spec_path)
          : !scenario.empty() ? ScenarioPreset(scenario)
                              : absl::StatusOr<SynthSpec>(SynthSpec{});
      if (!spec.ok()) {
        if (!scenario.empty()) {
          throw UsageError{std::string(spec.status().message())};
        }
        return Fail(err, spec.status());
      }
      if (sim_seed.has_value()) spec->seed = *sim_seed;
      if (!run_id.empty()) spec->run_id = run_id;
      absl::StatusOr<ScoreBundle> bundle = GenerateBundle(*spec);
      if (!bundle.ok()) return Fail(err, bundle.status());
      if (absl::Status s = WriteBundle(*bundle, out_path); !s.ok()) {
        return Fail(err, s);
      }
      return kExitOk;
    }
    if (lossratio->parsed()) {
      LossRatioOptions options;
      options.with_attack = with_attack;
      options.pair_alpha = pair_alpha;
      options.attack.variants = ParseVariants(variant_names);
      options.attack.calibration = ParseSource(calibration_name);
      options.attack.threads = threads;
      absl::StatusOr<std::vector<ScoreBundle>> bundles = LoadAll(bundle_dirs);
      if (!bundles.ok()) return Fail(err, bundles.status());
      absl::StatusOr<ReportTable> table = RunLossRatio(*bundles, options);
      if (!table.ok()) return Fail(err, table.status());
      return Emit(*table, out_path, out, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.message << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace mia_audit::cli
