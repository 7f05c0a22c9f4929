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

#ifndef MIA_AUDIT_SCORE_BUNDLE_H_
#define MIA_AUDIT_SCORE_BUNDLE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace mia_audit {

// Default clamp applied to confidences before the logit transform.
inline constexpr double kDefaultLogitEpsilon = 1e-7;

inline constexpr int kBundleFormatVersion = 1;

// Per-model utility record. Losses are mean cross-entropy, accuracies are
// fractions in [0, 1].
struct ModelStats {
  double train_loss = 0.0;
  double test_loss = 0.0;
  double train_acc = 0.0;
  double test_acc = 0.0;

  friend bool operator==(const ModelStats&, const ModelStats&) = default;
};

// True-class confidences for N samples queried on M models under A
// augmentations, plus the M x N membership mask.
//
// Confidences are laid out model-major, [model][sample][augmentation], so
// that one model's slice is contiguous. A bundle is treated as immutable once
// it has been loaded or generated; every consumer takes it by const
// reference.
struct ScoreBundle {
  int n_samples = 0;
  int n_models = 0;
  int n_augmentations = 0;
  std::vector<float> confidences;   // size M * N * A
  std::vector<uint8_t> membership;  // size M * N, values 0/1
  std::optional<std::vector<ModelStats>> model_stats;
  // When set, every sample must be a member of exactly floor(M/2) models.
  bool balanced = false;
  std::string run_id;
  uint64_t seed = 0;

  size_t index(int model, int sample, int augmentation) const {
    return (static_cast<size_t>(model) * n_samples + sample) * n_augmentations +
           augmentation;
  }
  float confidence(int model, int sample, int augmentation) const {
    return confidences[index(model, sample, augmentation)];
  }
  bool is_member(int model, int sample) const {
    return membership[static_cast<size_t>(model) * n_samples + sample] != 0;
  }
  // All N * A confidences of one model.
  std::span<const float> ModelConfidences(int model) const {
    return std::span<const float>(confidences)
        .subspan(static_cast<size_t>(model) * n_samples * n_augmentations,
                 static_cast<size_t>(n_samples) * n_augmentations);
  }
  std::span<const uint8_t> MembershipRow(int model) const {
    return std::span<const uint8_t>(membership)
        .subspan(static_cast<size_t>(model) * n_samples, n_samples);
  }
  // Number of models that trained on `sample`.
  int MemberCount(int sample) const;

  friend bool operator==(const ScoreBundle&, const ScoreBundle&) = default;
};

// Checks every bundle invariant. Errors name the offending index.
absl::Status ValidateBundle(const ScoreBundle& bundle);

// Reads a bundle directory (manifest.json, scores.bin, membership.bin and
// optionally model_stats.csv) and validates it.
absl::StatusOr<ScoreBundle> LoadBundle(const std::filesystem::path& dir);

// Writes `bundle` into `dir`, creating the directory if needed. The result
// loads back bit-exactly.
absl::Status WriteBundle(const ScoreBundle& bundle,
                         const std::filesystem::path& dir);

// phi(p) = log(p' / (1 - p')) with p' = clamp(p, eps, 1 - eps).
absl::StatusOr<double> LogitTransform(double p,
                                      double eps = kDefaultLogitEpsilon);

// Unchecked variant for validated inputs.
double ClampedLogit(double p, double eps = kDefaultLogitEpsilon);

// Several runs over one sample universe.
struct RunSet {
  std::vector<ScoreBundle> bundles;

  int size() const { return static_cast<int>(bundles.size()); }
  int n_samples() const {
    return bundles.empty() ? 0 : bundles.front().n_samples;
  }
};

// Validates that all bundles share N and carry distinct run ids.
absl::StatusOr<RunSet> MakeRunSet(std::vector<ScoreBundle> bundles);

absl::StatusOr<RunSet> LoadRunSet(std::span<const std::filesystem::path> dirs);

}  // namespace mia_audit

#endif  // MIA_AUDIT_SCORE_BUNDLE_H_
