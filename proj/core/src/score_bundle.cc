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

#include "mia_audit/score_bundle.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <system_error>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "nlohmann/json.hpp"

namespace mia_audit {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr char kManifestFile[] = "manifest.json";
constexpr char kScoresFile[] = "scores.bin";
constexpr char kMembershipFile[] = "membership.bin";
constexpr char kModelStatsFile[] = "model_stats.csv";
constexpr char kModelStatsHeader[] =
    "model,train_loss,test_loss,train_acc,test_acc";

absl::StatusOr<std::string> ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open ", path.string()));
  }
  std::string contents((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
  if (in.bad()) {
    return absl::DataLossError(absl::StrCat("read failed: ", path.string()));
  }
  return contents;
}

absl::Status WriteFile(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot open for writing: ", path.string()));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) {
    return absl::DataLossError(absl::StrCat("write failed: ", path.string()));
  }
  return absl::OkStatus();
}

uint32_t ByteSwap32(uint32_t v) {
  return ((v & 0x000000FFu) << 24) | ((v & 0x0000FF00u) << 8) |
         ((v & 0x00FF0000u) >> 8) | ((v & 0xFF000000u) >> 24);
}

std::string EncodeF32LE(std::span<const float> values) {
  std::string out(values.size() * 4, '\0');
  for (size_t i = 0; i < values.size(); ++i) {
    uint32_t bits = std::bit_cast<uint32_t>(values[i]);
    if constexpr (std::endian::native == std::endian::big) {
      bits = ByteSwap32(bits);
    }
    std::memcpy(out.data() + 4 * i, &bits, 4);
  }
  return out;
}

std::vector<float> DecodeF32LE(const std::string& bytes) {
  std::vector<float> out(bytes.size() / 4);
  for (size_t i = 0; i < out.size(); ++i) {
    uint32_t bits;
    std::memcpy(&bits, bytes.data() + 4 * i, 4);
    if constexpr (std::endian::native == std::endian::big) {
      bits = ByteSwap32(bits);
    }
    out[i] = std::bit_cast<float>(bits);
  }
  return out;
}

// Required manifest key of the given JSON kind.
template <typename T>
absl::StatusOr<T> ManifestField(const json& manifest, const char* key) {
  auto it = manifest.find(key);
  if (it == manifest.end()) {
    return absl::InvalidArgumentError(
        absl::StrCat("manifest.json: missing key '", key, "'"));
  }
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("manifest.json: bad value for '", key, "': ", e.what()));
  }
}

absl::StatusOr<std::vector<ModelStats>> ParseModelStats(const std::string& text,
                                                        int n_models) {
  std::vector<std::string> lines = absl::StrSplit(text, '\n');
  while (!lines.empty() && absl::StripAsciiWhitespace(lines.back()).empty()) {
    lines.pop_back();
  }
  if (lines.empty() ||
      absl::StripAsciiWhitespace(lines[0]) != kModelStatsHeader) {
    return absl::InvalidArgumentError(absl::StrCat(
        "model_stats.csv: expected header '", kModelStatsHeader, "'"));
  }
  if (static_cast<int>(lines.size()) - 1 != n_models) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "model_stats.csv: %d rows for %d models", lines.size() - 1, n_models));
  }
  std::vector<ModelStats> stats(n_models);
  std::vector<bool> seen(n_models, false);
  for (size_t row = 1; row < lines.size(); ++row) {
    std::vector<absl::string_view> cells =
        absl::StrSplit(absl::StripAsciiWhitespace(lines[row]), ',');
    if (cells.size() != 5) {
      return absl::InvalidArgumentError(
          absl::StrFormat("model_stats.csv: row %d has %d cells, expected 5",
                          row, cells.size()));
    }
    int model;
    double values[4];
    bool ok = absl::SimpleAtoi(cells[0], &model);
    for (int c = 0; c < 4 && ok; ++c) {
      ok = absl::SimpleAtod(cells[c + 1], &values[c]);
    }
    if (!ok || model < 0 || model >= n_models || seen[model]) {
      return absl::InvalidArgumentError(
          absl::StrFormat("model_stats.csv: malformed row %d", row));
    }
    seen[model] = true;
    stats[model] = ModelStats{values[0], values[1], values[2], values[3]};
  }
  return stats;
}

std::string FormatModelStats(const std::vector<ModelStats>& stats) {
  std::string out = absl::StrCat(kModelStatsHeader, "\n");
  for (size_t m = 0; m < stats.size(); ++m) {
    const ModelStats& s = stats[m];
    absl::StrAppendFormat(&out, "%d,%.17g,%.17g,%.17g,%.17g\n", m, s.train_loss,
                          s.test_loss, s.train_acc, s.test_acc);
  }
  return out;
}

}  // namespace

int ScoreBundle::MemberCount(int sample) const {
  int count = 0;
  for (int m = 0; m < n_models; ++m) count += is_member(m, sample) ? 1 : 0;
  return count;
}

absl::Status ValidateBundle(const ScoreBundle& bundle) {
  if (bundle.n_samples <= 0 || bundle.n_models <= 0 ||
      bundle.n_augmentations <= 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimensions must be positive: N=%d M=%d A=%d", bundle.n_samples,
        bundle.n_models, bundle.n_augmentations));
  }
  const size_t expected_scores = static_cast<size_t>(bundle.n_models) *
                                 bundle.n_samples * bundle.n_augmentations;
  if (bundle.confidences.size() != expected_scores) {
    return absl::InvalidArgumentError(
        absl::StrFormat("scores: %d values, expected M*N*A = %d",
                        bundle.confidences.size(), expected_scores));
  }
  const size_t expected_mask =
      static_cast<size_t>(bundle.n_models) * bundle.n_samples;
  if (bundle.membership.size() != expected_mask) {
    return absl::InvalidArgumentError(
        absl::StrFormat("membership: %d entries, expected M*N = %d",
                        bundle.membership.size(), expected_mask));
  }
  for (int m = 0; m < bundle.n_models; ++m) {
    for (int n = 0; n < bundle.n_samples; ++n) {
      for (int a = 0; a < bundle.n_augmentations; ++a) {
        const float p = bundle.confidence(m, n, a);
        if (!std::isfinite(p) || p < 0.0f || p > 1.0f) {
          return absl::OutOfRangeError(absl::StrFormat(
              "confidence %g at (m=%d,n=%d,a=%d) is outside [0,1]", p, m, n,
              a));
        }
      }
      const uint8_t bit =
          bundle.membership[static_cast<size_t>(m) * bundle.n_samples + n];
      if (bit > 1) {
        return absl::OutOfRangeError(absl::StrFormat(
            "membership value %d at (m=%d,n=%d) is not 0/1", bit, m, n));
      }
    }
  }
  if (bundle.model_stats.has_value() &&
      static_cast<int>(bundle.model_stats->size()) != bundle.n_models) {
    return absl::InvalidArgumentError(
        absl::StrFormat("model_stats: %d records for %d models",
                        bundle.model_stats->size(), bundle.n_models));
  }
  if (bundle.balanced) {
    const int expected = bundle.n_models / 2;
    for (int n = 0; n < bundle.n_samples; ++n) {
      const int count = bundle.MemberCount(n);
      if (count != expected) {
        return absl::FailedPreconditionError(absl::StrFormat(
            "balanced bundle: sample %d is a member of %d models, expected %d",
            n, count, expected));
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<ScoreBundle> LoadBundle(const fs::path& dir) {
  absl::StatusOr<std::string> manifest_text = ReadFile(dir / kManifestFile);
  if (!manifest_text.ok()) return manifest_text.status();

  json manifest = json::parse(*manifest_text, nullptr, /*allow_exceptions=*/
                              false);
  if (manifest.is_discarded() || !manifest.is_object()) {
    return absl::InvalidArgumentError("manifest.json: not a JSON object");
  }

  ScoreBundle bundle;
  absl::StatusOr<int> version = ManifestField<int>(manifest, "format_version");
  if (!version.ok()) return version.status();
  if (*version != kBundleFormatVersion) {
    return absl::InvalidArgumentError(
        absl::StrCat("manifest.json: unsupported format_version ", *version));
  }
  absl::StatusOr<std::string> dtype =
      ManifestField<std::string>(manifest, "dtype");
  if (!dtype.ok()) return dtype.status();
  if (*dtype != "f32le") {
    return absl::InvalidArgumentError(
        absl::StrCat("manifest.json: unsupported dtype '", *dtype, "'"));
  }
  absl::StatusOr<int> n = ManifestField<int>(manifest, "n_samples");
  absl::StatusOr<int> m = ManifestField<int>(manifest, "n_models");
  absl::StatusOr<int> a = ManifestField<int>(manifest, "n_augmentations");
  absl::StatusOr<bool> balanced = ManifestField<bool>(manifest, "balanced");
  absl::StatusOr<std::string> run_id =
      ManifestField<std::string>(manifest, "run_id");
  absl::StatusOr<uint64_t> seed = ManifestField<uint64_t>(manifest, "seed");
  absl::StatusOr<bool> has_stats =
      ManifestField<bool>(manifest, "has_model_stats");
  for (const absl::Status& s :
       {n.status(), m.status(), a.status(), balanced.status(), run_id.status(),
        seed.status(), has_stats.status()}) {
    if (!s.ok()) return s;
  }
  if (*n <= 0 || *m <= 0 || *a <= 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "manifest.json: dimensions must be positive: N=%d M=%d A=%d", *n, *m,
        *a));
  }
  bundle.n_samples = *n;
  bundle.n_models = *m;
  bundle.n_augmentations = *a;
  bundle.balanced = *balanced;
  bundle.run_id = *run_id;
  bundle.seed = *seed;

  absl::StatusOr<std::string> scores = ReadFile(dir / kScoresFile);
  if (!scores.ok()) return scores.status();
  const size_t expected_scores = static_cast<size_t>(*m) * *n * *a * 4;
  if (scores->size() != expected_scores) {
    return absl::DataLossError(
        absl::StrFormat("scores.bin: %d bytes, manifest implies %d (M*N*A*4)",
                        scores->size(), expected_scores));
  }
  bundle.confidences = DecodeF32LE(*scores);

  absl::StatusOr<std::string> mask = ReadFile(dir / kMembershipFile);
  if (!mask.ok()) return mask.status();
  const size_t expected_mask = static_cast<size_t>(*m) * *n;
  if (mask->size() != expected_mask) {
    return absl::DataLossError(
        absl::StrFormat("membership.bin: %d bytes, manifest implies %d (M*N)",
                        mask->size(), expected_mask));
  }
  bundle.membership.assign(mask->begin(), mask->end());

  if (*has_stats) {
    absl::StatusOr<std::string> stats_text = ReadFile(dir / kModelStatsFile);
    if (!stats_text.ok()) return stats_text.status();
    absl::StatusOr<std::vector<ModelStats>> stats =
        ParseModelStats(*stats_text, *m);
    if (!stats.ok()) return stats.status();
    bundle.model_stats = *std::move(stats);
  }

  if (absl::Status s = ValidateBundle(bundle); !s.ok()) return s;
  return bundle;
}

absl::Status WriteBundle(const ScoreBundle& bundle, const fs::path& dir) {
  if (absl::Status s = ValidateBundle(bundle); !s.ok()) return s;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(absl::StrCat(
        "cannot create directory ", dir.string(), ": ", ec.message()));
  }
  json manifest = {
      {"format_version", kBundleFormatVersion},
      {"n_samples", bundle.n_samples},
      {"n_models", bundle.n_models},
      {"n_augmentations", bundle.n_augmentations},
      {"dtype", "f32le"},
      {"balanced", bundle.balanced},
      {"run_id", bundle.run_id},
      {"seed", bundle.seed},
      {"has_model_stats", bundle.model_stats.has_value()},
  };
  if (absl::Status s = WriteFile(dir / kManifestFile, manifest.dump(2) + "\n");
      !s.ok()) {
    return s;
  }
  if (absl::Status s =
          WriteFile(dir / kScoresFile, EncodeF32LE(bundle.confidences));
      !s.ok()) {
    return s;
  }
  if (absl::Status s = WriteFile(
          dir / kMembershipFile,
          std::string(bundle.membership.begin(), bundle.membership.end()));
      !s.ok()) {
    return s;
  }
  if (bundle.model_stats.has_value()) {
    return WriteFile(dir / kModelStatsFile,
                     FormatModelStats(*bundle.model_stats));
  }
  std::error_code ignored;
  fs::remove(dir / kModelStatsFile, ignored);
  return absl::OkStatus();
}

double ClampedLogit(double p, double eps) {
  const double q = std::clamp(p, eps, 1.0 - eps);
  return std::log(q / (1.0 - q));
}

absl::StatusOr<double> LogitTransform(double p, double eps) {
  if (!std::isfinite(p)) {
    return absl::InvalidArgumentError("logit of a non-finite confidence");
  }
  if (p < 0.0 || p > 1.0) {
    return absl::OutOfRangeError(
        absl::StrFormat("confidence %g is outside [0,1]", p));
  }
  if (!(eps > 0.0 && eps < 0.5)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("logit clamp %g must lie in (0, 0.5)", eps));
  }
  return ClampedLogit(p, eps);
}

absl::StatusOr<RunSet> MakeRunSet(std::vector<ScoreBundle> bundles) {
  if (bundles.empty()) {
    return absl::InvalidArgumentError("run set is empty");
  }
  std::set<std::string> ids;
  for (size_t r = 0; r < bundles.size(); ++r) {
    if (bundles[r].n_samples != bundles[0].n_samples) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "run %d ('%s') has N=%d, run 0 has N=%d", r, bundles[r].run_id,
          bundles[r].n_samples, bundles[0].n_samples));
    }
    if (!ids.insert(bundles[r].run_id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate run_id '", bundles[r].run_id, "'"));
    }
  }
  return RunSet{std::move(bundles)};
}

absl::StatusOr<RunSet> LoadRunSet(std::span<const fs::path> dirs) {
  std::vector<ScoreBundle> bundles;
  bundles.reserve(dirs.size());
  for (const fs::path& dir : dirs) {
    absl::StatusOr<ScoreBundle> bundle = LoadBundle(dir);
    if (!bundle.ok()) {
      return absl::Status(
          bundle.status().code(),
          absl::StrCat(dir.string(), ": ", bundle.status().message()));
    }
    bundles.push_back(*std::move(bundle));
  }
  return MakeRunSet(std::move(bundles));
}

}  // namespace mia_audit
