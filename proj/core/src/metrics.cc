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

#include "mia_audit/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "absl/strings/str_format.h"
#include "mia_audit/undefined.h"

namespace mia_audit {

absl::StatusOr<RocCurve> ComputeRocCurve(std::span<const double> scores,
                                         std::span<const uint8_t> is_member) {
  if (scores.size() != is_member.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%d scores but %d membership labels", scores.size(), is_member.size()));
  }
  size_t pos = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      return absl::InvalidArgumentError(
          absl::StrFormat("score %d is not finite", i));
    }
    pos += is_member[i] ? 1 : 0;
  }
  const size_t neg = scores.size() - pos;
  if (pos == 0 || neg == 0) {
    return absl::FailedPreconditionError(
        "ROC needs both members and non-members");
  }
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0, scores[order.front()]});
  size_t tp = 0, fp = 0;
  size_t i = 0;
  while (i < order.size()) {
    const double value = scores[order[i]];
    while (i < order.size() && scores[order[i]] == value) {
      (is_member[order[i]] ? tp : fp) += 1;
      ++i;
    }
    const double next = i < order.size()
                            ? scores[order[i]]
                            : -std::numeric_limits<double>::infinity();
    curve.points.push_back(
        {static_cast<double>(fp) / neg, static_cast<double>(tp) / pos, next});
  }
  return curve;
}

double Auc(const RocCurve& curve) {
  double area = 0.0;
  for (size_t i = 1; i < curve.points.size(); ++i) {
    const RocPoint& a = curve.points[i - 1];
    const RocPoint& b = curve.points[i];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return area;
}

double TprAtFpr(const RocCurve& curve, double alpha,
                TprInterpolation interpolation) {
  double best = 0.0;
  size_t last = 0;
  for (size_t i = 0; i < curve.points.size(); ++i) {
    if (curve.points[i].fpr <= alpha) {
      best = std::max(best, curve.points[i].tpr);
      last = i;
    }
  }
  if (interpolation == TprInterpolation::kStep ||
      last + 1 >= curve.points.size()) {
    return best;
  }
  const RocPoint& a = curve.points[last];
  const RocPoint& b = curve.points[last + 1];
  if (b.fpr <= a.fpr) return best;
  const double t = (alpha - a.fpr) / (b.fpr - a.fpr);
  return a.tpr + t * (b.tpr - a.tpr);
}

double Ppv(double tpr, double fpr, double prior) {
  const double numerator = prior * tpr;
  const double denominator = numerator + (1.0 - prior) * fpr;
  if (denominator == 0.0) return kUndefined;
  return numerator / denominator;
}

absl::StatusOr<AggregateStat> Aggregate(std::span<const double> values) {
  if (values.empty()) {
    return absl::InvalidArgumentError("cannot aggregate an empty list");
  }
  AggregateStat stat;
  double sum = 0.0;
  for (double v : values) {
    if (IsUndefined(v)) {
      ++stat.n_undefined;
      continue;
    }
    sum += v;
    ++stat.n;
  }
  if (stat.n == 0) {
    stat.mean = kUndefined;
    stat.std = kUndefined;
    return stat;
  }
  stat.mean = sum / stat.n;
  if (stat.n > 1) {
    double ss = 0.0;
    for (double v : values) {
      if (!IsUndefined(v)) ss += (v - stat.mean) * (v - stat.mean);
    }
    stat.std = std::sqrt(ss / (stat.n - 1));
  }
  return stat;
}

absl::StatusOr<double> LossRatio(double train_loss, double test_loss) {
  if (!(train_loss > 0.0) || !std::isfinite(train_loss)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("train loss %g must be positive", train_loss));
  }
  if (!std::isfinite(test_loss) || test_loss < 0.0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "test loss %g must be finite and non-negative", test_loss));
  }
  return test_loss / train_loss;
}

}  // namespace mia_audit
