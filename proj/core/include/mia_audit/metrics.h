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

#ifndef MIA_AUDIT_METRICS_H_
#define MIA_AUDIT_METRICS_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace mia_audit {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  // The rule score > threshold lands on this vertex. The origin uses the
  // maximum score, the (1,1) vertex uses -inf.
  double threshold = 0.0;
};

// Vertices from (0,0) to (1,1), one per distinct score plus the origin.
struct RocCurve {
  std::vector<RocPoint> points;
};

absl::StatusOr<RocCurve> ComputeRocCurve(std::span<const double> scores,
                                         std::span<const uint8_t> is_member);

// Trapezoidal area under the curve.
double Auc(const RocCurve& curve);

enum class TprInterpolation {
  // TPR at the largest achieved FPR <= alpha; always realisable by an
  // actual threshold.
  kStep,
  // Linear between the two vertices bracketing alpha.
  kLinear,
};

double TprAtFpr(const RocCurve& curve, double alpha,
                TprInterpolation interpolation = TprInterpolation::kStep);

// pi * TPR' / (pi * TPR' + (1 - pi) * FPR'); kUndefined when TPR' = FPR' = 0.
double Ppv(double tpr, double fpr, double prior);

struct AggregateStat {
  double mean = 0.0;
  // n - 1 denominator; 0 when n == 1.
  double std = 0.0;
  int n = 0;
  // Undefined markers excluded from mean/std.
  int n_undefined = 0;
};

// Fails on empty input. When every value is undefined, mean and std are
// undefined and n is 0.
absl::StatusOr<AggregateStat> Aggregate(std::span<const double> values);

// test_loss / train_loss.
absl::StatusOr<double> LossRatio(double train_loss, double test_loss);

}  // namespace mia_audit

#endif  // MIA_AUDIT_METRICS_H_
