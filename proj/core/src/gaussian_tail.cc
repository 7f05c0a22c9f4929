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

#include "mia_audit/gaussian_tail.h"

#include <cmath>
#include <numbers>

namespace mia_audit {
namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // log(2*pi)/2
// Below this z the erfc route keeps full relative precision.
constexpr double kContinuedFractionCutoff = 5.0;

// Mills-ratio continued fraction
//   Q(z) = pdf(z) / (z + 1/(z + 2/(z + 3/(z + ...)))),
// evaluated with the modified Lentz algorithm. Returns the denominator.
double MillsDenominator(double z) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  double f = z;
  double c = z;
  double d = 0.0;
  for (int k = 1; k < 500; ++k) {
    d = z + k * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = z + k / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return f;
}

}  // namespace

double LogNormalUpperTail(double z) {
  if (std::isnan(z)) return z;
  if (z == INFINITY) return -INFINITY;
  if (z < 0.0) {
    return std::log1p(-0.5 * std::erfc(-z / std::numbers::sqrt2));
  }
  if (z < kContinuedFractionCutoff) {
    return std::log(0.5 * std::erfc(z / std::numbers::sqrt2));
  }
  return -0.5 * z * z - kHalfLog2Pi - std::log(MillsDenominator(z));
}

double NormalUpperTail(double z) {
  if (z < kContinuedFractionCutoff) {
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
  }
  return std::exp(LogNormalUpperTail(z));
}

double LogNormalPdf(double x, double mu, double sigma) {
  const double u = (x - mu) / sigma;
  return -kHalfLog2Pi - std::log(sigma) - 0.5 * u * u;
}

}  // namespace mia_audit
