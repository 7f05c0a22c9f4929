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

#ifndef MIA_AUDIT_GAUSSIAN_TAIL_H_
#define MIA_AUDIT_GAUSSIAN_TAIL_H_

namespace mia_audit {

// log Pr[Z >= z] for a standard normal Z. Accurate across the whole real
// line: erfc-based near the centre, a continued fraction for the Mills
// ratio in the right tail, so the result stays finite far past the point
// where the probability itself underflows.
double LogNormalUpperTail(double z);

// Pr[Z >= z]; underflows to 0 beyond z ~ 38.
double NormalUpperTail(double z);

// log of the N(mu, sigma^2) density at x.
double LogNormalPdf(double x, double mu, double sigma);

}  // namespace mia_audit

#endif  // MIA_AUDIT_GAUSSIAN_TAIL_H_
