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

#ifndef MIA_AUDIT_UNDEFINED_H_
#define MIA_AUDIT_UNDEFINED_H_

#include <cmath>
#include <limits>

namespace mia_audit {

// Marker for statistics that are mathematically undefined on their input
// (PPV with no positives, Jaccard of two empty sets, ...). Undefined values
// propagate; aggregation excludes and counts them rather than coercing.
inline constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

inline bool IsUndefined(double value) { return std::isnan(value); }

}  // namespace mia_audit

#endif  // MIA_AUDIT_UNDEFINED_H_
