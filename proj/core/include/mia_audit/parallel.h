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

#ifndef MIA_AUDIT_PARALLEL_H_
#define MIA_AUDIT_PARALLEL_H_

#include <functional>

namespace mia_audit {

inline constexpr char kThreadsEnvVar[] = "MIA_AUDIT_THREADS";

// `requested` if positive, else MIA_AUDIT_THREADS if it parses to a positive
// integer, else 1.
int ResolveThreadCount(int requested);

// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
// handled exactly once; callers write results into per-index slots so the
// outcome does not depend on scheduling.
void ParallelFor(int n, int threads, const std::function<void(int)>& body);

}  // namespace mia_audit

#endif  // MIA_AUDIT_PARALLEL_H_
