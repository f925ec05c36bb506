// Copyright 2026 The dpverify Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPV_PARALLEL_H_
#define DPV_PARALLEL_H_

#include <vector>

#include "absl/status/statusor.h"
#include "dpv/session.h"
#include "dpv/state_vector.h"
#include "dpv/verifier.h"

namespace dpv {

struct ParallelOptions {
  // Depth of the search tree expanded serially before the subtrees are
  // handed to OpenMP threads.
  int split_depth = 3;
};

// Same contract and bit-identical output as VerifyReachability, including
// path order and truncation; subtrees below the split depth run in
// parallel.
absl::StatusOr<ReachabilityReport> VerifyReachabilityParallel(
    const VerificationSession& session, RouterId src, RouterId dst,
    const StateVector& b_init, const TraversalOptions& options = {},
    const ParallelOptions& parallel = {});

// reach[s][d] is the OR of b arriving at d over simple paths from s, with
// reach[s][s] = b_init. The parallel version splits sources over threads.
absl::StatusOr<std::vector<std::vector<StateVector>>> AllPairsReachability(
    const VerificationSession& session, const StateVector& b_init,
    const TraversalOptions& options = {});
absl::StatusOr<std::vector<std::vector<StateVector>>>
AllPairsReachabilityParallel(const VerificationSession& session,
                             const StateVector& b_init,
                             const TraversalOptions& options = {});

}  // namespace dpv

#endif  // DPV_PARALLEL_H_
