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

#ifndef DPV_RECTIFIER_H_
#define DPV_RECTIFIER_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "dpv/network.h"
#include "dpv/prefix.h"
#include "dpv/session.h"
#include "dpv/state_vector.h"
#include "dpv/verifier.h"

namespace dpv {

struct PathQuality {
  std::vector<RouterId> path;
  double cumulative_l2 = 0;
  // One entry per router on the path; the destination scores 0.
  std::vector<std::pair<RouterId, double>> per_node;
  StateVector b_final;
};

struct PathQualityOptions {
  // Candidate paths may be this many hops longer than the shortest one.
  size_t extra_hops = 2;
  size_t max_paths = 10'000;
};

// Scores every simple src->dst path within the hop bound by pushing b_init
// along it and summing the l2 norms of the projection errors. Sorted by
// cumulative_l2, then length, then router ids.
// NotFound (NoPath) when dst cannot be reached in the topology.
absl::StatusOr<std::vector<PathQuality>> PathQualities(
    const VerificationSession& session, RouterId src, RouterId dst,
    const StateVector& b_init, const PathQualityOptions& options = {});

struct RuleFix {
  RouterId router = 0;
  Prefix prefix;
  PortId port = 0;
  // Classes the rule lets through.
  std::vector<Prefix> rationale;

  friend bool operator==(const RuleFix& a, const RuleFix& b) {
    return a.router == b.router && a.prefix == b.prefix && a.port == b.port;
  }
};

struct RectifyOptions {
  PathQualityOptions paths;
  TraversalOptions traversal;
  // Also redirect classes a router already forwards elsewhere. Off by
  // default: it may break traffic of pairs that were never checked.
  bool allow_override = false;
};

struct RectifyResult {
  std::vector<RuleFix> fixes;
  std::vector<Prefix> achieved;
  ReachabilityReport report;
};

// Adds rules so that the intent headers reach dst from src. Without
// allow_override a rule only ever covers headers its router used to drop.
// - InvalidArgument if an intent prefix splits a class.
// - FailedPrecondition (RectificationImpossible) if no rule can be added.
// - NotFound (NoPath).
absl::StatusOr<RectifyResult> Rectify(Network& network, RouterId src,
                                      RouterId dst,
                                      std::span<const Prefix> intent,
                                      const RectifyOptions& options = {});

// Installs the fixes, replacing a same-prefix rule if one exists, then
// verifies src->dst over the classes the fixes touch.
absl::StatusOr<ReachabilityReport> ApplyFixes(
    Network& network, std::span<const RuleFix> fixes, RouterId src,
    RouterId dst, const TraversalOptions& options = {});

// Fewest prefixes whose union is exactly the union of `disjoint`.
std::vector<Prefix> MergePrefixes(std::vector<Prefix> disjoint);

}  // namespace dpv

#endif  // DPV_RECTIFIER_H_
