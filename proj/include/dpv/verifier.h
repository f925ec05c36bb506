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

#ifndef DPV_VERIFIER_H_
#define DPV_VERIFIER_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "dpv/network.h"
#include "dpv/prefix.h"
#include "dpv/session.h"
#include "dpv/state_vector.h"

namespace dpv {

struct TraversalOptions {
  // Terminal events (arrivals, exits, loops, dead ends) before the search
  // stops and marks its report truncated.
  size_t max_paths = 1'000'000;
  // Hops per path; 0 means the router count.
  size_t max_hops = 0;
  // Keep the per-hop state vectors of each path.
  bool record_hops = true;
};

struct PathResult {
  std::vector<RouterId> path;
  StateVector b_final;
  // b after each hop's projection, one per router before the last.
  std::vector<StateVector> hop_states;
  // l2 of the projection error at each router before the last.
  std::vector<std::pair<RouterId, double>> per_hop_errors;

  double cumulative_l2() const;
};

struct ReachabilityReport {
  std::vector<Prefix> reachable;
  StateVector reachable_bits;
  std::vector<PathResult> per_path;
  size_t total_paths = 0;
  bool truncated = false;
};

struct LoopReport {
  // Starts at the revisited router.
  std::vector<RouterId> cycle;
  std::vector<Prefix> headers;
  StateVector bits;
};

struct BlackholeReport {
  RouterId router = 0;
  std::vector<Prefix> headers;
  StateVector bits;
};

struct Policy {
  // Maximum routers on a path, endpoints included.
  std::optional<size_t> max_path_len;
  // Routers every path must traverse.
  std::vector<RouterId> waypoints;
};

struct PolicyViolation {
  enum class Kind { kTooLong, kMissedWaypoint };
  std::vector<RouterId> path;
  Kind kind = Kind::kTooLong;
  RouterId waypoint = 0;  // kMissedWaypoint only
  std::string constraint;
};

struct PolicyReport {
  std::vector<PolicyViolation> violations;
};

// Instrumentation filled by the traversal.
struct TraversalStats {
  size_t router_visits = 0;
  size_t terminals = 0;
  // Every (router, port) whose vector was read; only filled on request.
  bool track_ports = false;
  std::vector<PortRef> touched_ports;
};

// Depth-first search over simple paths from src. Each hop applies filter,
// then transform, then projection onto the port's forwarding vector;
// branches end when b becomes zero. b arriving at dst is recorded and
// reachable is the decode of the OR of those vectors.
// NotFound (UnknownRouter) for bad ids; DimensionMismatch for b_init.
absl::StatusOr<ReachabilityReport> VerifyReachability(
    const VerificationSession& session, RouterId src, RouterId dst,
    const StateVector& b_init, const TraversalOptions& options = {},
    TraversalStats* stats = nullptr);

// Loops: a hop whose next router is already on the path while b is still
// nonzero. One report per such hop, in search order.
absl::StatusOr<std::vector<LoopReport>> DetectLoops(
    const VerificationSession& session, RouterId src,
    const StateVector& b_init, const TraversalOptions& options = {},
    TraversalStats* stats = nullptr);

// Classes reaching a router (after filter and transform) that none of its
// ports forwards. One report per router, ordered by router id.
absl::StatusOr<std::vector<BlackholeReport>> DetectBlackholes(
    const VerificationSession& session, RouterId src,
    const StateVector& b_init, const TraversalOptions& options = {},
    TraversalStats* stats = nullptr);

PolicyReport CheckPolicy(const ReachabilityReport& report,
                         const Policy& policy);

// Applies every update, then verifies once over the union of the affected
// sets.
struct BatchResult {
  ReachabilityReport report;
  size_t s_affected = 0;
  size_t p_affected = 0;
  std::vector<Prefix> scope;
};
absl::StatusOr<BatchResult> BatchUpdate(Network& network,
                                        std::span<const UpdateEvent> updates,
                                        RouterId src, RouterId dst,
                                        const TraversalOptions& options = {});

// Removes the link at `end`, deletes the rules of both endpoints that used
// it, and verifies the deletions as one batch.
struct WhatIfResult {
  size_t triggered_deletions = 0;
  BatchResult batch;
};
absl::StatusOr<WhatIfResult> WhatIfLinkDown(
    Network& network, PortRef end, RouterId src, RouterId dst,
    const TraversalOptions& options = {});

// Per-update check used by the update stream: the update is applied, its
// affected sets computed, and the traversal from the updated routers looks
// for loops and blackholes.
struct UpdateCheck {
  size_t s_affected = 0;
  size_t p_affected = 0;
  size_t paths = 0;
  std::vector<LoopReport> loops;
  std::vector<BlackholeReport> blackholes;
};
absl::StatusOr<UpdateCheck> CheckUpdates(Network& network,
                                         std::span<const UpdateEvent> updates,
                                         const TraversalOptions& options = {});

// Header ranges known to be reachable for one (src, dst) pair, kept up to
// date from incremental reports.
class ReachabilityView {
 public:
  // Forgets everything inside `scope`, then marks `reachable` reachable.
  void Update(std::span<const Prefix> scope,
              std::span<const Prefix> reachable, int width);
  // Merged, sorted, disjoint.
  std::vector<HeaderRange> ranges() const;
  bool Contains(uint64_t header) const;

  friend bool operator==(const ReachabilityView& a,
                         const ReachabilityView& b) {
    return a.ranges() == b.ranges();
  }

 private:
  void Erase(HeaderRange r);
  void Insert(HeaderRange r);

  std::map<uint64_t, uint64_t> spans_;  // lo -> hi
};

}  // namespace dpv

#endif  // DPV_VERIFIER_H_
