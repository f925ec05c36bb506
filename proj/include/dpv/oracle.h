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

#ifndef DPV_ORACLE_H_
#define DPV_ORACLE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "dpv/network_spec.h"
#include "dpv/prefix.h"

// Brute-force ground truth. Everything here works on individual header
// values and the raw NetworkSpec, and shares no code with the trie, the
// vector engine or the verifier.
namespace dpv::oracle {

inline constexpr int kMaxExhaustiveWidth = 16;

enum class Outcome { kDelivered, kBlackholed, kLooped, kFiltered };

const char* OutcomeName(Outcome outcome);

// One trajectory of one packet. Without transforms every header has exactly
// one trajectory; a transform rewrites a header into every header of its
// output range, and each of those continues separately.
struct PacketTrace {
  uint64_t header = 0;
  // Header value when the trajectory ended.
  uint64_t final_header = 0;
  std::vector<RouterId> path;
  Outcome outcome = Outcome::kDelivered;
  // Router where the outcome happened. For kDelivered this is the
  // destination, or the router whose host-facing port emitted the packet.
  RouterId at = 0;
  // Routers of the cycle for kLooped, starting at the revisited router.
  std::vector<RouterId> cycle;
};

struct SimulationOptions {
  // Stop trajectories at this router. Without it packets travel until
  // they leave through a host-facing port or are dropped.
  std::optional<RouterId> dst;
  // Headers injected at the source; empty means all 2^L headers.
  std::vector<HeaderRange> initial;
  bool record_traces = true;
};

struct SimulationResult {
  // Sorted header values that arrive at dst.
  std::vector<uint64_t> reachable;
  // Sorted unique (router, header) pairs with no matching forwarding rule.
  std::vector<std::pair<RouterId, uint64_t>> blackholes;
  std::vector<std::pair<RouterId, uint64_t>> filtered;
  bool looped = false;
  // Sorted unique cycles, each starting at its revisited router.
  std::vector<std::vector<RouterId>> cycles;
  // Ordered by initial header, then by discovery.
  std::vector<PacketTrace> traces;
  size_t count(Outcome outcome) const;
};

// Forwards every header hop by hop under longest-prefix match, ACLs
// (default permit, longest match wins) and transforms, in the order
// filter, transform, forward. The TTL is twice the router count; revisiting
// a router on the current trajectory is a loop. Headers are simulated in
// parallel; the output does not depend on the thread count.
// WidthTooLarge if spec.width > 16; UnknownRouter for bad ids.
absl::StatusOr<SimulationResult> SimulateAll(const NetworkSpec& spec,
                                             RouterId src,
                                             const SimulationOptions& options);
absl::StatusOr<SimulationResult> SimulateAll(const NetworkSpec& spec,
                                             RouterId src, RouterId dst);

// Splits the union of the prefix ranges into elementary intervals (cut at
// every range boundary) and each interval into maximal aligned power-of-two
// blocks. Every input prefix is then a union of cells. Sorted by lo.
std::vector<HeaderRange> IntervalPartition(std::span<const Prefix> prefixes,
                                           int width);

// Expands ranges into individual header values; width must be <= 16.
std::vector<uint64_t> ExpandHeaders(std::span<const HeaderRange> ranges);

}  // namespace dpv::oracle

#endif  // DPV_ORACLE_H_
