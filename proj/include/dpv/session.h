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

#ifndef DPV_SESSION_H_
#define DPV_SESSION_H_

#include <memory>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "dpv/header_trie.h"
#include "dpv/network.h"
#include "dpv/state_vector.h"
#include "dpv/vector_engine.h"

namespace dpv {

// Per-router slice of a session.
struct RouterVectors {
  // One vector per affected port of the router, sorted by port.
  std::vector<ForwardingVector> ports;
  // OR of `ports`; zero when the router has no affected port.
  StateVector any_port;
  std::optional<FilterVector> filter;
  std::optional<TransformMatrix> transform;
};

// Everything needed to verify the affected classes of one update (or
// batch), frozen at build time. Immutable, so queries may share it across
// threads.
struct VerificationSession {
  int width = 0;
  AffectedSets affected;
  std::vector<RouterVectors> routers;
  std::shared_ptr<const Topology> topology;

  size_t dimension() const { return affected.size(); }
  StateVector AllOnes() const { return StateVector::AllOnes(dimension()); }
  const ForwardingVector* Find(PortRef port) const;

  // b over the coordinates whose class lies inside one of `prefixes`.
  // InvalidArgument if a prefix only partially covers a class.
  absl::StatusOr<StateVector> Encode(std::span<const Prefix> prefixes) const;
  std::vector<Prefix> Decode(const StateVector& b) const;
};

// v_i^p[j] = 1 iff longest-prefix match at router i sends class j to p.
// Filters and transforms are restricted to the affected coordinates.
// InconsistentTable if an owner names a router outside the topology or a
// transform output falls outside the coordinates.
absl::StatusOr<VerificationSession> BuildSession(const Network& network,
                                                 AffectedSets affected);

}  // namespace dpv

#endif  // DPV_SESSION_H_
