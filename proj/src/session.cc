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

#include "dpv/session.h"

#include <algorithm>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace dpv {
namespace {

// Longest entry of `table` whose key contains `p`.
template <typename Map>
const typename Map::mapped_type* LongestCovering(const Map& table,
                                                 const Prefix& p) {
  if (table.empty()) return nullptr;
  for (int len = p.length(); len >= 0; --len) {
    auto it = table.find(p.Truncate(len));
    if (it != table.end()) return &it->second;
  }
  return nullptr;
}

}  // namespace

const ForwardingVector* VerificationSession::Find(PortRef port) const {
  if (port.router >= routers.size()) return nullptr;
  const auto& ports = routers[port.router].ports;
  auto it = std::lower_bound(
      ports.begin(), ports.end(), port.port,
      [](const ForwardingVector& v, PortId p) { return v.owner.port < p; });
  if (it == ports.end() || it->owner.port != port.port) return nullptr;
  return &*it;
}

absl::StatusOr<StateVector> VerificationSession::Encode(
    std::span<const Prefix> prefixes) const {
  StateVector b(dimension());
  for (const Prefix& p : prefixes) {
    for (size_t j = 0; j < dimension(); ++j) {
      const Prefix& c = affected.prefixes[j];
      if (p.Contains(c)) {
        b.Set(j);
      } else if (c.Contains(p)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "prefix ", p.ToString(width), " splits class ",
            c.ToString(width)));
      }
    }
  }
  return b;
}

std::vector<Prefix> VerificationSession::Decode(const StateVector& b) const {
  std::vector<Prefix> out;
  b.ForEachSetBit([&](size_t j) { out.push_back(affected.prefixes[j]); });
  return out;
}

absl::StatusOr<VerificationSession> BuildSession(const Network& network,
                                                 AffectedSets affected) {
  VerificationSession s;
  s.width = network.width();
  s.topology = network.shared_topology();
  const size_t m = affected.size();
  const size_t n = network.router_count();
  s.routers.resize(n);

  for (const PortAssignment& a : affected.assignments) {
    if (a.owner.router >= n) {
      return absl::FailedPreconditionError(absl::StrCat(
          "InconsistentTable: rule owner router ", a.owner.router,
          " is not in the topology"));
    }
    auto& ports = s.routers[a.owner.router].ports;
    if (ports.empty() || ports.back().owner != a.owner) {
      ports.push_back({a.owner, StateVector(m)});
    }
    ports.back().bits.Set(a.coordinate);
  }
  for (RouterVectors& r : s.routers) {
    r.any_port = StateVector(m);
    for (const ForwardingVector& v : r.ports) r.any_port |= v.bits;
  }

  if (network.has_acls()) {
    for (RouterId r = 0; r < n; ++r) {
      const auto& acl = network.acl(r);
      if (acl.empty()) continue;
      FilterVector g{r, StateVector::AllOnes(m)};
      for (size_t j = 0; j < m; ++j) {
        const bool* permit = LongestCovering(acl, affected.prefixes[j]);
        if (permit != nullptr && !*permit) g.bits.Reset(j);
      }
      if (g.bits.Count() != m) s.routers[r].filter = std::move(g);
    }
  }

  if (network.has_transforms()) {
    absl::flat_hash_map<LeafId, size_t> coordinate;
    for (size_t j = 0; j < m; ++j) coordinate[affected.leaves[j]] = j;
    for (RouterId r = 0; r < n; ++r) {
      const auto& transforms = network.transforms(r);
      if (transforms.empty()) continue;
      TransformMatrix t(m);
      bool any = false;
      for (size_t k = 0; k < m; ++k) {
        const Prefix* output = LongestCovering(transforms, affected.prefixes[k]);
        if (output == nullptr) continue;
        std::vector<size_t> rows;
        for (LeafId leaf : network.trie().LeavesOverlapping(*output)) {
          auto it = coordinate.find(leaf);
          if (it == coordinate.end()) {
            return absl::FailedPreconditionError(absl::StrCat(
                "InconsistentTable: transform output ",
                output->ToString(s.width), " at router ", r,
                " lies outside the session"));
          }
          rows.push_back(it->second);
        }
        t.SetColumn(k, std::move(rows));
        any = true;
      }
      if (any) s.routers[r].transform = std::move(t);
    }
  }
  s.affected = std::move(affected);
  return s;
}

}  // namespace dpv
