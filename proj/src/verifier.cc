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

#include "dpv/verifier.h"

#include <algorithm>
#include <iterator>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "src/traversal.h"

namespace dpv {
namespace {

using internal::Explorer;
using internal::ExploreMode;
using internal::ExploreResult;
using internal::Frame;

absl::Status CheckQuery(const VerificationSession& session, RouterId src,
                        std::optional<RouterId> dst,
                        const StateVector& b_init) {
  const size_t n = session.routers.size();
  if (src >= n || (dst && *dst >= n)) {
    return absl::NotFoundError(
        absl::StrCat("UnknownRouter: id ", src >= n ? src : *dst));
  }
  if (b_init.size() != session.dimension()) {
    return absl::InvalidArgumentError(
        absl::StrCat("DimensionMismatch: b_init has ", b_init.size(),
                     " entries, session has ", session.dimension()));
  }
  return absl::OkStatus();
}

ExploreResult Explore(const VerificationSession& session, RouterId src,
                      const StateVector& b_init,
                      const TraversalOptions& options, ExploreMode mode,
                      TraversalStats* stats) {
  Explorer explorer(session, options, mode,
                    stats != nullptr && stats->track_ports);
  Frame start;
  start.path = {src};
  start.b = b_init;
  explorer.Run(start);
  ExploreResult result = std::move(explorer.result());
  if (stats != nullptr) {
    const bool track = stats->track_ports;
    *stats = std::move(result.stats);
    stats->track_ports = track;
  }
  return result;
}

// Verifies the affected classes of `scope` on the current network.
absl::StatusOr<BatchResult> VerifyScope(const Network& network,
                                        std::vector<Prefix> scope,
                                        RouterId src, RouterId dst,
                                        const TraversalOptions& options) {
  absl::StatusOr<VerificationSession> session =
      BuildSession(network, network.AffectedBy(scope));
  if (!session.ok()) return session.status();
  absl::StatusOr<ReachabilityReport> report =
      VerifyReachability(*session, src, dst, session->AllOnes(), options);
  if (!report.ok()) return report.status();
  BatchResult out;
  out.report = *std::move(report);
  out.s_affected = session->dimension();
  out.p_affected = session->affected.ports.size();
  scope.insert(scope.end(), session->affected.prefixes.begin(),
               session->affected.prefixes.end());
  out.scope = std::move(scope);
  return out;
}

}  // namespace

double PathResult::cumulative_l2() const {
  double sum = 0;
  for (const auto& [router, l2] : per_hop_errors) sum += l2;
  return sum;
}

absl::StatusOr<ReachabilityReport> VerifyReachability(
    const VerificationSession& session, RouterId src, RouterId dst,
    const StateVector& b_init, const TraversalOptions& options,
    TraversalStats* stats) {
  if (absl::Status s = CheckQuery(session, src, dst, b_init); !s.ok()) {
    return s;
  }
  ExploreMode mode;
  mode.dst = dst;
  mode.paths = true;
  ExploreResult r = Explore(session, src, b_init, options, mode, stats);
  ReachabilityReport report;
  report.reachable_bits = StateVector(session.dimension());
  for (const PathResult& p : r.paths) report.reachable_bits |= p.b_final;
  report.reachable = session.Decode(report.reachable_bits);
  report.total_paths = r.paths.size();
  report.per_path = std::move(r.paths);
  report.truncated = r.truncated;
  return report;
}

absl::StatusOr<std::vector<LoopReport>> DetectLoops(
    const VerificationSession& session, RouterId src,
    const StateVector& b_init, const TraversalOptions& options,
    TraversalStats* stats) {
  if (absl::Status s = CheckQuery(session, src, std::nullopt, b_init);
      !s.ok()) {
    return s;
  }
  ExploreMode mode;
  mode.loops = true;
  return Explore(session, src, b_init, options, mode, stats).loops;
}

absl::StatusOr<std::vector<BlackholeReport>> DetectBlackholes(
    const VerificationSession& session, RouterId src,
    const StateVector& b_init, const TraversalOptions& options,
    TraversalStats* stats) {
  if (absl::Status s = CheckQuery(session, src, std::nullopt, b_init);
      !s.ok()) {
    return s;
  }
  ExploreMode mode;
  mode.blackholes = true;
  ExploreResult r = Explore(session, src, b_init, options, mode, stats);
  std::vector<BlackholeReport> out;
  for (auto& [router, bits] : r.holes) {
    out.push_back({router, session.Decode(bits), std::move(bits)});
  }
  return out;
}

PolicyReport CheckPolicy(const ReachabilityReport& report,
                         const Policy& policy) {
  PolicyReport out;
  for (const PathResult& p : report.per_path) {
    if (policy.max_path_len && p.path.size() > *policy.max_path_len) {
      out.violations.push_back(
          {p.path, PolicyViolation::Kind::kTooLong, 0,
           absl::StrCat("path length ", p.path.size(), " exceeds ",
                        *policy.max_path_len)});
    }
    for (RouterId w : policy.waypoints) {
      if (std::find(p.path.begin(), p.path.end(), w) == p.path.end()) {
        out.violations.push_back({p.path,
                                  PolicyViolation::Kind::kMissedWaypoint, w,
                                  absl::StrCat("misses waypoint ", w)});
      }
    }
  }
  return out;
}

absl::StatusOr<BatchResult> BatchUpdate(Network& network,
                                        std::span<const UpdateEvent> updates,
                                        RouterId src, RouterId dst,
                                        const TraversalOptions& options) {
  std::vector<Prefix> scope;
  scope.reserve(updates.size());
  for (const UpdateEvent& u : updates) {
    if (absl::Status s = network.Apply(u); !s.ok()) return s;
    scope.push_back(u.prefix);
  }
  std::sort(scope.begin(), scope.end());
  scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
  return VerifyScope(network, std::move(scope), src, dst, options);
}

absl::StatusOr<WhatIfResult> WhatIfLinkDown(Network& network, PortRef end,
                                            RouterId src, RouterId dst,
                                            const TraversalOptions& options) {
  absl::StatusOr<std::vector<UpdateEvent>> deletions = network.FailLink(end);
  if (!deletions.ok()) return deletions.status();
  std::vector<Prefix> scope;
  for (const UpdateEvent& d : *deletions) scope.push_back(d.prefix);
  std::sort(scope.begin(), scope.end());
  scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
  absl::StatusOr<BatchResult> batch =
      VerifyScope(network, std::move(scope), src, dst, options);
  if (!batch.ok()) return batch.status();
  WhatIfResult out;
  out.triggered_deletions = deletions->size();
  out.batch = *std::move(batch);
  return out;
}

absl::StatusOr<UpdateCheck> CheckUpdates(Network& network,
                                         std::span<const UpdateEvent> updates,
                                         const TraversalOptions& options) {
  std::vector<Prefix> scope;
  std::vector<RouterId> origins;
  for (const UpdateEvent& u : updates) {
    if (absl::Status s = network.Apply(u); !s.ok()) return s;
    scope.push_back(u.prefix);
    origins.push_back(u.router);
  }
  std::sort(origins.begin(), origins.end());
  origins.erase(std::unique(origins.begin(), origins.end()), origins.end());
  absl::StatusOr<VerificationSession> session =
      BuildSession(network, network.AffectedBy(scope));
  if (!session.ok()) return session.status();

  UpdateCheck out;
  out.s_affected = session->dimension();
  out.p_affected = session->affected.ports.size();
  if (session->dimension() == 0) return out;
  const StateVector b_init = session->AllOnes();
  ExploreMode mode;
  mode.loops = true;
  mode.blackholes = true;
  std::map<RouterId, StateVector> holes;
  for (RouterId origin : origins) {
    ExploreResult r = Explore(*session, origin, b_init, options, mode,
                              nullptr);
    out.paths += r.terminals;
    for (LoopReport& l : r.loops) out.loops.push_back(std::move(l));
    for (auto& [router, bits] : r.holes) {
      auto [it, inserted] = holes.try_emplace(router, bits);
      if (!inserted) it->second |= bits;
    }
  }
  for (auto& [router, bits] : holes) {
    out.blackholes.push_back({router, session->Decode(bits), std::move(bits)});
  }
  return out;
}

void ReachabilityView::Erase(HeaderRange r) {
  auto it = spans_.upper_bound(r.lo);
  if (it != spans_.begin()) --it;
  while (it != spans_.end() && it->first <= r.hi) {
    const uint64_t lo = it->first;
    const uint64_t hi = it->second;
    if (hi < r.lo) {
      ++it;
      continue;
    }
    it = spans_.erase(it);
    if (lo < r.lo) spans_[lo] = r.lo - 1;
    if (hi > r.hi) {
      spans_[r.hi + 1] = hi;
      break;
    }
  }
}

void ReachabilityView::Insert(HeaderRange r) {
  Erase(r);
  uint64_t lo = r.lo;
  uint64_t hi = r.hi;
  auto next = spans_.upper_bound(lo);
  if (next != spans_.begin()) {
    auto prev = std::prev(next);
    if (lo != 0 && prev->second == lo - 1) {
      lo = prev->first;
      spans_.erase(prev);
    }
  }
  next = spans_.upper_bound(lo);
  if (hi != std::numeric_limits<uint64_t>::max() && next != spans_.end() &&
      next->first == hi + 1) {
    hi = next->second;
    spans_.erase(next);
  }
  spans_[lo] = hi;
}

void ReachabilityView::Update(std::span<const Prefix> scope,
                              std::span<const Prefix> reachable, int width) {
  for (const Prefix& p : scope) Erase(p.Range(width));
  for (const Prefix& p : reachable) Insert(p.Range(width));
}

std::vector<HeaderRange> ReachabilityView::ranges() const {
  std::vector<HeaderRange> out;
  out.reserve(spans_.size());
  for (const auto& [lo, hi] : spans_) out.push_back({lo, hi});
  return out;
}

bool ReachabilityView::Contains(uint64_t header) const {
  auto it = spans_.upper_bound(header);
  if (it == spans_.begin()) return false;
  --it;
  return header <= it->second;
}

}  // namespace dpv
