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

#include "dpv/rectifier.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpv/vector_engine.h"

namespace dpv {
namespace {

StateVector Ingress(const RouterVectors& rv, const StateVector& b) {
  StateVector t = b;
  if (rv.filter) t &= rv.filter->bits;
  if (rv.transform) t = TransformUnchecked(*rv.transform, t);
  return t;
}

// OR of the forwarding vectors of r's ports that lead to `next`.
StateVector Toward(const VerificationSession& s, RouterId r, RouterId next,
                   PortId* first_port) {
  StateVector v(s.dimension());
  bool found = false;
  for (const auto& [port, peer] : s.topology->Neighbors(r)) {
    if (peer != next) continue;
    if (!found && first_port != nullptr) *first_port = port;
    found = true;
    if (const ForwardingVector* f = s.Find({r, port}); f != nullptr) {
      v |= f->bits;
    }
  }
  return v;
}

absl::Status CheckRouters(size_t n, RouterId src, RouterId dst) {
  if (src >= n || dst >= n) {
    return absl::NotFoundError(
        absl::StrCat("UnknownRouter: id ", src >= n ? src : dst));
  }
  return absl::OkStatus();
}

std::vector<Prefix> ClassesOf(const VerificationSession& s,
                              const StateVector& b) {
  std::vector<Prefix> out;
  for (size_t k : b.SetBits()) out.push_back(s.affected.prefixes[k]);
  return out;
}

struct Plan {
  std::vector<RuleFix> fixes;
  StateVector arrived;
};

Plan PlanPath(const Network& network, const VerificationSession& s,
              const std::vector<RouterId>& path, const StateVector& b,
              bool allow_override) {
  const size_t hops = path.size() - 1;
  std::vector<StateVector> fix(hops);
  std::vector<PortId> port(hops, 0);
  bool transforms = false;
  StateVector cur = b;
  for (size_t i = 0; i < hops; ++i) {
    const RouterId r = path[i];
    const RouterVectors& rv = s.routers[r];
    transforms |= rv.transform.has_value();
    const StateVector t = Ingress(rv, cur);
    const StateVector out = t & Toward(s, r, path[i + 1], &port[i]);
    StateVector cand = t;
    cand.AndNot(out);
    if (!allow_override) {
      cand.AndNot(rv.any_port);
    } else {
      for (size_t k : cand.SetBits()) {
        if (network.IsProtected(r, s.affected.prefixes[k])) cand.Reset(k);
      }
    }
    fix[i] = cand;
    cur = out | cand;
  }
  Plan plan;
  plan.arrived = cur;
  for (size_t i = 0; i < hops; ++i) {
    if (!transforms) fix[i] &= cur;
    if (fix[i].None()) continue;
    std::vector<Prefix> classes = ClassesOf(s, fix[i]);
    for (const Prefix& p : MergePrefixes(classes)) {
      RuleFix f{path[i], p, port[i], {}};
      for (const Prefix& c : classes) {
        if (p.Contains(c)) f.rationale.push_back(c);
      }
      plan.fixes.push_back(std::move(f));
    }
  }
  return plan;
}

std::vector<Prefix> SortedUnique(std::vector<Prefix> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

std::vector<Prefix> MergePrefixes(std::vector<Prefix> disjoint) {
  std::set<Prefix> s(disjoint.begin(), disjoint.end());
  int longest = 0;
  for (const Prefix& p : s) longest = std::max(longest, p.length());
  for (int len = longest; len > 0; --len) {
    std::vector<Prefix> level;
    for (const Prefix& p : s) {
      if (p.length() == len && (p.bits() & 1) == 0) level.push_back(p);
    }
    for (const Prefix& p : level) {
      auto sibling = s.find(p.Parent().Child(1));
      if (sibling == s.end()) continue;
      s.erase(sibling);
      s.erase(p);
      s.insert(p.Parent());
    }
  }
  return {s.begin(), s.end()};
}

absl::StatusOr<std::vector<PathQuality>> PathQualities(
    const VerificationSession& session, RouterId src, RouterId dst,
    const StateVector& b_init, const PathQualityOptions& options) {
  const size_t n = session.routers.size();
  if (absl::Status s = CheckRouters(n, src, dst); !s.ok()) return s;
  if (b_init.size() != session.dimension()) {
    return absl::InvalidArgumentError(
        absl::StrCat("DimensionMismatch: b_init has ", b_init.size(),
                     " entries, session has ", session.dimension()));
  }
  const Topology& topo = *session.topology;
  constexpr size_t kFar = std::numeric_limits<size_t>::max();
  std::vector<size_t> dist(n, kFar);
  std::vector<std::vector<RouterId>> adj(n);
  for (RouterId r = 0; r < n; ++r) {
    for (const auto& [port, peer] : topo.Neighbors(r)) {
      if (std::find(adj[r].begin(), adj[r].end(), peer) == adj[r].end()) {
        adj[r].push_back(peer);
      }
    }
  }
  std::queue<RouterId> q;
  dist[dst] = 0;
  q.push(dst);
  while (!q.empty()) {
    const RouterId u = q.front();
    q.pop();
    for (RouterId v : adj[u]) {
      if (dist[v] == kFar) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  if (dist[src] == kFar) {
    return absl::NotFoundError(
        absl::StrCat("NoPath: ", topo.name(src), " cannot reach ",
                     topo.name(dst)));
  }
  const size_t bound = dist[src] + options.extra_hops;

  std::vector<PathQuality> out;
  std::vector<RouterId> path{src};
  std::vector<char> on_path(n, 0);
  on_path[src] = 1;
  auto dfs = [&](auto&& self, RouterId u) -> void {
    if (out.size() >= options.max_paths) return;
    if (u == dst) {
      PathQuality pq;
      pq.path = path;
      StateVector b = b_init;
      for (size_t i = 0; i + 1 < path.size(); ++i) {
        const StateVector t = Ingress(session.routers[path[i]], b);
        StateVector next = t & Toward(session, path[i], path[i + 1], nullptr);
        const double l2 =
            std::sqrt(static_cast<double>(t.Count() - next.Count()));
        pq.per_node.push_back({path[i], l2});
        pq.cumulative_l2 += l2;
        b = std::move(next);
      }
      pq.per_node.push_back({dst, 0.0});
      pq.b_final = std::move(b);
      out.push_back(std::move(pq));
      return;
    }
    for (RouterId v : adj[u]) {
      if (on_path[v] || path.size() + dist[v] > bound) continue;
      on_path[v] = 1;
      path.push_back(v);
      self(self, v);
      path.pop_back();
      on_path[v] = 0;
    }
  };
  dfs(dfs, src);
  std::stable_sort(out.begin(), out.end(),
                   [](const PathQuality& a, const PathQuality& b) {
                     if (a.cumulative_l2 != b.cumulative_l2) {
                       return a.cumulative_l2 < b.cumulative_l2;
                     }
                     if (a.path.size() != b.path.size()) {
                       return a.path.size() < b.path.size();
                     }
                     return a.path < b.path;
                   });
  return out;
}

absl::StatusOr<ReachabilityReport> ApplyFixes(
    Network& network, std::span<const RuleFix> fixes, RouterId src,
    RouterId dst, const TraversalOptions& options) {
  if (absl::Status s = CheckRouters(network.router_count(), src, dst);
      !s.ok()) {
    return s;
  }
  std::vector<Prefix> scope;
  for (const RuleFix& f : fixes) {
    const Network::Table& table = network.table(f.router);
    if (auto it = table.find(f.prefix); it != table.end()) {
      if (it->second == f.port) continue;
      UpdateEvent del{UpdateOp::kDelete, f.router, f.prefix, it->second};
      if (absl::Status s = network.Apply(del); !s.ok()) return s;
    }
    UpdateEvent ins{UpdateOp::kInsert, f.router, f.prefix, f.port};
    if (absl::Status s = network.Apply(ins); !s.ok()) return s;
    scope.push_back(f.prefix);
  }
  absl::StatusOr<VerificationSession> session =
      BuildSession(network, network.AffectedBy(SortedUnique(scope)));
  if (!session.ok()) return session.status();
  return VerifyReachability(*session, src, dst, session->AllOnes(), options);
}

absl::StatusOr<RectifyResult> Rectify(Network& network, RouterId src,
                                      RouterId dst,
                                      std::span<const Prefix> intent,
                                      const RectifyOptions& options) {
  if (absl::Status s = CheckRouters(network.router_count(), src, dst);
      !s.ok()) {
    return s;
  }
  const std::vector<Prefix> wanted =
      SortedUnique({intent.begin(), intent.end()});
  std::vector<Prefix> scope = wanted;
  RectifyResult result;
  size_t attempts = 0;
  while (true) {
    absl::StatusOr<VerificationSession> session =
        BuildSession(network, network.AffectedBy(scope));
    if (!session.ok()) return session.status();
    absl::StatusOr<StateVector> want = session->Encode(wanted);
    if (!want.ok()) return want.status();
    absl::StatusOr<ReachabilityReport> report =
        VerifyReachability(*session, src, dst, *want, options.traversal);
    if (!report.ok()) return report.status();
    StateVector missing = *want;
    missing.AndNot(report->reachable_bits);
    if (missing.None() || attempts > session->dimension()) {
      StateVector got = report->reachable_bits & *want;
      result.achieved = missing.None()
                            ? wanted
                            : MergePrefixes(ClassesOf(*session, got));
      result.report = *std::move(report);
      return result;
    }
    absl::StatusOr<std::vector<PathQuality>> paths = PathQualities(
        *session, src, dst, missing, options.paths);
    if (!paths.ok()) return paths.status();
    std::vector<RuleFix> chosen;
    for (const PathQuality& pq : *paths) {
      Plan plan = PlanPath(network, *session, pq.path, missing,
                           options.allow_override);
      if (!plan.fixes.empty() && (plan.arrived & missing).Any()) {
        chosen = std::move(plan.fixes);
        break;
      }
    }
    if (chosen.empty()) {
      if (result.fixes.empty()) {
        return absl::FailedPreconditionError(absl::StrCat(
            "RectificationImpossible: no rule can carry the intent from ",
            network.topology().name(src), " to ",
            network.topology().name(dst),
            " without changing existing forwarding"));
      }
      attempts = std::numeric_limits<size_t>::max() - 1;
      continue;
    }
    absl::StatusOr<ReachabilityReport> applied =
        ApplyFixes(network, chosen, src, dst, options.traversal);
    if (!applied.ok()) return applied.status();
    for (RuleFix& f : chosen) {
      scope.push_back(f.prefix);
      result.fixes.push_back(std::move(f));
    }
    scope = SortedUnique(std::move(scope));
    ++attempts;
  }
}

}  // namespace dpv
