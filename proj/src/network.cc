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

#include "dpv/network.h"

#include <algorithm>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_set.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace dpv {

std::optional<RouterId> Topology::Find(absl::string_view name) const {
  for (RouterId r = 0; r < names_.size(); ++r) {
    if (names_[r] == name) return r;
  }
  return std::nullopt;
}

absl::Status Topology::AddLink(PortRef a, PortRef b) {
  if (a.router >= names_.size() || b.router >= names_.size()) {
    return absl::NotFoundError("UnknownRouter: link endpoint");
  }
  if (a == b || links_.contains(a) || links_.contains(b)) {
    return absl::AlreadyExistsError(absl::StrCat(
        "DuplicateEdge: port ", links_.contains(a) || a == b ? a.port : b.port,
        " of router ",
        names_[links_.contains(a) || a == b ? a.router : b.router],
        " is already linked"));
  }
  links_[a] = b;
  links_[b] = a;
  return absl::OkStatus();
}

absl::StatusOr<PortRef> Topology::RemoveLink(PortRef a) {
  auto it = links_.find(a);
  if (it == links_.end()) {
    return absl::NotFoundError(absl::StrCat("UnknownLink: port ", a.port,
                                            " of router ", a.router));
  }
  const PortRef b = it->second;
  links_.erase(a);
  links_.erase(b);
  return b;
}

std::vector<std::pair<PortRef, PortRef>> Topology::Links() const {
  std::vector<std::pair<PortRef, PortRef>> out;
  for (const auto& [a, b] : links_) {
    if (a < b) out.push_back({a, b});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<PortId, RouterId>> Topology::Neighbors(
    RouterId r) const {
  std::vector<std::pair<PortId, RouterId>> out;
  for (const auto& [a, b] : links_) {
    if (a.router == r) out.push_back({a.port, b.router});
  }
  std::sort(out.begin(), out.end());
  return out;
}

absl::StatusOr<Network> Network::FromSpec(const NetworkSpec& spec) {
  if (spec.width < 1 || spec.width > kMaxHeaderWidth) {
    return absl::InvalidArgumentError(
        absl::StrCat("header width ", spec.width, " out of range"));
  }
  Network net(spec.width);
  const size_t n = spec.router_count();
  auto topology = std::make_shared<Topology>(spec.routers);
  for (const EdgeSpec& e : spec.edges) {
    if (absl::Status s = topology->AddLink({e.a, e.port_a}, {e.b, e.port_b});
        !s.ok()) {
      return s;
    }
  }
  net.topology_ = std::move(topology);
  net.tables_.resize(n);
  net.pbr_.resize(n);
  net.acls_.resize(n);
  net.transforms_.resize(n);

  auto check_router = [&](RouterId r) -> absl::Status {
    if (r < n) return absl::OkStatus();
    return absl::NotFoundError(absl::StrCat("UnknownRouter: id ", r));
  };

  net.trie_.set_deferred_completion(true);
  for (const auto* rules : {&spec.rules, &spec.pbr}) {
    const bool pbr = rules == &spec.pbr;
    for (const RuleSpec& r : *rules) {
      if (absl::Status s = check_router(r.router); !s.ok()) return s;
      if (absl::Status s = net.Apply({UpdateOp::kInsert, r.router, r.prefix,
                                      r.port, 0, /*pbr=*/true});
          !s.ok()) {
        return s;
      }
      if (pbr) net.pbr_[r.router][r.prefix] = r.port;
    }
  }
  for (const AclSpec& a : spec.acls) {
    if (absl::Status s = check_router(a.router); !s.ok()) return s;
    auto [it, inserted] = net.acls_[a.router].try_emplace(a.prefix, a.permit);
    if (!inserted) {
      if (it->second != a.permit) {
        return absl::FailedPreconditionError(
            absl::StrCat("ConflictingRule: ACL ", a.prefix.ToBinary(),
                         " at router ", spec.routers[a.router]));
      }
      continue;
    }
    if (auto s = net.trie_.InsertAnchor(a.prefix); !s.ok()) return s.status();
    ++net.acl_count_;
  }
  for (const TransformSpec& t : spec.transforms) {
    if (absl::Status s = check_router(t.router); !s.ok()) return s;
    auto [it, inserted] =
        net.transforms_[t.router].try_emplace(t.match, t.output);
    if (!inserted) {
      if (it->second != t.output) {
        return absl::FailedPreconditionError(
            absl::StrCat("ConflictingRule: transform ", t.match.ToBinary(),
                         " at router ", spec.routers[t.router]));
      }
      continue;
    }
    for (const Prefix& p : {t.match, t.output}) {
      if (auto s = net.trie_.InsertAnchor(p); !s.ok()) return s.status();
    }
    ++net.transform_count_;
  }
  net.trie_.set_deferred_completion(false);
  return net;
}

bool Network::IsProtected(RouterId r, const Prefix& prefix) const {
  const auto& protected_prefixes = pbr_[r];
  if (protected_prefixes.empty()) return false;
  for (int len = prefix.length(); len >= 0; --len) {
    if (protected_prefixes.contains(prefix.Truncate(len))) return true;
  }
  return false;
}

absl::Status Network::Apply(const UpdateEvent& u) {
  if (u.router >= tables_.size()) {
    return absl::NotFoundError(absl::StrCat("UnknownRouter: id ", u.router));
  }
  if (u.prefix.length() > width()) {
    return absl::InvalidArgumentError(
        absl::StrCat("PrefixTooLong: ", u.prefix.ToBinary()));
  }
  if (!u.pbr && IsProtected(u.router, u.prefix)) {
    return absl::PermissionDeniedError(absl::StrCat(
        "PBR-protected prefix ", u.prefix.ToString(width()), " at router ",
        topology_->name(u.router), " rejects non-PBR updates"));
  }
  Table& table = tables_[u.router];
  auto it = table.find(u.prefix);
  if (u.op == UpdateOp::kInsert) {
    if (it != table.end()) {
      if (it->second == u.port) return absl::OkStatus();
      return absl::FailedPreconditionError(absl::StrCat(
          "ConflictingRule: router ", topology_->name(u.router),
          " already forwards ", u.prefix.ToString(width()), " to port ",
          it->second));
    }
    if (auto s = trie_.Insert(u.prefix, {u.router, u.port}); !s.ok()) {
      return s.status();
    }
    table.emplace(u.prefix, u.port);
    ++rule_count_;
    return absl::OkStatus();
  }
  if (it == table.end() || it->second != u.port) {
    return absl::NotFoundError(absl::StrCat(
        "NotFound: router ", topology_->name(u.router), " has no rule ",
        u.prefix.ToString(width()), " -> ", u.port));
  }
  if (auto s = trie_.Delete(u.prefix, {u.router, u.port}); !s.ok()) {
    return s.status();
  }
  table.erase(it);
  pbr_[u.router].erase(u.prefix);
  --rule_count_;
  return absl::OkStatus();
}

absl::StatusOr<std::vector<UpdateEvent>> Network::FailLink(PortRef end) {
  auto topology = std::make_shared<Topology>(*topology_);
  absl::StatusOr<PortRef> peer = topology->RemoveLink(end);
  if (!peer.ok()) return peer.status();
  topology_ = std::move(topology);

  std::vector<UpdateEvent> deletions;
  for (const PortRef& side : {end, *peer}) {
    for (const auto& [prefix, port] : tables_[side.router]) {
      if (port == side.port) {
        deletions.push_back(
            {UpdateOp::kDelete, side.router, prefix, port, 0, true});
      }
    }
  }
  for (UpdateEvent& d : deletions) {
    if (absl::Status s = Apply(d); !s.ok()) return s;
  }
  return deletions;
}

AffectedSets Network::AffectedBy(std::span<const Prefix> prefixes) const {
  std::vector<LeafId> leaves;
  for (const Prefix& p : prefixes) {
    std::vector<LeafId> part = trie_.LeavesOverlapping(p);
    leaves.insert(leaves.end(), part.begin(), part.end());
  }
  if (transform_count_ > 0) {
    absl::flat_hash_set<LeafId> in_set(leaves.begin(), leaves.end());
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& router_transforms : transforms_) {
        for (const auto& [match, output] : router_transforms) {
          std::vector<LeafId> m = trie_.LeavesOverlapping(match);
          std::vector<LeafId> o = trie_.LeavesOverlapping(output);
          const auto hit = [&](LeafId id) { return in_set.contains(id); };
          if (std::none_of(m.begin(), m.end(), hit) &&
              std::none_of(o.begin(), o.end(), hit)) {
            continue;
          }
          for (const auto* part : {&m, &o}) {
            for (LeafId id : *part) {
              if (in_set.insert(id).second) {
                leaves.push_back(id);
                grew = true;
              }
            }
          }
        }
      }
    }
  }
  return trie_.AffectedForLeaves(std::move(leaves));
}

AffectedSets Network::AffectedAll() const { return trie_.AffectedAll(); }

NetworkSpec Network::ToSpec() const {
  NetworkSpec spec;
  spec.width = width();
  spec.routers = topology_->names();
  for (const auto& [a, b] : topology_->Links()) {
    spec.edges.push_back({a.router, a.port, b.router, b.port});
  }
  for (RouterId r = 0; r < tables_.size(); ++r) {
    for (const auto& [prefix, port] : tables_[r]) {
      if (pbr_[r].contains(prefix)) {
        spec.pbr.push_back({r, prefix, port});
      } else {
        spec.rules.push_back({r, prefix, port});
      }
    }
    for (const auto& [prefix, permit] : acls_[r]) {
      spec.acls.push_back({r, prefix, permit});
    }
    for (const auto& [match, output] : transforms_[r]) {
      spec.transforms.push_back({r, match, output});
    }
  }
  return spec;
}

}  // namespace dpv
