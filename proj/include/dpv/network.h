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

#ifndef DPV_NETWORK_H_
#define DPV_NETWORK_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/container/btree_map.h"
#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpv/header_trie.h"
#include "dpv/network_spec.h"
#include "dpv/prefix.h"

namespace dpv {

// Routers and links. Ports without a link face hosts: traffic sent there
// leaves the network at that router.
class Topology {
 public:
  Topology() = default;
  explicit Topology(std::vector<std::string> names)
      : names_(std::move(names)) {}

  size_t router_count() const { return names_.size(); }
  const std::string& name(RouterId r) const { return names_[r]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<RouterId> Find(absl::string_view name) const;

  // AlreadyExists (DuplicateEdge) if either end is already linked.
  absl::Status AddLink(PortRef a, PortRef b);
  // NotFound (UnknownLink) unless `a` is linked.
  absl::StatusOr<PortRef> RemoveLink(PortRef a);

  std::optional<PortRef> Peer(PortRef end) const {
    auto it = links_.find(end);
    if (it == links_.end()) return std::nullopt;
    return it->second;
  }
  // Each link once, from its smaller end, sorted.
  std::vector<std::pair<PortRef, PortRef>> Links() const;
  // Linked ports of `r` with their peer routers, sorted by port.
  std::vector<std::pair<PortId, RouterId>> Neighbors(RouterId r) const;

 private:
  std::vector<std::string> names_;
  absl::flat_hash_map<PortRef, PortRef> links_;
};

enum class UpdateOp { kInsert, kDelete };

struct UpdateEvent {
  UpdateOp op = UpdateOp::kInsert;
  RouterId router = 0;
  Prefix prefix;
  PortId port = 0;
  uint64_t seq = 0;
  // Updates from the policy-routing source may touch protected prefixes.
  bool pbr = false;

  friend bool operator==(const UpdateEvent&, const UpdateEvent&) = default;
};

// The mutable data plane: rule tables, ACLs, transforms and the header trie
// over all of their prefixes. Single writer.
class Network {
 public:
  using Table = absl::btree_map<Prefix, PortId>;

  // Bulk loads the spec with deferred iatomic completion.
  // NotFound (UnknownRouter), AlreadyExists (DuplicateEdge) or
  // FailedPrecondition (ConflictingRule) on bad input.
  static absl::StatusOr<Network> FromSpec(const NetworkSpec& spec);

  Network(Network&&) = default;
  Network& operator=(Network&&) = default;

  int width() const { return trie_.width(); }
  size_t router_count() const { return topology_->router_count(); }
  const HeaderTrie& trie() const { return trie_; }
  const Topology& topology() const { return *topology_; }
  std::shared_ptr<const Topology> shared_topology() const {
    return topology_;
  }

  const Table& table(RouterId r) const { return tables_[r]; }
  const absl::btree_map<Prefix, bool>& acl(RouterId r) const {
    return acls_[r];
  }
  const absl::btree_map<Prefix, Prefix>& transforms(RouterId r) const {
    return transforms_[r];
  }
  bool has_transforms() const { return transform_count_ > 0; }
  bool has_acls() const { return acl_count_ > 0; }
  size_t rule_count() const { return rule_count_; }
  bool IsProtected(RouterId r, const Prefix& prefix) const;

  // Inserts or deletes one forwarding rule.
  // - PermissionDenied if a non-PBR update touches a protected prefix.
  // - FailedPrecondition (ConflictingRule) when inserting a prefix the
  //   router already forwards elsewhere.
  // - NotFound when deleting an absent rule.
  absl::Status Apply(const UpdateEvent& update);

  // Unlinks the port and deletes, from both ends, every rule whose action
  // is the failed port. Returns the deletions performed.
  absl::StatusOr<std::vector<UpdateEvent>> FailLink(PortRef end);

  // Classes whose behavior may change after updates on `prefixes`, closed
  // over transforms: when a transform's match or output overlaps the set,
  // both ranges join it.
  AffectedSets AffectedBy(std::span<const Prefix> prefixes) const;
  // Every class.
  AffectedSets AffectedAll() const;

  NetworkSpec ToSpec() const;

 private:
  explicit Network(int width) : trie_(width) {}

  HeaderTrie trie_;
  std::shared_ptr<const Topology> topology_;
  std::vector<Table> tables_;
  std::vector<absl::btree_map<Prefix, PortId>> pbr_;
  std::vector<absl::btree_map<Prefix, bool>> acls_;
  std::vector<absl::btree_map<Prefix, Prefix>> transforms_;
  size_t rule_count_ = 0;
  size_t acl_count_ = 0;
  size_t transform_count_ = 0;
};

}  // namespace dpv

#endif  // DPV_NETWORK_H_
