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

#ifndef DPV_HEADER_TRIE_H_
#define DPV_HEADER_TRIE_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpv/prefix.h"

namespace dpv {

using LeafId = uint32_t;

enum class NodeLabel { kNone, kSupernet, kAtomic, kIatomic };

const char* NodeLabelName(NodeLabel label);

struct UpdateOutcome {
  int created_nodes = 0;
  bool new_leaf = false;
};

// The winner of longest-prefix match at one router for one coordinate.
struct PortAssignment {
  PortRef owner;
  size_t coordinate = 0;

  friend auto operator<=>(const PortAssignment&,
                          const PortAssignment&) = default;
};

// Equivalence classes and (router, port) pairs whose behavior an update may
// change. Position i of `leaves`/`prefixes` is vector coordinate i.
struct AffectedSets {
  std::vector<LeafId> leaves;
  std::vector<Prefix> prefixes;
  // Sorted, unique; every entry wins LPM for at least one coordinate.
  std::vector<PortRef> ports;
  // Sorted by (owner, coordinate).
  std::vector<PortAssignment> assignments;
  // Trie nodes touched by the traversal that produced these sets.
  size_t nodes_visited = 0;

  size_t size() const { return leaves.size(); }
  bool empty() const { return leaves.empty(); }

  // Reorders coordinates: new coordinate i holds old coordinate order[i].
  absl::Status Permute(std::span<const size_t> order);
};

// Read-only view of one trie node.
struct NodeView {
  Prefix prefix;
  NodeLabel label = NodeLabel::kNone;
  std::vector<PortRef> owners;
  uint32_t anchors = 0;
  std::optional<LeafId> leaf_id;
  bool has_children = false;
};

struct LeafInfo {
  LeafId id = 0;
  Prefix prefix;
  NodeLabel label = NodeLabel::kAtomic;
};

// Network-wide binary tree over rule headers. Leaves (atomic + iatomic)
// partition the union of all inserted header ranges into equivalence
// classes; interior header nodes are supernets.
//
// A node is a "header" if some rule owner or anchor (ACL / transform
// header without a forwarding action) terminates there. Every mutation keeps
// the tree canonical: the shape depends only on the set of header nodes.
//
// Mutations require exclusive access; const members are safe to call
// concurrently.
class HeaderTrie {
 public:
  explicit HeaderTrie(int width);
  ~HeaderTrie();
  HeaderTrie(HeaderTrie&&) noexcept;
  HeaderTrie& operator=(HeaderTrie&&) noexcept;
  HeaderTrie(const HeaderTrie&) = delete;
  HeaderTrie& operator=(const HeaderTrie&) = delete;

  int width() const { return width_; }

  // With deferred completion, Insert only builds paths; call
  // MaterializeIatomic() before reading leaves. Used for bulk loads.
  // Turning deferral off materializes pending iatomic leaves.
  void set_deferred_completion(bool deferred);
  bool deferred_completion() const { return deferred_; }

  absl::StatusOr<UpdateOutcome> Insert(const Prefix& prefix, PortRef owner);
  absl::StatusOr<UpdateOutcome> Delete(const Prefix& prefix, PortRef owner);
  absl::StatusOr<UpdateOutcome> InsertAnchor(const Prefix& prefix);
  absl::StatusOr<UpdateOutcome> RemoveAnchor(const Prefix& prefix);

  // Completes every single-child node below a supernet with an iatomic
  // sibling (post-order) and collapses header-free subtrees. Returns the
  // number of iatomic leaves created.
  int MaterializeIatomic();

  // S/P affected for an update at `prefix`: leaves of the prefix node's
  // subtree and the owners on its root path and subtree that win LPM for
  // one of those leaves. NotFound if the prefix has no node.
  absl::StatusOr<AffectedSets> ComputeAffected(const Prefix& prefix) const;

  // Union of leaves overlapping any of `prefixes`. Prefixes without a node
  // contribute the leaf that covers them, if any.
  AffectedSets AffectedCovering(std::span<const Prefix> prefixes) const;
  AffectedSets AffectedForLeaves(std::vector<LeafId> leaves) const;
  AffectedSets AffectedAll() const;

  // Leaf ids inside `prefix` (in order), or the single leaf covering it.
  std::vector<LeafId> LeavesOverlapping(const Prefix& prefix) const;

  std::optional<NodeView> Find(const Prefix& prefix) const;
  // All leaves in order.
  std::vector<LeafInfo> Leaves() const;
  size_t leaf_count() const { return leaf_nodes_.size(); }
  size_t node_count() const { return node_count_; }
  const Prefix& LeafPrefix(LeafId id) const;
  NodeLabel LeafLabel(LeafId id) const;
  std::optional<LeafId> LeafContaining(uint64_t header) const;

  // Equal header sets, owners and shape; leaf ids are not compared.
  bool StructurallyEqual(const HeaderTrie& other) const;

  // Verifies shape, labels, counters and leaf-id contiguity.
  absl::Status CheckInvariants() const;

 private:
  struct Node;

  Node* FindNode(const Prefix& prefix) const;
  absl::StatusOr<UpdateOutcome> AddHeaderRef(const Prefix& prefix,
                                             const PortRef* owner);
  absl::StatusOr<UpdateOutcome> DropHeaderRef(const Prefix& prefix,
                                              const PortRef* owner);

  Node* AddChild(Node* parent, int b);
  void RemoveChild(Node* parent, int b);
  void Collapse(Node* n);
  void ReleaseSubtree(Node* n);
  void AssignLeaf(Node* n);
  void ReleaseLeaf(Node* n);
  void SyncRootLeaf();
  bool CoveredAbove(const Node* n) const;
  int Reconcile(Node* n, bool covered_above);
  void AdjustHeaderCounts(Node* n, int delta);

  AffectedSets CollectSubtree(const Node* target, size_t path_visits) const;
  void ResolveByParentWalk(AffectedSets& sets) const;

  int width_;
  bool deferred_ = false;
  std::unique_ptr<Node> root_;
  std::vector<Node*> leaf_nodes_;
  size_t node_count_ = 1;
  RouterId max_router_ = 0;
};

}  // namespace dpv

#endif  // DPV_HEADER_TRIE_H_
