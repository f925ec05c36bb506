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

#include "dpv/header_trie.h"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "dpv/prefix.h"

namespace dpv {

const char* NodeLabelName(NodeLabel label) {
  switch (label) {
    case NodeLabel::kNone:
      return "none";
    case NodeLabel::kSupernet:
      return "supernet";
    case NodeLabel::kAtomic:
      return "atomic";
    case NodeLabel::kIatomic:
      return "iatomic";
  }
  return "?";
}

struct HeaderTrie::Node {
  Prefix prefix;
  Node* parent = nullptr;
  std::unique_ptr<Node> child[2];
  std::vector<PortRef> owners;  // sorted, unique
  uint32_t anchors = 0;
  // Header nodes in this subtree, including this node.
  uint32_t headers_below = 0;
  int64_t leaf_id = -1;

  bool is_header() const { return !owners.empty() || anchors > 0; }
  bool is_leaf() const { return !child[0] && !child[1]; }

  NodeLabel label() const {
    if (is_leaf()) {
      if (leaf_id < 0) return NodeLabel::kNone;
      return is_header() ? NodeLabel::kAtomic : NodeLabel::kIatomic;
    }
    return is_header() ? NodeLabel::kSupernet : NodeLabel::kNone;
  }
};

absl::Status AffectedSets::Permute(std::span<const size_t> order) {
  const size_t m = leaves.size();
  if (order.size() != m) {
    return absl::InvalidArgumentError(absl::StrCat(
        "permutation has ", order.size(), " entries for ", m, " coordinates"));
  }
  std::vector<size_t> inverse(m, m);
  for (size_t i = 0; i < m; ++i) {
    if (order[i] >= m || inverse[order[i]] != m) {
      return absl::InvalidArgumentError("not a permutation");
    }
    inverse[order[i]] = i;
  }
  std::vector<LeafId> new_leaves(m);
  std::vector<Prefix> new_prefixes(m);
  for (size_t i = 0; i < m; ++i) {
    new_leaves[i] = leaves[order[i]];
    new_prefixes[i] = prefixes[order[i]];
  }
  leaves = std::move(new_leaves);
  prefixes = std::move(new_prefixes);
  for (PortAssignment& a : assignments) a.coordinate = inverse[a.coordinate];
  std::sort(assignments.begin(), assignments.end());
  return absl::OkStatus();
}

HeaderTrie::HeaderTrie(int width)
    : width_(width), root_(std::make_unique<Node>()) {}
HeaderTrie::~HeaderTrie() = default;
HeaderTrie::HeaderTrie(HeaderTrie&&) noexcept = default;
HeaderTrie& HeaderTrie::operator=(HeaderTrie&&) noexcept = default;

void HeaderTrie::set_deferred_completion(bool deferred) {
  const bool was_deferred = deferred_;
  deferred_ = deferred;
  if (was_deferred && !deferred) MaterializeIatomic();
}

// --- structural helpers ---------------------------------------------------

void HeaderTrie::AssignLeaf(Node* n) {
  n->leaf_id = static_cast<int64_t>(leaf_nodes_.size());
  leaf_nodes_.push_back(n);
}

// Keeps ids contiguous by moving the highest id into the freed slot.
void HeaderTrie::ReleaseLeaf(Node* n) {
  const size_t id = static_cast<size_t>(n->leaf_id);
  Node* last = leaf_nodes_.back();
  leaf_nodes_[id] = last;
  last->leaf_id = static_cast<int64_t>(id);
  leaf_nodes_.pop_back();
  n->leaf_id = -1;
}

HeaderTrie::Node* HeaderTrie::AddChild(Node* parent, int b) {
  if (parent->leaf_id >= 0) ReleaseLeaf(parent);
  auto child = std::make_unique<Node>();
  child->prefix = parent->prefix.Child(b);
  child->parent = parent;
  Node* raw = child.get();
  parent->child[b] = std::move(child);
  AssignLeaf(raw);
  ++node_count_;
  return raw;
}

void HeaderTrie::ReleaseSubtree(Node* n) {
  if (n->leaf_id >= 0) ReleaseLeaf(n);
  for (auto& c : n->child) {
    if (c) ReleaseSubtree(c.get());
  }
  --node_count_;
}

void HeaderTrie::RemoveChild(Node* parent, int b) {
  ReleaseSubtree(parent->child[b].get());
  parent->child[b].reset();
  if (parent->is_leaf() && parent != root_.get()) AssignLeaf(parent);
}

void HeaderTrie::Collapse(Node* n) {
  for (auto& c : n->child) {
    if (c) {
      ReleaseSubtree(c.get());
      c.reset();
    }
  }
  if (n != root_.get() && n->leaf_id < 0) AssignLeaf(n);
}

// The root is a leaf only when it carries a header (a zero-length rule).
void HeaderTrie::SyncRootLeaf() {
  Node* r = root_.get();
  const bool should = r->is_leaf() && r->is_header();
  if (should && r->leaf_id < 0) AssignLeaf(r);
  if (!should && r->leaf_id >= 0) ReleaseLeaf(r);
}

bool HeaderTrie::CoveredAbove(const Node* n) const {
  for (const Node* p = n->parent; p != nullptr; p = p->parent) {
    if (p->is_header()) return true;
  }
  return false;
}

void HeaderTrie::AdjustHeaderCounts(Node* n, int delta) {
  for (Node* x = n; x != nullptr; x = x->parent) {
    x->headers_below = static_cast<uint32_t>(
        static_cast<int64_t>(x->headers_below) + delta);
  }
}

int HeaderTrie::Reconcile(Node* n, bool covered_above) {
  const bool covered = covered_above || n->is_header();
  if (n->headers_below == 0) {
    if (!n->is_leaf()) Collapse(n);
    return 0;
  }
  int created = 0;
  for (int b = 0; b < 2; ++b) {
    Node* c = n->child[b].get();
    if (c == nullptr) continue;
    if (c->headers_below == 0) {
      if (covered) {
        if (!c->is_leaf()) Collapse(c);
      } else {
        RemoveChild(n, b);
      }
    } else {
      created += Reconcile(c, covered);
    }
  }
  if (covered && !n->is_leaf()) {
    for (int b = 0; b < 2; ++b) {
      if (!n->child[b]) {
        AddChild(n, b);
        ++created;
      }
    }
  }
  return created;
}

// --- mutation ---------------------------------------------------------------

HeaderTrie::Node* HeaderTrie::FindNode(const Prefix& prefix) const {
  if (prefix.length() > width_) return nullptr;
  Node* n = root_.get();
  for (int i = 0; i < prefix.length() && n != nullptr; ++i) {
    n = n->child[prefix.bit(i)].get();
  }
  return n;
}

absl::StatusOr<UpdateOutcome> HeaderTrie::AddHeaderRef(const Prefix& prefix,
                                                       const PortRef* owner) {
  if (prefix.length() > width_) {
    return absl::InvalidArgumentError(
        absl::StrCat("PrefixTooLong: ", prefix.ToBinary(),
                     " exceeds header width ", width_));
  }
  UpdateOutcome out;
  Node* n = root_.get();
  bool covered = n->is_header();
  for (int i = 0; i < prefix.length(); ++i) {
    const int b = prefix.bit(i);
    if (!n->child[b]) {
      const bool was_leaf = n->is_leaf();
      AddChild(n, b);
      ++out.created_nodes;
      if (!deferred_ && covered && was_leaf) {
        AddChild(n, 1 - b);
        ++out.created_nodes;
      }
    }
    n = n->child[b].get();
    covered = covered || n->is_header();
  }
  out.new_leaf = out.created_nodes > 0 && n->is_leaf();

  const bool was_header = n->is_header();
  if (owner != nullptr) {
    auto it = std::lower_bound(n->owners.begin(), n->owners.end(), *owner);
    if (it == n->owners.end() || *it != *owner) n->owners.insert(it, *owner);
    max_router_ = std::max(max_router_, owner->router);
  } else {
    ++n->anchors;
  }
  if (!was_header) {
    AdjustHeaderCounts(n, +1);
    if (!deferred_ && !n->is_leaf() && !CoveredAbove(n)) Reconcile(n, false);
    SyncRootLeaf();
  }
  return out;
}

absl::StatusOr<UpdateOutcome> HeaderTrie::DropHeaderRef(const Prefix& prefix,
                                                        const PortRef* owner) {
  Node* n = FindNode(prefix);
  if (n == nullptr) {
    return absl::NotFoundError(
        absl::StrCat("NotFound: no header ", prefix.ToBinary()));
  }
  if (owner != nullptr) {
    auto it = std::lower_bound(n->owners.begin(), n->owners.end(), *owner);
    if (it == n->owners.end() || *it != *owner) {
      return absl::NotFoundError(absl::StrCat(
          "NotFound: ", prefix.ToBinary(), " has no owner (", owner->router,
          ", ", owner->port, ")"));
    }
    n->owners.erase(it);
  } else {
    if (n->anchors == 0) {
      return absl::NotFoundError(
          absl::StrCat("NotFound: ", prefix.ToBinary(), " has no anchor"));
    }
    --n->anchors;
  }
  UpdateOutcome out;
  if (n->is_header()) return out;

  const size_t nodes_before = node_count_;
  AdjustHeaderCounts(n, -1);
  if (n->headers_below == 0) {
    Node* h = n;
    while (h->parent != nullptr && h->parent->headers_below == 0) {
      h = h->parent;
    }
    // A header left with nothing below it becomes a leaf itself.
    Node* p = h->parent;
    if (p != nullptr && p->is_header() && p->headers_below == 1) {
      Collapse(p);
    } else if (h == root_.get() || CoveredAbove(h)) {
      Collapse(h);
    } else {
      Node* parent = h->parent;
      RemoveChild(parent, parent->child[0].get() == h ? 0 : 1);
    }
  } else if (!deferred_ && !CoveredAbove(n)) {
    Reconcile(n, false);
  }
  SyncRootLeaf();
  out.created_nodes = static_cast<int>(node_count_) -
                      static_cast<int>(nodes_before);
  return out;
}

absl::StatusOr<UpdateOutcome> HeaderTrie::Insert(const Prefix& prefix,
                                                 PortRef owner) {
  return AddHeaderRef(prefix, &owner);
}

absl::StatusOr<UpdateOutcome> HeaderTrie::Delete(const Prefix& prefix,
                                                 PortRef owner) {
  return DropHeaderRef(prefix, &owner);
}

absl::StatusOr<UpdateOutcome> HeaderTrie::InsertAnchor(const Prefix& prefix) {
  return AddHeaderRef(prefix, nullptr);
}

absl::StatusOr<UpdateOutcome> HeaderTrie::RemoveAnchor(const Prefix& prefix) {
  return DropHeaderRef(prefix, nullptr);
}

int HeaderTrie::MaterializeIatomic() {
  int created = Reconcile(root_.get(), false);
  SyncRootLeaf();
  return created;
}

// --- affected sets ------------------------------------------------------------

AffectedSets HeaderTrie::CollectSubtree(const Node* target,
                                        size_t path_visits) const {
  AffectedSets sets;
  sets.nodes_visited = path_visits;

  // Owner lists from the root down to the current node; LPM for a leaf is
  // the deepest list holding a rule of that router.
  std::vector<const std::vector<PortRef>*> chain;
  for (const Node* p = target->parent; p != nullptr; p = p->parent) {
    if (!p->owners.empty()) chain.push_back(&p->owners);
  }
  std::reverse(chain.begin(), chain.end());

  std::vector<uint32_t> stamp(static_cast<size_t>(max_router_) + 1, 0);
  struct Frame {
    const Node* node;
    bool entered;
  };
  std::vector<Frame> stack = {{target, false}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    const Node* n = f.node;
    if (f.entered) {
      if (!n->owners.empty()) chain.pop_back();
      stack.pop_back();
      continue;
    }
    f.entered = true;
    ++sets.nodes_visited;
    if (!n->owners.empty()) chain.push_back(&n->owners);
    if (n->leaf_id >= 0) {
      const size_t coord = sets.leaves.size();
      sets.leaves.push_back(static_cast<LeafId>(n->leaf_id));
      sets.prefixes.push_back(n->prefix);
      const uint32_t generation = static_cast<uint32_t>(coord + 1);
      for (size_t i = chain.size(); i-- > 0;) {
        for (const PortRef& owner : *chain[i]) {
          if (stamp[owner.router] == generation) continue;
          stamp[owner.router] = generation;
          sets.assignments.push_back({owner, coord});
        }
      }
    }
    // Push right first so the left subtree is visited first.
    for (int b = 1; b >= 0; --b) {
      if (n->child[b]) stack.push_back({n->child[b].get(), false});
    }
  }
  std::sort(sets.assignments.begin(), sets.assignments.end());
  for (const PortAssignment& a : sets.assignments) {
    if (sets.ports.empty() || sets.ports.back() != a.owner) {
      sets.ports.push_back(a.owner);
    }
  }
  return sets;
}

void HeaderTrie::ResolveByParentWalk(AffectedSets& sets) const {
  std::vector<uint32_t> stamp(static_cast<size_t>(max_router_) + 1, 0);
  sets.assignments.clear();
  sets.ports.clear();
  for (size_t coord = 0; coord < sets.leaves.size(); ++coord) {
    const uint32_t generation = static_cast<uint32_t>(coord + 1);
    for (const Node* n = leaf_nodes_[sets.leaves[coord]]; n != nullptr;
         n = n->parent) {
      ++sets.nodes_visited;
      for (const PortRef& owner : n->owners) {
        if (stamp[owner.router] == generation) continue;
        stamp[owner.router] = generation;
        sets.assignments.push_back({owner, coord});
      }
    }
  }
  std::sort(sets.assignments.begin(), sets.assignments.end());
  for (const PortAssignment& a : sets.assignments) {
    if (sets.ports.empty() || sets.ports.back() != a.owner) {
      sets.ports.push_back(a.owner);
    }
  }
}

absl::StatusOr<AffectedSets> HeaderTrie::ComputeAffected(
    const Prefix& prefix) const {
  const Node* n = FindNode(prefix);
  if (n == nullptr) {
    return absl::NotFoundError(
        absl::StrCat("NodeMissing: no trie node for ", prefix.ToBinary()));
  }
  return CollectSubtree(n, static_cast<size_t>(prefix.length()));
}

AffectedSets HeaderTrie::AffectedAll() const {
  return CollectSubtree(root_.get(), 0);
}

std::vector<LeafId> HeaderTrie::LeavesOverlapping(const Prefix& prefix) const {
  std::vector<LeafId> out;
  if (prefix.length() > width_) return out;
  const Node* n = root_.get();
  for (int i = 0; i < prefix.length(); ++i) {
    if (n->leaf_id >= 0) {
      out.push_back(static_cast<LeafId>(n->leaf_id));
      return out;
    }
    n = n->child[prefix.bit(i)].get();
    if (n == nullptr) return out;
  }
  std::vector<const Node*> stack = {n};
  while (!stack.empty()) {
    const Node* x = stack.back();
    stack.pop_back();
    if (x->leaf_id >= 0) out.push_back(static_cast<LeafId>(x->leaf_id));
    for (int b = 1; b >= 0; --b) {
      if (x->child[b]) stack.push_back(x->child[b].get());
    }
  }
  return out;
}

AffectedSets HeaderTrie::AffectedForLeaves(std::vector<LeafId> leaves) const {
  std::sort(leaves.begin(), leaves.end(), [this](LeafId a, LeafId b) {
    return leaf_nodes_[a]->prefix < leaf_nodes_[b]->prefix;
  });
  leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());
  AffectedSets sets;
  sets.prefixes.reserve(leaves.size());
  for (LeafId id : leaves) sets.prefixes.push_back(leaf_nodes_[id]->prefix);
  sets.leaves = std::move(leaves);
  ResolveByParentWalk(sets);
  return sets;
}

AffectedSets HeaderTrie::AffectedCovering(
    std::span<const Prefix> prefixes) const {
  std::vector<LeafId> leaves;
  for (const Prefix& p : prefixes) {
    std::vector<LeafId> part = LeavesOverlapping(p);
    leaves.insert(leaves.end(), part.begin(), part.end());
  }
  return AffectedForLeaves(std::move(leaves));
}

// --- inspection ----------------------------------------------------------------

std::optional<NodeView> HeaderTrie::Find(const Prefix& prefix) const {
  const Node* n = FindNode(prefix);
  if (n == nullptr) return std::nullopt;
  NodeView view;
  view.prefix = n->prefix;
  view.label = n->label();
  view.owners = n->owners;
  view.anchors = n->anchors;
  if (n->leaf_id >= 0) view.leaf_id = static_cast<LeafId>(n->leaf_id);
  view.has_children = !n->is_leaf();
  return view;
}

std::vector<LeafInfo> HeaderTrie::Leaves() const {
  std::vector<LeafInfo> out;
  out.reserve(leaf_nodes_.size());
  std::vector<const Node*> stack = {root_.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (n->leaf_id >= 0) {
      out.push_back({static_cast<LeafId>(n->leaf_id), n->prefix, n->label()});
    }
    for (int b = 1; b >= 0; --b) {
      if (n->child[b]) stack.push_back(n->child[b].get());
    }
  }
  return out;
}

const Prefix& HeaderTrie::LeafPrefix(LeafId id) const {
  return leaf_nodes_[id]->prefix;
}

NodeLabel HeaderTrie::LeafLabel(LeafId id) const {
  return leaf_nodes_[id]->label();
}

std::optional<LeafId> HeaderTrie::LeafContaining(uint64_t header) const {
  const Node* n = root_.get();
  for (int i = 0; i < width_; ++i) {
    if (n->leaf_id >= 0) break;
    const int b = static_cast<int>((header >> (width_ - 1 - i)) & 1u);
    n = n->child[b].get();
    if (n == nullptr) return std::nullopt;
  }
  if (n->leaf_id < 0) return std::nullopt;
  return static_cast<LeafId>(n->leaf_id);
}

namespace {

template <typename NodeT>
bool SameShape(const NodeT* a, const NodeT* b) {
  if (a->prefix != b->prefix || a->owners != b->owners ||
      a->anchors != b->anchors || a->label() != b->label()) {
    return false;
  }
  for (int i = 0; i < 2; ++i) {
    if (static_cast<bool>(a->child[i]) != static_cast<bool>(b->child[i])) {
      return false;
    }
    if (a->child[i] && !SameShape(a->child[i].get(), b->child[i].get())) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool HeaderTrie::StructurallyEqual(const HeaderTrie& other) const {
  return width_ == other.width_ && node_count_ == other.node_count_ &&
         SameShape(root_.get(), other.root_.get());
}

absl::Status HeaderTrie::CheckInvariants() const {
  size_t nodes = 0;
  size_t leaves = 0;
  absl::Status status = absl::OkStatus();
  auto fail = [&](const Node* n, const char* what) {
    if (status.ok()) {
      status = absl::InternalError(
          absl::StrCat(what, " at ", n->prefix.ToBinary()));
    }
  };
  // Returns the number of header nodes in the subtree.
  auto walk = [&](auto&& self, const Node* n, bool covered_above) -> uint32_t {
    ++nodes;
    const bool covered = covered_above || n->is_header();
    uint32_t headers = n->is_header() ? 1 : 0;
    for (int b = 0; b < 2; ++b) {
      const Node* c = n->child[b].get();
      if (c == nullptr) continue;
      if (c->parent != n || c->prefix != n->prefix.Child(b)) {
        fail(c, "broken parent link");
      }
      headers += self(self, c, covered);
    }
    if (headers != n->headers_below) fail(n, "stale header count");
    const bool is_root = n == root_.get();
    const bool should_be_leaf = n->is_leaf() && (!is_root || n->is_header());
    if (should_be_leaf != (n->leaf_id >= 0)) fail(n, "leaf id mismatch");
    if (n->leaf_id >= 0) {
      ++leaves;
      if (static_cast<size_t>(n->leaf_id) >= leaf_nodes_.size() ||
          leaf_nodes_[n->leaf_id] != n) {
        fail(n, "leaf index mismatch");
      }
    }
    if (!deferred_) {
      if (!is_root && n->is_leaf() && !n->is_header() && !covered_above) {
        fail(n, "uncovered non-header leaf");
      }
      if (!n->is_leaf() && n->headers_below == 0) {
        fail(n, "header-free interior node");
      }
      if (covered && !n->is_leaf() && (!n->child[0] || !n->child[1])) {
        fail(n, "single-child node under a supernet");
      }
    }
    return headers;
  };
  walk(walk, root_.get(), false);
  if (nodes != node_count_) {
    return absl::InternalError(
        absl::StrCat("node count ", node_count_, " != ", nodes));
  }
  if (leaves != leaf_nodes_.size()) {
    return absl::InternalError("leaf ids are not contiguous");
  }
  return status;
}

}  // namespace dpv
