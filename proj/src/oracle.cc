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

#include "dpv/oracle.h"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_set.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "dpv/network_spec.h"
#include "dpv/prefix.h"

namespace dpv::oracle {
namespace {

using Wide = unsigned __int128;

// Range arithmetic is done here rather than through Prefix so that the
// oracle stays independent of the code it checks.
struct Span {
  uint64_t lo;
  uint64_t hi;
  int len;
};

Span ToSpan(const Prefix& p, int width) {
  const int free_bits = width - p.length();
  const uint64_t lo = free_bits >= 64 ? 0 : p.bits() << free_bits;
  const uint64_t mask =
      free_bits >= 64 ? ~uint64_t{0} : (uint64_t{1} << free_bits) - 1;
  return {lo, lo | mask, p.length()};
}

struct Entry {
  Span span;
  uint64_t value;  // port, permit flag or output-range index
};

// Longest matching entry, or nullptr.
const Entry* Longest(const std::vector<Entry>& entries, uint64_t h) {
  const Entry* best = nullptr;
  for (const Entry& e : entries) {
    if (h < e.span.lo || h > e.span.hi) continue;
    if (best == nullptr || e.span.len > best->span.len) best = &e;
  }
  return best;
}

struct Model {
  int width = 0;
  size_t ttl = 0;
  std::optional<RouterId> dst;
  bool has_transforms = false;
  std::vector<std::vector<Entry>> fib;
  std::vector<std::vector<Entry>> acl;
  std::vector<std::vector<Entry>> xform;
  std::vector<Span> xform_outputs;
  std::map<std::pair<RouterId, PortId>, RouterId> next_hop;
};

struct Local {
  std::vector<uint64_t> reachable;
  std::vector<std::pair<RouterId, uint64_t>> blackholes;
  std::vector<std::pair<RouterId, uint64_t>> filtered;
  std::vector<std::vector<RouterId>> cycles;
  std::vector<PacketTrace> traces;
};

class Walker {
 public:
  Walker(const Model& model, bool record, uint64_t origin, Local& out)
      : model_(model), record_(record), origin_(origin), out_(out),
        visited_(model.fib.size(), 0) {}

  void Run(RouterId src) {
    path_.push_back(src);
    visited_[src] = 1;
    Arrive(src, origin_);
  }

 private:
  void Trace(uint64_t h, Outcome outcome, RouterId at,
             std::vector<RouterId> cycle = {}) {
    if (!record_) return;
    out_.traces.push_back(
        {origin_, h, path_, outcome, at, std::move(cycle)});
  }

  void Arrive(RouterId r, uint64_t h) {
    if (model_.dst && r == *model_.dst) {
      out_.reachable.push_back(h);
      Trace(h, Outcome::kDelivered, r);
      return;
    }
    if (model_.has_transforms) {
      std::vector<uint64_t> key(visited_.size() / 64 + 1, 0);
      for (size_t i = 0; i < visited_.size(); ++i) {
        if (visited_[i]) key[i / 64] |= uint64_t{1} << (i % 64);
      }
      if (!seen_.insert({r, h, std::move(key)}).second) return;
    }
    if (const Entry* a = Longest(model_.acl[r], h); a && a->value == 0) {
      out_.filtered.push_back({r, h});
      Trace(h, Outcome::kFiltered, r);
      return;
    }
    if (const Entry* x = Longest(model_.xform[r], h)) {
      const Span& o = model_.xform_outputs[x->value];
      for (uint64_t h2 = o.lo;; ++h2) {
        Forward(r, h2);
        if (h2 == o.hi) break;
      }
      return;
    }
    Forward(r, h);
  }

  void Forward(RouterId r, uint64_t h) {
    const Entry* rule = Longest(model_.fib[r], h);
    if (rule == nullptr) {
      out_.blackholes.push_back({r, h});
      Trace(h, Outcome::kBlackholed, r);
      return;
    }
    auto it = model_.next_hop.find({r, static_cast<PortId>(rule->value)});
    if (it == model_.next_hop.end()) {
      Trace(h, Outcome::kDelivered, r);
      return;
    }
    const RouterId next = it->second;
    if (visited_[next] || path_.size() >= model_.ttl) {
      std::vector<RouterId> cycle;
      auto pos = std::find(path_.begin(), path_.end(), next);
      cycle.assign(pos, path_.end());
      out_.cycles.push_back(cycle);
      Trace(h, Outcome::kLooped, r, std::move(cycle));
      return;
    }
    path_.push_back(next);
    visited_[next] = 1;
    Arrive(next, h);
    visited_[next] = 0;
    path_.pop_back();
  }

  const Model& model_;
  bool record_;
  uint64_t origin_;
  Local& out_;
  std::vector<char> visited_;
  std::vector<RouterId> path_;
  absl::flat_hash_set<std::tuple<RouterId, uint64_t, std::vector<uint64_t>>>
      seen_;
};

template <typename T>
void SortUnique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

const char* OutcomeName(Outcome outcome) {
  switch (outcome) {
    case Outcome::kDelivered:
      return "delivered";
    case Outcome::kBlackholed:
      return "blackholed";
    case Outcome::kLooped:
      return "looped";
    case Outcome::kFiltered:
      return "filtered";
  }
  return "?";
}

size_t SimulationResult::count(Outcome outcome) const {
  return std::count_if(traces.begin(), traces.end(),
                       [&](const PacketTrace& t) {
                         return t.outcome == outcome;
                       });
}

absl::StatusOr<SimulationResult> SimulateAll(const NetworkSpec& spec,
                                             RouterId src,
                                             const SimulationOptions& options) {
  if (spec.width > kMaxExhaustiveWidth) {
    return absl::InvalidArgumentError(
        absl::StrCat("WidthTooLarge: exhaustive simulation needs L <= ",
                     kMaxExhaustiveWidth, ", got ", spec.width));
  }
  const size_t n = spec.router_count();
  if (src >= n || (options.dst && *options.dst >= n)) {
    return absl::NotFoundError("UnknownRouter");
  }

  Model model;
  model.width = spec.width;
  model.ttl = 2 * n;
  model.dst = options.dst;
  model.fib.resize(n);
  model.acl.resize(n);
  model.xform.resize(n);
  for (const auto* rules : {&spec.rules, &spec.pbr}) {
    for (const RuleSpec& r : *rules) {
      model.fib[r.router].push_back({ToSpan(r.prefix, spec.width), r.port});
    }
  }
  for (const AclSpec& a : spec.acls) {
    model.acl[a.router].push_back(
        {ToSpan(a.prefix, spec.width), a.permit ? 1u : 0u});
  }
  for (const TransformSpec& t : spec.transforms) {
    model.xform[t.router].push_back(
        {ToSpan(t.match, spec.width), model.xform_outputs.size()});
    model.xform_outputs.push_back(ToSpan(t.output, spec.width));
    model.has_transforms = true;
  }
  for (const EdgeSpec& e : spec.edges) {
    model.next_hop[{e.a, e.port_a}] = e.b;
    model.next_hop[{e.b, e.port_b}] = e.a;
  }

  std::vector<uint64_t> headers;
  if (options.initial.empty()) {
    const uint64_t count = uint64_t{1} << spec.width;
    headers.reserve(count);
    for (uint64_t h = 0; h < count; ++h) headers.push_back(h);
  } else {
    headers = ExpandHeaders(options.initial);
    SortUnique(headers);
  }

  std::vector<Local> locals(headers.size());
  const int64_t total = static_cast<int64_t>(headers.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (int64_t i = 0; i < total; ++i) {
    Walker(model, options.record_traces, headers[i], locals[i]).Run(src);
  }

  SimulationResult result;
  for (Local& l : locals) {
    result.reachable.insert(result.reachable.end(), l.reachable.begin(),
                            l.reachable.end());
    result.blackholes.insert(result.blackholes.end(), l.blackholes.begin(),
                             l.blackholes.end());
    result.filtered.insert(result.filtered.end(), l.filtered.begin(),
                           l.filtered.end());
    for (auto& c : l.cycles) result.cycles.push_back(std::move(c));
    for (auto& t : l.traces) result.traces.push_back(std::move(t));
  }
  SortUnique(result.reachable);
  SortUnique(result.blackholes);
  SortUnique(result.filtered);
  SortUnique(result.cycles);
  result.looped = !result.cycles.empty();
  return result;
}

absl::StatusOr<SimulationResult> SimulateAll(const NetworkSpec& spec,
                                             RouterId src, RouterId dst) {
  SimulationOptions options;
  options.dst = dst;
  return SimulateAll(spec, src, options);
}

std::vector<HeaderRange> IntervalPartition(std::span<const Prefix> prefixes,
                                           int width) {
  // Sweep over range boundaries; ends are exclusive and may reach 2^64.
  std::vector<std::pair<Wide, int>> events;
  for (const Prefix& p : prefixes) {
    const Span s = ToSpan(p, width);
    events.push_back({s.lo, +1});
    events.push_back({Wide{s.hi} + 1, -1});
  }
  std::sort(events.begin(), events.end());

  std::vector<HeaderRange> cells;
  int depth = 0;
  for (size_t i = 0; i < events.size();) {
    const Wide at = events[i].first;
    while (i < events.size() && events[i].first == at) {
      depth += events[i].second;
      ++i;
    }
    if (depth == 0 || i == events.size()) continue;
    Wide lo = at;
    const Wide end = events[i].first;
    while (lo < end) {
      Wide block = 1;
      while (lo % (block * 2) == 0 && lo + block * 2 <= end) block *= 2;
      cells.push_back({static_cast<uint64_t>(lo),
                       static_cast<uint64_t>(lo + block - 1)});
      lo += block;
    }
  }
  return cells;
}

std::vector<uint64_t> ExpandHeaders(std::span<const HeaderRange> ranges) {
  std::vector<uint64_t> out;
  for (const HeaderRange& r : ranges) {
    for (uint64_t h = r.lo;; ++h) {
      out.push_back(h);
      if (h == r.hi) break;
    }
  }
  return out;
}

}  // namespace dpv::oracle
