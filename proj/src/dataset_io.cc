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

#include "dpv/dataset_io.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/container/flat_hash_set.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace dpv {
namespace {

struct Token {
  absl::string_view text;
  int column = 0;  // 1-based
};

std::vector<Token> Tokenize(absl::string_view line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                               line[i] == '\r')) {
      ++i;
    }
    if (i >= line.size() || line[i] == '#') break;
    const size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
           line[i] != '\r' && line[i] != '#') {
      ++i;
    }
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

// Diagnostics carry their position.
class LineParser {
 public:
  LineParser(int line, const std::vector<Token>& tokens, size_t line_length)
      : line_(line), tokens_(tokens), end_column_(line_length + 1) {}

  absl::Status Error(size_t index, absl::string_view what,
                     absl::string_view kind = "ParseError") const {
    const int column = index < tokens_.size() ? tokens_[index].column
                                              : static_cast<int>(end_column_);
    return absl::InvalidArgumentError(
        absl::StrCat(kind, ": line ", line_, ", column ", column, ": ", what));
  }

  absl::Status Arity(size_t n) const {
    if (tokens_.size() == n) return absl::OkStatus();
    if (tokens_.size() < n) {
      return Error(tokens_.size(), absl::StrCat("'", tokens_[0].text,
                                                "' expects ", n - 1,
                                                " arguments"));
    }
    return Error(n, "unexpected extra token");
  }

  absl::StatusOr<uint32_t> Number(size_t i) const {
    uint32_t v = 0;
    if (!absl::SimpleAtoi(tokens_[i].text, &v) ||
        tokens_[i].text.front() == '+' || tokens_[i].text.front() == '-') {
      return Error(i, absl::StrCat("expected a port number, got '",
                                   tokens_[i].text, "'"));
    }
    return v;
  }

  absl::StatusOr<Prefix> PrefixAt(size_t i, int width) const {
    absl::StatusOr<Prefix> p = Prefix::Parse(tokens_[i].text, width);
    if (!p.ok()) return Error(i, p.status().message());
    return *p;
  }

  absl::StatusOr<RouterId> Router(size_t i, const NetworkSpec& spec) const {
    std::optional<RouterId> r = spec.FindRouter(tokens_[i].text);
    if (!r) {
      return Error(i, absl::StrCat("unknown router '", tokens_[i].text, "'"));
    }
    return *r;
  }

  const Token& operator[](size_t i) const { return tokens_[i]; }
  size_t size() const { return tokens_.size(); }

 private:
  int line_;
  const std::vector<Token>& tokens_;
  size_t end_column_;
};

std::string PrefixText(const Prefix& p, int width) {
  return p.ToString(width);
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

absl::StatusOr<NetworkSpec> ParseNetwork(absl::string_view text) {
  NetworkSpec spec;
  bool have_width = false;
  absl::flat_hash_map<std::pair<RouterId, Prefix>, PortId> rule_ports;
  std::set<std::pair<RouterId, Prefix>> acl_seen, xform_seen, pbr_seen;
  std::set<PortRef> linked;

  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    const std::vector<Token> tokens = Tokenize(line);
    if (tokens.empty()) continue;
    LineParser lp(line_no, tokens, line.size());
    const absl::string_view kw = tokens[0].text;

    if (!have_width) {
      if (kw != "WIDTH") return lp.Error(0, "expected WIDTH first");
      if (absl::Status s = lp.Arity(2); !s.ok()) return s;
      int width = 0;
      if (!absl::SimpleAtoi(tokens[1].text, &width) || width < 1 ||
          width > kMaxHeaderWidth) {
        return lp.Error(1, absl::StrCat("header width must be in [1, ",
                                        kMaxHeaderWidth, "]"));
      }
      spec.width = width;
      have_width = true;
      continue;
    }

    if (kw == "WIDTH") return lp.Error(0, "WIDTH given twice");
    if (kw == "NODE") {
      if (absl::Status s = lp.Arity(2); !s.ok()) return s;
      if (spec.FindRouter(tokens[1].text)) {
        return lp.Error(1, absl::StrCat("router '", tokens[1].text,
                                        "' declared twice"));
      }
      spec.AddRouter(tokens[1].text);
    } else if (kw == "EDGE") {
      if (absl::Status s = lp.Arity(5); !s.ok()) return s;
      absl::StatusOr<RouterId> a = lp.Router(1, spec);
      if (!a.ok()) return a.status();
      absl::StatusOr<uint32_t> pa = lp.Number(2);
      if (!pa.ok()) return pa.status();
      absl::StatusOr<RouterId> b = lp.Router(3, spec);
      if (!b.ok()) return b.status();
      absl::StatusOr<uint32_t> pb = lp.Number(4);
      if (!pb.ok()) return pb.status();
      const PortRef ea{*a, *pa}, eb{*b, *pb};
      if (ea == eb) return lp.Error(3, "link from a port to itself");
      if (linked.contains(ea) || linked.contains(eb)) {
        return lp.Error(linked.contains(ea) ? 1 : 3,
                        "port is already linked", "DuplicateEdge");
      }
      linked.insert(ea);
      linked.insert(eb);
      spec.edges.push_back({*a, *pa, *b, *pb});
    } else if (kw == "RULE" || kw == "PBR") {
      if (absl::Status s = lp.Arity(4); !s.ok()) return s;
      absl::StatusOr<RouterId> r = lp.Router(1, spec);
      if (!r.ok()) return r.status();
      absl::StatusOr<Prefix> p = lp.PrefixAt(2, spec.width);
      if (!p.ok()) return p.status();
      absl::StatusOr<uint32_t> port = lp.Number(3);
      if (!port.ok()) return port.status();
      auto [it, inserted] = rule_ports.try_emplace({*r, *p}, *port);
      if (!inserted && it->second != *port) {
        return lp.Error(2, absl::StrCat("conflicting rule: ",
                                        tokens[2].text, " already goes to "
                                        "port ", it->second));
      }
      if (kw == "PBR") {
        if (pbr_seen.insert({*r, *p}).second) {
          spec.pbr.push_back({*r, *p, *port});
        }
        auto dup = std::find(spec.rules.begin(), spec.rules.end(),
                             RuleSpec{*r, *p, *port});
        if (dup != spec.rules.end()) spec.rules.erase(dup);
      } else if (inserted) {
        spec.rules.push_back({*r, *p, *port});
      }
    } else if (kw == "ACL") {
      if (absl::Status s = lp.Arity(4); !s.ok()) return s;
      absl::StatusOr<RouterId> r = lp.Router(1, spec);
      if (!r.ok()) return r.status();
      absl::StatusOr<Prefix> p = lp.PrefixAt(2, spec.width);
      if (!p.ok()) return p.status();
      bool permit;
      if (tokens[3].text == "permit") {
        permit = true;
      } else if (tokens[3].text == "deny") {
        permit = false;
      } else {
        return lp.Error(3, "expected 'permit' or 'deny'");
      }
      if (!acl_seen.insert({*r, *p}).second) {
        return lp.Error(2, "duplicate ACL entry");
      }
      spec.acls.push_back({*r, *p, permit});
    } else if (kw == "XFORM") {
      if (absl::Status s = lp.Arity(5); !s.ok()) return s;
      absl::StatusOr<RouterId> r = lp.Router(1, spec);
      if (!r.ok()) return r.status();
      absl::StatusOr<Prefix> m = lp.PrefixAt(2, spec.width);
      if (!m.ok()) return m.status();
      if (tokens[3].text != "->") return lp.Error(3, "expected '->'");
      absl::StatusOr<Prefix> o = lp.PrefixAt(4, spec.width);
      if (!o.ok()) return o.status();
      if (!xform_seen.insert({*r, *m}).second) {
        return lp.Error(2, "duplicate transform match");
      }
      spec.transforms.push_back({*r, *m, *o});
    } else {
      return lp.Error(0, absl::StrCat("unknown statement '", kw, "'"));
    }
  }
  return spec;
}

absl::StatusOr<NetworkSpec> ReadNetworkFile(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseNetwork(*text);
}

std::string SerializeNetwork(const NetworkSpec& spec) {
  std::string out = absl::StrCat("WIDTH ", spec.width, "\n");
  const auto& name = spec.routers;
  for (const std::string& r : spec.routers) absl::StrAppend(&out, "NODE ", r, "\n");
  for (const EdgeSpec& e : spec.edges) {
    absl::StrAppend(&out, "EDGE ", name[e.a], " ", e.port_a, " ", name[e.b],
                    " ", e.port_b, "\n");
  }
  for (const RuleSpec& r : spec.rules) {
    absl::StrAppend(&out, "RULE ", name[r.router], " ",
                    PrefixText(r.prefix, spec.width), " ", r.port, "\n");
  }
  for (const AclSpec& a : spec.acls) {
    absl::StrAppend(&out, "ACL ", name[a.router], " ",
                    PrefixText(a.prefix, spec.width), " ",
                    a.permit ? "permit" : "deny", "\n");
  }
  for (const TransformSpec& t : spec.transforms) {
    absl::StrAppend(&out, "XFORM ", name[t.router], " ",
                    PrefixText(t.match, spec.width), " -> ",
                    PrefixText(t.output, spec.width), "\n");
  }
  for (const RuleSpec& r : spec.pbr) {
    absl::StrAppend(&out, "PBR ", name[r.router], " ",
                    PrefixText(r.prefix, spec.width), " ", r.port, "\n");
  }
  return out;
}

absl::StatusOr<std::vector<UpdateEvent>> ParseUpdateStream(
    absl::string_view text, const NetworkSpec& spec) {
  std::vector<UpdateEvent> out;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    const std::vector<Token> tokens = Tokenize(line);
    if (tokens.empty()) continue;
    LineParser lp(line_no, tokens, line.size());
    UpdateEvent e;
    if (tokens[0].text == "+") {
      e.op = UpdateOp::kInsert;
    } else if (tokens[0].text == "-") {
      e.op = UpdateOp::kDelete;
    } else {
      return lp.Error(0, "expected '+' or '-'");
    }
    if (absl::Status s = lp.Arity(4); !s.ok()) return s;
    absl::StatusOr<RouterId> r = lp.Router(1, spec);
    if (!r.ok()) return r.status();
    absl::StatusOr<Prefix> p = lp.PrefixAt(2, spec.width);
    if (!p.ok()) return p.status();
    absl::StatusOr<uint32_t> port = lp.Number(3);
    if (!port.ok()) return port.status();
    e.router = *r;
    e.prefix = *p;
    e.port = *port;
    e.seq = out.size() + 1;
    out.push_back(e);
  }
  return out;
}

absl::StatusOr<std::vector<UpdateEvent>> ReadUpdateStreamFile(
    const std::string& path, const NetworkSpec& spec) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseUpdateStream(*text, spec);
}

std::string SerializeUpdateStream(std::span<const UpdateEvent> events,
                                  const NetworkSpec& spec) {
  std::string out;
  for (const UpdateEvent& e : events) {
    absl::StrAppend(&out, e.op == UpdateOp::kInsert ? "+ " : "- ",
                    spec.routers[e.router], " ",
                    PrefixText(e.prefix, spec.width), " ", e.port, "\n");
  }
  return out;
}

MaskHistogram MaskHistogram::Default(int width) {
  static constexpr std::pair<int, double> kIpv4[] = {
      {8, 1},  {12, 1}, {16, 6},  {18, 2}, {20, 4},
      {22, 6}, {23, 5}, {24, 65}, {26, 4}, {28, 3},
      {30, 2}, {32, 1}};
  std::map<int, double> merged;
  for (const auto& [len, w] : kIpv4) {
    int scaled = static_cast<int>(std::lround(len * width / 32.0));
    scaled = std::clamp(scaled, 1, width);
    merged[scaled] += w;
  }
  MaskHistogram h;
  h.weights.assign(merged.begin(), merged.end());
  return h;
}

absl::StatusOr<MaskHistogram> MaskHistogram::Parse(absl::string_view text) {
  MaskHistogram h;
  for (absl::string_view item : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    std::pair<absl::string_view, absl::string_view> kv =
        absl::StrSplit(item, absl::MaxSplits(':', 1));
    int len = 0;
    double w = 0;
    if (!absl::SimpleAtoi(kv.first, &len) ||
        !absl::SimpleAtod(kv.second, &w) || w < 0 || len < 0 ||
        len > kMaxHeaderWidth) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad mask histogram entry '", item, "'"));
    }
    h.weights.push_back({len, w});
  }
  if (h.weights.empty()) {
    return absl::InvalidArgumentError("empty mask histogram");
  }
  return h;
}

absl::StatusOr<NetworkSpec> GenerateSynthetic(const GeneratorOptions& o) {
  const size_t n = o.nodes;
  if (n == 0) {
    return absl::InvalidArgumentError("InfeasibleParameters: zero nodes");
  }
  const uint64_t max_edges = static_cast<uint64_t>(n) * (n - 1) / 2;
  if (o.edges + 1 < n || o.edges > max_edges) {
    return absl::InvalidArgumentError(absl::StrCat(
        "InfeasibleParameters: ", o.edges, " edges cannot connect ", n,
        " nodes (need ", n - 1, " to ", max_edges, ")"));
  }
  if (o.width < 1 || o.width > kMaxHeaderWidth) {
    return absl::InvalidArgumentError("InfeasibleParameters: header width");
  }
  MaskHistogram masks = o.masks.weights.empty() ? MaskHistogram::Default(o.width)
                                                : o.masks;
  double capacity = 0;
  for (const auto& [len, w] : masks.weights) {
    if (len < 0 || len > o.width) {
      return absl::InvalidArgumentError(absl::StrCat(
          "InfeasibleParameters: mask /", len, " exceeds width ", o.width));
    }
    if (w > 0) capacity += std::ldexp(1.0, len);
  }
  if (static_cast<double>(o.rules_per_node) > capacity / 2) {
    return absl::InvalidArgumentError(
        "InfeasibleParameters: too many destinations for the mask lengths");
  }

  std::mt19937_64 rng(o.seed);
  NetworkSpec spec;
  spec.width = o.width;
  for (size_t i = 0; i < n; ++i) spec.AddRouter(absl::StrCat("r", i));

  // Random spanning tree, then extra links.
  std::vector<std::vector<RouterId>> adj(n);
  std::set<std::pair<RouterId, RouterId>> present;
  auto link = [&](RouterId a, RouterId b) {
    if (a > b) std::swap(a, b);
    if (a == b || !present.insert({a, b}).second) return false;
    const PortId pa = static_cast<PortId>(adj[a].size());
    const PortId pb = static_cast<PortId>(adj[b].size());
    adj[a].push_back(b);
    adj[b].push_back(a);
    spec.edges.push_back({a, pa, b, pb});
    return true;
  };
  std::vector<RouterId> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = static_cast<RouterId>(i);
  std::shuffle(order.begin(), order.end(), rng);
  for (size_t i = 1; i < n; ++i) {
    link(order[i], order[std::uniform_int_distribution<size_t>(0, i - 1)(rng)]);
  }
  size_t remaining = o.edges - (n - 1);
  if (remaining > 0 && remaining * 2 > max_edges - (n - 1)) {
    std::vector<std::pair<RouterId, RouterId>> free;
    for (RouterId a = 0; a < n; ++a) {
      for (RouterId b = a + 1; b < n; ++b) {
        if (!present.contains({a, b})) free.push_back({a, b});
      }
    }
    std::shuffle(free.begin(), free.end(), rng);
    for (size_t i = 0; i < remaining; ++i) link(free[i].first, free[i].second);
  } else {
    std::uniform_int_distribution<RouterId> pick(0, static_cast<RouterId>(n - 1));
    while (remaining > 0) {
      if (link(pick(rng), pick(rng))) --remaining;
    }
  }

  // Destination prefixes, owned round-robin.
  std::vector<double> weights;
  for (const auto& [len, w] : masks.weights) weights.push_back(w);
  std::discrete_distribution<size_t> mask_pick(weights.begin(), weights.end());
  absl::flat_hash_set<Prefix> used;
  std::vector<Prefix> destinations;
  while (destinations.size() < o.rules_per_node) {
    const int len = masks.weights[mask_pick(rng)].first;
    const uint64_t bits =
        len == 0 ? 0
                 : rng() & (len >= 64 ? ~uint64_t{0}
                                      : (uint64_t{1} << len) - 1);
    const Prefix p(bits, len);
    if (used.insert(p).second) destinations.push_back(p);
  }

  // BFS tree toward each owner; next hop is the BFS parent.
  std::vector<int64_t> parent(n);
  std::vector<std::vector<size_t>> owned(n);
  for (size_t i = 0; i < destinations.size(); ++i) owned[i % n].push_back(i);
  spec.rules.reserve(destinations.size() * n);
  std::vector<std::vector<RuleSpec>> per_router(n);
  for (RouterId owner = 0; owner < n; ++owner) {
    if (owned[owner].empty()) continue;
    std::fill(parent.begin(), parent.end(), -1);
    parent[owner] = owner;
    std::queue<RouterId> q;
    q.push(owner);
    while (!q.empty()) {
      const RouterId u = q.front();
      q.pop();
      for (RouterId v : adj[u]) {
        if (parent[v] < 0) {
          parent[v] = u;
          q.push(v);
        }
      }
    }
    for (RouterId r = 0; r < n; ++r) {
      PortId port;
      if (r == owner) {
        port = static_cast<PortId>(adj[r].size());
      } else {
        const RouterId hop = static_cast<RouterId>(parent[r]);
        port = static_cast<PortId>(
            std::find(adj[r].begin(), adj[r].end(), hop) - adj[r].begin());
      }
      for (size_t d : owned[owner]) {
        per_router[r].push_back({r, destinations[d], port});
      }
    }
  }
  for (auto& rules : per_router) {
    std::sort(rules.begin(), rules.end());
    spec.rules.insert(spec.rules.end(), rules.begin(), rules.end());
  }
  return spec;
}

UpdateSplit SplitForUpdates(const NetworkSpec& full, double holdout,
                            size_t deletes, uint64_t seed) {
  std::mt19937_64 rng(seed);
  UpdateSplit out;
  out.initial = full;
  std::vector<RuleSpec> rules = full.rules;
  std::shuffle(rules.begin(), rules.end(), rng);
  const size_t held = std::min(
      rules.size(), static_cast<size_t>(std::llround(holdout * rules.size())));
  std::vector<RuleSpec> inserts(rules.end() - held, rules.end());
  rules.resize(rules.size() - held);
  deletes = std::min(deletes, rules.size());
  std::vector<UpdateEvent> events;
  for (const RuleSpec& r : inserts) {
    events.push_back({UpdateOp::kInsert, r.router, r.prefix, r.port});
  }
  for (size_t i = 0; i < deletes; ++i) {
    const RuleSpec& r = rules[rules.size() - 1 - i];
    events.push_back({UpdateOp::kDelete, r.router, r.prefix, r.port});
  }
  std::shuffle(events.begin(), events.end(), rng);
  for (size_t i = 0; i < events.size(); ++i) events[i].seq = i + 1;
  std::sort(rules.begin(), rules.end());
  out.initial.rules = std::move(rules);
  out.stream = std::move(events);
  return out;
}

absl::StatusOr<StreamRun> RunUpdateStream(const NetworkSpec& spec,
                                          std::span<const UpdateEvent> stream,
                                          StreamMode mode, size_t batch_size,
                                          const TraversalOptions& options) {
  using Clock = std::chrono::steady_clock;
  StreamRun run;
  const auto load_start = Clock::now();
  absl::StatusOr<Network> network = Network::FromSpec(spec);
  if (!network.ok()) return network.status();
  run.load_micros = std::chrono::duration<double, std::micro>(
                        Clock::now() - load_start)
                        .count();

  const size_t step =
      mode == StreamMode::kPerUpdate ? 1 : std::max<size_t>(1, batch_size);
  for (size_t i = 0; i < stream.size(); i += step) {
    const std::span<const UpdateEvent> chunk =
        stream.subspan(i, std::min(step, stream.size() - i));
    const auto start = Clock::now();
    absl::StatusOr<UpdateCheck> check = CheckUpdates(*network, chunk, options);
    const auto stop = Clock::now();
    if (!check.ok()) return check.status();
    BenchRecord rec;
    rec.seq = chunk.back().seq;
    rec.micros = std::max(
        1e-3, std::chrono::duration<double, std::micro>(stop - start).count());
    rec.s_affected = check->s_affected;
    rec.p_affected = check->p_affected;
    rec.paths = check->paths;
    rec.updates = chunk.size();
    run.loops += check->loops.size();
    run.blackholes += check->blackholes.size();
    run.records.push_back(rec);
  }
  run.cdf = Summarize(run.records);
  return run;
}

CdfSummary Summarize(std::span<const BenchRecord> records) {
  CdfSummary s;
  s.count = records.size();
  if (records.empty()) return s;
  std::vector<double> t;
  t.reserve(records.size());
  size_t fast = 0;
  for (const BenchRecord& r : records) {
    t.push_back(r.micros);
    fast += r.micros <= 250.0;
  }
  std::sort(t.begin(), t.end());
  auto rank = [&](double q) {
    const size_t k = static_cast<size_t>(std::ceil(q * t.size()));
    return t[std::clamp<size_t>(k, 1, t.size()) - 1];
  };
  s.p50 = rank(0.50);
  s.p90 = rank(0.90);
  s.p99 = rank(0.99);
  s.fraction_under_250us = static_cast<double>(fast) / t.size();
  return s;
}

}  // namespace dpv
