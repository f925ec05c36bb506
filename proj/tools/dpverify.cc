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

// dpverify: command-line front end.
//
// Exit status: 0 on success, 1 when --assert is given and the checked
// property does not hold, 2 on bad usage or input.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "dpv/dataset_io.h"
#include "dpv/network.h"
#include "dpv/parallel.h"
#include "dpv/rectifier.h"
#include "dpv/session.h"
#include "dpv/verifier.h"
#include "json.hpp"

namespace dpv {
namespace {

using json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kViolated = 1;
constexpr int kError = 2;

struct Common {
  std::string net;
  std::string updates;
  bool json = false;
  bool check = false;
  size_t max_paths = 1'000'000;
  bool parallel = false;
};

int Fail(const absl::Status& s) {
  std::cerr << "error: " << s.message() << "\n";
  return kError;
}

struct Loaded {
  NetworkSpec spec;
  Network network;
  std::vector<Prefix> scope;  // prefixes touched by --updates
  double load_ms = 0;
};

absl::StatusOr<Loaded> Load(const Common& c) {
  absl::StatusOr<NetworkSpec> spec = ReadNetworkFile(c.net);
  if (!spec.ok()) return spec.status();
  const auto start = std::chrono::steady_clock::now();
  absl::StatusOr<Network> network = Network::FromSpec(*spec);
  if (!network.ok()) return network.status();
  Loaded out{*spec, *std::move(network), {}, 0};
  out.load_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  if (!c.updates.empty()) {
    absl::StatusOr<std::vector<UpdateEvent>> events =
        ReadUpdateStreamFile(c.updates, out.spec);
    if (!events.ok()) return events.status();
    for (const UpdateEvent& e : *events) {
      if (absl::Status s = out.network.Apply(e); !s.ok()) return s;
      out.scope.push_back(e.prefix);
    }
  }
  return out;
}

absl::StatusOr<RouterId> Router(const Network& n, const std::string& name) {
  std::optional<RouterId> r = n.topology().Find(name);
  if (!r) return absl::NotFoundError(absl::StrCat("UnknownRouter: ", name));
  return *r;
}

absl::StatusOr<std::vector<Prefix>> Prefixes(const std::string& list,
                                             int width) {
  std::vector<Prefix> out;
  for (absl::string_view t : absl::StrSplit(list, ',', absl::SkipEmpty())) {
    absl::StatusOr<Prefix> p = Prefix::Parse(t, width);
    if (!p.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad prefix '", t, "': ", p.status().message()));
    }
    out.push_back(*p);
  }
  return out;
}

std::vector<std::string> Texts(const std::vector<Prefix>& ps, int width) {
  std::vector<std::string> out;
  for (const Prefix& p : ps) out.push_back(p.ToString(width));
  return out;
}

std::vector<std::string> Names(const Network& n,
                               const std::vector<RouterId>& path) {
  std::vector<std::string> out;
  for (RouterId r : path) out.push_back(n.topology().name(r));
  return out;
}

// Whole network unless the query names prefixes or updates were applied.
absl::StatusOr<VerificationSession> Session(const Loaded& l,
                                            const std::vector<Prefix>& extra) {
  std::vector<Prefix> scope = l.scope;
  scope.insert(scope.end(), extra.begin(), extra.end());
  return BuildSession(l.network, scope.empty() ? l.network.AffectedAll()
                                               : l.network.AffectedBy(scope));
}

void Emit(const Common& c, const json& j, const std::string& text) {
  if (c.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

TraversalOptions Traversal(const Common& c) {
  TraversalOptions t;
  t.max_paths = c.max_paths;
  return t;
}

int Summary(const Common& c) {
  absl::StatusOr<Loaded> l = Load(c);
  if (!l.ok()) return Fail(l.status());
  const HeaderTrie& trie = l->network.trie();
  size_t iatomic = 0;
  for (const LeafInfo& leaf : trie.Leaves()) {
    iatomic += leaf.label == NodeLabel::kIatomic;
  }
  json j = {{"routers", l->network.router_count()},
            {"links", l->network.topology().Links().size()},
            {"rules", l->network.rule_count()},
            {"classes", trie.leaf_count()},
            {"iatomic", iatomic},
            {"trie_nodes", trie.node_count()},
            {"load_ms", l->load_ms}};
  Emit(c, j,
       absl::StrCat(j["routers"].get<size_t>(), " routers, ",
                    j["links"].get<size_t>(), " links, ",
                    j["rules"].get<size_t>(), " rules\n",
                    trie.leaf_count(), " classes (", iatomic, " iatomic), ",
                    trie.node_count(), " trie nodes\nloaded in ",
                    l->load_ms, " ms\n"));
  return kOk;
}

int Verify(const Common& c, const std::string& src_name,
           const std::string& dst_name, const std::string& prefix_list) {
  absl::StatusOr<Loaded> l = Load(c);
  if (!l.ok()) return Fail(l.status());
  absl::StatusOr<RouterId> src = Router(l->network, src_name);
  absl::StatusOr<RouterId> dst = Router(l->network, dst_name);
  if (!src.ok()) return Fail(src.status());
  if (!dst.ok()) return Fail(dst.status());
  absl::StatusOr<std::vector<Prefix>> wanted =
      Prefixes(prefix_list, l->network.width());
  if (!wanted.ok()) return Fail(wanted.status());
  absl::StatusOr<VerificationSession> s = Session(*l, *wanted);
  if (!s.ok()) return Fail(s.status());
  StateVector b = s->AllOnes();
  if (!wanted->empty()) {
    absl::StatusOr<StateVector> enc = s->Encode(*wanted);
    if (!enc.ok()) return Fail(enc.status());
    b = *enc;
  }
  absl::StatusOr<ReachabilityReport> r =
      c.parallel
          ? VerifyReachabilityParallel(*s, *src, *dst, b, Traversal(c))
          : VerifyReachability(*s, *src, *dst, b, Traversal(c));
  if (!r.ok()) return Fail(r.status());
  const int width = l->network.width();
  const bool holds =
      wanted->empty() ? r->reachable_bits.Any() : b.IsSubsetOf(r->reachable_bits);
  json j = {{"src", src_name},
            {"dst", dst_name},
            {"classes", s->dimension()},
            {"reachable", Texts(r->reachable, width)},
            {"paths", json::array()},
            {"truncated", r->truncated},
            {"holds", holds}};
  std::string text = absl::StrCat(
      src_name, " -> ", dst_name, ": ",
      r->reachable.empty() ? "unreachable"
                           : absl::StrJoin(Texts(r->reachable, width), " "),
      "\n");
  for (const PathResult& p : r->per_path) {
    const std::vector<std::string> names = Names(l->network, p.path);
    j["paths"].push_back({{"path", names},
                          {"headers", Texts(s->Decode(p.b_final), width)},
                          {"cumulative_l2", p.cumulative_l2()}});
    absl::StrAppend(&text, "  ", absl::StrJoin(names, " "), "  [",
                    absl::StrJoin(Texts(s->Decode(p.b_final), width), " "),
                    "]  l2=", p.cumulative_l2(), "\n");
  }
  if (r->truncated) absl::StrAppend(&text, "  (search truncated)\n");
  Emit(c, j, text);
  return c.check && !holds ? kViolated : kOk;
}

int Loops(const Common& c, const std::string& src_name) {
  absl::StatusOr<Loaded> l = Load(c);
  if (!l.ok()) return Fail(l.status());
  absl::StatusOr<RouterId> src = Router(l->network, src_name);
  if (!src.ok()) return Fail(src.status());
  absl::StatusOr<VerificationSession> s = Session(*l, {});
  if (!s.ok()) return Fail(s.status());
  absl::StatusOr<std::vector<LoopReport>> loops =
      DetectLoops(*s, *src, s->AllOnes(), Traversal(c));
  if (!loops.ok()) return Fail(loops.status());
  json j = {{"src", src_name}, {"loops", json::array()}};
  std::string text = absl::StrCat(loops->size(), " loop(s) from ", src_name,
                                  "\n");
  for (const LoopReport& lr : *loops) {
    const std::vector<std::string> cycle = Names(l->network, lr.cycle);
    const std::vector<std::string> hs = Texts(lr.headers, l->network.width());
    j["loops"].push_back({{"cycle", cycle}, {"headers", hs}});
    absl::StrAppend(&text, "  ", absl::StrJoin(cycle, " "), " ",
                    cycle.front(), "  [", absl::StrJoin(hs, " "), "]\n");
  }
  Emit(c, j, text);
  return c.check && !loops->empty() ? kViolated : kOk;
}

int Blackholes(const Common& c, const std::string& src_name) {
  absl::StatusOr<Loaded> l = Load(c);
  if (!l.ok()) return Fail(l.status());
  absl::StatusOr<RouterId> src = Router(l->network, src_name);
  if (!src.ok()) return Fail(src.status());
  absl::StatusOr<VerificationSession> s = Session(*l, {});
  if (!s.ok()) return Fail(s.status());
  absl::StatusOr<std::vector<BlackholeReport>> holes =
      DetectBlackholes(*s, *src, s->AllOnes(), Traversal(c));
  if (!holes.ok()) return Fail(holes.status());
  json j = {{"src", src_name}, {"blackholes", json::array()}};
  std::string text = absl::StrCat(holes->size(), " router(s) drop traffic from ",
                                  src_name, "\n");
  for (const BlackholeReport& h : *holes) {
    const std::string name = l->network.topology().name(h.router);
    const std::vector<std::string> hs = Texts(h.headers, l->network.width());
    j["blackholes"].push_back({{"router", name}, {"headers", hs}});
    absl::StrAppend(&text, "  ", name, ": ", absl::StrJoin(hs, " "), "\n");
  }
  Emit(c, j, text);
  return c.check && !holes->empty() ? kViolated : kOk;
}

int PolicyCmd(const Common& c, const std::string& src_name,
              const std::string& dst_name, std::optional<size_t> max_len,
              const std::vector<std::string>& waypoints) {
  absl::StatusOr<Loaded> l = Load(c);
  if (!l.ok()) return Fail(l.status());
  absl::StatusOr<RouterId> src = Router(l->network, src_name);
  absl::StatusOr<RouterId> dst = Router(l->network, dst_name);
  if (!src.ok()) return Fail(src.status());
  if (!dst.ok()) return Fail(dst.status());
  Policy policy;
  policy.max_path_len = max_len;
  for (const std::string& w : waypoints) {
    absl::StatusOr<RouterId> r = Router(l->network, w);
    if (!r.ok()) return Fail(r.status());
    policy.waypoints.push_back(*r);
  }
  absl::StatusOr<VerificationSession> s = Session(*l, {});
  if (!s.ok()) return Fail(s.status());
  absl::StatusOr<ReachabilityReport> r =
      VerifyReachability(*s, *src, *dst, s->AllOnes(), Traversal(c));
  if (!r.ok()) return Fail(r.status());
  PolicyReport pr = CheckPolicy(*r, policy);
  json j = {{"paths", r->per_path.size()}, {"violations", json::array()}};
  std::string text = absl::StrCat(r->per_path.size(), " path(s), ",
                                  pr.violations.size(), " violation(s)\n");
  for (const PolicyViolation& v : pr.violations) {
    const std::vector<std::string> names = Names(l->network, v.path);
    const std::string what =
        v.kind == PolicyViolation::Kind::kMissedWaypoint
            ? "misses waypoint " + l->network.topology().name(v.waypoint)
            : v.constraint;
    j["violations"].push_back({{"path", names}, {"constraint", what}});
    absl::StrAppend(&text, "  ", absl::StrJoin(names, " "), ": ", what, "\n");
  }
  Emit(c, j, text);
  return c.check && !pr.violations.empty() ? kViolated : kOk;
}

// "A:0-B:2"
absl::StatusOr<std::pair<PortRef, PortRef>> ParseLink(const Network& n,
                                                      const std::string& text) {
  std::vector<std::string> ends = absl::StrSplit(text, '-');
  if (ends.size() != 2) {
    return absl::InvalidArgumentError("link must look like A:port-B:port");
  }
  PortRef refs[2];
  for (int i = 0; i < 2; ++i) {
    std::vector<std::string> parts = absl::StrSplit(ends[i], ':');
    uint32_t port = 0;
    if (parts.size() != 2 || !absl::SimpleAtoi(parts[1], &port)) {
      return absl::InvalidArgumentError("link must look like A:port-B:port");
    }
    absl::StatusOr<RouterId> r = Router(n, parts[0]);
    if (!r.ok()) return r.status();
    refs[i] = {*r, port};
  }
  if (n.topology().Peer(refs[0]) != refs[1]) {
    return absl::NotFoundError(absl::StrCat("UnknownLink: ", text));
  }
  return std::make_pair(refs[0], refs[1]);
}

int WhatIf(const Common& c, const std::string& link,
           const std::string& src_name, const std::string& dst_name) {
  absl::StatusOr<Loaded> l = Load(c);
  if (!l.ok()) return Fail(l.status());
  absl::StatusOr<RouterId> src = Router(l->network, src_name);
  absl::StatusOr<RouterId> dst = Router(l->network, dst_name);
  if (!src.ok()) return Fail(src.status());
  if (!dst.ok()) return Fail(dst.status());
  absl::StatusOr<std::pair<PortRef, PortRef>> ends = ParseLink(l->network, link);
  if (!ends.ok()) return Fail(ends.status());
  absl::StatusOr<WhatIfResult> w =
      WhatIfLinkDown(l->network, ends->first, *src, *dst, Traversal(c));
  if (!w.ok()) return Fail(w.status());
  const int width = l->network.width();
  const std::vector<std::string> reach =
      Texts(w->batch.report.reachable, width);
  json j = {{"link", link},
            {"deleted_rules", w->triggered_deletions},
            {"classes", w->batch.s_affected},
            {"reachable", reach}};
  Emit(c, j,
       absl::StrCat("link ", link, " down: ", w->triggered_deletions,
                    " rule(s) withdrawn, ", w->batch.s_affected,
                    " class(es) rechecked\n", src_name, " -> ", dst_name,
                    " over rechecked classes: ",
                    reach.empty() ? "unreachable" : absl::StrJoin(reach, " "),
                    "\n"));
  return c.check && reach.empty() ? kViolated : kOk;
}

int RectifyCmd(const Common& c, const std::string& src_name,
               const std::string& dst_name, const std::string& intent_list,
               bool allow_override, const std::string& out) {
  absl::StatusOr<Loaded> l = Load(c);
  if (!l.ok()) return Fail(l.status());
  absl::StatusOr<RouterId> src = Router(l->network, src_name);
  absl::StatusOr<RouterId> dst = Router(l->network, dst_name);
  if (!src.ok()) return Fail(src.status());
  if (!dst.ok()) return Fail(dst.status());
  const int width = l->network.width();
  absl::StatusOr<std::vector<Prefix>> intent = Prefixes(intent_list, width);
  if (!intent.ok()) return Fail(intent.status());
  RectifyOptions o;
  o.allow_override = allow_override;
  o.traversal = Traversal(c);
  absl::StatusOr<RectifyResult> r =
      Rectify(l->network, *src, *dst, *intent, o);
  if (!r.ok()) {
    if (r.status().code() == absl::StatusCode::kFailedPrecondition) {
      std::cerr << r.status().message() << "\n";
      return kViolated;
    }
    return Fail(r.status());
  }
  json j = {{"fixes", json::array()}, {"achieved", Texts(r->achieved, width)}};
  std::string text = absl::StrCat(r->fixes.size(), " rule(s) added\n");
  for (const RuleFix& f : r->fixes) {
    const std::string name = l->network.topology().name(f.router);
    j["fixes"].push_back({{"router", name},
                          {"prefix", f.prefix.ToString(width)},
                          {"port", f.port},
                          {"classes", Texts(f.rationale, width)}});
    absl::StrAppend(&text, "  RULE ", name, " ", f.prefix.ToString(width), " ",
                    f.port, "\n");
  }
  absl::StrAppend(&text, "achieved: ",
                  absl::StrJoin(Texts(r->achieved, width), " "), "\n");
  if (!out.empty()) {
    std::ofstream f(out);
    f << SerializeNetwork(l->network.ToSpec());
    if (!f) return Fail(absl::UnavailableError("cannot write " + out));
  }
  Emit(c, j, text);
  return kOk;
}

int Bench(const Common& c, const std::string& stream_path,
          const std::string& mode, size_t batch_size) {
  absl::StatusOr<NetworkSpec> spec = ReadNetworkFile(c.net);
  if (!spec.ok()) return Fail(spec.status());
  absl::StatusOr<std::vector<UpdateEvent>> stream =
      ReadUpdateStreamFile(stream_path, *spec);
  if (!stream.ok()) return Fail(stream.status());
  absl::StatusOr<StreamRun> run = RunUpdateStream(
      *spec, *stream,
      mode == "batch" ? StreamMode::kBatch : StreamMode::kPerUpdate,
      batch_size, Traversal(c));
  if (!run.ok()) return Fail(run.status());
  json records = json::array();
  for (const BenchRecord& r : run->records) {
    records.push_back({{"seq", r.seq},
                       {"micros", r.micros},
                       {"updates", r.updates},
                       {"s_affected", r.s_affected},
                       {"p_affected", r.p_affected},
                       {"paths", r.paths}});
  }
  const CdfSummary& s = run->cdf;
  json j = {{"load_ms", run->load_micros / 1000},
            {"checks", s.count},
            {"p50_us", s.p50},
            {"p90_us", s.p90},
            {"p99_us", s.p99},
            {"fraction_under_250us", s.fraction_under_250us},
            {"loops", run->loops},
            {"blackholes", run->blackholes},
            {"records", records}};
  Emit(c, j,
       absl::StrCat("load ", run->load_micros / 1000, " ms\n", s.count,
                    " check(s): p50 ", s.p50, " us, p90 ", s.p90, " us, p99 ",
                    s.p99, " us, ", 100 * s.fraction_under_250us,
                    "% under 250 us\n", run->loops, " loop report(s), ",
                    run->blackholes, " blackhole report(s)\n"));
  return kOk;
}

int Gen(const Common& c, GeneratorOptions g, const std::string& masks,
        const std::string& out, const std::string& stream_out,
        double holdout, size_t deletes) {
  if (!masks.empty()) {
    absl::StatusOr<MaskHistogram> h = MaskHistogram::Parse(masks);
    if (!h.ok()) return Fail(h.status());
    g.masks = *h;
  }
  absl::StatusOr<NetworkSpec> spec = GenerateSynthetic(g);
  if (!spec.ok()) return Fail(spec.status());
  NetworkSpec initial = *spec;
  std::vector<UpdateEvent> stream;
  if (!stream_out.empty()) {
    UpdateSplit split = SplitForUpdates(*spec, holdout, deletes, g.seed);
    initial = std::move(split.initial);
    stream = std::move(split.stream);
    std::ofstream f(stream_out);
    f << SerializeUpdateStream(stream, initial);
    if (!f) return Fail(absl::UnavailableError("cannot write " + stream_out));
  }
  const std::string text = SerializeNetwork(initial);
  if (out.empty() || out == "-") {
    std::cout << text;
    return kOk;
  }
  std::ofstream f(out);
  f << text;
  if (!f) return Fail(absl::UnavailableError("cannot write " + out));
  json j = {{"routers", initial.router_count()},
            {"links", initial.edges.size()},
            {"rules", initial.rules.size()},
            {"updates", stream.size()}};
  Emit(c, j,
       absl::StrCat("wrote ", out, ": ", initial.router_count(), " routers, ",
                    initial.edges.size(), " links, ", initial.rules.size(),
                    " rules", stream_out.empty() ? "" : ", ",
                    stream_out.empty() ? "" : absl::StrCat(stream.size(),
                                                           " updates"),
                    "\n"));
  return kOk;
}

}  // namespace
}  // namespace dpv

int main(int argc, char** argv) {
  using namespace dpv;
  CLI::App app{"Dataplane verification over header equivalence classes"};
  app.require_subcommand(1);
  Common c;
  auto common = [&c](CLI::App* sub, bool updates) {
    sub->add_option("--net", c.net, "network file")->required();
    if (updates) {
      sub->add_option("--updates", c.updates,
                      "update stream applied before the query");
    }
    sub->add_flag("--json", c.json, "structured output");
    sub->add_flag("--assert", c.check,
                  "exit 1 when the checked property does not hold");
    sub->add_option("--max-paths", c.max_paths, "search budget");
  };

  std::string src, dst, prefixes, intent, link, out, stream_path, stream_out,
      mode = "per-update", masks;
  std::optional<size_t> max_len;
  std::vector<std::string> waypoints;
  bool allow_override = false;
  size_t batch_size = 100, deletes = 0;
  double holdout = 0.0;
  GeneratorOptions g;
  g.rules_per_node = 10;

  CLI::App* load = app.add_subcommand("load", "parse, load and summarize");
  common(load, true);

  CLI::App* verify = app.add_subcommand("verify", "src -> dst reachability");
  common(verify, true);
  verify->add_option("--src", src)->required();
  verify->add_option("--dst", dst)->required();
  verify->add_option("--prefixes", prefixes,
                     "comma-separated headers to check (default: all)");
  verify->add_flag("--parallel", c.parallel, "OpenMP traversal");

  CLI::App* loops = app.add_subcommand("loops", "forwarding loops from src");
  common(loops, true);
  loops->add_option("--src", src)->required();

  CLI::App* holes = app.add_subcommand("blackholes", "dropped headers");
  common(holes, true);
  holes->add_option("--src", src)->required();

  CLI::App* policy = app.add_subcommand("policy", "path constraints");
  common(policy, true);
  policy->add_option("--src", src)->required();
  policy->add_option("--dst", dst)->required();
  policy->add_option("--max-len", max_len, "routers per path");
  policy->add_option("--waypoint", waypoints, "router every path must visit");

  CLI::App* whatif = app.add_subcommand("whatif", "fail a link and recheck");
  common(whatif, true);
  whatif->add_option("--link", link, "A:port-B:port")->required();
  whatif->add_option("--src", src)->required();
  whatif->add_option("--dst", dst)->required();

  CLI::App* rectify = app.add_subcommand("rectify", "synthesize missing rules");
  common(rectify, true);
  rectify->add_option("--src", src)->required();
  rectify->add_option("--dst", dst)->required();
  rectify->add_option("--intent", intent, "comma-separated headers")
      ->required();
  rectify->add_flag("--allow-override", allow_override,
                    "also redirect headers a router already forwards");
  rectify->add_option("--out", out, "write the repaired network here");

  CLI::App* bench = app.add_subcommand("bench", "replay an update stream");
  common(bench, false);
  bench->add_option("--stream", stream_path)->required();
  bench->add_option("--mode", mode)
      ->check(CLI::IsMember({"per-update", "batch"}));
  bench->add_option("--batch-size", batch_size);

  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic network");
  gen->add_option("--nodes", g.nodes)->required();
  gen->add_option("--edges", g.edges)->required();
  gen->add_option("--rules-per-node", g.rules_per_node);
  gen->add_option("--width", g.width);
  gen->add_option("--seed", g.seed);
  gen->add_option("--masks", masks, "e.g. 24:70,16:20,8:10");
  gen->add_option("--out", out, "network file (default stdout)");
  gen->add_option("--stream", stream_out, "also write an update stream");
  gen->add_option("--holdout", holdout, "fraction of rules held out as inserts");
  gen->add_option("--deletes", deletes, "deletions in the stream");
  gen->add_flag("--json", c.json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  if (*load) return Summary(c);
  if (*verify) return Verify(c, src, dst, prefixes);
  if (*loops) return Loops(c, src);
  if (*holes) return Blackholes(c, src);
  if (*policy) return PolicyCmd(c, src, dst, max_len, waypoints);
  if (*whatif) return WhatIf(c, link, src, dst);
  if (*rectify) return RectifyCmd(c, src, dst, intent, allow_override, out);
  if (*bench) return Bench(c, stream_path, mode, batch_size);
  if (*gen) return Gen(c, g, masks, out, stream_out, holdout, deletes);
  return kError;
}
