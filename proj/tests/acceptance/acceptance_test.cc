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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dpv/dataset_io.h"
#include "dpv/network.h"
#include "dpv/oracle.h"
#include "dpv/rectifier.h"
#include "dpv/session.h"
#include "dpv/vector_engine.h"
#include "dpv/verifier.h"
#include "support/dense_oracle.h"
#include "support/fixtures.h"

namespace dpv {
namespace {

using testing::FullSession;
using testing::Headers;
using testing::LoadOrDie;
using testing::P;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

double Median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

NetworkSpec ReadOrDie(const char* name) {
  absl::StatusOr<NetworkSpec> spec = ReadNetworkFile(testing::DataPath(name));
  if (!spec.ok()) {
    std::fprintf(stderr, "%s\n", spec.status().ToString().c_str());
    std::abort();
  }
  return *spec;
}

std::string Join(const std::vector<Prefix>& ps, int width) {
  std::string out = "{";
  for (size_t i = 0; i < ps.size(); ++i) {
    absl::StrAppend(&out, i ? "," : "", ps[i].ToString(width));
  }
  return out + "}";
}

// 1
Verdict ToyNetworkGolden() {
  const auto start = Clock::now();
  constexpr RouterId kY = 0, kU = 1, kQ = 2, kR = 3;
  Network network = LoadOrDie(ReadOrDie("toy.net"));
  if (!network.Apply({UpdateOp::kInsert, kQ, P("0/1"), 0}).ok()) {
    return {false, "update rejected"};
  }
  AffectedSets affected = network.AffectedBy(std::vector{P("0/1")});
  const std::vector<Prefix> want = {P("000/3"), P("001/3"), P("01/2")};
  const std::string s_affected = Join(affected.prefixes, 3);
  if (affected.prefixes != want) return {false, "s_affected " + s_affected};
  const std::vector<size_t> order = {1, 0, 2};  // 001, 000, 01
  if (!affected.Permute(order).ok()) return {false, "permute failed"};
  absl::StatusOr<VerificationSession> s = BuildSession(network, affected);
  if (!s.ok()) return {false, s.status().ToString()};
  ReachabilityReport r = *VerifyReachability(*s, kY, kR, s->AllOnes());
  if (r.per_path.size() != 1 ||
      r.per_path[0].path != std::vector<RouterId>{kY, kU, kR}) {
    return {false, "unexpected paths"};
  }
  const StateVector b_y = r.per_path[0].hop_states[0];
  const StateVector b_u = r.per_path[0].hop_states[1];
  const double secs = Seconds(start);
  const bool ok = b_y == StateVector::FromBits({1, 1, 0}) &&
                  b_u == StateVector::FromBits({0, 1, 0}) &&
                  r.reachable == std::vector<Prefix>{P("000/3")} && secs < 1;
  return {ok, absl::StrFormat("s_affected=%s b_Y=%s b_U=%s reachable=%s "
                              "in %.4fs",
                              s_affected, b_y.ToString(),
                              b_u.ToString(), Join(r.reachable, 3), secs)};
}

// 2
Verdict TransformMatrixExample() {
  NetworkSpec spec = ReadOrDie("toy.net");
  spec.transforms.push_back({1, P("01/2"), P("00/2")});
  Network network = LoadOrDie(spec);
  VerificationSession s = FullSession(network);
  const std::vector<Prefix> classes = {P("000/3"), P("001/3"), P("01/2"),
                                       P("1/1")};
  if (s.affected.prefixes != classes) {
    return {false, "classes " + Join(s.affected.prefixes, 3)};
  }
  if (!s.routers[1].transform) return {false, "no transform at U"};
  const std::vector<std::vector<int>> want = {
      {1, 0, 1, 0}, {0, 1, 1, 0}, {0, 0, 0, 0}, {0, 0, 0, 1}};
  const std::vector<std::vector<int>> got = s.routers[1].transform->ToDense();
  std::string rows;
  for (const auto& row : got) {
    absl::StrAppend(&rows, rows.empty() ? "" : " ");
    for (int x : row) absl::StrAppend(&rows, x);
  }
  return {got == want, "T_U rows " + rows};
}

// 3
Verdict ChainRepairGolden() {
  constexpr RouterId kY = 0, kQ = 2, kR = 3;
  Network network = LoadOrDie(ReadOrDie("chain.net"));
  absl::StatusOr<RectifyResult> r =
      Rectify(network, kY, kR, std::vector{P("01/2")});
  if (!r.ok()) return {false, r.status().ToString()};
  if (r->fixes.size() != 1) {
    return {false, absl::StrCat(r->fixes.size(), " fixes")};
  }
  const RuleFix& f = r->fixes[0];
  VerificationSession s = FullSession(network);
  ReachabilityReport post = *VerifyReachability(s, kY, kR, s.AllOnes());
  if (post.per_path.size() != 1) return {false, "expected one path"};
  const StateVector b_q = post.per_path[0].hop_states.back();
  const bool ok = f.router == kQ && f.prefix == P("01/2") && f.port == 1 &&
                  b_q == StateVector::FromBits({0, 1, 0}) &&
                  !post.reachable.empty();
  return {ok, absl::StrFormat("fix=(%s, %s, port %d) b_Q=%s reachable=%s",
                              network.topology().name(f.router),
                              f.prefix.ToString(3), f.port, b_q.ToString(),
                              Join(post.reachable, 3))};
}

struct SuiteCounts {
  int networks = 0;
  int queries = 0;
  int reach_mismatch = 0;
  int nonempty = 0;
  int loop_queries = 0;
  int loop_mismatch = 0;
  int with_loops = 0;
  int hole_mismatch = 0;
  size_t hole_pairs = 0;
  double seconds = 0;
};

SuiteCounts& Suite() {
  static SuiteCounts counts = [] {
    SuiteCounts c;
    const auto start = Clock::now();
    std::mt19937_64 rng(2026);
    for (int i = 0; i < 100; ++i) {
      testing::RandomNetworkOptions o;
      o.width = 8;
      o.max_nodes = 16;
      o.max_rules = 200;
      o.gap_rate = 0.15;
      o.noise_rules = 6;
      const bool extras = i % 10 < 3;
      o.acls = extras;
      o.transforms = extras;
      const NetworkSpec spec = testing::RandomNetwork(rng, o);
      Network network = LoadOrDie(spec);
      VerificationSession s = FullSession(network);
      std::vector<HeaderRange> classes;
      for (const Prefix& p : s.affected.prefixes) {
        classes.push_back(p.Range(spec.width));
      }
      ++c.networks;
      const RouterId n = static_cast<RouterId>(spec.router_count());
      for (int q = 0; q < 5; ++q) {
        const RouterId src = rng() % n;
        const RouterId dst = (src + 1 + rng() % (n - 1)) % n;
        oracle::SimulationOptions so;
        so.dst = dst;
        so.record_traces = false;
        const oracle::SimulationResult truth =
            *oracle::SimulateAll(spec, src, so);
        ReachabilityReport r = *VerifyReachability(s, src, dst, s.AllOnes());
        ++c.queries;
        c.nonempty += !truth.reachable.empty();
        if (Headers(r.reachable, spec.width) != truth.reachable) {
          ++c.reach_mismatch;
        }

        oracle::SimulationOptions all;
        all.initial = classes;
        all.record_traces = false;
        const oracle::SimulationResult free_run =
            *oracle::SimulateAll(spec, src, all);
        const bool looped = !DetectLoops(s, src, s.AllOnes())->empty();
        ++c.loop_queries;
        c.with_loops += free_run.looped;
        c.loop_mismatch += looped != free_run.looped;
        std::vector<std::pair<RouterId, uint64_t>> holes;
        const std::vector<BlackholeReport> reports =
            *DetectBlackholes(s, src, s.AllOnes());
        for (const BlackholeReport& h : reports) {
          for (uint64_t x : Headers(h.headers, spec.width)) {
            holes.push_back({h.router, x});
          }
        }
        std::sort(holes.begin(), holes.end());
        c.hole_pairs += holes.size();
        c.hole_mismatch += holes != free_run.blackholes;
      }
    }
    c.seconds = Seconds(start);
    return c;
  }();
  return counts;
}

// 4
Verdict OracleReachability() {
  const SuiteCounts& c = Suite();
  return {c.reach_mismatch == 0 && c.seconds < 60,
          absl::StrFormat("%d networks, %d queries (%d with reachable "
                          "headers), %d mismatches, %.2fs",
                          c.networks, c.queries, c.nonempty, c.reach_mismatch,
                          c.seconds)};
}

// 5
Verdict OracleLoopsAndBlackholes() {
  const SuiteCounts& c = Suite();
  return {c.loop_mismatch == 0 && c.hole_mismatch == 0,
          absl::StrFormat("%d sources: loop mismatches %d (%d looping), "
                          "blackhole set mismatches %d (%zu pairs)",
                          c.loop_queries, c.loop_mismatch, c.with_loops,
                          c.hole_mismatch, c.hole_pairs)};
}

// 6
Verdict ProjectionIsLeastSquares() {
  std::mt19937_64 rng(6);
  int mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    const size_t m = 1 + rng() % 64;
    StateVector v(m), b(m);
    for (size_t k = 0; k < m; ++k) {
      v.Assign(k, rng() & 1);
      b.Assign(k, rng() & 1);
    }
    absl::StatusOr<testing::LeastSquaresResult> ls =
        testing::LeastSquaresReference(testing::BasisMatrix(v),
                                       testing::ToDense(b));
    const StateVector mine = *Project(ForwardingVector{{0, 0}, v}, b);
    if (!ls.ok() || mine != testing::FromDense(ls->projection)) ++mismatches;
  }
  return {mismatches == 0,
          absl::StrCat("10000 pairs, ", mismatches, " mismatches")};
}

// 7
Verdict PartitionCorrectness() {
  std::mt19937_64 rng(7);
  int bad_partition = 0, bad_bound = 0;
  for (int i = 0; i < 1000; ++i) {
    const int width = 4 + rng() % 13;
    const int count = 1 + rng() % 60;
    std::vector<Prefix> ps = testing::RandomPrefixes(rng, count, width, 0,
                                                     width);
    HeaderTrie trie(width);
    std::vector<Prefix> distinct;
    for (size_t k = 0; k < ps.size(); ++k) {
      (void)trie.Insert(ps[k], {static_cast<RouterId>(k % 5), 0});
    }
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    if (testing::LeafRanges(trie) != oracle::IntervalPartition(ps, width)) {
      ++bad_partition;
    }
    size_t iatomic = 0;
    for (const LeafInfo& leaf : trie.Leaves()) {
      iatomic += leaf.label == NodeLabel::kIatomic;
    }
    if (iatomic > static_cast<size_t>(width) * ps.size()) ++bad_bound;
  }
  return {bad_partition == 0 && bad_bound == 0,
          absl::StrCat("1000 rule sets, partition mismatches ", bad_partition,
                       ", bound violations ", bad_bound)};
}

using Triple = std::tuple<RouterId, RouterId, uint64_t>;

std::set<Triple> AllReachable(const NetworkSpec& spec) {
  std::set<Triple> out;
  const RouterId n = static_cast<RouterId>(spec.router_count());
  for (RouterId s = 0; s < n; ++s) {
    for (RouterId d = 0; d < n; ++d) {
      if (s == d) continue;
      oracle::SimulationOptions o;
      o.dst = d;
      o.record_traces = false;
      const oracle::SimulationResult r = *oracle::SimulateAll(spec, s, o);
      for (uint64_t h : r.reachable) out.insert({s, d, h});
    }
  }
  return out;
}

// 8
Verdict RectifyNonInterference() {
  std::mt19937_64 rng(8);
  int scenarios = 0, repaired = 0, impossible = 0, regressions = 0,
      unsound = 0, restored = 0;
  while (scenarios < 50) {
    testing::RandomNetworkOptions o;
    o.max_nodes = 8;
    const NetworkSpec spec = testing::RandomNetwork(rng, o);
    const std::set<Triple> full = AllReachable(spec);
    const size_t idx = rng() % spec.rules.size();
    NetworkSpec broken = spec;
    broken.rules.erase(broken.rules.begin() + idx);
    const std::set<Triple> before = AllReachable(broken);
    std::vector<Triple> lost;
    std::set_difference(full.begin(), full.end(), before.begin(), before.end(),
                        std::back_inserter(lost));
    if (lost.empty()) continue;
    ++scenarios;
    const auto [src, dst, h] = lost[rng() % lost.size()];
    Network network = LoadOrDie(broken);
    absl::StatusOr<RectifyResult> r =
        Rectify(network, src, dst, std::vector{spec.rules[idx].prefix});
    if (!r.ok()) {
      ++impossible;
      continue;
    }
    ++repaired;
    const NetworkSpec fixed = network.ToSpec();
    const std::set<Triple> after = AllReachable(fixed);
    if (!std::includes(after.begin(), after.end(), before.begin(),
                       before.end())) {
      ++regressions;
    }
    restored += after.contains({src, dst, h});
    for (uint64_t x : Headers(r->achieved, spec.width)) {
      unsound += !after.contains({src, dst, x});
    }
  }
  return {regressions == 0 && unsound == 0,
          absl::StrFormat("%d scenarios: %d repaired (%d restore the lost "
                          "header), %d impossible, %d regressions, %d "
                          "unsound headers",
                          scenarios, repaired, restored, impossible,
                          regressions, unsound)};
}

struct Timed {
  double load_s = 0;
  CdfSummary cdf;
  std::vector<double> micros;
};

Timed StreamOn(const GeneratorOptions& g, double holdout, size_t deletes) {
  const NetworkSpec full = *GenerateSynthetic(g);
  const UpdateSplit split = SplitForUpdates(full, holdout, deletes, g.seed);
  StreamRun run = *RunUpdateStream(split.initial, split.stream,
                                   StreamMode::kPerUpdate, 1);
  Timed t;
  t.load_s = run.load_micros / 1e6;
  t.cdf = run.cdf;
  for (const BenchRecord& r : run.records) t.micros.push_back(r.micros);
  return t;
}

// 9
Verdict LargeNetworkLatency() {
  GeneratorOptions g;
  g.nodes = 1000;
  g.edges = 100'000;
  g.rules_per_node = 1000;
  g.width = 32;
  g.seed = 9;
  const Timed t = StreamOn(g, 0.002, 1000);
  size_t fast = 0;
  for (double m : t.micros) fast += m <= 2500;
  const double frac = static_cast<double>(fast) / t.micros.size();
  return {t.cdf.p50 <= 1000 && frac >= 0.70,
          absl::StrFormat("1000 nodes, 100000 edges, 1000000 rules; load "
                          "%.1fs; %zu updates: median %.1fus, p90 %.1fus, "
                          "p99 %.1fus, %.1f%% <= 2.5ms",
                          t.load_s, t.micros.size(), t.cdf.p50, t.cdf.p90,
                          t.cdf.p99, 100 * frac)};
}

// 10
Verdict LinearScaling() {
  std::vector<double> medians;
  std::vector<size_t> rules;
  for (size_t per : {500, 1000, 2000, 4000}) {
    GeneratorOptions g;
    g.nodes = 200;
    g.edges = 800;
    g.rules_per_node = per;
    g.width = 32;
    g.seed = 10;
    const Timed t = StreamOn(g, 1000.0 / (200.0 * per), 500);
    medians.push_back(t.cdf.p50);
    rules.push_back(200 * per);
  }
  double worst = 0;
  std::string steps;
  for (size_t i = 1; i < medians.size(); ++i) {
    worst = std::max(worst, medians[i] / medians[i - 1]);
  }
  for (size_t i = 0; i < medians.size(); ++i) {
    absl::StrAppend(&steps, i ? ", " : "",
                    absl::StrFormat("%zu rules %.1fus", rules[i], medians[i]));
  }
  const double slope = std::log2(medians.back() / medians.front()) / 3.0;
  return {worst <= 2.5 && slope <= 1.3,
          absl::StrFormat("%s; worst doubling ratio %.2f, log-log slope %.2f",
                          steps, worst, slope)};
}

ReachabilityView FullView(const Network& network, RouterId src,
                          RouterId dst) {
  VerificationSession s = FullSession(network);
  ReachabilityView view;
  ReachabilityReport r = *VerifyReachability(s, src, dst, s.AllOnes());
  view.Update(std::vector{Prefix()}, r.reachable, network.width());
  return view;
}

// 11
Verdict BatchEquivalence() {
  std::mt19937_64 rng(11);
  int mismatches = 0, slower = 0, batches = 0;
  double seq_total = 0, batch_total = 0;
  size_t min_size = ~size_t{0};
  for (int i = 0; i < 50; ++i) {
    GeneratorOptions g;
    g.nodes = 40 + rng() % 40;
    g.edges = g.nodes * 2;
    g.rules_per_node = 60;
    g.width = 16;
    g.seed = 1100 + i;
    const NetworkSpec full = *GenerateSynthetic(g);
    const size_t deletes = 20 + rng() % 40;
    const UpdateSplit split =
        SplitForUpdates(full, (100 + rng() % 100) / (double)full.rules.size(),
                        deletes, g.seed);
    min_size = std::min(min_size, split.stream.size());
    const RouterId src = rng() % g.nodes;
    const RouterId dst = (src + 1 + rng() % (g.nodes - 1)) % g.nodes;
    Network seq_net = LoadOrDie(split.initial);
    Network batch_net = LoadOrDie(split.initial);
    ReachabilityView seq = FullView(seq_net, src, dst);
    ReachabilityView batch = seq;
    auto t0 = Clock::now();
    for (const UpdateEvent& e : split.stream) {
      BatchResult r = *BatchUpdate(seq_net, std::span(&e, 1), src, dst);
      seq.Update(r.scope, r.report.reachable, g.width);
    }
    const double seq_s = Seconds(t0);
    t0 = Clock::now();
    BatchResult r = *BatchUpdate(batch_net, split.stream, src, dst);
    batch.Update(r.scope, r.report.reachable, g.width);
    const double batch_s = Seconds(t0);
    ++batches;
    mismatches += !(seq == batch) || !(batch == FullView(batch_net, src, dst));
    slower += batch_s > seq_s;
    seq_total += seq_s;
    batch_total += batch_s;
  }
  return {mismatches == 0 && slower == 0,
          absl::StrFormat("%d batches (>= %zu updates each): %d mismatches; "
                          "batch slower in %d; total %.1fms batch vs %.1fms "
                          "sequential",
                          batches, min_size, mismatches, slower,
                          batch_total * 1e3, seq_total * 1e3)};
}

// 12
Verdict PathQualityTrend() {
  std::mt19937_64 rng(12);
  int samples = 0, hits = 0;
  double sum[3] = {0, 0, 0};
  int count[3] = {0, 0, 0};
  for (int net = 0; samples < 200; ++net) {
    GeneratorOptions g;
    g.nodes = 30;
    g.edges = 50;
    g.rules_per_node = 30;
    g.width = 16;
    g.seed = 1200 + net;
    Network network = LoadOrDie(*GenerateSynthetic(g));
    VerificationSession s = FullSession(network);
    for (int k = 0; k < 10 && samples < 200; ++k) {
      const RouterId src = rng() % g.nodes;
      const RouterId dst = (src + 1 + rng() % (g.nodes - 1)) % g.nodes;
      // Flows of interest: headers dst hands to its own hosts.
      std::vector<Prefix> served;
      for (const auto& [prefix, port] : network.table(dst)) {
        if (!network.topology().Peer({dst, port})) served.push_back(prefix);
      }
      if (served.empty()) continue;
      const StateVector b = *s.Encode(served);
      std::vector<PathQuality> q = *PathQualities(s, src, dst, b);
      size_t shortest = ~size_t{0};
      for (const PathQuality& p : q) shortest = std::min(shortest, p.path.size());
      double best_short = INFINITY, best = INFINITY;
      for (const PathQuality& p : q) {
        best = std::min(best, p.cumulative_l2);
        if (p.path.size() == shortest) {
          best_short = std::min(best_short, p.cumulative_l2);
        }
        const size_t extra = std::min<size_t>(p.path.size() - shortest, 2);
        sum[extra] += p.cumulative_l2;
        ++count[extra];
      }
      ++samples;
      hits += best_short <= best + 1e-9;
    }
  }
  const double frac = static_cast<double>(hits) / samples;
  return {frac >= 0.95,
          absl::StrFormat("%d/%d pairs (%.1f%%) have a shortest path with "
                          "minimal cumulative l2; mean l2 by extra hops "
                          "+0 %.2f, +1 %.2f, +2 %.2f",
                          hits, samples, 100 * frac, sum[0] / count[0],
                          sum[1] / std::max(1, count[1]),
                          sum[2] / std::max(1, count[2]))};
}

}  // namespace
}  // namespace dpv

int main() {
  struct Criterion {
    const char* name;
    std::function<dpv::Verdict()> run;
  };
  const Criterion criteria[] = {
      {"toy network golden values", dpv::ToyNetworkGolden},
      {"transform matrix example", dpv::TransformMatrixExample},
      {"rectification golden", dpv::ChainRepairGolden},
      {"oracle equivalence: reachability", dpv::OracleReachability},
      {"oracle equivalence: loops and blackholes",
       dpv::OracleLoopsAndBlackholes},
      {"projection equals least squares", dpv::ProjectionIsLeastSquares},
      {"partition correctness", dpv::PartitionCorrectness},
      {"rectification non-interference", dpv::RectifyNonInterference},
      {"large network update latency", dpv::LargeNetworkLatency},
      {"linear scaling", dpv::LinearScaling},
      {"batch equivalence", dpv::BatchEquivalence},
      {"path quality trend", dpv::PathQualityTrend},
  };
  int failed = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    const auto start = dpv::Clock::now();
    const dpv::Verdict v = c.run();
    failed += !v.pass;
    std::printf("%s [%d] %s: %s (%.2fs)\n", v.pass ? "PASS" : "FAIL", index,
                c.name, v.detail.c_str(), dpv::Seconds(start));
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
