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
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "dpv/dataset_io.h"
#include "dpv/network.h"
#include "dpv/oracle.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "support/fixtures.h"

namespace dpv {
namespace {

using ::dpv::testing::FullSession;
using ::dpv::testing::Headers;
using ::dpv::testing::LoadOrDie;
using ::dpv::testing::P;
using ::dpv::testing::Ps;
using ::testing::ElementsAre;
using ::testing::IsEmpty;

constexpr RouterId kY = 0, kU = 1, kQ = 2, kR = 3;

Network Load(const char* name) {
  absl::StatusOr<NetworkSpec> spec = ReadNetworkFile(testing::DataPath(name));
  EXPECT_TRUE(spec.ok()) << spec.status();
  return LoadOrDie(*spec);
}

TEST(MergePrefixesTest, JoinsSiblings) {
  EXPECT_THAT(MergePrefixes(Ps({"000/3", "001/3", "01/2"})),
              ElementsAre(P("0/1")));
  EXPECT_THAT(MergePrefixes(Ps({"001/3", "01/2"})),
              ElementsAre(P("001/3"), P("01/2")));
  EXPECT_THAT(MergePrefixes({}), IsEmpty());
}

TEST(RectifierTest, ChainAddsRuleAtQ) {
  Network network = Load("chain.net");
  VerificationSession before = FullSession(network);
  ASSERT_THAT(before.affected.prefixes,
              ElementsAre(P("00/2"), P("01/2"), P("1/1")));
  ReachabilityReport pre =
      *VerifyReachability(before, kY, kR, before.AllOnes());
  EXPECT_THAT(pre.reachable, IsEmpty());

  const std::vector<Prefix> intent = {P("01/2")};
  absl::StatusOr<RectifyResult> r = Rectify(network, kY, kR, intent);
  ASSERT_TRUE(r.ok()) << r.status();
  ASSERT_EQ(r->fixes.size(), 1u);
  EXPECT_EQ(r->fixes[0].router, kQ);
  EXPECT_EQ(r->fixes[0].prefix, P("01/2"));
  EXPECT_EQ(r->fixes[0].port, 1u);
  EXPECT_THAT(r->fixes[0].rationale, ElementsAre(P("01/2")));
  EXPECT_THAT(r->achieved, ElementsAre(P("01/2")));

  VerificationSession after = FullSession(network);
  ReachabilityReport post =
      *VerifyReachability(after, kY, kR, after.AllOnes());
  ASSERT_EQ(post.per_path.size(), 1u);
  EXPECT_THAT(post.per_path[0].path, ElementsAre(kY, kU, kQ, kR));
  // b after U, then after Q.
  EXPECT_EQ(post.per_path[0].hop_states[1], StateVector::FromBits({0, 1, 0}));
  EXPECT_EQ(post.per_path[0].hop_states[2], StateVector::FromBits({0, 1, 0}));
  EXPECT_THAT(post.reachable, ElementsAre(P("01/2")));
}

TEST(RectifierTest, AlreadyReachableIsNoOp) {
  Network network = Load("toy.net");
  ASSERT_TRUE(network.Apply({UpdateOp::kInsert, kQ, P("0/1"), 0}).ok());
  const std::vector<Prefix> intent = {P("000/3")};
  absl::StatusOr<RectifyResult> r = Rectify(network, kY, kR, intent);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_THAT(r->fixes, IsEmpty());
  EXPECT_THAT(r->achieved, ElementsAre(P("000/3")));
}

TEST(RectifierTest, ImpossibleWithoutOverride) {
  Network network = Load("chain.net");
  // Q sends 00/2 to its host port; fixing it would change that.
  const std::vector<Prefix> intent = {P("00/2")};
  absl::StatusOr<RectifyResult> r = Rectify(network, kY, kR, intent);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_THAT(std::string(r.status().message()),
              ::testing::StartsWith("RectificationImpossible"));

  RectifyOptions o;
  o.allow_override = true;
  absl::StatusOr<RectifyResult> forced = Rectify(network, kY, kR, intent, o);
  ASSERT_TRUE(forced.ok()) << forced.status();
  EXPECT_THAT(forced->achieved, ElementsAre(P("00/2")));
  EXPECT_EQ(network.table(kQ).at(P("00/2")), 1u);
}

TEST(RectifierTest, SplitClassIntentIsRejected) {
  Network network = Load("chain.net");
  const std::vector<Prefix> intent = {P("010/3")};
  EXPECT_EQ(Rectify(network, kY, kR, intent).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(PathQualityTest, ToyScoresYUR) {
  Network network = Load("toy.net");
  ASSERT_TRUE(network.Apply({UpdateOp::kInsert, kQ, P("0/1"), 0}).ok());
  absl::StatusOr<VerificationSession> s =
      BuildSession(network, network.AffectedBy(std::vector{P("0/1")}));
  ASSERT_TRUE(s.ok());
  absl::StatusOr<std::vector<PathQuality>> q =
      PathQualities(*s, kY, kR, s->AllOnes());
  ASSERT_TRUE(q.ok()) << q.status();
  ASSERT_EQ(q->size(), 2u);
  EXPECT_THAT((*q)[0].path, ElementsAre(kY, kU, kR));
  EXPECT_DOUBLE_EQ((*q)[0].cumulative_l2, 2.0);
  EXPECT_THAT((*q)[0].per_node,
              ElementsAre(std::pair<RouterId, double>{kY, 1.0},
                          std::pair<RouterId, double>{kU, 1.0},
                          std::pair<RouterId, double>{kR, 0.0}));
  EXPECT_THAT((*q)[1].path, ElementsAre(kY, kU, kQ, kR));
  EXPECT_GE((*q)[1].cumulative_l2, (*q)[0].cumulative_l2);
}

TEST(PathQualityTest, ConfiguredPathScoresZero) {
  Network network = Load("toy.net");
  ASSERT_TRUE(network.Apply({UpdateOp::kInsert, kQ, P("0/1"), 0}).ok());
  VerificationSession s = FullSession(network);
  const std::vector<Prefix> zero = {P("000/3")};
  StateVector b = *s.Encode(zero);
  std::vector<PathQuality> q = *PathQualities(s, kY, kR, b);
  EXPECT_DOUBLE_EQ(q[0].cumulative_l2, 0.0);
}

TEST(PathQualityTest, NoPath) {
  NetworkSpec spec;
  spec.width = 2;
  spec.AddRouter("A");
  spec.AddRouter("B");
  Network network = LoadOrDie(spec);
  VerificationSession s = FullSession(network);
  absl::Status st = PathQualities(s, 0, 1, s.AllOnes()).status();
  EXPECT_EQ(st.code(), absl::StatusCode::kNotFound);
  EXPECT_THAT(std::string(st.message()), ::testing::StartsWith("NoPath"));
}

TEST(PathQualityTest, InvariantUnderPermutation) {
  Network network = Load("toy.net");
  ASSERT_TRUE(network.Apply({UpdateOp::kInsert, kQ, P("0/1"), 0}).ok());
  AffectedSets a = network.AffectedAll();
  VerificationSession s1 = *BuildSession(network, a);
  std::vector<size_t> order(a.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = order.size() - 1 - i;
  ASSERT_TRUE(a.Permute(order).ok());
  VerificationSession s2 = *BuildSession(network, a);
  std::vector<PathQuality> q1 = *PathQualities(s1, kY, kR, s1.AllOnes());
  std::vector<PathQuality> q2 = *PathQualities(s2, kY, kR, s2.AllOnes());
  ASSERT_EQ(q1.size(), q2.size());
  for (size_t i = 0; i < q1.size(); ++i) {
    EXPECT_EQ(q1[i].path, q2[i].path);
    EXPECT_EQ(q1[i].cumulative_l2, q2[i].cumulative_l2);
  }
}

TEST(ApplyFixesTest, EmptyLeavesStateAlone) {
  Network network = Load("chain.net");
  const NetworkSpec before = network.ToSpec();
  ASSERT_TRUE(ApplyFixes(network, {}, kY, kR).ok());
  EXPECT_EQ(network.ToSpec(), before);
}

TEST(ApplyFixesTest, FixesThenDeletesRoundTrip) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    testing::RandomNetworkOptions o;
    const NetworkSpec spec = testing::RandomNetwork(rng, o);
    Network network = LoadOrDie(spec);
    Network pristine = LoadOrDie(spec);
    std::vector<RuleFix> fixes;
    std::set<std::pair<RouterId, Prefix>> used;
    for (const RuleSpec& r : spec.rules) used.insert({r.router, r.prefix});
    for (const Prefix& p : testing::RandomPrefixes(rng, 5, spec.width, 1, 8)) {
      const RouterId r = rng() % spec.router_count();
      if (used.insert({r, p}).second) fixes.push_back({r, p, 0, {}});
    }
    ASSERT_TRUE(ApplyFixes(network, fixes, 0, 1).ok());
    for (const RuleFix& f : fixes) {
      ASSERT_TRUE(
          network.Apply({UpdateOp::kDelete, f.router, f.prefix, f.port}).ok());
    }
    EXPECT_TRUE(network.trie().StructurallyEqual(pristine.trie()));
  }
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

TEST(RectifierTest, BrokenRuleIsRestoredWithoutRegressions) {
  std::mt19937_64 rng(21);
  int repaired = 0;
  for (int trial = 0; trial < 15; ++trial) {
    testing::RandomNetworkOptions o;
    o.max_nodes = 8;
    NetworkSpec spec = testing::RandomNetwork(rng, o);
    // Find a rule whose removal breaks some pair.
    const std::set<Triple> full = AllReachable(spec);
    std::vector<size_t> order(spec.rules.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t idx : order) {
      NetworkSpec broken = spec;
      broken.rules.erase(broken.rules.begin() + idx);
      const std::set<Triple> before = AllReachable(broken);
      std::vector<Triple> lost;
      std::set_difference(full.begin(), full.end(), before.begin(),
                          before.end(), std::back_inserter(lost));
      if (lost.empty()) continue;
      const auto [src, dst, h] = lost.front();
      const RuleSpec& removed = spec.rules[idx];
      Network network = LoadOrDie(broken);
      const std::vector<Prefix> intent = {removed.prefix};
      absl::StatusOr<RectifyResult> r = Rectify(network, src, dst, intent);
      if (!r.ok()) {
        EXPECT_EQ(r.status().code(), absl::StatusCode::kFailedPrecondition)
            << r.status();
        break;
      }
      const NetworkSpec fixed = network.ToSpec();
      const std::set<Triple> after = AllReachable(fixed);
      EXPECT_TRUE(std::includes(after.begin(), after.end(), before.begin(),
                                before.end()))
          << "trial " << trial;
      oracle::SimulationOptions so;
      so.dst = dst;
      const std::vector<uint64_t> truth =
          oracle::SimulateAll(fixed, src, so)->reachable;
      for (uint64_t x : Headers(r->achieved, spec.width)) {
        EXPECT_TRUE(std::binary_search(truth.begin(), truth.end(), x))
            << "trial " << trial << " header " << x;
      }
      ++repaired;
      break;
    }
  }
  EXPECT_GT(repaired, 5);
}

}  // namespace
}  // namespace dpv
