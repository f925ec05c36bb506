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

#include "support/fixtures.h"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "dpv/header_trie.h"
#include "dpv/prefix.h"

namespace dpv::testing {

Prefix P(absl::string_view text, int width) {
  absl::StatusOr<Prefix> p = Prefix::Parse(text, width);
  if (!p.ok()) {
    std::cerr << "bad prefix in test: " << text << ": " << p.status() << "\n";
    std::abort();
  }
  return *p;
}

std::vector<Prefix> Ps(std::initializer_list<absl::string_view> texts,
                       int width) {
  std::vector<Prefix> out;
  for (absl::string_view t : texts) out.push_back(P(t, width));
  return out;
}

std::string DataPath(absl::string_view name) {
  return absl::StrCat(DPV_TEST_DATA_DIR, "/", name);
}

std::vector<HeaderRange> LeafRanges(const HeaderTrie& trie) {
  std::vector<HeaderRange> out;
  for (const LeafInfo& leaf : trie.Leaves()) {
    out.push_back(leaf.prefix.Range(trie.width()));
  }
  std::sort(out.begin(), out.end(),
            [](const HeaderRange& a, const HeaderRange& b) {
              return a.lo < b.lo;
            });
  return out;
}

std::vector<Prefix> RandomPrefixes(std::mt19937_64& rng, int count, int width,
                                   int min_len, int max_len) {
  std::uniform_int_distribution<int> len_dist(min_len, max_len);
  std::vector<Prefix> out;
  for (int i = 0; i < count; ++i) {
    const int len = len_dist(rng);
    const uint64_t bits =
        len == 0 ? 0 : rng() & ((len == 64) ? ~uint64_t{0}
                                            : (uint64_t{1} << len) - 1);
    out.emplace_back(bits, len);
  }
  return out;
}

NetworkSpec RandomNetwork(std::mt19937_64& rng,
                          const RandomNetworkOptions& o) {
  NetworkSpec spec;
  spec.width = o.width;
  const int n =
      std::uniform_int_distribution<int>(o.min_nodes, o.max_nodes)(rng);
  for (int i = 0; i < n; ++i) spec.AddRouter(absl::StrCat("n", i));
  std::vector<std::vector<RouterId>> adj(n);
  std::set<std::pair<RouterId, RouterId>> present;
  auto link = [&](RouterId a, RouterId b) {
    if (a == b || !present.insert({std::min(a, b), std::max(a, b)}).second) {
      return;
    }
    spec.edges.push_back({a, static_cast<PortId>(adj[a].size()), b,
                          static_cast<PortId>(adj[b].size())});
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (int i = 1; i < n; ++i) {
    link(i, std::uniform_int_distribution<int>(0, i - 1)(rng));
  }
  const int extra = std::uniform_int_distribution<int>(0, n)(rng);
  for (int i = 0; i < extra; ++i) {
    link(std::uniform_int_distribution<int>(0, n - 1)(rng),
         std::uniform_int_distribution<int>(0, n - 1)(rng));
  }

  std::set<std::pair<RouterId, Prefix>> taken;
  auto add_rule = [&](RouterId r, Prefix p, PortId port) {
    if (static_cast<int>(spec.rules.size()) >= o.max_rules) return;
    if (taken.insert({r, p}).second) spec.rules.push_back({r, p, port});
  };
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const int budget = std::max(1, (o.max_rules - o.noise_rules) / n);
  const int dests = std::uniform_int_distribution<int>(1, budget)(rng);
  for (const Prefix& d : RandomPrefixes(rng, dests, o.width, 1, o.width)) {
    const RouterId owner = std::uniform_int_distribution<int>(0, n - 1)(rng);
    std::vector<int> parent(n, -1);
    parent[owner] = owner;
    std::queue<RouterId> q;
    q.push(owner);
    while (!q.empty()) {
      RouterId u = q.front();
      q.pop();
      for (RouterId v : adj[u]) {
        if (parent[v] < 0) {
          parent[v] = u;
          q.push(v);
        }
      }
    }
    for (int r = 0; r < n; ++r) {
      if (coin(rng) < o.gap_rate) continue;
      PortId port = static_cast<PortId>(adj[r].size());
      if (r != static_cast<int>(owner)) {
        port = static_cast<PortId>(
            std::find(adj[r].begin(), adj[r].end(), parent[r]) -
            adj[r].begin());
      }
      add_rule(r, d, port);
    }
  }
  for (int i = 0; i < o.noise_rules; ++i) {
    const RouterId r = std::uniform_int_distribution<int>(0, n - 1)(rng);
    const Prefix p = RandomPrefixes(rng, 1, o.width, 1, o.width)[0];
    add_rule(r, p,
             std::uniform_int_distribution<PortId>(
                 0, static_cast<PortId>(adj[r].size()))(rng));
  }
  if (o.acls) {
    std::set<std::pair<RouterId, Prefix>> seen;
    const int count = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int i = 0; i < count; ++i) {
      const RouterId r = std::uniform_int_distribution<int>(0, n - 1)(rng);
      const Prefix p = RandomPrefixes(rng, 1, o.width, 1, o.width)[0];
      if (seen.insert({r, p}).second) {
        spec.acls.push_back({r, p, coin(rng) < 0.3});
      }
    }
  }
  if (o.transforms) {
    std::set<std::pair<RouterId, Prefix>> seen;
    const int count = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int i = 0; i < count; ++i) {
      const RouterId r = std::uniform_int_distribution<int>(0, n - 1)(rng);
      const Prefix m = RandomPrefixes(rng, 1, o.width, 2, o.width)[0];
      const Prefix out = RandomPrefixes(rng, 1, o.width, 2, o.width)[0];
      if (seen.insert({r, m}).second) spec.transforms.push_back({r, m, out});
    }
  }
  return spec;
}

Network LoadOrDie(const NetworkSpec& spec) {
  absl::StatusOr<Network> n = Network::FromSpec(spec);
  if (!n.ok()) {
    std::cerr << "bad network in test: " << n.status() << "\n";
    std::abort();
  }
  return *std::move(n);
}

VerificationSession FullSession(const Network& network) {
  absl::StatusOr<VerificationSession> s =
      BuildSession(network, network.AffectedAll());
  if (!s.ok()) {
    std::cerr << "session build failed: " << s.status() << "\n";
    std::abort();
  }
  return *std::move(s);
}

std::vector<uint64_t> Headers(const std::vector<Prefix>& prefixes,
                              int width) {
  std::vector<uint64_t> out;
  for (const Prefix& p : prefixes) {
    const HeaderRange r = p.Range(width);
    for (uint64_t h = r.lo;; ++h) {
      out.push_back(h);
      if (h == r.hi) break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace dpv::testing
