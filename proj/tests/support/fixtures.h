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

#ifndef DPV_TESTS_SUPPORT_FIXTURES_H_
#define DPV_TESTS_SUPPORT_FIXTURES_H_

#include <random>
#include <string>
#include <vector>

#include "absl/strings/string_view.h"
#include "dpv/header_trie.h"
#include "dpv/network.h"
#include "dpv/network_spec.h"
#include "dpv/prefix.h"
#include "dpv/session.h"

namespace dpv::testing {

// Parses a prefix or aborts the test binary.
Prefix P(absl::string_view text, int width = 3);

std::vector<Prefix> Ps(std::initializer_list<absl::string_view> texts,
                       int width = 3);

// Path of a file under tests/data.
std::string DataPath(absl::string_view name);

// Leaf ranges of a trie, sorted by lo.
std::vector<HeaderRange> LeafRanges(const HeaderTrie& trie);

// Uniform prefixes with lengths in [min_len, max_len].
std::vector<Prefix> RandomPrefixes(std::mt19937_64& rng, int count, int width,
                                   int min_len, int max_len);

struct RandomNetworkOptions {
  int min_nodes = 3;
  int max_nodes = 16;
  int width = 8;
  int max_rules = 200;
  // Destinations each router skips, leaving blackholes.
  double gap_rate = 0.0;
  // Rules with a random port; these create loops.
  int noise_rules = 0;
  bool acls = false;
  bool transforms = false;
};

// Connected topology; destination prefixes routed along BFS trees.
NetworkSpec RandomNetwork(std::mt19937_64& rng,
                          const RandomNetworkOptions& options);

Network LoadOrDie(const NetworkSpec& spec);
VerificationSession FullSession(const Network& network);

// Sorted header values covered by the prefixes.
std::vector<uint64_t> Headers(const std::vector<Prefix>& prefixes, int width);

}  // namespace dpv::testing

#endif  // DPV_TESTS_SUPPORT_FIXTURES_H_
