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

#ifndef DPV_DATASET_IO_H_
#define DPV_DATASET_IO_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "dpv/network.h"
#include "dpv/network_spec.h"
#include "dpv/verifier.h"

namespace dpv {

// Line format, '#' starts a comment:
//   WIDTH <L>                      first statement
//   NODE <router>
//   EDGE <router> <port> <router> <port>
//   RULE <router> <bits>/<len> <port>
//   ACL <router> <bits>/<len> permit|deny
//   XFORM <router> <bits>/<len> -> <bits>/<len>
//   PBR <router> <bits>/<len> <port>
// Errors read "ParseError: line N, column M: ..." or
// "DuplicateEdge: line N, column M: ...".
absl::StatusOr<NetworkSpec> ParseNetwork(absl::string_view text);
absl::StatusOr<NetworkSpec> ReadNetworkFile(const std::string& path);
std::string SerializeNetwork(const NetworkSpec& spec);

// "+ <router> <prefix> <port>" inserts, "- ..." deletes. seq counts from 1.
absl::StatusOr<std::vector<UpdateEvent>> ParseUpdateStream(
    absl::string_view text, const NetworkSpec& spec);
absl::StatusOr<std::vector<UpdateEvent>> ReadUpdateStreamFile(
    const std::string& path, const NetworkSpec& spec);
std::string SerializeUpdateStream(std::span<const UpdateEvent> events,
                                  const NetworkSpec& spec);

// Relative weights of prefix lengths.
struct MaskHistogram {
  std::vector<std::pair<int, double>> weights;

  // Mostly /24 with a tail of shorter and longer masks, rescaled to width.
  static MaskHistogram Default(int width);
  // "24:70,16:10,..." lengths with weights.
  static absl::StatusOr<MaskHistogram> Parse(absl::string_view text);
};

struct GeneratorOptions {
  size_t nodes = 0;
  size_t edges = 0;
  // Destination prefixes in the network. Every router holds one rule per
  // destination, so the table size per router equals this count.
  size_t rules_per_node = 0;
  int width = 32;
  MaskHistogram masks;  // empty means MaskHistogram::Default(width)
  uint64_t seed = 1;
};

// Connected random graph: a random spanning tree plus random extra links.
// Port k of a router is its k-th link; port `degree` faces hosts.
// Destinations are owned round-robin and routed along BFS shortest paths.
// InfeasibleParameters when the edge count cannot form a connected simple
// graph or the prefix space is too small.
absl::StatusOr<NetworkSpec> GenerateSynthetic(const GeneratorOptions& options);

struct UpdateSplit {
  NetworkSpec initial;
  std::vector<UpdateEvent> stream;
};

// Holds back `holdout` of the rules as inserts and adds `deletes` deletions
// of loaded rules, shuffled together.
UpdateSplit SplitForUpdates(const NetworkSpec& full, double holdout,
                            size_t deletes, uint64_t seed);

enum class StreamMode { kPerUpdate, kBatch };

struct BenchRecord {
  uint64_t seq = 0;
  double micros = 0;
  size_t s_affected = 0;
  size_t p_affected = 0;
  size_t paths = 0;
  size_t updates = 1;
};

struct CdfSummary {
  size_t count = 0;
  double p50 = 0;
  double p90 = 0;
  double p99 = 0;
  double fraction_under_250us = 0;
};

struct StreamRun {
  double load_micros = 0;
  std::vector<BenchRecord> records;
  CdfSummary cdf;
  size_t loops = 0;
  size_t blackholes = 0;
};

// Loads the spec (timed separately), then applies the stream one update or
// one batch at a time, checking each for loops and blackholes.
absl::StatusOr<StreamRun> RunUpdateStream(
    const NetworkSpec& spec, std::span<const UpdateEvent> stream,
    StreamMode mode, size_t batch_size, const TraversalOptions& options = {});

// Nearest-rank percentiles of the record times.
CdfSummary Summarize(std::span<const BenchRecord> records);

}  // namespace dpv

#endif  // DPV_DATASET_IO_H_
