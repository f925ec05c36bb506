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

#ifndef DPV_SRC_TRAVERSAL_H_
#define DPV_SRC_TRAVERSAL_H_

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dpv/session.h"
#include "dpv/state_vector.h"
#include "dpv/verifier.h"

namespace dpv::internal {

// Search state on arrival at path.back().
struct Frame {
  std::vector<RouterId> path;
  std::vector<StateVector> hops;
  std::vector<std::pair<RouterId, double>> errors;
  StateVector b;
};

struct ExploreResult {
  std::vector<PathResult> paths;
  // Terminal index of each path and loop, for order-preserving merges.
  std::vector<size_t> path_terminal;
  std::vector<LoopReport> loops;
  std::vector<size_t> loop_terminal;
  std::map<RouterId, StateVector> holes;
  // OR of b arriving at each router; sized on first use.
  std::vector<StateVector> arrivals;
  size_t terminals = 0;
  bool truncated = false;
  TraversalStats stats;
};

struct ExploreMode {
  std::optional<RouterId> dst;
  bool paths = false;
  bool loops = false;
  bool blackholes = false;
  bool arrivals = false;
};

// Depth-first exploration shared by the serial queries and the parallel
// frontier split.
class Explorer {
 public:
  Explorer(const VerificationSession& session, const TraversalOptions& options,
           ExploreMode mode, bool track_ports);

  // Explores the whole subtree below `start`.
  void Run(const Frame& start);

  // Processes one frame, handing each child to `on_child` in search order
  // as soon as it is found. Terminal events are recorded into result(), so
  // a caller that drains result() inside `on_child` keeps search order.
  void Expand(const Frame& frame,
              const std::function<void(Frame)>& on_child);

  ExploreResult& result() { return result_; }

 private:
  // Returns false once the terminal budget is exhausted.
  bool Terminal();
  void Visit(RouterId r, const StateVector& b);
  // One router's worth of search; `on_child(next, out, l2)` continues
  // through a linked port. Defined in the .cc file.
  template <typename OnChild>
  void Step(RouterId r, const StateVector& b, OnChild&& on_child);
  void Load(const Frame& frame);
  void Unload();
  StateVector Ingress(RouterId r, const StateVector& b);
  void RecordPath(const StateVector& b);

  const VerificationSession& session_;
  const TraversalOptions& options_;
  ExploreMode mode_;
  size_t max_hops_;
  bool stop_ = false;
  ExploreResult result_;

  std::vector<RouterId> path_;
  std::vector<char> on_path_;
  std::vector<StateVector> hops_;
  std::vector<std::pair<RouterId, double>> errors_;
};

}  // namespace dpv::internal

#endif  // DPV_SRC_TRAVERSAL_H_
