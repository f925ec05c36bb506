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

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "dpv/vector_engine.h"
#include "src/traversal.h"

namespace dpv::internal {

Explorer::Explorer(const VerificationSession& session,
                   const TraversalOptions& options, ExploreMode mode,
                   bool track_ports)
    : session_(session),
      options_(options),
      mode_(mode),
      max_hops_(options.max_hops != 0 ? options.max_hops
                                      : session.routers.size()),
      on_path_(session.routers.size(), 0) {
  result_.stats.track_ports = track_ports;
}

bool Explorer::Terminal() {
  if (result_.terminals >= options_.max_paths) {
    result_.truncated = true;
    stop_ = true;
    return false;
  }
  ++result_.terminals;
  return true;
}

StateVector Explorer::Ingress(RouterId r, const StateVector& b) {
  const RouterVectors& rv = session_.routers[r];
  if (!rv.filter && !rv.transform) return b;
  StateVector t = b;
  if (rv.filter) t &= rv.filter->bits;
  if (rv.transform) t = TransformUnchecked(*rv.transform, t);
  return t;
}

void Explorer::RecordPath(const StateVector& b) {
  PathResult p;
  p.path = path_;
  p.b_final = b;
  p.hop_states = hops_;
  p.per_hop_errors = errors_;
  result_.paths.push_back(std::move(p));
  result_.path_terminal.push_back(result_.terminals - 1);
}

template <typename OnChild>
void Explorer::Step(RouterId r, const StateVector& b, OnChild&& on_child) {
  if (stop_) return;
  ++result_.stats.router_visits;
  if (mode_.arrivals) {
    if (result_.arrivals.empty()) {
      result_.arrivals.assign(session_.routers.size(),
                              StateVector(session_.dimension()));
    }
    result_.arrivals[r] |= b;
  }
  if (mode_.dst && r == *mode_.dst) {
    if (Terminal() && mode_.paths) RecordPath(b);
    return;
  }
  if (path_.size() > max_hops_) {
    result_.truncated = true;
    return;
  }
  const RouterVectors& rv = session_.routers[r];
  const StateVector t = Ingress(r, b);
  if (mode_.blackholes) {
    StateVector c = t;
    c.AndNot(rv.any_port);
    if (c.Any()) {
      auto [it, inserted] = result_.holes.try_emplace(r, c);
      if (!inserted) it->second |= c;
    }
  }
  const size_t t_count = t.Count();
  bool produced = false;
  if (t_count != 0) {
    for (const ForwardingVector& v : rv.ports) {
      StateVector out = v.bits & t;
      if (out.None()) continue;
      produced = true;
      if (result_.stats.track_ports) {
        result_.stats.touched_ports.push_back(v.owner);
      }
      const std::optional<PortRef> peer = session_.topology->Peer(v.owner);
      if (!peer) {
        if (!Terminal()) return;
        continue;
      }
      const RouterId next = peer->router;
      if (on_path_[next]) {
        if (!Terminal()) return;
        if (mode_.loops) {
          LoopReport loop;
          loop.cycle.assign(std::find(path_.begin(), path_.end(), next),
                            path_.end());
          loop.headers = session_.Decode(out);
          loop.bits = std::move(out);
          result_.loops.push_back(std::move(loop));
          result_.loop_terminal.push_back(result_.terminals - 1);
        }
        continue;
      }
      const double l2 =
          std::sqrt(static_cast<double>(t_count - out.Count()));
      on_child(next, std::move(out), l2);
      if (stop_) return;
    }
  }
  if (!produced) Terminal();
}

void Explorer::Visit(RouterId r, const StateVector& b) {
  Step(r, b, [this, r](RouterId next, StateVector out, double l2) {
    path_.push_back(next);
    on_path_[next] = 1;
    if (options_.record_hops) hops_.push_back(out);
    errors_.push_back({r, l2});
    Visit(next, out);
    errors_.pop_back();
    if (options_.record_hops) hops_.pop_back();
    on_path_[next] = 0;
    path_.pop_back();
  });
}

void Explorer::Load(const Frame& frame) {
  path_ = frame.path;
  for (RouterId r : path_) on_path_[r] = 1;
  hops_ = frame.hops;
  errors_ = frame.errors;
}

void Explorer::Unload() {
  for (RouterId r : path_) on_path_[r] = 0;
  path_.clear();
  hops_.clear();
  errors_.clear();
}

void Explorer::Run(const Frame& start) {
  Load(start);
  Visit(path_.back(), start.b);
  Unload();
}

void Explorer::Expand(const Frame& frame,
                      const std::function<void(Frame)>& on_child) {
  Load(frame);
  const RouterId r = path_.back();
  Step(r, frame.b, [&](RouterId next, StateVector out, double l2) {
    Frame child;
    child.path = path_;
    child.path.push_back(next);
    child.hops = hops_;
    if (options_.record_hops) child.hops.push_back(out);
    child.errors = errors_;
    child.errors.push_back({r, l2});
    child.b = std::move(out);
    on_child(std::move(child));
  });
  Unload();
}

}  // namespace dpv::internal
