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

#include "dpv/parallel.h"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "src/traversal.h"

namespace dpv {
namespace {

using internal::Explorer;
using internal::ExploreMode;
using internal::ExploreResult;
using internal::Frame;

// Either a subtree still to be searched, or terminal events already found
// while expanding the top of the tree. Kept in search order.
struct Segment {
  std::optional<Frame> task;
  ExploreResult done;
};

void Split(const VerificationSession& session, const TraversalOptions& options,
           const ExploreMode& mode, const Frame& frame, int depth,
           std::vector<Segment>& out) {
  if (depth == 0) {
    out.push_back({frame, {}});
    return;
  }
  Explorer explorer(session, options, mode, false);
  auto flush = [&] {
    ExploreResult& r = explorer.result();
    if (r.terminals == 0 && !r.truncated) return;
    out.push_back({std::nullopt, std::move(r)});
    r = ExploreResult();
  };
  explorer.Expand(frame, [&](Frame child) {
    flush();
    Split(session, options, mode, child, depth - 1, out);
  });
  flush();
}

absl::Status CheckIds(const VerificationSession& session, RouterId a,
                      RouterId b, const StateVector& b_init) {
  const size_t n = session.routers.size();
  if (a >= n || b >= n) {
    return absl::NotFoundError(
        absl::StrCat("UnknownRouter: id ", a >= n ? a : b));
  }
  if (b_init.size() != session.dimension()) {
    return absl::InvalidArgumentError("DimensionMismatch: b_init");
  }
  return absl::OkStatus();
}

std::vector<StateVector> ArrivalsFrom(const VerificationSession& session,
                                      RouterId src, const StateVector& b_init,
                                      const TraversalOptions& options) {
  ExploreMode mode;
  mode.arrivals = true;
  Explorer explorer(session, options, mode, false);
  Frame start;
  start.path = {src};
  start.b = b_init;
  explorer.Run(start);
  std::vector<StateVector> row = std::move(explorer.result().arrivals);
  if (row.empty()) {
    row.assign(session.routers.size(), StateVector(session.dimension()));
  }
  row[src] = b_init;
  return row;
}

}  // namespace

absl::StatusOr<ReachabilityReport> VerifyReachabilityParallel(
    const VerificationSession& session, RouterId src, RouterId dst,
    const StateVector& b_init, const TraversalOptions& options,
    const ParallelOptions& parallel) {
  if (absl::Status s = CheckIds(session, src, dst, b_init); !s.ok()) return s;
  ExploreMode mode;
  mode.dst = dst;
  mode.paths = true;
  Frame start;
  start.path = {src};
  start.b = b_init;
  std::vector<Segment> segments;
  Split(session, options, mode, start, parallel.split_depth, segments);

  const int64_t count = static_cast<int64_t>(segments.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int64_t i = 0; i < count; ++i) {
    Segment& seg = segments[i];
    if (!seg.task) continue;
    Explorer explorer(session, options, mode, false);
    explorer.Run(*seg.task);
    seg.done = std::move(explorer.result());
  }

  ReachabilityReport report;
  report.reachable_bits = StateVector(session.dimension());
  size_t offset = 0;
  for (Segment& seg : segments) {
    ExploreResult& r = seg.done;
    for (size_t i = 0; i < r.paths.size(); ++i) {
      if (offset + r.path_terminal[i] >= options.max_paths) break;
      report.reachable_bits |= r.paths[i].b_final;
      report.per_path.push_back(std::move(r.paths[i]));
    }
    offset += r.terminals;
    report.truncated = report.truncated || r.truncated;
  }
  report.truncated = report.truncated || offset > options.max_paths;
  report.total_paths = report.per_path.size();
  report.reachable = session.Decode(report.reachable_bits);
  return report;
}

absl::StatusOr<std::vector<std::vector<StateVector>>> AllPairsReachability(
    const VerificationSession& session, const StateVector& b_init,
    const TraversalOptions& options) {
  if (absl::Status s = CheckIds(session, 0, 0, b_init);
      !s.ok() && !session.routers.empty()) {
    return s;
  }
  std::vector<std::vector<StateVector>> reach(session.routers.size());
  for (RouterId s = 0; s < reach.size(); ++s) {
    reach[s] = ArrivalsFrom(session, s, b_init, options);
  }
  return reach;
}

absl::StatusOr<std::vector<std::vector<StateVector>>>
AllPairsReachabilityParallel(const VerificationSession& session,
                             const StateVector& b_init,
                             const TraversalOptions& options) {
  if (absl::Status s = CheckIds(session, 0, 0, b_init);
      !s.ok() && !session.routers.empty()) {
    return s;
  }
  std::vector<std::vector<StateVector>> reach(session.routers.size());
  const int64_t n = static_cast<int64_t>(reach.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int64_t s = 0; s < n; ++s) {
    reach[s] = ArrivalsFrom(session, static_cast<RouterId>(s), b_init,
                            options);
  }
  return reach;
}

}  // namespace dpv
