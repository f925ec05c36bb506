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

#include "dpv/vector_engine.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace dpv {
namespace {

absl::Status CheckDims(size_t a, size_t b) {
  if (a == b) return absl::OkStatus();
  return absl::InvalidArgumentError(
      absl::StrCat("DimensionMismatch: ", a, " vs ", b));
}

}  // namespace

void TransformMatrix::SetColumn(size_t k, std::vector<size_t> rows) {
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  columns_[k] = std::move(rows);
}

std::vector<size_t> TransformMatrix::Column(size_t k) const {
  auto it = columns_.find(k);
  if (it == columns_.end()) return {k};
  return it->second;
}

bool TransformMatrix::At(size_t row, size_t col) const {
  auto it = columns_.find(col);
  if (it == columns_.end()) return row == col;
  return std::binary_search(it->second.begin(), it->second.end(), row);
}

std::vector<std::vector<int>> TransformMatrix::ToDense() const {
  std::vector<std::vector<int>> dense(dimension_,
                                      std::vector<int>(dimension_, 0));
  for (size_t k = 0; k < dimension_; ++k) {
    for (size_t j : Column(k)) dense[j][k] = 1;
  }
  return dense;
}

const char* ForwardCaseName(ForwardCase c) {
  switch (c) {
    case ForwardCase::kPartialForward:
      return "partial-forward";
    case ForwardCase::kFullForward:
      return "full-forward";
    case ForwardCase::kBlocked:
      return "blocked";
  }
  return "?";
}

absl::StatusOr<StateVector> Project(const ForwardingVector& v,
                                    const StateVector& b) {
  if (absl::Status s = CheckDims(v.bits.size(), b.size()); !s.ok()) return s;
  return v.bits & b;
}

absl::StatusOr<ForwardCase> ClassifyCase(const ForwardingVector& v,
                                         const StateVector& b) {
  if (absl::Status s = CheckDims(v.bits.size(), b.size()); !s.ok()) return s;
  if (b.None()) {
    return absl::InvalidArgumentError(
        "EmptyInput: no traffic to classify (b = 0)");
  }
  const StateVector projected = v.bits & b;
  if (projected == b) return ForwardCase::kFullForward;
  if (projected.None()) return ForwardCase::kBlocked;
  return ForwardCase::kPartialForward;
}

StateVector TransformUnchecked(const TransformMatrix& t, const StateVector& b) {
  StateVector out(b.size());
  b.ForEachSetBit([&](size_t k) {
    if (t.IsIdentityColumn(k)) {
      out.Set(k);
    } else {
      for (size_t j : t.Column(k)) out.Set(j);
    }
  });
  return out;
}

absl::StatusOr<StateVector> Transform(const TransformMatrix& t,
                                      const StateVector& b) {
  if (absl::Status s = CheckDims(t.dimension(), b.size()); !s.ok()) return s;
  return TransformUnchecked(t, b);
}

absl::StatusOr<StateVector> Filter(const FilterVector& g,
                                   const StateVector& b) {
  if (absl::Status s = CheckDims(g.bits.size(), b.size()); !s.ok()) return s;
  return g.bits & b;
}

absl::StatusOr<ForwardingVector> UnionForwarding(
    std::span<const ForwardingVector> vs) {
  if (vs.empty()) {
    return absl::InvalidArgumentError("EmptyInput: no forwarding vectors");
  }
  ForwardingVector out{{vs.front().owner.router, kAllPorts}, vs.front().bits};
  for (size_t i = 1; i < vs.size(); ++i) {
    if (absl::Status s = CheckDims(out.bits.size(), vs[i].bits.size());
        !s.ok()) {
      return s;
    }
    out.bits |= vs[i].bits;
  }
  return out;
}

absl::StatusOr<StateVector> BlackholeResidual(const StateVector& b_in,
                                              const StateVector& b_out) {
  if (absl::Status s = CheckDims(b_in.size(), b_out.size()); !s.ok()) return s;
  if (!b_out.IsSubsetOf(b_in)) {
    return absl::InvalidArgumentError(
        "InvalidPair: b_out forwards a class b_in never received");
  }
  return b_in ^ b_out;
}

absl::StatusOr<ProjectionError> ComputeProjectionError(
    const StateVector& b_in, const StateVector& b_out) {
  absl::StatusOr<StateVector> diff = BlackholeResidual(b_in, b_out);
  if (!diff.ok()) return diff.status();
  ProjectionError err;
  err.l2 = std::sqrt(static_cast<double>(diff->Count()));
  err.error = *std::move(diff);
  return err;
}

absl::StatusOr<StateVector> AccumulateReachable(const StateVector& acc,
                                                const StateVector& b_d) {
  if (absl::Status s = CheckDims(acc.size(), b_d.size()); !s.ok()) return s;
  return acc | b_d;
}

absl::StatusOr<std::vector<Prefix>> DecodeReachable(
    const StateVector& b, std::span<const Prefix> coordinate_prefixes) {
  std::vector<Prefix> out;
  absl::Status status = absl::OkStatus();
  b.ForEachSetBit([&](size_t j) {
    if (j >= coordinate_prefixes.size()) {
      if (status.ok()) {
        status = absl::InvalidArgumentError(
            absl::StrCat("MissingMapping: coordinate ", j, " has no prefix"));
      }
      return;
    }
    out.push_back(coordinate_prefixes[j]);
  });
  if (!status.ok()) return status;
  return out;
}

}  // namespace dpv
