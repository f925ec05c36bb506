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

#ifndef DPV_VECTOR_ENGINE_H_
#define DPV_VECTOR_ENGINE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpv/prefix.h"
#include "dpv/state_vector.h"

namespace dpv {

// Port sentinel used for per-router unions of forwarding vectors.
inline constexpr PortId kAllPorts = ~PortId{0};

// Diagonal of A_i^p (A_i^p)^T: entry j is 1 iff the router sends class j
// out of this port.
struct ForwardingVector {
  PortRef owner;
  StateVector bits;
};

// Entry j is 1 iff the router's ACL permits class j.
struct FilterVector {
  RouterId router = 0;
  StateVector bits;
};

// Sparse m x m binary matrix. Columns without an explicit row list are
// identity columns; an explicit column k lists the classes that class k
// is rewritten into.
class TransformMatrix {
 public:
  TransformMatrix() = default;
  explicit TransformMatrix(size_t dimension) : dimension_(dimension) {}

  size_t dimension() const { return dimension_; }

  // Replaces column k with the given rows (possibly empty).
  void SetColumn(size_t k, std::vector<size_t> rows);
  bool IsIdentityColumn(size_t k) const { return !columns_.contains(k); }
  // Rows of column k; {k} for identity columns.
  std::vector<size_t> Column(size_t k) const;
  bool At(size_t row, size_t col) const;

  // Dense row-major rendering, for tests and reports.
  std::vector<std::vector<int>> ToDense() const;

 private:
  size_t dimension_ = 0;
  absl::flat_hash_map<size_t, std::vector<size_t>> columns_;
};

enum class ForwardCase { kPartialForward, kFullForward, kBlocked };

const char* ForwardCaseName(ForwardCase c);

struct ProjectionError {
  StateVector error;
  double l2 = 0;
};

// b_i = v_i^p (x) b_{i-1}: orthogonal projection of b onto the subspace
// spanned by the standard basis vectors selected by v.
absl::StatusOr<StateVector> Project(const ForwardingVector& v,
                                    const StateVector& b);

// Which of the three least-squares outcomes applies. EmptyInput if b = 0.
absl::StatusOr<ForwardCase> ClassifyCase(const ForwardingVector& v,
                                         const StateVector& b);

// t = H(T b).
absl::StatusOr<StateVector> Transform(const TransformMatrix& t,
                                      const StateVector& b);

// f = g (x) b.
absl::StatusOr<StateVector> Filter(const FilterVector& g,
                                   const StateVector& b);

// Elementwise OR; owner becomes (router, kAllPorts).
absl::StatusOr<ForwardingVector> UnionForwarding(
    std::span<const ForwardingVector> vs);

// c = b_in XOR b_out. InvalidPair unless b_out <= b_in.
absl::StatusOr<StateVector> BlackholeResidual(const StateVector& b_in,
                                              const StateVector& b_out);

// b_in - b_out with its l2 norm, sqrt(popcount).
absl::StatusOr<ProjectionError> ComputeProjectionError(
    const StateVector& b_in, const StateVector& b_out);

// Saturating sum of per-path results.
absl::StatusOr<StateVector> AccumulateReachable(const StateVector& acc,
                                                const StateVector& b_d);

// Prefixes at the set coordinates. MissingMapping if a set coordinate has
// no prefix.
absl::StatusOr<std::vector<Prefix>> DecodeReachable(
    const StateVector& b, std::span<const Prefix> coordinate_prefixes);

// Unchecked kernels used on hot paths once dimensions are known to agree.
inline StateVector ProjectUnchecked(const StateVector& v,
                                    const StateVector& b) {
  return v & b;
}
StateVector TransformUnchecked(const TransformMatrix& t, const StateVector& b);

}  // namespace dpv

#endif  // DPV_VECTOR_ENGINE_H_
