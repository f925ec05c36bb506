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

#ifndef DPV_STATE_VECTOR_H_
#define DPV_STATE_VECTOR_H_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "absl/container/inlined_vector.h"

namespace dpv {

// Fixed-width binary vector over the m equivalence classes of a
// verification session. Used for state vectors (b), forwarding vectors
// (v_i^p) and filter vectors (g_i). Dimensions up to 128 live inline.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(size_t size) : size_(size), words_(WordCount(size)) {}

  static StateVector AllOnes(size_t size);
  static StateVector FromBits(std::initializer_list<int> bits);
  static StateVector FromBits(const std::vector<int>& bits);

  size_t size() const { return size_; }

  bool Get(size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
  void Set(size_t i) { words_[i / 64] |= uint64_t{1} << (i % 64); }
  void Reset(size_t i) { words_[i / 64] &= ~(uint64_t{1} << (i % 64)); }
  void Assign(size_t i, bool value) { value ? Set(i) : Reset(i); }

  size_t Count() const;
  bool None() const;
  bool Any() const { return !None(); }
  // True iff every set bit of *this is set in `other`.
  bool IsSubsetOf(const StateVector& other) const;

  // Elementwise AND, OR, XOR and AND-NOT. Dimensions must match.
  StateVector& operator&=(const StateVector& other);
  StateVector& operator|=(const StateVector& other);
  StateVector& operator^=(const StateVector& other);
  StateVector& AndNot(const StateVector& other);

  friend StateVector operator&(StateVector a, const StateVector& b) {
    return a &= b;
  }
  friend StateVector operator|(StateVector a, const StateVector& b) {
    return a |= b;
  }
  friend StateVector operator^(StateVector a, const StateVector& b) {
    return a ^= b;
  }

  template <typename F>
  void ForEachSetBit(F&& f) const {
    for (size_t w = 0; w < words_.size(); ++w) {
      uint64_t word = words_[w];
      while (word != 0) {
        f(w * 64 + static_cast<size_t>(std::countr_zero(word)));
        word &= word - 1;
      }
    }
  }

  std::vector<size_t> SetBits() const;

  // "[1,1,0]".
  std::string ToString() const;

  friend bool operator==(const StateVector& a, const StateVector& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

 private:
  static size_t WordCount(size_t size) { return (size + 63) / 64; }

  size_t size_ = 0;
  absl::InlinedVector<uint64_t, 2> words_;
};

}  // namespace dpv

#endif  // DPV_STATE_VECTOR_H_
