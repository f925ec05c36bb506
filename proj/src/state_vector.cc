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

#include "dpv/state_vector.h"

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace dpv {

StateVector StateVector::AllOnes(size_t size) {
  StateVector v(size);
  for (uint64_t& w : v.words_) w = ~uint64_t{0};
  if (size % 64 != 0) v.words_.back() = (uint64_t{1} << (size % 64)) - 1;
  return v;
}

StateVector StateVector::FromBits(std::initializer_list<int> bits) {
  return FromBits(std::vector<int>(bits));
}

StateVector StateVector::FromBits(const std::vector<int>& bits) {
  StateVector v(bits.size());
  for (size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0) v.Set(i);
  }
  return v;
}

size_t StateVector::Count() const {
  size_t n = 0;
  for (uint64_t w : words_) n += static_cast<size_t>(std::popcount(w));
  return n;
}

bool StateVector::None() const {
  for (uint64_t w : words_) {
    if (w != 0) return false;
  }
  return true;
}

bool StateVector::IsSubsetOf(const StateVector& other) const {
  for (size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  }
  return true;
}

StateVector& StateVector::operator&=(const StateVector& other) {
  uint64_t* dst = words_.data();
  const uint64_t* src = other.words_.data();
  const size_t n = words_.size();
#pragma omp simd
  for (size_t i = 0; i < n; ++i) dst[i] &= src[i];
  return *this;
}

StateVector& StateVector::operator|=(const StateVector& other) {
  uint64_t* dst = words_.data();
  const uint64_t* src = other.words_.data();
  const size_t n = words_.size();
#pragma omp simd
  for (size_t i = 0; i < n; ++i) dst[i] |= src[i];
  return *this;
}

StateVector& StateVector::operator^=(const StateVector& other) {
  uint64_t* dst = words_.data();
  const uint64_t* src = other.words_.data();
  const size_t n = words_.size();
#pragma omp simd
  for (size_t i = 0; i < n; ++i) dst[i] ^= src[i];
  return *this;
}

StateVector& StateVector::AndNot(const StateVector& other) {
  uint64_t* dst = words_.data();
  const uint64_t* src = other.words_.data();
  const size_t n = words_.size();
#pragma omp simd
  for (size_t i = 0; i < n; ++i) dst[i] &= ~src[i];
  return *this;
}

std::vector<size_t> StateVector::SetBits() const {
  std::vector<size_t> out;
  ForEachSetBit([&](size_t i) { out.push_back(i); });
  return out;
}

std::string StateVector::ToString() const {
  std::vector<int> bits(size_);
  for (size_t i = 0; i < size_; ++i) bits[i] = Get(i) ? 1 : 0;
  return absl::StrCat("[", absl::StrJoin(bits, ","), "]");
}

}  // namespace dpv
