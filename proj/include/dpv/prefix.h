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

#ifndef DPV_PREFIX_H_
#define DPV_PREFIX_H_

#include <compare>
#include <cstdint>
#include <string>
#include <utility>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace dpv {

// Header widths above 64 bits are not representable in a single word.
inline constexpr int kMaxHeaderWidth = 64;

using RouterId = uint32_t;
using PortId = uint32_t;

// A (router, port) pair: the owner of a forwarding rule, or an egress point.
struct PortRef {
  RouterId router = 0;
  PortId port = 0;

  friend auto operator<=>(const PortRef&, const PortRef&) = default;

  template <typename H>
  friend H AbslHashValue(H h, const PortRef& p) {
    return H::combine(std::move(h), p.router, p.port);
  }
};

// Inclusive range of header values [lo, hi].
struct HeaderRange {
  uint64_t lo = 0;
  uint64_t hi = 0;

  uint64_t size() const { return hi - lo + 1; }  // 0 for the full 64-bit space
  bool Contains(uint64_t h) const { return lo <= h && h <= hi; }
  friend bool operator==(const HeaderRange&, const HeaderRange&) = default;
};

// A bit-string header pattern. Only the first `length` bits are stored,
// right-aligned in `bits`; there is no don't-care padding.
class Prefix {
 public:
  constexpr Prefix() = default;

  // Requires length <= kMaxHeaderWidth and bits < 2^length.
  constexpr Prefix(uint64_t bits, int length)
      : bits_(bits), length_(static_cast<uint8_t>(length)) {}

  static absl::StatusOr<Prefix> Make(uint64_t bits, int length);

  // Parses "<bits>/<len>" where bits is a binary string (surplus bits past
  // `len` must be zero) or, when `width` is 32, a dotted quad.
  static absl::StatusOr<Prefix> Parse(absl::string_view text, int width);

  uint64_t bits() const { return bits_; }
  int length() const { return length_; }

  // Bit `i` counted from the most significant end of the pattern.
  int bit(int i) const {
    return static_cast<int>((bits_ >> (length_ - 1 - i)) & 1u);
  }

  Prefix Child(int b) const {
    return Prefix((bits_ << 1) | static_cast<uint64_t>(b & 1), length_ + 1);
  }
  Prefix Parent() const { return Prefix(bits_ >> 1, length_ - 1); }
  // The first `len` bits of this prefix; requires len <= length().
  Prefix Truncate(int len) const {
    return len == 0 ? Prefix() : Prefix(bits_ >> (length_ - len), len);
  }

  // True iff every header matched by `other` is matched by this prefix.
  bool Contains(const Prefix& other) const {
    return other.length_ >= length_ && other.Truncate(length_) == *this;
  }
  bool Overlaps(const Prefix& other) const {
    return Contains(other) || other.Contains(*this);
  }

  HeaderRange Range(int width) const;
  bool Matches(uint64_t header, int width) const {
    return Range(width).Contains(header);
  }

  std::string ToBinary() const;
  // Binary for most widths, dotted quad when width == 32.
  std::string ToString(int width) const;

  friend bool operator==(const Prefix&, const Prefix&) = default;

  // In-order (lexicographic by bit path) order: a prefix sorts before its
  // extensions, and 0-branches sort before 1-branches.
  friend std::strong_ordering operator<=>(const Prefix& a, const Prefix& b) {
    if (auto c = a.AlignedKey() <=> b.AlignedKey(); c != 0) return c;
    return a.length_ <=> b.length_;
  }

  template <typename H>
  friend H AbslHashValue(H h, const Prefix& p) {
    return H::combine(std::move(h), p.bits_, p.length_);
  }

 private:
  uint64_t AlignedKey() const {
    return length_ == 0 ? 0 : bits_ << (kMaxHeaderWidth - length_);
  }

  uint64_t bits_ = 0;
  uint8_t length_ = 0;
};

}  // namespace dpv

#endif  // DPV_PREFIX_H_
