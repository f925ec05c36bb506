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

#include "dpv/prefix.h"

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"

namespace dpv {
namespace {

uint64_t LowMask(int n) {
  return n >= 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1;
}

absl::StatusOr<uint64_t> ParseDottedQuad(absl::string_view text) {
  std::vector<absl::string_view> octets = absl::StrSplit(text, '.');
  if (octets.size() != 4) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed dotted quad '", text, "'"));
  }
  uint64_t value = 0;
  for (absl::string_view octet : octets) {
    uint32_t v = 0;
    if (octet.empty() || octet.size() > 3 || !absl::SimpleAtoi(octet, &v) ||
        v > 255) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed octet '", octet, "' in '", text, "'"));
    }
    value = (value << 8) | v;
  }
  return value;
}

}  // namespace

absl::StatusOr<Prefix> Prefix::Make(uint64_t bits, int length) {
  if (length < 0 || length > kMaxHeaderWidth) {
    return absl::InvalidArgumentError(
        absl::StrCat("prefix length ", length, " out of range"));
  }
  if ((bits & ~LowMask(length)) != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("prefix bits exceed length ", length));
  }
  return Prefix(bits, length);
}

absl::StatusOr<Prefix> Prefix::Parse(absl::string_view text, int width) {
  const size_t slash = text.find('/');
  if (slash == absl::string_view::npos) {
    return absl::InvalidArgumentError(
        absl::StrCat("prefix '", text, "' lacks '/<len>'"));
  }
  absl::string_view body = text.substr(0, slash);
  absl::string_view len_text = text.substr(slash + 1);
  int length = 0;
  if (len_text.empty() || len_text.size() > 2 ||
      !absl::SimpleAtoi(len_text, &length) || length < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad prefix length in '", text, "'"));
  }
  if (length > width) {
    return absl::InvalidArgumentError(absl::StrCat(
        "prefix '", text, "' is longer than header width ", width));
  }
  if (width == 32 && body.find('.') != absl::string_view::npos) {
    absl::StatusOr<uint64_t> address = ParseDottedQuad(body);
    if (!address.ok()) return address.status();
    const uint64_t host_bits = *address & LowMask(32 - length);
    if (host_bits != 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("prefix '", text, "' has bits set past its length"));
    }
    return Prefix(length == 0 ? 0 : *address >> (32 - length), length);
  }
  if (body.empty() && length == 0) return Prefix();
  if (body.size() < static_cast<size_t>(length) ||
      body.size() > static_cast<size_t>(width > 0 ? width : 1)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "prefix '", text, "' has ", body.size(), " bits for length ", length));
  }
  uint64_t bits = 0;
  for (size_t i = 0; i < body.size(); ++i) {
    const char c = body[i];
    if (c != '0' && c != '1') {
      return absl::InvalidArgumentError(
          absl::StrCat("non-binary digit in prefix '", text, "'"));
    }
    if (i < static_cast<size_t>(length)) {
      bits = (bits << 1) | static_cast<uint64_t>(c - '0');
    } else if (c != '0') {
      return absl::InvalidArgumentError(
          absl::StrCat("prefix '", text, "' has bits set past its length"));
    }
  }
  return Prefix(bits, length);
}

HeaderRange Prefix::Range(int width) const {
  const int free_bits = width - length_;
  const uint64_t lo = free_bits >= 64 ? 0 : bits_ << free_bits;
  return HeaderRange{lo, lo | LowMask(free_bits)};
}

std::string Prefix::ToBinary() const {
  if (length_ == 0) return "0/0";
  std::string out;
  out.reserve(length_ + 3);
  for (int i = 0; i < length_; ++i) out.push_back(bit(i) ? '1' : '0');
  absl::StrAppend(&out, "/", length_);
  return out;
}

std::string Prefix::ToString(int width) const {
  if (width != 32) return ToBinary();
  const uint64_t address = Range(32).lo;
  return absl::StrCat((address >> 24) & 0xff, ".", (address >> 16) & 0xff, ".",
                      (address >> 8) & 0xff, ".", address & 0xff, "/",
                      length_);
}

}  // namespace dpv
