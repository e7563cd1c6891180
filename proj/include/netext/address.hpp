// Copyright 2026 The netext Authors
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

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace netext {

// An IPv4 address. Ordering is numeric.
class Ipv4 {
 public:
  constexpr Ipv4() = default;
  constexpr explicit Ipv4(uint32_t value) : value_(value) {}

  static std::optional<Ipv4> Parse(std::string_view text);

  constexpr uint32_t value() const { return value_; }
  std::string ToString() const;

  friend constexpr auto operator<=>(const Ipv4&, const Ipv4&) = default;

 private:
  uint32_t value_ = 0;
};

// An IPv4 prefix in CIDR form. The host bits of `address` are always zero.
class Prefix {
 public:
  constexpr Prefix() = default;
  Prefix(Ipv4 address, int length);

  // Accepts "a.b.c.d/len" or a bare "a.b.c.d" (treated as /32).
  static std::optional<Prefix> Parse(std::string_view text);
  static Prefix Host(Ipv4 address) { return Prefix(address, 32); }

  Ipv4 address() const { return address_; }
  int length() const { return length_; }
  bool is_host() const { return length_ == 32; }
  bool Contains(Ipv4 a) const;

  // "a.b.c.d/len"; host prefixes render without the suffix.
  std::string ToString() const;

  friend auto operator<=>(const Prefix&, const Prefix&) = default;

 private:
  Ipv4 address_;
  int length_ = 0;
};

}  // namespace netext
