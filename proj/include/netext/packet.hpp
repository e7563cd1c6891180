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

#include "netext/address.hpp"

namespace netext {

// A concrete packet header as seen by forwarding devices.
struct PacketHeader {
  Ipv4 src;
  Ipv4 dst;
  uint16_t sport = 0;
  uint16_t dport = 0;
  std::string proto;  // upper-case token, e.g. "TCP"

  // "src:sport->dst:dport/proto"
  std::string ToString() const;

  friend auto operator<=>(const PacketHeader&, const PacketHeader&) = default;
};

// A five-tuple pattern; an unset position is a wildcard.
struct Pattern {
  std::optional<Prefix> src;
  std::optional<Prefix> dst;
  std::optional<uint16_t> sport;
  std::optional<uint16_t> dport;
  std::optional<std::string> proto;

  bool Matches(const PacketHeader& h) const;
  // Number of non-wildcard positions.
  int Specificity() const;

  friend auto operator<=>(const Pattern&, const Pattern&) = default;
};

}  // namespace netext
