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

#include "netext/address.hpp"

#include <charconv>

namespace netext {
namespace {

uint32_t Mask(int length) {
  return length == 0 ? 0u : ~uint32_t{0} << (32 - length);
}

}  // namespace

std::optional<Ipv4> Ipv4::Parse(std::string_view text) {
  uint32_t value = 0;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (int octet = 0; octet < 4; ++octet) {
    if (octet > 0) {
      if (p == end || *p != '.') return std::nullopt;
      ++p;
    }
    unsigned part = 0;
    auto [next, ec] = std::from_chars(p, end, part);
    if (ec != std::errc{} || next == p || next - p > 3 || part > 255) {
      return std::nullopt;
    }
    p = next;
    value = (value << 8) | part;
  }
  if (p != end) return std::nullopt;
  return Ipv4(value);
}

std::string Ipv4::ToString() const {
  return std::to_string(value_ >> 24) + "." +
         std::to_string((value_ >> 16) & 0xff) + "." +
         std::to_string((value_ >> 8) & 0xff) + "." +
         std::to_string(value_ & 0xff);
}

Prefix::Prefix(Ipv4 address, int length)
    : address_(address.value() & Mask(length)), length_(length) {}

std::optional<Prefix> Prefix::Parse(std::string_view text) {
  const auto slash = text.find('/');
  auto address = Ipv4::Parse(text.substr(0, slash));
  if (!address) return std::nullopt;
  if (slash == std::string_view::npos) return Prefix::Host(*address);
  const auto len_text = text.substr(slash + 1);
  int length = -1;
  auto [next, ec] = std::from_chars(len_text.data(),
                                    len_text.data() + len_text.size(), length);
  if (ec != std::errc{} || next != len_text.data() + len_text.size() ||
      length < 0 || length > 32) {
    return std::nullopt;
  }
  return Prefix(*address, length);
}

bool Prefix::Contains(Ipv4 a) const {
  return (a.value() & Mask(length_)) == address_.value();
}

std::string Prefix::ToString() const {
  if (is_host()) return address_.ToString();
  return address_.ToString() + "/" + std::to_string(length_);
}

}  // namespace netext
