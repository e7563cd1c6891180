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


#include <gtest/gtest.h>

#include "netext/address.hpp"
#include "netext/packet.hpp"

namespace netext {
namespace {

TEST(Ipv4, ParsesAndPrints) {
  auto a = Ipv4::Parse("203.0.113.10");
  ASSERT_TRUE(a);
  EXPECT_EQ(a->value(), (203u << 24) | (113u << 8) | 10u);
  EXPECT_EQ(a->ToString(), "203.0.113.10");
}

TEST(Ipv4, RejectsMalformed) {
  for (const char* s : {"", "1.2.3", "1.2.3.4.5", "256.0.0.1", "1..2.3", "a.b.c.d",
                        "1.2.3.4 ", "-1.2.3.4", "01.2.3.4x"}) {
    EXPECT_FALSE(Ipv4::Parse(s)) << s;
  }
}

TEST(Prefix, ContainsAndCanonicalText) {
  auto p = Prefix::Parse("10.0.1.77/24");
  ASSERT_TRUE(p);
  EXPECT_EQ(p->ToString(), "10.0.1.0/24");  // host bits cleared
  EXPECT_TRUE(p->Contains(*Ipv4::Parse("10.0.1.200")));
  EXPECT_FALSE(p->Contains(*Ipv4::Parse("10.0.2.1")));
  auto any = Prefix::Parse("0.0.0.0/0");
  ASSERT_TRUE(any);
  EXPECT_TRUE(any->Contains(*Ipv4::Parse("198.51.100.10")));

  auto host = Prefix::Parse("10.0.1.10");
  ASSERT_TRUE(host);
  EXPECT_TRUE(host->is_host());
  EXPECT_EQ(host->ToString(), "10.0.1.10");
  EXPECT_FALSE(Prefix::Parse("10.0.0.0/33"));
}

TEST(Pattern, WildcardsMatchAnything) {
  PacketHeader h{*Ipv4::Parse("198.51.100.10"), *Ipv4::Parse("203.0.113.10"), 7777, 80,
                 "TCP"};
  Pattern any;
  EXPECT_TRUE(any.Matches(h));
  EXPECT_EQ(any.Specificity(), 0);

  Pattern p;
  p.dst = Prefix::Host(h.dst);
  p.dport = 80;
  p.proto = "TCP";
  EXPECT_TRUE(p.Matches(h));
  EXPECT_EQ(p.Specificity(), 3);
  h.dport = 81;
  EXPECT_FALSE(p.Matches(h));
}

TEST(PacketHeader, Text) {
  PacketHeader h{*Ipv4::Parse("10.0.1.10"), *Ipv4::Parse("198.51.100.10"), 80, 1024, "TCP"};
  EXPECT_EQ(h.ToString(), "10.0.1.10:80->198.51.100.10:1024/TCP");
}

}  // namespace
}  // namespace netext
