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

#include <algorithm>
#include <random>

#include "netext/fixture.hpp"
#include "netext/policy.hpp"
#include "oracles.hpp"

namespace netext {
namespace {

PacketHeader H(const char* src, const char* dst, uint16_t sport, uint16_t dport,
               const char* proto = "TCP") {
  return {*Ipv4::Parse(src), *Ipv4::Parse(dst), sport, dport, proto};
}

class PolicyTest : public ::testing::Test {
 protected:
  Fixture f = fixture_motivating_example();
  const WaypointSpec& Spec(const char* id) { return f.policies.Find(id)->waypoints; }
};

TEST(Occur, Counts) {
  EXPECT_EQ(occur({"CE", "S1", "F1", "LB1"}, "F1"), 1);
  EXPECT_EQ(occur({}, "F1"), 0);
  EXPECT_EQ(occur({"IPS1", "S3", "IPS1"}, "IPS1"), 2);
}

TEST(Occur, MultisetProperty) {
  std::mt19937_64 rng(3);
  const std::vector<NodeRef> alphabet{"a", "b", "c", "d"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<NodeRef> sigma;
    for (int i = static_cast<int>(rng() % 9); i > 0; --i) sigma.push_back(alphabet[rng() % 4]);
    int sum = 0;
    for (const auto& v : alphabet) sum += occur(sigma, v);
    EXPECT_EQ(sum, static_cast<int>(sigma.size()));
    auto shuffled = sigma;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (const auto& v : alphabet) EXPECT_EQ(occur(sigma, v), occur(shuffled, v));
  }
}

TEST_F(PolicyTest, Policy1WaypointsSatisfied) {
  EXPECT_TRUE(check_waypoints(Spec("P1"), {"CE", "S1", "F1", "LB1"}).satisfied());
}

TEST_F(PolicyTest, MissingFirewallIsAnOccurrenceFailure) {
  auto v = check_waypoints(Spec("P1"), {"CE", "S1", "LB1"});
  ASSERT_EQ(v.failures.size(), 1u);
  EXPECT_EQ(v.failures[0].kind, WaypointFailure::Kind::kOccurrence);
  EXPECT_EQ(v.failures[0].nodes, std::vector<NodeRef>{"F1"});
  EXPECT_EQ(v.failures[0].detail, "Occur(F1) == 1 required, got 0");
}

TEST_F(PolicyTest, OrderUsesFirstOccurrence) {
  auto v = check_waypoints(Spec("P1"), {"CE", "LB1", "F1"});
  ASSERT_EQ(v.failures.size(), 1u);
  EXPECT_EQ(v.failures[0].kind, WaypointFailure::Kind::kOrder);
  EXPECT_EQ(v.failures[0].detail, "F1 must precede LB1");
}

TEST_F(PolicyTest, EmptySpecAlwaysHolds) {
  EXPECT_TRUE(check_waypoints(Spec("P4"), {}).satisfied());
  EXPECT_TRUE(check_waypoints(Spec("P4"), {"LB1", "F1", "S1", "CE", "u_e"}).satisfied());
}

TEST(Waypoints, UnconstrainedWaypointMustBeVisited) {
  WaypointSpec spec;
  spec.waypoints = {"A", "B"};
  spec.occurrence = {{"B", Relation::kLe, 1}};
  auto v = check_waypoints(spec, {"B"});
  ASSERT_EQ(v.failures.size(), 1u);
  EXPECT_EQ(v.failures[0].kind, WaypointFailure::Kind::kMissed);
  EXPECT_TRUE(check_waypoints(spec, {"A"}).satisfied());  // B may be absent
}

// Fewer specs than the acceptance run, same exhaustive sequence space.
TEST(Waypoints, MatchesBruteForceScanner) {
  std::mt19937_64 rng(11);
  const std::vector<NodeRef> alphabet{"A", "B", "C", "D", "E"};
  const auto sequences = oracle::all_sequences(alphabet, 6);
  ASSERT_EQ(sequences.size(), 19531u);
  for (int s = 0; s < 8; ++s) {
    const WaypointSpec spec = oracle::random_spec(rng, alphabet);
    for (const auto& sigma : sequences) {
      ASSERT_EQ(oracle::findings_of(check_waypoints(spec, sigma)),
                oracle::scan_waypoints(spec, sigma));
    }
  }
}

TEST(Scope, ContainmentAndLeak) {
  const std::set<NodeRef> scope1{"LB1", "F1", "CE", "S1", "u_e"};
  EXPECT_TRUE(check_scope(scope1, scope1).leak.empty());
  auto with_s2 = scope1;
  with_s2.insert("S2");
  EXPECT_EQ(check_scope(scope1, with_s2).leak, std::set<NodeRef>{"S2"});
  EXPECT_TRUE(check_scope(scope1, {}).leak.empty());
}

TEST(Scope, MonotoneInScope) {
  std::mt19937_64 rng(5);
  const std::vector<NodeRef> all{"a", "b", "c", "d", "e", "f"};
  auto subset = [&] {
    std::set<NodeRef> s;
    for (const auto& n : all) {
      if (rng() % 2) s.insert(n);
    }
    return s;
  };
  for (int i = 0; i < 500; ++i) {
    auto scope = subset(), reach = subset(), extra = subset();
    if (!check_scope(scope, reach).leak.empty()) continue;
    scope.insert(extra.begin(), extra.end());
    EXPECT_TRUE(check_scope(scope, reach).leak.empty());
  }
}

TEST_F(PolicyTest, MatchPolicy1) {
  auto m = match_packet(f.policies, H("198.51.100.10", "203.0.113.10", 7777, 80), "u_e");
  ASSERT_TRUE(m.is_policy());
  EXPECT_EQ(m.policy->id, "P1");
}

TEST_F(PolicyTest, UnlistedFlowIsDefaultDeny) {
  EXPECT_TRUE(match_packet(f.policies, H("198.51.100.10", "10.0.3.10", 1024, 22), "u_e")
                  .is_default_deny());
}

TEST_F(PolicyTest, OriginSeparatesReplyPolicies) {
  auto reply = match_packet(f.policies, H("10.0.1.10", "198.51.100.10", 80, 5000), "u_1");
  ASSERT_TRUE(reply.is_policy());
  EXPECT_EQ(reply.policy->id, "P3");
  auto rewritten =
      match_packet(f.policies, H("203.0.113.10", "198.51.100.10", 80, 5000), "LB1");
  ASSERT_TRUE(rewritten.is_policy());
  EXPECT_EQ(rewritten.policy->id, "P4");
  // Same rewritten header injected anywhere else is not covered.
  EXPECT_TRUE(match_packet(f.policies, H("203.0.113.10", "198.51.100.10", 80, 5000), "u_1")
                  .is_default_deny());
}

TEST_F(PolicyTest, MoreSpecificWinsAndTiesAreAmbiguous) {
  PolicySet ps = f.policies;
  Policy broad = *ps.Find("P6");
  broad.id = "P6b";
  broad.packet_class.pattern.proto.reset();
  ps.policies.push_back(broad);
  auto m = match_packet(ps, H("10.0.1.10", "10.0.2.10", 1024, 1024), "u_1");
  ASSERT_TRUE(m.is_policy());
  EXPECT_EQ(m.policy->id, "P6");

  Policy twin = *ps.Find("P6");
  twin.id = "P6c";
  ps.policies.push_back(twin);
  m = match_packet(ps, H("10.0.1.10", "10.0.2.10", 1024, 1024), "u_1");
  ASSERT_TRUE(m.is_ambiguous());
  EXPECT_EQ(m.ambiguous_ids, (std::vector<std::string>{"P6", "P6c"}));
}

TEST_F(PolicyTest, MatchIsTotal) {
  std::mt19937_64 rng(9);
  const std::vector<const char*> addrs{"198.51.100.10", "203.0.113.10", "10.0.1.10",
                                       "10.0.2.10", "10.0.3.10", "192.0.2.1"};
  const std::vector<NodeRef> origins{"u_e", "u_1", "LB1", "S3"};
  for (int i = 0; i < 2000; ++i) {
    PacketHeader h = H(addrs[rng() % addrs.size()], addrs[rng() % addrs.size()],
                       rng() % 2 ? 80 : 1024, rng() % 2 ? 80 : 22, rng() % 2 ? "TCP" : "UDP");
    auto m = match_packet(f.policies, h, origins[rng() % origins.size()]);
    const int kinds = m.is_policy() + m.is_default_deny() + m.is_ambiguous();
    EXPECT_EQ(kinds, 1);
    EXPECT_EQ(m.is_policy(), m.policy != nullptr);
  }
}

TEST_F(PolicyTest, FixtureValidates) {
  EXPECT_TRUE(validate_policy_set(f.policies, f.topology).empty());
}

TEST_F(PolicyTest, ValidationFindsBrokenInvariants) {
  PolicySet ps = f.policies;
  ps.policies[0].scope.erase("LB1");                   // destination and waypoint gone
  ps.policies[1].id = "P1";                            // duplicate
  ps.policies[4].waypoints.precedence.insert({"IPS2", "F2"});  // cycle
  auto errors = validate_policy_set(ps, f.topology);
  auto has = [&](const std::string& s) {
    return std::any_of(errors.begin(), errors.end(),
                       [&](const std::string& e) { return e.find(s) != std::string::npos; });
  };
  EXPECT_TRUE(has("duplicate policy id P1"));
  EXPECT_TRUE(has("scope does not contain destination LB1"));
  EXPECT_TRUE(has("waypoint LB1 is not in scope"));
  EXPECT_TRUE(has("cyclic precedence"));
}

}  // namespace
}  // namespace netext
