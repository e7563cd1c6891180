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

#include <fstream>
#include <random>
#include <sstream>

#include "netext/fixture.hpp"
#include "netext/traversal.hpp"
#include "oracles.hpp"

namespace netext {
namespace {

PacketHeader H(const char* src, const char* dst, uint16_t sport, uint16_t dport,
               const char* proto = "TCP") {
  return {*Ipv4::Parse(src), *Ipv4::Parse(dst), sport, dport, proto};
}

const PacketHeader kWeb = H("198.51.100.10", "203.0.113.10", 1024, 80);

class TraversalTest : public ::testing::Test {
 protected:
  Fixture f = fixture_motivating_example();
};

TEST_F(TraversalTest, LoadBalancerRewrites) {
  StepAction a = forward_step(f.topology, "LB1", kWeb, NodeRef("F1"));
  ASSERT_TRUE(a.is_rewrite());
  EXPECT_EQ(a.rewritten->dst.ToString(), "10.0.1.10");
  EXPECT_EQ(a.kind, StepAction::Kind::kForward);
  EXPECT_EQ(a.next, std::vector<NodeRef>{"S3"});
}

TEST_F(TraversalTest, SwitchFibHitAndFlood) {
  StepAction hit = forward_step(f.topology, "S3", H("10.0.3.10", "10.0.2.10", 1, 2),
                                NodeRef("S2"));
  EXPECT_EQ(hit.kind, StepAction::Kind::kForward);
  EXPECT_EQ(hit.next, std::vector<NodeRef>{"v_1"});

  StepAction miss = forward_step(f.topology, "S3", H("10.0.3.10", "10.0.9.9", 1, 2),
                                 NodeRef("S2"));
  EXPECT_EQ(miss.kind, StepAction::Kind::kFlood);
  EXPECT_EQ(miss.next, (std::vector<NodeRef>{"IPS1", "LB1", "v_1"}));
}

TEST_F(TraversalTest, AclDropAtEdge) {
  StepAction a = forward_step(f.topology, "CE", H("198.51.100.10", "192.0.2.99", 1, 2),
                              NodeRef("u_e"));
  EXPECT_EQ(a.kind, StepAction::Kind::kDrop);
  EXPECT_EQ(a.reason, "acl");
  Traversal tr = simulate(f.topology, "u_e", H("198.51.100.10", "192.0.2.99", 1, 2));
  EXPECT_EQ(tr.outcome.kind, Outcome::Kind::kDropped);
  EXPECT_EQ(tr.outcome.at, "CE");
}

TEST_F(TraversalTest, Policy1Probe) {
  Traversal tr = simulate(f.topology, "u_e", kWeb);
  EXPECT_EQ(tr.sigma, (std::vector<NodeRef>{"u_e", "CE", "S1", "F1", "LB1", "S3", "IPS1",
                                            "u_1"}));
  EXPECT_EQ(tr.outcome.kind, Outcome::Kind::kDelivered);
  EXPECT_EQ(tr.outcome.at, "u_1");
  ASSERT_EQ(tr.rewrites.size(), 1u);
  EXPECT_EQ(tr.rewrites[0].at, "LB1");
  EXPECT_EQ(tr.sigma[tr.rewrites[0].sigma_index], "LB1");
  EXPECT_EQ(tr.SigmaSegmentIds().size(), 2u);
  EXPECT_EQ(tr.SegmentWalk(tr.SigmaSegmentIds()[0]),
            (std::vector<NodeRef>{"u_e", "CE", "S1", "F1", "LB1"}));
  EXPECT_EQ(tr.SegmentWalk(tr.SigmaSegmentIds()[1]),
            (std::vector<NodeRef>{"LB1", "S3", "IPS1", "u_1"}));
  const std::set<NodeRef> scope1{"LB1", "F1", "CE", "S1", "u_e"};
  const std::set<NodeRef> scope2{"LB1", "IPS1", "S3", "u_1"};
  EXPECT_EQ(tr.segments[tr.SigmaSegmentIds()[0]].reach, scope1);
  EXPECT_EQ(tr.segments[tr.SigmaSegmentIds()[1]].reach, scope2);
  std::set<NodeRef> both = scope1;
  both.insert(scope2.begin(), scope2.end());
  EXPECT_EQ(tr.reach_set, both);
  EXPECT_EQ(tr.TunnelCrossings(f.topology), 0);
}

TEST(Traversal, FloodingRingHitsHopLimit) {
  Topology t;
  t.AddSite({"e", SiteKind::kEnterprise, Flexibility::kFull});
  for (const char* id : {"A", "B", "C"}) {
    Node n;
    n.id = id;
    n.kind = NodeKind::kSwitch;
    n.site = "e";
    t.AddNode(n);
  }
  t.AddLink(Link::Make("A", "B"));
  t.AddLink(Link::Make("B", "C"));
  t.AddLink(Link::Make("C", "A"));
  Traversal tr = simulate(t, "A", H("10.0.0.1", "10.0.0.2", 1, 2));
  EXPECT_EQ(tr.outcome.kind, Outcome::Kind::kHopLimitExceeded);
  EXPECT_EQ(tr.reach_set, (std::set<NodeRef>{"A", "B", "C"}));
}

TEST_F(TraversalTest, RejectsBadArguments) {
  EXPECT_THROW(simulate(f.topology, "nowhere", kWeb), std::invalid_argument);
  EXPECT_THROW(simulate(f.topology, "u_e", kWeb, 0), std::invalid_argument);
}

TEST_F(TraversalTest, ShortHopLimitStopsEarly) {
  Traversal tr = simulate(f.topology, "u_e", kWeb, 3);
  EXPECT_EQ(tr.outcome.kind, Outcome::Kind::kHopLimitExceeded);
  EXPECT_LE(tr.sigma.size(), 4u);
}

TEST_F(TraversalTest, ProbeSet) {
  auto probes = probe_headers(f.policies, f.topology);
  int policy_probes = 0;
  bool ue_to_u2 = false;
  for (const auto& p : probes) {
    policy_probes += !p.is_default_deny();
    if (p.is_default_deny() && p.inject_at == "u_e" &&
        p.header.dst.ToString() == "10.0.3.10") {
      ue_to_u2 = true;
      EXPECT_EQ(p.header.dport, 80);
      EXPECT_EQ(p.header.proto, "TCP");
    }
  }
  EXPECT_EQ(policy_probes, 6);
  EXPECT_TRUE(ue_to_u2);

  auto p1 = policy_probe(*f.policies.Find("P1"), f.topology);
  ASSERT_TRUE(p1);
  EXPECT_EQ(p1->inject_at, "u_e");
  EXPECT_EQ(p1->header, kWeb);
  EXPECT_EQ(policy_probe(*f.policies.Find("P2"), f.topology)->inject_at, "LB1");
}

TEST(Traversal, ProbesWithoutPolicies) {
  Topology t;
  t.AddSite({"e", SiteKind::kEnterprise, Flexibility::kFull});
  for (auto [id, addr] : {std::pair{"a", "10.0.0.1"}, {"b", "10.0.0.2"}}) {
    Node n;
    n.id = id;
    n.site = "e";
    n.addresses = {*Ipv4::Parse(addr)};
    t.AddNode(n);
  }
  t.AddLink(Link::Make("a", "b"));
  auto probes = probe_headers({}, t);
  ASSERT_EQ(probes.size(), 2u);
  EXPECT_TRUE(probes[0].is_default_deny());
  EXPECT_TRUE(probes[1].is_default_deny());
}

TEST_F(TraversalTest, GoldenTrace) {
  Traversal tr = simulate(f.topology, "u_e", kWeb, kDefaultHopLimit, true);
  std::string got;
  for (const auto& line : tr.trace) got += line + "\n";
  std::ifstream in(NETEXT_TEST_DATA "/p1_trace.golden");
  ASSERT_TRUE(in) << "missing golden file";
  std::stringstream want;
  want << in.rdbuf();
  EXPECT_EQ(got, want.str());
}

TEST(Traversal, MatchesNaiveClosure) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 200; ++i) {
    auto net = oracle::random_network(rng, 8);
    Traversal tr = simulate(net.topology, net.inject, net.header);
    ASSERT_EQ(tr.reach_set, oracle::closure_reach(net.topology, net.inject, net.header))
        << "network " << i << ": " << render_topology(net.topology).dump();
  }
}

TEST(Traversal, ConservationAndDeterminism) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 300; ++i) {
    auto net = oracle::random_network(rng, 8);
    const Topology& t = net.topology;
    Traversal a = simulate(t, net.inject, net.header, kDefaultHopLimit, true);
    Traversal b = simulate(t, net.inject, net.header, kDefaultHopLimit, true);
    EXPECT_EQ(a.trace, b.trace);
    EXPECT_EQ(a.sigma, b.sigma);
    ASSERT_FALSE(a.sigma.empty());
    EXPECT_EQ(a.sigma.front(), net.inject);
    for (size_t k = 1; k < a.sigma.size(); ++k) {
      EXPECT_TRUE(t.Adjacent(a.sigma[k - 1], a.sigma[k]));
    }
    for (const auto& n : a.sigma) EXPECT_TRUE(a.reach_set.contains(n));
    if (a.outcome.kind == Outcome::Kind::kDelivered) {
      EXPECT_EQ(a.sigma.back(), a.outcome.at);
    }
    EXPECT_LE(a.expansions, static_cast<size_t>(kDefaultHopLimit) * t.nodes().size());
  }
}

}  // namespace
}  // namespace netext
