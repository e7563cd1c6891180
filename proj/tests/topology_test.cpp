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

#include "netext/fixture.hpp"
#include "netext/topology.hpp"

namespace netext {
namespace {

using nlohmann::json;

bool HasIssue(const std::vector<Issue>& issues, const std::string& needle,
              bool error = true) {
  return std::any_of(issues.begin(), issues.end(), [&](const Issue& i) {
    return i.is_error() == error && i.message.find(needle) != std::string::npos;
  });
}

std::vector<Issue> BuildIssues(const json& doc) {
  try {
    build_topology(doc);
  } catch (const TopologyError& e) {
    return e.issues();
  }
  return {};
}

json Minimal() {
  return json::parse(R"({
    "sites": [{"id": "e", "kind": "enterprise", "flexibility": "full"}],
    "nodes": [
      {"id": "h1", "kind": "host", "site": "e", "addresses": ["10.0.0.1"]},
      {"id": "s", "kind": "switch", "site": "e", "addresses": []},
      {"id": "h2", "kind": "host", "site": "e", "addresses": ["10.0.0.2"]}
    ],
    "links": [{"a": "h1", "b": "s"}, {"a": "s", "b": "h2"}],
    "forwarding": {"s": {"fib": {"10.0.0.1": "h1"}}}
  })");
}

TEST(Topology, FixtureShape) {
  const Topology t = fixture_motivating_example().topology;
  EXPECT_EQ(t.nodes().size(), 16u);
  EXPECT_EQ(t.links().size(), 15u);
  EXPECT_EQ(t.EnterpriseSite(), "enterprise");
  EXPECT_EQ(t.At("LB1").labels.at("L_1").ToString(), "203.0.113.10");
  EXPECT_EQ(t.Neighbors("S3"), (std::vector<NodeRef>{"IPS1", "LB1", "S2", "v_1"}));
  for (const auto& i : validate_topology(t)) ADD_FAILURE() << i.message;
}

TEST(Topology, AddressResolution) {
  const Topology t = fixture_motivating_example().topology;
  EXPECT_EQ(t.ResolveAddress("L_1")->ToString(), "203.0.113.10");
  EXPECT_EQ(t.ResolveAddress("u_1")->ToString(), "10.0.1.10");
  EXPECT_EQ(t.ResolveAddress("192.0.2.7")->ToString(), "192.0.2.7");
  EXPECT_FALSE(t.ResolveAddress("nobody"));
  EXPECT_EQ(t.OwnerOf(*Ipv4::Parse("203.0.113.10"))->id, "LB1");
  EXPECT_EQ(t.AddressToken(*Ipv4::Parse("203.0.113.10")), "L_1");
  EXPECT_EQ(t.AddressToken(*Ipv4::Parse("10.0.2.10")), "v_1");
}

TEST(Topology, RenderBuildRoundTrip) {
  const Topology t = fixture_motivating_example().topology;
  const json doc = render_topology(t);
  const Topology back = build_topology(doc);
  EXPECT_EQ(back, t);
  EXPECT_EQ(render_topology(back).dump(), doc.dump());
}

TEST(Topology, MinimalBuilds) {
  const Topology t = build_topology(Minimal());
  EXPECT_TRUE(t.Adjacent("h1", "s"));
  EXPECT_FALSE(t.Adjacent("h1", "h2"));
  EXPECT_TRUE(t.At("s").forwarding.flood_on_miss);
}

TEST(Topology, EmptyDocumentRejected) {
  auto issues = BuildIssues(json::object());
  EXPECT_TRUE(HasIssue(issues, "no nodes"));
  EXPECT_TRUE(HasIssue(issues, "exactly one enterprise site"));
}

TEST(Topology, DanglingLinkRejected) {
  json doc = Minimal();
  doc["links"].push_back({{"a", "s"}, {"b", "ghost"}});
  EXPECT_TRUE(HasIssue(BuildIssues(doc), "dangling endpoint ghost"));
}

TEST(Topology, CollectsEveryError) {
  json doc = Minimal();
  doc["nodes"][0]["addresses"] = json::array();                 // host without address
  doc["nodes"][1]["addresses"] = json::array({"10.0.0.9"});     // switch with address
  doc["forwarding"]["s"]["fib"]["10.0.0.2"] = "h1";             // fine
  doc["forwarding"]["h2"] = {{"gateway", "h1"}};                // not adjacent
  auto issues = BuildIssues(doc);
  EXPECT_TRUE(HasIssue(issues, "host h1 has no address"));
  EXPECT_TRUE(HasIssue(issues, "switch s must not have addresses"));
  EXPECT_TRUE(HasIssue(issues, "next hop h1 is not adjacent"));
}

TEST(Topology, RejectsUnknownKeysAndKinds) {
  json doc = Minimal();
  doc["bogus"] = 1;
  doc["nodes"][1]["kind"] = "hub";
  auto issues = BuildIssues(doc);
  EXPECT_TRUE(HasIssue(issues, "unknown top-level key 'bogus'"));
  EXPECT_TRUE(HasIssue(issues, "unknown kind 'hub'"));
}

TEST(Topology, TunnelLinksNeedEndpoints) {
  json doc = Minimal();
  doc["links"][0]["tunnel"] = true;
  EXPECT_TRUE(HasIssue(BuildIssues(doc), "tunnel link"));
}

TEST(Topology, DuplicateIdRejected) {
  json doc = Minimal();
  doc["nodes"].push_back(doc["nodes"][0]);
  EXPECT_TRUE(HasIssue(BuildIssues(doc), "duplicate node id h1"));
}

TEST(Topology, DisconnectedPieceIsAWarning) {
  json doc = Minimal();
  doc["nodes"].push_back({{"id", "lonely"}, {"kind", "host"}, {"site", "e"},
                          {"addresses", {"10.0.0.3"}}});
  const Topology t = build_topology(doc);  // warnings do not fail the build
  EXPECT_TRUE(HasIssue(validate_topology(t), "unreachable component: {lonely}", false));
}

TEST(Topology, MalformedJsonIsAnError) {
  try {
    build_topology_text("{ not json");
    FAIL();
  } catch (const TopologyError& e) {
    EXPECT_TRUE(HasIssue(e.issues(), "JSON parse error"));
  }
}

TEST(Topology, PruneStaleForwarding) {
  Topology t = fixture_motivating_example().topology;
  t.Detach("u_1");
  t.PruneStaleForwarding();
  EXPECT_FALSE(t.At("u_1").forwarding.gateway);
  EXPECT_EQ(t.At("IPS1").forwarding.routes.size(), 1u);  // only the default remains
  EXPECT_EQ(t.At("S3").forwarding.fib.at(*Ipv4::Parse("10.0.1.10")), "IPS1");
}

TEST(NodeEquiv, ClassAndRules) {
  const Topology t = fixture_motivating_example().topology;
  Node copy = t.At("IPS1");
  copy.id = "IPS1'";
  copy.forwarding = {};
  EXPECT_TRUE(node_equiv(t.At("IPS1"), copy));
  EXPECT_FALSE(node_equiv(t.At("IPS1"), t.At("IPS2")));  // same class, other rules
  copy.middlebox->function_class = FunctionClass::kFirewall;
  EXPECT_FALSE(node_equiv(t.At("IPS1"), copy));
  EXPECT_THROW(node_equiv(t.At("S1"), t.At("IPS1")), std::invalid_argument);
}

}  // namespace
}  // namespace netext
