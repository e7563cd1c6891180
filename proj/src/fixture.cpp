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


#include "netext/fixture.hpp"

#include "netext/policy_dsl.hpp"

namespace netext {

const std::string& fixture_topology_document() {
  static const std::string doc = R"json({
  "sites": [
    {"id": "enterprise", "kind": "enterprise", "flexibility": "full"},
    {"id": "dc", "kind": "remote_dc", "flexibility": "full"},
    {"id": "cloud", "kind": "remote_dc", "flexibility": "restricted"}
  ],
  "nodes": [
    {"id": "u_e", "kind": "host", "site": "enterprise", "addresses": ["198.51.100.10"]},
    {"id": "CE", "kind": "router", "site": "enterprise", "addresses": ["198.51.100.1"]},
    {"id": "INET", "kind": "router", "site": "enterprise", "addresses": ["192.0.2.1"]},
    {"id": "S1", "kind": "switch", "site": "enterprise", "addresses": []},
    {"id": "F1", "kind": "middlebox", "site": "enterprise", "addresses": [],
     "middlebox": {"class": "firewall", "rules": [
       {"match": {"dst": "203.0.113.10", "dport": 80, "proto": "TCP"}, "action": "allow"},
       {"match": {"src": "203.0.113.10", "sport": 80, "proto": "TCP"}, "action": "allow"},
       {"match": {}, "action": "deny"}]}},
    {"id": "LB1", "kind": "middlebox", "site": "enterprise", "addresses": ["203.0.113.10"],
     "labels": {"L_1": "203.0.113.10"},
     "middlebox": {"class": "load_balancer", "rules": [
       {"match": {"dst": "203.0.113.10", "dport": 80, "proto": "TCP"}, "action": "rewrite",
        "set": {"dst": "10.0.1.10"}},
       {"match": {"src": "10.0.1.10", "sport": 80, "proto": "TCP"}, "action": "rewrite",
        "set": {"src": "203.0.113.10"}},
       {"match": {}, "action": "allow"}]}},
    {"id": "S3", "kind": "switch", "site": "enterprise", "addresses": []},
    {"id": "IPS1", "kind": "middlebox", "site": "enterprise", "addresses": [],
     "middlebox": {"class": "ips", "rules": [
       {"match": {"src": "10.0.1.10"}, "action": "allow"},
       {"match": {"src": "198.51.100.0/24", "dst": "10.0.1.10", "dport": 80, "proto": "TCP"},
        "action": "allow"},
       {"match": {}, "action": "deny"}]}},
    {"id": "u_1", "kind": "host", "site": "enterprise", "addresses": ["10.0.1.10"]},
    {"id": "v_1", "kind": "host", "site": "enterprise", "addresses": ["10.0.2.10"]},
    {"id": "S2", "kind": "switch", "site": "enterprise", "addresses": []},
    {"id": "F2", "kind": "middlebox", "site": "enterprise", "addresses": [],
     "middlebox": {"class": "firewall", "rules": [
       {"match": {"src": "10.0.2.0/24"}, "action": "deny"},
       {"match": {"proto": "TCP"}, "action": "allow"},
       {"match": {}, "action": "deny"}]}},
    {"id": "LB2", "kind": "middlebox", "site": "enterprise", "addresses": [],
     "middlebox": {"class": "load_balancer", "rules": [
       {"match": {}, "action": "allow"}]}},
    {"id": "S4", "kind": "switch", "site": "enterprise", "addresses": []},
    {"id": "IPS2", "kind": "middlebox", "site": "enterprise", "addresses": [],
     "middlebox": {"class": "ips", "rules": [
       {"match": {"dst": "10.0.3.10"}, "action": "allow"},
       {"match": {}, "action": "deny"}]}},
    {"id": "u_2", "kind": "host", "site": "enterprise", "addresses": ["10.0.3.10"]}
  ],
  "links": [
    {"a": "u_e", "b": "CE"}, {"a": "CE", "b": "INET"}, {"a": "CE", "b": "S1"},
    {"a": "S1", "b": "F1"}, {"a": "F1", "b": "LB1"}, {"a": "LB1", "b": "S3"},
    {"a": "S3", "b": "IPS1"}, {"a": "IPS1", "b": "u_1"}, {"a": "S3", "b": "v_1"},
    {"a": "S3", "b": "S2"}, {"a": "S2", "b": "F2"}, {"a": "F2", "b": "LB2"},
    {"a": "LB2", "b": "S4"}, {"a": "S4", "b": "IPS2"}, {"a": "IPS2", "b": "u_2"}
  ],
  "forwarding": {
    "u_e": {"gateway": "CE"},
    "u_1": {"gateway": "IPS1"},
    "v_1": {"gateway": "S3"},
    "u_2": {"gateway": "IPS2"},
    "CE": {
      "routes": {"198.51.100.10/32": "u_e", "203.0.113.0/24": "S1",
                 "10.0.0.0/8": "S1", "0.0.0.0/0": "INET"},
      "acl": [
        {"match": {"dst": "198.51.100.0/24"}, "action": "permit"},
        {"match": {"dst": "203.0.113.0/24"}, "action": "permit"},
        {"match": {"dst": "10.0.0.0/8"}, "action": "permit"},
        {"match": {}, "action": "deny"}]},
    "S1": {"fib": {"198.51.100.10": "CE", "203.0.113.10": "F1"}},
    "F1": {"routes": {"198.51.100.0/24": "S1", "0.0.0.0/0": "LB1"}},
    "LB1": {"routes": {"198.51.100.0/24": "F1", "10.0.0.0/8": "S3"}},
    "S3": {"fib": {"10.0.1.10": "IPS1", "10.0.2.10": "v_1", "10.0.3.10": "S2",
                   "198.51.100.10": "LB1"}},
    "IPS1": {"routes": {"10.0.1.10/32": "u_1", "0.0.0.0/0": "S3"}},
    "S2": {"fib": {"10.0.3.10": "F2", "10.0.1.10": "S3", "10.0.2.10": "S3",
                   "198.51.100.10": "S3"}},
    "F2": {"routes": {"10.0.3.0/24": "LB2", "0.0.0.0/0": "S2"}},
    "LB2": {"routes": {"10.0.3.0/24": "S4", "0.0.0.0/0": "F2"}},
    "S4": {"fib": {"10.0.3.10": "IPS2"}},
    "IPS2": {"routes": {"10.0.3.10/32": "u_2", "0.0.0.0/0": "S4"}}
  }
}
)json";
  return doc;
}

const std::string& fixture_policy_document() {
  static const std::string doc = R"(# Three-tier enterprise policies. Anything else is denied.

# Internet client u_e to the tier-1 application behind public address L_1.
# LB1 rewrites the destination to server u_1, which starts a new packet.
policy P1: [u_e, L_1, *, 80, TCP]
    scope {LB1, F1, CE, S1, u_e}
    waypoints [F1 -> LB1] occur {F1 == 1, LB1 == 1}
policy P2: [u_e, u_1, *, 80, TCP] from LB1
    scope {LB1, IPS1, S3, u_1}
    waypoints [IPS1] occur {IPS1 > 0}

# u_1's reply goes to LB1, which re-sources it from L_1.
policy P3: [u_1, u_e, 80, *, TCP] to LB1
    scope {LB1, IPS1, S3, u_1}
    waypoints [LB1, IPS1] occur {LB1 == 1, IPS1 > 0}
policy P4: [L_1, u_e, 80, *, TCP] from LB1
    scope {LB1, F1, CE, S1, u_e}
    waypoints [] occur {}

# Tier-1 server to tier-2 server.
policy P5: [u_1, u_2, *, *, TCP]
    scope {u_1, u_2, F2, LB2, IPS2, S1, S2, S3, S4, IPS1, LB1}
    waypoints [F2 -> LB2 -> IPS2] occur {F2 == 1, LB2 == 1, IPS2 > 0}

# Tier-1 servers in different subnets.
policy P6: [u_1, v_1, *, *, TCP]
    scope {u_1, v_1, IPS1, S3}
    waypoints [IPS1] occur {IPS1 > 0}
)";
  return doc;
}

Fixture fixture_motivating_example() {
  Fixture f;
  f.topology = build_topology_text(fixture_topology_document());
  f.policies = parse_policy_set(fixture_policy_document(), f.topology);
  return f;
}

}  // namespace netext
