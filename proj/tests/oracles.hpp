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


// Independent reference implementations used by the unit and acceptance
// tests. Deliberately naive: direct scans and exhaustive enumeration.

#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "netext/policy.hpp"
#include "netext/topology.hpp"
#include "netext/traversal.hpp"

namespace netext::oracle {

// (kind, nodes) for every failed constraint. kind: 'M' missed, 'O' order,
// 'C' occurrence count.
using Finding = std::tuple<char, std::vector<NodeRef>>;

std::multiset<Finding> scan_waypoints(const WaypointSpec& spec,
                                      const std::vector<NodeRef>& sigma);
std::multiset<Finding> findings_of(const WaypointVerdict& v);

WaypointSpec random_spec(std::mt19937_64& rng, const std::vector<NodeRef>& alphabet);

// Every sequence over `alphabet` of length 0..max_len.
std::vector<std::vector<NodeRef>> all_sequences(const std::vector<NodeRef>& alphabet,
                                                int max_len);

// Nodes touched by any walk the packet can take when every copy stops at a
// node it already visited. Enumerates walks depth first using only the
// single-device forwarding decision. Requires a topology without rewrites.
std::set<NodeRef> closure_reach(const Topology& t, const NodeRef& inject,
                                const PacketHeader& pkt);

struct RandomNetwork {
  Topology topology;
  NodeRef inject;
  PacketHeader header;
};

// Up to `max_nodes` nodes of mixed kinds with random but well-formed
// forwarding state and no rewriting middleboxes.
RandomNetwork random_network(std::mt19937_64& rng, int max_nodes);

}  // namespace netext::oracle
