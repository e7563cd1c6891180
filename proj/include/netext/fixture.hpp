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

#include <string>

#include "netext/policy.hpp"
#include "netext/topology.hpp"

namespace netext {

// The three-tier enterprise used throughout the tests: an Internet client
// u_e behind edge router CE, a tier-1 tier (F1, LB1 holding public address
// L_1, IPS1, servers u_1 and v_1) and a tier-2 tier (F2, LB2, IPS2, server
// u_2). Sites: "enterprise", "dc" (full flexibility) and "cloud"
// (restricted).
struct Fixture {
  Topology topology;
  PolicySet policies;
};

Fixture fixture_motivating_example();

// The source documents the fixture is built from.
const std::string& fixture_topology_document();
const std::string& fixture_policy_document();

}  // namespace netext
