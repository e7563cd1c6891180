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

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "netext/extend.hpp"
#include "netext/policy.hpp"
#include "netext/topology.hpp"

namespace netext {

struct ScenarioConfig {
  uint64_t seed = 1;
  int subnets = 3;
  int hosts_per_subnet = 3;
  double middlebox_density = 0.5;
  int policies_per_subnet = 2;
  double migrate_fraction = 0.5;

  void Validate() const;  // throws invalid_argument
};

struct Scenario {
  std::string id;
  Topology topology;
  PolicySet policies;
  std::set<NodeRef> migrate;  // hosts to move
  int attempts = 1;           // generation rounds until conformant
};

// Site ids used by generated campuses.
inline const SiteId kCampusSite = "campus";
inline const SiteId kDcSite = "dc";
inline const SiteId kRestrictedDcSite = "cloud";

// Deterministic campus: an Internet client behind an edge router, firewall
// and load balancer in front of a core router; per subnet an optional
// firewall, a switch and hosts with optional inline IPS boxes. Policies are
// web services published through the load balancer and east-west flows.
// Scopes and waypoints are taken from the simulated paths, so the result is
// conformant; throws runtime_error if it is not within the retry bound.
Scenario gen_campus(const ScenarioConfig& cfg);

struct EvalRow {
  std::string scenario_id;
  uint64_t seed = 0;
  int hosts_migrated = 0;
  bool middlebox_on_path = false;  // some migrated host's policy walk has one
  int naive_total = 0;
  int planner_total = 0;
  Cost cost;
  double cost_total = 0;
  bool infeasible = false;
  bool error = false;  // the row failed for a reason other than infeasibility
  std::string note;  // blocking policies or failure text
};

struct EvalResult {
  std::vector<EvalRow> rows;

  double MeanNaive() const;
  double MeanPlanner() const;  // over feasible rows
  int InfeasibleCount() const;
};

struct EvalOptions {
  int trials = 10;
  SiteId site = kDcSite;
  CostModel cost;
};

// Seeds cfg.seed .. cfg.seed + trials - 1. Failures become rows with the
// infeasible flag set.
EvalResult cmd_eval(const ScenarioConfig& cfg, const EvalOptions& opts);

std::string render_eval_text(const EvalResult& r);
std::string render_eval_csv(const EvalResult& r);

}  // namespace netext
