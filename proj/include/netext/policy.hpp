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

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "netext/packet.hpp"
#include "netext/topology.hpp"

namespace netext {

// A header pattern plus an optional injection/rewrite point qualifier.
struct PacketClass {
  Pattern pattern;
  std::optional<NodeRef> origin;

  bool Matches(const PacketHeader& h, const NodeRef& injected_at) const;

  friend auto operator<=>(const PacketClass&, const PacketClass&) = default;
};

enum class Relation { kEq, kGe, kLe };

struct OccurrenceConstraint {
  NodeRef node;
  Relation relation = Relation::kEq;
  int count = 0;

  bool Holds(int observed) const;
  // "F1 == 1"
  std::string ToString() const;

  friend auto operator<=>(const OccurrenceConstraint&,
                          const OccurrenceConstraint&) = default;
};

struct WaypointSpec {
  std::vector<NodeRef> waypoints;
  std::set<std::pair<NodeRef, NodeRef>> precedence;  // (a, b): a before b
  std::vector<OccurrenceConstraint> occurrence;

  bool empty() const { return waypoints.empty(); }

  friend auto operator<=>(const WaypointSpec&, const WaypointSpec&) = default;
};

struct Policy {
  std::string id;
  PacketClass packet_class;
  NodeRef destination;
  WaypointSpec waypoints;
  std::set<NodeRef> scope;

  friend auto operator<=>(const Policy&, const Policy&) = default;
};

// Packets matching no policy are unwanted; the default is always deny.
struct PolicySet {
  std::vector<Policy> policies;

  const Policy* Find(const std::string& id) const;

  friend bool operator==(const PolicySet&, const PolicySet&) = default;
};

// Structural checks of a policy set against the topology it governs.
// Returns human-readable error messages; empty when valid.
std::vector<std::string> validate_policy_set(const PolicySet& ps,
                                             const Topology& t);

// The node a policy delivers to when the DSL does not name one explicitly:
// the owner of the destination address.
std::optional<NodeRef> DefaultDestination(const PacketClass& pc,
                                          const Topology& t);

struct MatchResult {
  enum class Kind { kPolicy, kDefaultDeny, kAmbiguous };
  Kind kind = Kind::kDefaultDeny;
  const Policy* policy = nullptr;
  std::vector<std::string> ambiguous_ids;  // kAmbiguous only

  bool is_policy() const { return kind == Kind::kPolicy; }
  bool is_default_deny() const { return kind == Kind::kDefaultDeny; }
  bool is_ambiguous() const { return kind == Kind::kAmbiguous; }
};

// Most specific matching policy (non-wildcard positions, then the origin
// qualifier as tiebreak). Two equally specific matches are ambiguous.
MatchResult match_packet(const PolicySet& ps, const PacketHeader& pkt,
                         const NodeRef& origin);

int occur(const std::vector<NodeRef>& sigma, const NodeRef& v);

struct WaypointFailure {
  enum class Kind { kMissed, kOrder, kOccurrence };
  Kind kind;
  std::vector<NodeRef> nodes;
  std::string detail;

  friend auto operator<=>(const WaypointFailure&,
                          const WaypointFailure&) = default;
};

struct WaypointVerdict {
  std::vector<WaypointFailure> failures;
  bool satisfied() const { return failures.empty(); }
};

// A waypoint without an explicit occurrence constraint must be visited at
// least once. Precedence compares first occurrences and is vacuous when
// either node is absent.
WaypointVerdict check_waypoints(const WaypointSpec& spec,
                                const std::vector<NodeRef>& sigma);

struct ScopeVerdict {
  std::set<NodeRef> leak;
  bool contained() const { return leak.empty(); }
};

ScopeVerdict check_scope(const std::set<NodeRef>& scope,
                         const std::set<NodeRef>& reach);

}  // namespace netext
