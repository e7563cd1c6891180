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


#include "netext/policy.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace netext {

bool PacketClass::Matches(const PacketHeader& h,
                          const NodeRef& injected_at) const {
  if (origin && *origin != injected_at) return false;
  return pattern.Matches(h);
}

bool OccurrenceConstraint::Holds(int observed) const {
  switch (relation) {
    case Relation::kEq:
      return observed == count;
    case Relation::kGe:
      return observed >= count;
    case Relation::kLe:
      return observed <= count;
  }
  return false;
}

std::string OccurrenceConstraint::ToString() const {
  const char* op = relation == Relation::kEq   ? "=="
                   : relation == Relation::kGe ? ">="
                                               : "<=";
  return node + " " + op + " " + std::to_string(count);
}

const Policy* PolicySet::Find(const std::string& id) const {
  for (const auto& p : policies) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

std::optional<NodeRef> DefaultDestination(const PacketClass& pc,
                                          const Topology& t) {
  if (!pc.pattern.dst || !pc.pattern.dst->is_host()) return std::nullopt;
  const Node* owner = t.OwnerOf(pc.pattern.dst->address());
  if (!owner) return std::nullopt;
  return owner->id;
}

namespace {

bool HasCycle(const std::set<std::pair<NodeRef, NodeRef>>& edges) {
  std::map<NodeRef, std::vector<NodeRef>> out;
  for (const auto& [a, b] : edges) out[a].push_back(b);
  std::map<NodeRef, int> state;  // 1 = on stack, 2 = done
  std::function<bool(const NodeRef&)> visit = [&](const NodeRef& n) {
    state[n] = 1;
    for (const auto& m : out[n]) {
      if (state[m] == 1) return true;
      if (state[m] == 0 && visit(m)) return true;
    }
    state[n] = 2;
    return false;
  };
  for (const auto& [a, b] : edges) {
    if (state[a] == 0 && visit(a)) return true;
  }
  return false;
}

}  // namespace

std::vector<std::string> validate_policy_set(const PolicySet& ps,
                                             const Topology& t) {
  std::vector<std::string> errors;
  std::set<std::string> ids;
  for (const auto& p : ps.policies) {
    const std::string where = "policy " + p.id + ": ";
    if (!ids.insert(p.id).second) errors.push_back("duplicate policy id " + p.id);
    auto known = [&](const NodeRef& n, const char* what) {
      if (!t.Find(n)) errors.push_back(where + "unknown node " + n + " in " + what);
    };
    if (p.packet_class.origin) known(*p.packet_class.origin, "origin");
    for (const auto& n : p.scope) known(n, "scope");
    for (const auto& n : p.waypoints.waypoints) known(n, "waypoints");
    if (p.scope.empty()) errors.push_back(where + "scope is empty");
    if (p.destination.empty() || !t.Find(p.destination)) {
      errors.push_back(where + "destination does not resolve");
    } else if (!p.scope.contains(p.destination)) {
      errors.push_back(where + "scope does not contain destination " +
                       p.destination);
    }
    const std::set<NodeRef> members(p.waypoints.waypoints.begin(),
                                    p.waypoints.waypoints.end());
    for (const auto& w : p.waypoints.waypoints) {
      if (!p.scope.contains(w)) {
        errors.push_back(where + "waypoint " + w + " is not in scope");
      }
    }
    for (const auto& [a, b] : p.waypoints.precedence) {
      if (!members.contains(a) || !members.contains(b)) {
        errors.push_back(where + "precedence " + a + " -> " + b +
                         " names a non-waypoint node");
      }
    }
    if (HasCycle(p.waypoints.precedence)) {
      errors.push_back(where + "cyclic precedence");
    }
    for (const auto& c : p.waypoints.occurrence) {
      if (!members.contains(c.node)) {
        errors.push_back(where + "occurrence on non-waypoint node " + c.node);
      }
      if (c.count < 0) errors.push_back(where + "negative occurrence count");
      if (c.relation == Relation::kGe && c.count == 0) {
        errors.push_back(where + "vacuous constraint " + c.ToString());
      }
    }
  }
  return errors;
}

MatchResult match_packet(const PolicySet& ps, const PacketHeader& pkt,
                         const NodeRef& origin) {
  std::vector<const Policy*> best;
  std::pair<int, int> best_rank{-1, -1};
  for (const auto& p : ps.policies) {
    if (!p.packet_class.Matches(pkt, origin)) continue;
    const std::pair<int, int> rank{p.packet_class.pattern.Specificity(),
                                   p.packet_class.origin ? 1 : 0};
    if (rank > best_rank) {
      best_rank = rank;
      best = {&p};
    } else if (rank == best_rank) {
      best.push_back(&p);
    }
  }
  MatchResult result;
  if (best.empty()) return result;
  if (best.size() == 1) {
    result.kind = MatchResult::Kind::kPolicy;
    result.policy = best.front();
    return result;
  }
  result.kind = MatchResult::Kind::kAmbiguous;
  for (const Policy* p : best) result.ambiguous_ids.push_back(p->id);
  return result;
}

int occur(const std::vector<NodeRef>& sigma, const NodeRef& v) {
  return static_cast<int>(std::count(sigma.begin(), sigma.end(), v));
}

WaypointVerdict check_waypoints(const WaypointSpec& spec,
                                const std::vector<NodeRef>& sigma) {
  WaypointVerdict verdict;
  std::map<NodeRef, int> counts;
  std::map<NodeRef, size_t> first;
  for (size_t i = 0; i < sigma.size(); ++i) {
    ++counts[sigma[i]];
    first.try_emplace(sigma[i], i);
  }
  std::set<NodeRef> constrained;
  for (const auto& c : spec.occurrence) {
    constrained.insert(c.node);
    const int got = counts[c.node];
    if (!c.Holds(got)) {
      verdict.failures.push_back(
          {WaypointFailure::Kind::kOccurrence,
           {c.node},
           "Occur(" + c.node + ") " + c.ToString().substr(c.node.size() + 1) +
               " required, got " + std::to_string(got)});
    }
  }
  for (const auto& w : spec.waypoints) {
    if (!constrained.contains(w) && counts[w] == 0) {
      verdict.failures.push_back({WaypointFailure::Kind::kMissed,
                                  {w},
                                  "waypoint " + w + " not visited"});
    }
  }
  for (const auto& [a, b] : spec.precedence) {
    auto fa = first.find(a);
    auto fb = first.find(b);
    if (fa == first.end() || fb == first.end()) continue;
    if (fa->second > fb->second) {
      verdict.failures.push_back({WaypointFailure::Kind::kOrder,
                                  {a, b},
                                  a + " must precede " + b});
    }
  }
  return verdict;
}

ScopeVerdict check_scope(const std::set<NodeRef>& scope,
                         const std::set<NodeRef>& reach) {
  ScopeVerdict verdict;
  std::set_difference(reach.begin(), reach.end(), scope.begin(), scope.end(),
                      std::inserter(verdict.leak, verdict.leak.end()));
  return verdict;
}

}  // namespace netext
