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

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "netext/checker.hpp"
#include "netext/policy.hpp"
#include "netext/topology.hpp"

namespace netext {

// Moves a host to `site`. With `via`, the host is linked to that node (a
// switch is created there if it does not exist) and uses it as gateway.
struct RelocateAction {
  NodeRef host;
  SiteId site;
  std::optional<NodeRef> via;
  friend bool operator==(const RelocateAction&, const RelocateAction&) = default;
};

// Copies a middlebox (class, rules, forwarding) to a new node at `site`,
// linked to `attach`, or to the site's switches when `attach` is empty.
struct MirrorAction {
  NodeRef middlebox;
  SiteId site;
  NodeRef new_id;
  std::vector<NodeRef> attach;
  friend bool operator==(const MirrorAction&, const MirrorAction&) = default;
};

// Stands in for a relocated host at its former attachment: `proxy_id` is
// linked to the attachment, `remote_id` to the host, and the two are joined
// by an encrypted tunnel. Addresses are preserved.
struct ProxyAction {
  NodeRef host;
  NodeRef attachment;
  NodeRef proxy_id;
  NodeRef remote_id;
  friend bool operator==(const ProxyAction&, const ProxyAction&) = default;
};

// Creates tunnel endpoints as needed, links each to its attachment (if any)
// and joins them with a tunnel link.
struct TunnelAction {
  NodeRef a;
  SiteId a_site;
  NodeRef a_attach;
  NodeRef b;
  SiteId b_site;
  NodeRef b_attach;
  bool encrypted = true;
  friend bool operator==(const TunnelAction&, const TunnelAction&) = default;
};

// Forwarding patch. Keys are "gateway", "default", an IPv4 address (FIB entry)
// or a CIDR prefix with explicit length (route); a null value removes.
struct RouteFixAction {
  NodeRef node;
  std::map<std::string, std::optional<NodeRef>> entries;
  friend bool operator==(const RouteFixAction&, const RouteFixAction&) = default;
};

using ExtensionAction = std::variant<RelocateAction, MirrorAction, ProxyAction,
                                     TunnelAction, RouteFixAction>;

nlohmann::json action_to_json(const ExtensionAction& a);
ExtensionAction action_from_json(const nlohmann::json& j);  // throws invalid_argument

struct CostModel {
  double weight_mirror = 1.0;
  double weight_wan_crossing = 1.0;
  double weight_proxy = 1.0;

  void Validate() const;  // throws invalid_argument
};

struct Cost {
  int mirrored_boxes = 0;
  int wan_crossings = 0;  // tunnel links on policy-probe walks, summed
  int proxies = 0;

  double Total(const CostModel& cm) const;
  friend bool operator==(const Cost&, const Cost&) = default;
};

struct ExtensionPlan {
  std::vector<ExtensionAction> actions;
  std::map<NodeRef, std::vector<NodeRef>> node_map;
  std::map<std::string, std::set<NodeRef>> scope_additions;
  Cost cost;

  // Checker view of the extended network: plan-created middleboxes stand in
  // for the originals they mirror, scopes widened by scope_additions.
  CheckContext Context(const Topology& extended) const;
};

nlohmann::json plan_to_json(const ExtensionPlan& p);
ExtensionPlan plan_from_json(const nlohmann::json& j);

// Applies actions in order, pruning stale forwarding after each one.
// Throws invalid_argument when an action's preconditions fail.
Topology apply_action(const Topology& t, const ExtensionAction& a);
Topology apply_plan(const Topology& t, const ExtensionPlan& plan);

// Baseline: all hosts behind one remote switch RS_1, bridged by an encrypted
// L2 tunnel to each host's nearest enterprise switch, which relearns the
// hosts' addresses towards the tunnel.
ExtensionPlan naive_plan(const Topology& t, const std::set<NodeRef>& hosts,
                         const SiteId& site);
Topology relocate_naive(const Topology& t, const std::set<NodeRef>& hosts,
                        const SiteId& site);

std::pair<Topology, NodeRef> apply_mirror(const Topology& t, const NodeRef& v,
                                          const SiteId& site);
Topology apply_proxy(const Topology& t, const NodeRef& relocated,
                     const NodeRef& original_attachment);

struct HomomorphismVerdict {
  bool holds = true;
  std::vector<Violation> failures;
  std::vector<std::string> problems;  // plan-level issues
};

HomomorphismVerdict verify_homomorphism(const Topology& t,
                                        const Topology& extended,
                                        const PolicySet& ps,
                                        const ExtensionPlan& plan);

class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(std::vector<std::string> blocking);
  const std::vector<std::string>& blocking() const { return blocking_; }

 private:
  std::vector<std::string> blocking_;
};

// The starting network already violates its policies.
class NonConformantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PlannerOptions {
  int hop_limit = kDefaultHopLimit;
  // Host counts up to this are searched exhaustively; above it the planner
  // improves an all-proxy assignment one host at a time.
  int exhaustive_limit = 6;
};

ExtensionPlan plan_extension(const Topology& t, const PolicySet& ps,
                             const std::set<NodeRef>& hosts, const SiteId& site,
                             const CostModel& cm = {},
                             const PlannerOptions& opts = {});

// Tunnel crossings on every policy probe's walk in `t`.
int wan_crossings(const Topology& t, const PolicySet& ps,
                  int hop_limit = kDefaultHopLimit);

}  // namespace netext
