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
#include <vector>

#include "json.hpp"

#include "netext/address.hpp"
#include "netext/packet.hpp"

namespace netext {

using NodeRef = std::string;
using SiteId = std::string;

enum class NodeKind { kHost, kSwitch, kRouter, kMiddlebox, kTunnelEndpoint };
enum class SiteKind { kEnterprise, kRemoteDc };
enum class Flexibility { kFull, kRestricted };
enum class FunctionClass { kFirewall, kLoadBalancer, kIps, kSniffer, kOther };

std::string ToString(NodeKind kind);
std::string ToString(FunctionClass fc);

enum class RuleAction { kAllow, kDeny, kRewrite, kCopyTo };

// One middlebox configuration rule. Rules are evaluated first-match.
struct MiddleboxRule {
  Pattern match;
  RuleAction action = RuleAction::kAllow;
  std::optional<Ipv4> rewrite_src;  // kRewrite only
  std::optional<Ipv4> rewrite_dst;  // kRewrite only
  NodeRef copy_to;                  // kCopyTo only

  friend bool operator==(const MiddleboxRule&, const MiddleboxRule&) = default;
};

// Function class plus configuration state. Equality of two specs is the
// middlebox equivalence used when a replica stands in for an original.
struct MiddleboxSpec {
  FunctionClass function_class = FunctionClass::kOther;
  std::string other_name;  // only meaningful for kOther
  std::vector<MiddleboxRule> rules;

  friend bool operator==(const MiddleboxSpec&, const MiddleboxSpec&) = default;
};

struct AclRule {
  Pattern match;
  bool permit = true;

  friend bool operator==(const AclRule&, const AclRule&) = default;
};

// Per-node forwarding state. Which fields are consulted depends on the kind:
// switches and tunnel endpoints use `fib`/`fib_default`/`flood_on_miss`,
// routers and middleboxes use `routes` (longest prefix) and routers `acl`,
// hosts use `gateway`.
struct Forwarding {
  std::map<Ipv4, NodeRef> fib;
  std::optional<NodeRef> fib_default;
  bool flood_on_miss = true;
  std::map<Prefix, NodeRef> routes;
  std::vector<AclRule> acl;
  std::optional<NodeRef> gateway;

  friend bool operator==(const Forwarding&, const Forwarding&) = default;
};

struct Node {
  NodeRef id;
  NodeKind kind = NodeKind::kHost;
  SiteId site;
  std::vector<Ipv4> addresses;
  std::map<std::string, Ipv4> labels;  // symbolic names for owned addresses
  std::optional<MiddleboxSpec> middlebox;
  Forwarding forwarding;

  bool Owns(Ipv4 a) const;

  friend bool operator==(const Node&, const Node&) = default;
};

// Undirected; stored with a < b.
struct Link {
  NodeRef a;
  NodeRef b;
  bool tunnel = false;
  bool encrypted = false;

  static Link Make(NodeRef x, NodeRef y, bool tunnel = false,
                   bool encrypted = false);

  friend auto operator<=>(const Link&, const Link&) = default;
};

struct Site {
  SiteId id;
  SiteKind kind = SiteKind::kEnterprise;
  Flexibility flexibility = Flexibility::kFull;

  friend bool operator==(const Site&, const Site&) = default;
};

struct Issue {
  enum class Severity { kError, kWarning };
  Severity severity = Severity::kError;
  std::string message;

  bool is_error() const { return severity == Severity::kError; }
  friend bool operator==(const Issue&, const Issue&) = default;
};

class TopologyError : public std::runtime_error {
 public:
  explicit TopologyError(std::vector<Issue> issues);
  const std::vector<Issue>& issues() const { return issues_; }

 private:
  std::vector<Issue> issues_;
};

// The network graph G = (V, E) with sites and forwarding state.
//
// The mutators exist for construction and for applying extension actions to a
// private copy; a Topology handed out by build_topology() or the extension
// code is treated as immutable.
class Topology {
 public:
  const std::map<NodeRef, Node>& nodes() const { return nodes_; }
  const std::set<Link>& links() const { return links_; }
  const std::map<SiteId, Site>& sites() const { return sites_; }

  const Node* Find(const NodeRef& id) const;
  const Node& At(const NodeRef& id) const;  // throws std::out_of_range
  const Site* FindSite(const SiteId& id) const;
  // Sorted neighbor ids.
  std::vector<NodeRef> Neighbors(const NodeRef& id) const;
  bool Adjacent(const NodeRef& a, const NodeRef& b) const;
  const Link* FindLink(const NodeRef& a, const NodeRef& b) const;

  // The node owning `a`, preferring hosts, then the lowest id.
  const Node* OwnerOf(Ipv4 a) const;
  // Resolves a node id (its first address), an address label or an IPv4
  // literal.
  std::optional<Ipv4> ResolveAddress(const std::string& token) const;
  // Reverse of ResolveAddress for rendering: label, else id of the node whose
  // first address it is, else the literal.
  std::string AddressToken(Ipv4 a) const;
  std::optional<SiteId> EnterpriseSite() const;

  void AddSite(Site site);
  Site& MutableSite(const SiteId& id);
  void AddNode(Node node);
  Node& MutableNode(const NodeRef& id);
  void AddLink(const Link& link);
  void RemoveLink(const NodeRef& a, const NodeRef& b);
  // Removes every link touching `id`.
  void Detach(const NodeRef& id);
  // Drops forwarding entries whose next hop is no longer adjacent.
  void PruneStaleForwarding();

  friend bool operator==(const Topology& x, const Topology& y) {
    return x.nodes_ == y.nodes_ && x.links_ == y.links_ && x.sites_ == y.sites_;
  }

 private:
  std::map<NodeRef, Node> nodes_;
  std::set<Link> links_;
  std::map<SiteId, Site> sites_;
  std::map<NodeRef, std::set<NodeRef>> adjacency_;
};

// Parses and validates a topology document. Throws TopologyError carrying
// every structural error found; warnings do not prevent construction.
Topology build_topology(const nlohmann::json& doc);
Topology build_topology_text(const std::string& text);

// Structural errors and warnings. Empty iff every invariant holds and
// addresses are unique per site.
std::vector<Issue> validate_topology(const Topology& t);

// Canonical document; build_topology(render_topology(t)) == t.
nlohmann::json render_topology(const Topology& t);

// Middlebox equivalence: equal function class and identical rule lists.
// Throws std::invalid_argument if either node is not a middlebox.
bool node_equiv(const Node& a, const Node& b);

}  // namespace netext
