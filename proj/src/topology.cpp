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


#include "netext/topology.hpp"

#include <algorithm>
#include <deque>

namespace netext {
namespace {

using nlohmann::json;

const std::map<std::string, NodeKind>& NodeKindNames() {
  static const std::map<std::string, NodeKind> names = {
      {"host", NodeKind::kHost},
      {"switch", NodeKind::kSwitch},
      {"router", NodeKind::kRouter},
      {"middlebox", NodeKind::kMiddlebox},
      {"tunnel_endpoint", NodeKind::kTunnelEndpoint},
  };
  return names;
}

const std::map<std::string, FunctionClass>& ClassNames() {
  static const std::map<std::string, FunctionClass> names = {
      {"firewall", FunctionClass::kFirewall},
      {"load_balancer", FunctionClass::kLoadBalancer},
      {"ips", FunctionClass::kIps},
      {"sniffer", FunctionClass::kSniffer},
  };
  return names;
}

Issue Error(std::string msg) { return {Issue::Severity::kError, std::move(msg)}; }
Issue Warning(std::string msg) {
  return {Issue::Severity::kWarning, std::move(msg)};
}

// Collects parse problems instead of throwing on the first one.
class DocReader {
 public:
  explicit DocReader(std::vector<Issue>& issues) : issues_(issues) {}

  std::optional<std::string> String(const json& j, const char* key,
                                    const std::string& where,
                                    bool required = true) {
    auto it = j.find(key);
    if (it == j.end()) {
      if (required) Fail(where + ": missing '" + key + "'");
      return std::nullopt;
    }
    if (!it->is_string()) {
      Fail(where + ": '" + key + "' must be a string");
      return std::nullopt;
    }
    return it->get<std::string>();
  }

  std::optional<Ipv4> Address(const json& j, const std::string& where) {
    if (!j.is_string()) {
      Fail(where + ": address must be a string");
      return std::nullopt;
    }
    auto a = Ipv4::Parse(j.get<std::string>());
    if (!a) Fail(where + ": bad address '" + j.get<std::string>() + "'");
    return a;
  }

  std::optional<Pattern> ReadPattern(const json& j, const std::string& where) {
    Pattern p;
    if (j.is_null()) return p;
    if (!j.is_object()) {
      Fail(where + ": match must be an object");
      return std::nullopt;
    }
    bool ok = true;
    for (auto& [key, value] : j.items()) {
      if (key == "src" || key == "dst") {
        std::optional<Prefix> prefix;
        if (value.is_string()) prefix = Prefix::Parse(value.get<std::string>());
        if (!prefix) {
          Fail(where + ": bad prefix for '" + key + "'");
          ok = false;
          continue;
        }
        (key == "src" ? p.src : p.dst) = prefix;
      } else if (key == "sport" || key == "dport") {
        if (!value.is_number_unsigned() || value.get<uint64_t>() > 65535) {
          Fail(where + ": bad port for '" + key + "'");
          ok = false;
          continue;
        }
        (key == "sport" ? p.sport : p.dport) = value.get<uint16_t>();
      } else if (key == "proto") {
        if (!value.is_string()) {
          Fail(where + ": proto must be a string");
          ok = false;
          continue;
        }
        p.proto = value.get<std::string>();
      } else {
        Fail(where + ": unknown match key '" + key + "'");
        ok = false;
      }
    }
    if (!ok) return std::nullopt;
    return p;
  }

  void Fail(std::string msg) { issues_.push_back(Error(std::move(msg))); }

 private:
  std::vector<Issue>& issues_;
};

json PatternToJson(const Pattern& p) {
  json j = json::object();
  if (p.src) j["src"] = p.src->ToString();
  if (p.dst) j["dst"] = p.dst->ToString();
  if (p.sport) j["sport"] = *p.sport;
  if (p.dport) j["dport"] = *p.dport;
  if (p.proto) j["proto"] = *p.proto;
  return j;
}

std::optional<MiddleboxSpec> ReadMiddlebox(DocReader& r, const json& j,
                                           const std::string& where) {
  if (!j.is_object()) {
    r.Fail(where + ": middlebox must be an object");
    return std::nullopt;
  }
  MiddleboxSpec spec;
  auto cls = r.String(j, "class", where);
  if (!cls) return std::nullopt;
  if (auto it = ClassNames().find(*cls); it != ClassNames().end()) {
    spec.function_class = it->second;
  } else {
    spec.function_class = FunctionClass::kOther;
    spec.other_name = *cls;
  }
  auto rules = j.find("rules");
  if (rules == j.end()) return spec;
  if (!rules->is_array()) {
    r.Fail(where + ": rules must be an array");
    return std::nullopt;
  }
  for (size_t i = 0; i < rules->size(); ++i) {
    const json& rj = (*rules)[i];
    const std::string rwhere = where + " rule " + std::to_string(i);
    MiddleboxRule rule;
    auto match = r.ReadPattern(rj.value("match", json()), rwhere);
    auto action = r.String(rj, "action", rwhere);
    if (!match || !action) continue;
    rule.match = *match;
    if (*action == "allow") {
      rule.action = RuleAction::kAllow;
    } else if (*action == "deny") {
      rule.action = RuleAction::kDeny;
    } else if (*action == "rewrite") {
      rule.action = RuleAction::kRewrite;
      const json set = rj.value("set", json::object());
      if (set.contains("src")) rule.rewrite_src = r.Address(set["src"], rwhere);
      if (set.contains("dst")) rule.rewrite_dst = r.Address(set["dst"], rwhere);
      if (!rule.rewrite_src && !rule.rewrite_dst) {
        r.Fail(rwhere + ": rewrite must set src or dst");
      }
    } else if (*action == "copy_to") {
      rule.action = RuleAction::kCopyTo;
      if (auto target = r.String(rj, "target", rwhere)) rule.copy_to = *target;
    } else {
      r.Fail(rwhere + ": unknown action '" + *action + "'");
      continue;
    }
    spec.rules.push_back(std::move(rule));
  }
  return spec;
}

json MiddleboxToJson(const MiddleboxSpec& spec) {
  json j;
  j["class"] = spec.function_class == FunctionClass::kOther
                   ? spec.other_name
                   : ToString(spec.function_class);
  json rules = json::array();
  for (const auto& rule : spec.rules) {
    json rj;
    rj["match"] = PatternToJson(rule.match);
    switch (rule.action) {
      case RuleAction::kAllow:
        rj["action"] = "allow";
        break;
      case RuleAction::kDeny:
        rj["action"] = "deny";
        break;
      case RuleAction::kRewrite: {
        rj["action"] = "rewrite";
        json set = json::object();
        if (rule.rewrite_src) set["src"] = rule.rewrite_src->ToString();
        if (rule.rewrite_dst) set["dst"] = rule.rewrite_dst->ToString();
        rj["set"] = set;
        break;
      }
      case RuleAction::kCopyTo:
        rj["action"] = "copy_to";
        rj["target"] = rule.copy_to;
        break;
    }
    rules.push_back(rj);
  }
  j["rules"] = rules;
  return j;
}

void ReadForwarding(DocReader& r, const json& j, const std::string& where,
                    Forwarding& fwd) {
  if (!j.is_object()) {
    r.Fail(where + ": forwarding entry must be an object");
    return;
  }
  for (auto& [key, value] : j.items()) {
    if (key == "fib") {
      if (!value.is_object()) {
        r.Fail(where + ": fib must be an object");
        continue;
      }
      for (auto& [addr, next] : value.items()) {
        auto a = Ipv4::Parse(addr);
        if (!a || !next.is_string()) {
          r.Fail(where + ": bad fib entry '" + addr + "'");
          continue;
        }
        fwd.fib[*a] = next.get<std::string>();
      }
    } else if (key == "default") {
      if (auto v = r.String(j, "default", where)) fwd.fib_default = *v;
    } else if (key == "flood_on_miss") {
      if (!value.is_boolean()) {
        r.Fail(where + ": flood_on_miss must be a boolean");
        continue;
      }
      fwd.flood_on_miss = value.get<bool>();
    } else if (key == "routes") {
      if (!value.is_object()) {
        r.Fail(where + ": routes must be an object");
        continue;
      }
      for (auto& [cidr, next] : value.items()) {
        auto p = Prefix::Parse(cidr);
        if (!p || !next.is_string()) {
          r.Fail(where + ": bad route '" + cidr + "'");
          continue;
        }
        fwd.routes[*p] = next.get<std::string>();
      }
    } else if (key == "acl") {
      if (!value.is_array()) {
        r.Fail(where + ": acl must be an array");
        continue;
      }
      for (size_t i = 0; i < value.size(); ++i) {
        const std::string awhere = where + " acl " + std::to_string(i);
        auto match = r.ReadPattern(value[i].value("match", json()), awhere);
        auto action = r.String(value[i], "action", awhere);
        if (!match || !action) continue;
        if (*action != "permit" && *action != "deny") {
          r.Fail(awhere + ": action must be permit or deny");
          continue;
        }
        fwd.acl.push_back({*match, *action == "permit"});
      }
    } else if (key == "gateway") {
      if (auto v = r.String(j, "gateway", where)) fwd.gateway = *v;
    } else {
      r.Fail(where + ": unknown forwarding key '" + key + "'");
    }
  }
}

json ForwardingToJson(const Forwarding& fwd) {
  json j = json::object();
  if (!fwd.fib.empty()) {
    json fib = json::object();
    for (const auto& [a, next] : fwd.fib) fib[a.ToString()] = next;
    j["fib"] = fib;
  }
  if (fwd.fib_default) j["default"] = *fwd.fib_default;
  if (!fwd.flood_on_miss) j["flood_on_miss"] = false;
  if (!fwd.routes.empty()) {
    // Prefix strings are not ordered like prefixes; nlohmann sorts by key so
    // the output stays canonical either way.
    json routes = json::object();
    for (const auto& [p, next] : fwd.routes) {
      routes[p.is_host() ? p.ToString() + "/32" : p.ToString()] = next;
    }
    j["routes"] = routes;
  }
  if (!fwd.acl.empty()) {
    json acl = json::array();
    for (const auto& rule : fwd.acl) {
      acl.push_back({{"match", PatternToJson(rule.match)},
                     {"action", rule.permit ? "permit" : "deny"}});
    }
    j["acl"] = acl;
  }
  if (fwd.gateway) j["gateway"] = *fwd.gateway;
  return j;
}

std::vector<NodeRef> NextHops(const Node& n) {
  std::vector<NodeRef> out;
  const auto& f = n.forwarding;
  for (const auto& [a, next] : f.fib) out.push_back(next);
  if (f.fib_default) out.push_back(*f.fib_default);
  for (const auto& [p, next] : f.routes) out.push_back(next);
  if (f.gateway) out.push_back(*f.gateway);
  return out;
}

}  // namespace

std::string ToString(NodeKind kind) {
  for (const auto& [name, k] : NodeKindNames()) {
    if (k == kind) return name;
  }
  return "?";
}

std::string ToString(FunctionClass fc) {
  for (const auto& [name, c] : ClassNames()) {
    if (c == fc) return name;
  }
  return "other";
}

bool Node::Owns(Ipv4 a) const {
  return std::find(addresses.begin(), addresses.end(), a) != addresses.end();
}

Link Link::Make(NodeRef x, NodeRef y, bool tunnel, bool encrypted) {
  if (y < x) std::swap(x, y);
  return Link{std::move(x), std::move(y), tunnel, encrypted};
}

TopologyError::TopologyError(std::vector<Issue> issues)
    : std::runtime_error([&] {
        std::string msg = "invalid topology";
        for (const auto& i : issues) {
          if (i.is_error()) msg += "\n  error: " + i.message;
        }
        return msg;
      }()),
      issues_(std::move(issues)) {}

const Node* Topology::Find(const NodeRef& id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const Node& Topology::At(const NodeRef& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw std::out_of_range("unknown node '" + id + "'");
  return it->second;
}

const Site* Topology::FindSite(const SiteId& id) const {
  auto it = sites_.find(id);
  return it == sites_.end() ? nullptr : &it->second;
}

std::vector<NodeRef> Topology::Neighbors(const NodeRef& id) const {
  auto it = adjacency_.find(id);
  if (it == adjacency_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

bool Topology::Adjacent(const NodeRef& a, const NodeRef& b) const {
  auto it = adjacency_.find(a);
  return it != adjacency_.end() && it->second.contains(b);
}

const Link* Topology::FindLink(const NodeRef& a, const NodeRef& b) const {
  const Link probe = Link::Make(a, b);
  auto it = links_.lower_bound(Link{probe.a, probe.b, false, false});
  if (it != links_.end() && it->a == probe.a && it->b == probe.b) return &*it;
  return nullptr;
}

const Node* Topology::OwnerOf(Ipv4 a) const {
  const Node* best = nullptr;
  for (const auto& [id, node] : nodes_) {
    if (!node.Owns(a)) continue;
    if (node.kind == NodeKind::kHost) return &node;
    if (!best) best = &node;
  }
  return best;
}

std::optional<Ipv4> Topology::ResolveAddress(const std::string& token) const {
  if (auto a = Ipv4::Parse(token)) return a;
  if (const Node* n = Find(token); n && !n->addresses.empty()) {
    return n->addresses.front();
  }
  for (const auto& [id, node] : nodes_) {
    if (auto it = node.labels.find(token); it != node.labels.end()) {
      return it->second;
    }
  }
  return std::nullopt;
}

std::string Topology::AddressToken(Ipv4 a) const {
  for (const auto& [id, node] : nodes_) {
    for (const auto& [label, addr] : node.labels) {
      if (addr == a) return label;
    }
  }
  for (const auto& [id, node] : nodes_) {
    if (!node.addresses.empty() && node.addresses.front() == a) return id;
  }
  return a.ToString();
}

std::optional<SiteId> Topology::EnterpriseSite() const {
  for (const auto& [id, site] : sites_) {
    if (site.kind == SiteKind::kEnterprise) return id;
  }
  return std::nullopt;
}

void Topology::AddSite(Site site) {
  SiteId id = site.id;
  sites_[id] = std::move(site);
}

Site& Topology::MutableSite(const SiteId& id) {
  auto it = sites_.find(id);
  if (it == sites_.end()) throw std::out_of_range("unknown site '" + id + "'");
  return it->second;
}

void Topology::AddNode(Node node) {
  NodeRef id = node.id;
  nodes_[id] = std::move(node);
}

Node& Topology::MutableNode(const NodeRef& id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw std::out_of_range("unknown node '" + id + "'");
  return it->second;
}

void Topology::AddLink(const Link& link) {
  const Link norm = Link::Make(link.a, link.b, link.tunnel, link.encrypted);
  RemoveLink(norm.a, norm.b);
  links_.insert(norm);
  adjacency_[norm.a].insert(norm.b);
  adjacency_[norm.b].insert(norm.a);
}

void Topology::RemoveLink(const NodeRef& a, const NodeRef& b) {
  if (const Link* l = FindLink(a, b)) links_.erase(*l);
  if (auto it = adjacency_.find(a); it != adjacency_.end()) it->second.erase(b);
  if (auto it = adjacency_.find(b); it != adjacency_.end()) it->second.erase(a);
}

void Topology::Detach(const NodeRef& id) {
  for (const auto& n : Neighbors(id)) RemoveLink(id, n);
}

void Topology::PruneStaleForwarding() {
  for (auto& [id, node] : nodes_) {
    auto stale = [&](const NodeRef& next) { return !Adjacent(id, next); };
    auto& f = node.forwarding;
    std::erase_if(f.fib, [&](const auto& e) { return stale(e.second); });
    std::erase_if(f.routes, [&](const auto& e) { return stale(e.second); });
    if (f.fib_default && stale(*f.fib_default)) f.fib_default.reset();
    if (f.gateway && stale(*f.gateway)) f.gateway.reset();
  }
}

std::vector<Issue> validate_topology(const Topology& t) {
  std::vector<Issue> issues;
  if (t.nodes().empty()) issues.push_back(Error("no nodes"));

  int enterprise = 0;
  for (const auto& [id, site] : t.sites()) {
    if (site.kind == SiteKind::kEnterprise) ++enterprise;
  }
  if (enterprise != 1) {
    issues.push_back(Error("expected exactly one enterprise site, found " +
                           std::to_string(enterprise)));
  }

  for (const auto& [id, node] : t.nodes()) {
    if (!t.FindSite(node.site)) {
      issues.push_back(
          Error("node " + id + ": unknown site '" + node.site + "'"));
    }
    if (node.kind == NodeKind::kHost && node.addresses.empty()) {
      issues.push_back(Error("host " + id + " has no address"));
    }
    if (node.kind == NodeKind::kSwitch && !node.addresses.empty()) {
      issues.push_back(Error("switch " + id + " must not have addresses"));
    }
    if ((node.kind == NodeKind::kMiddlebox) != node.middlebox.has_value()) {
      issues.push_back(Error("node " + id +
                             ": middlebox spec present iff kind is middlebox"));
    }
    for (const auto& [label, a] : node.labels) {
      if (!node.Owns(a)) {
        issues.push_back(Error("node " + id + ": label " + label +
                               " names an address the node does not own"));
      }
    }
    for (const auto& next : NextHops(node)) {
      if (!t.Find(next)) {
        issues.push_back(Error("node " + id +
                               ": forwarding refers to unknown node " + next));
      } else if (!t.Adjacent(id, next)) {
        issues.push_back(Error("node " + id + ": forwarding next hop " + next +
                               " is not adjacent"));
      }
    }
    if (node.middlebox) {
      for (const auto& rule : node.middlebox->rules) {
        for (const auto& a : {rule.rewrite_src, rule.rewrite_dst}) {
          if (a && !t.OwnerOf(*a)) {
            issues.push_back(Error("node " + id + ": rewrite address " +
                                   a->ToString() + " does not resolve"));
          }
        }
        if (rule.action == RuleAction::kCopyTo && !t.Adjacent(id, rule.copy_to)) {
          issues.push_back(Error("node " + id + ": copy_to target " +
                                 rule.copy_to + " is not adjacent"));
        }
      }
    }
  }

  for (const auto& link : t.links()) {
    for (const auto& end : {link.a, link.b}) {
      if (!t.Find(end)) {
        issues.push_back(Error("link " + link.a + "-" + link.b +
                               ": dangling endpoint " + end));
      }
    }
    if (link.a == link.b) issues.push_back(Error("self link at " + link.a));
    if (link.tunnel) {
      for (const auto& end : {link.a, link.b}) {
        const Node* n = t.Find(end);
        if (n && n->kind != NodeKind::kTunnelEndpoint) {
          issues.push_back(Error("tunnel link " + link.a + "-" + link.b +
                                 ": " + end + " is not a tunnel endpoint"));
        }
      }
    }
  }

  // Address collisions per site.
  std::map<std::pair<SiteId, Ipv4>, std::vector<NodeRef>> owners;
  for (const auto& [id, node] : t.nodes()) {
    for (const auto& a : node.addresses) owners[{node.site, a}].push_back(id);
  }
  for (const auto& [key, ids] : owners) {
    if (ids.size() < 2) continue;
    std::string who;
    for (const auto& id : ids) who += (who.empty() ? "" : ", ") + id;
    issues.push_back(Warning("address collision at site " + key.first + ": " +
                             key.second.ToString() + " owned by " + who));
  }

  // Connected components; every component except the largest is reported.
  std::map<NodeRef, int> component;
  std::vector<std::vector<NodeRef>> components;
  for (const auto& [id, node] : t.nodes()) {
    if (component.contains(id)) continue;
    const int c = static_cast<int>(components.size());
    components.emplace_back();
    std::deque<NodeRef> queue{id};
    component[id] = c;
    while (!queue.empty()) {
      NodeRef cur = queue.front();
      queue.pop_front();
      components[c].push_back(cur);
      for (const auto& n : t.Neighbors(cur)) {
        if (t.Find(n) && !component.contains(n)) {
          component[n] = c;
          queue.push_back(n);
        }
      }
    }
  }
  if (components.size() > 1) {
    size_t main = 0;
    for (size_t i = 1; i < components.size(); ++i) {
      if (components[i].size() > components[main].size()) main = i;
    }
    for (size_t i = 0; i < components.size(); ++i) {
      if (i == main) continue;
      auto members = components[i];
      std::sort(members.begin(), members.end());
      std::string who;
      for (const auto& id : members) who += (who.empty() ? "" : ", ") + id;
      issues.push_back(Warning("unreachable component: {" + who + "}"));
    }
  }
  return issues;
}

Topology build_topology(const json& doc) {
  std::vector<Issue> issues;
  DocReader r(issues);
  Topology t;
  if (!doc.is_object()) throw TopologyError({Error("document must be an object")});
  for (auto& [key, value] : doc.items()) {
    if (key != "sites" && key != "nodes" && key != "links" &&
        key != "forwarding") {
      r.Fail("unknown top-level key '" + key + "'");
    }
  }

  for (const auto& sj : doc.value("sites", json::array())) {
    Site site;
    auto id = r.String(sj, "id", "site");
    if (!id) continue;
    site.id = *id;
    const std::string kind = sj.value("kind", "");
    if (kind == "enterprise") {
      site.kind = SiteKind::kEnterprise;
    } else if (kind == "remote_dc") {
      site.kind = SiteKind::kRemoteDc;
    } else {
      r.Fail("site " + *id + ": kind must be enterprise or remote_dc");
    }
    const std::string flex = sj.value("flexibility", "full");
    if (flex == "full") {
      site.flexibility = Flexibility::kFull;
    } else if (flex == "restricted") {
      site.flexibility = Flexibility::kRestricted;
    } else {
      r.Fail("site " + *id + ": flexibility must be full or restricted");
    }
    if (t.FindSite(site.id)) r.Fail("duplicate site id " + site.id);
    t.AddSite(site);
  }

  for (const auto& nj : doc.value("nodes", json::array())) {
    Node node;
    auto id = r.String(nj, "id", "node");
    if (!id) continue;
    node.id = *id;
    const std::string where = "node " + *id;
    if (auto kind = r.String(nj, "kind", where)) {
      auto it = NodeKindNames().find(*kind);
      if (it == NodeKindNames().end()) {
        r.Fail(where + ": unknown kind '" + *kind + "'");
      } else {
        node.kind = it->second;
      }
    }
    if (auto site = r.String(nj, "site", where)) node.site = *site;
    for (const auto& aj : nj.value("addresses", json::array())) {
      if (auto a = r.Address(aj, where)) node.addresses.push_back(*a);
    }
    const json labels = nj.value("labels", json::object());
    for (auto& [label, aj] : labels.items()) {
      if (auto a = r.Address(aj, where)) node.labels[label] = *a;
    }
    if (nj.contains("middlebox")) {
      node.middlebox = ReadMiddlebox(r, nj["middlebox"], where);
    }
    if (t.Find(node.id)) {
      r.Fail("duplicate node id " + node.id);
      continue;
    }
    t.AddNode(std::move(node));
  }

  for (const auto& lj : doc.value("links", json::array())) {
    auto a = r.String(lj, "a", "link");
    auto b = r.String(lj, "b", "link");
    if (!a || !b) continue;
    t.AddLink(Link::Make(*a, *b, lj.value("tunnel", false),
                         lj.value("encrypted", false)));
  }

  const json forwarding = doc.value("forwarding", json::object());
  for (auto& [id, fj] : forwarding.items()) {
    if (!t.Find(id)) {
      r.Fail("forwarding for unknown node " + id);
      continue;
    }
    ReadForwarding(r, fj, "forwarding " + id, t.MutableNode(id).forwarding);
  }

  for (auto& issue : validate_topology(t)) issues.push_back(std::move(issue));
  if (std::any_of(issues.begin(), issues.end(),
                  [](const Issue& i) { return i.is_error(); })) {
    throw TopologyError(std::move(issues));
  }
  return t;
}

Topology build_topology_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw TopologyError({Error(std::string("JSON parse error: ") + e.what())});
  }
  return build_topology(doc);
}

json render_topology(const Topology& t) {
  json doc;
  json sites = json::array();
  for (const auto& [id, site] : t.sites()) {
    sites.push_back(
        {{"id", id},
         {"kind",
          site.kind == SiteKind::kEnterprise ? "enterprise" : "remote_dc"},
         {"flexibility",
          site.flexibility == Flexibility::kFull ? "full" : "restricted"}});
  }
  doc["sites"] = sites;
  json nodes = json::array();
  json forwarding = json::object();
  for (const auto& [id, node] : t.nodes()) {
    json nj;
    nj["id"] = id;
    nj["kind"] = ToString(node.kind);
    nj["site"] = node.site;
    json addrs = json::array();
    for (const auto& a : node.addresses) addrs.push_back(a.ToString());
    nj["addresses"] = addrs;
    if (!node.labels.empty()) {
      json labels = json::object();
      for (const auto& [label, a] : node.labels) labels[label] = a.ToString();
      nj["labels"] = labels;
    }
    if (node.middlebox) nj["middlebox"] = MiddleboxToJson(*node.middlebox);
    nodes.push_back(nj);
    json fj = ForwardingToJson(node.forwarding);
    if (!fj.empty()) forwarding[id] = fj;
  }
  doc["nodes"] = nodes;
  json links = json::array();
  for (const auto& link : t.links()) {
    json lj = {{"a", link.a}, {"b", link.b}};
    if (link.tunnel) lj["tunnel"] = true;
    if (link.encrypted) lj["encrypted"] = true;
    links.push_back(lj);
  }
  doc["links"] = links;
  doc["forwarding"] = forwarding;
  return doc;
}

bool node_equiv(const Node& a, const Node& b) {
  if (!a.middlebox || !b.middlebox) {
    throw std::invalid_argument("node_equiv: " +
                                (a.middlebox ? b.id : a.id) +
                                " is not a middlebox");
  }
  return *a.middlebox == *b.middlebox;
}

}  // namespace netext
