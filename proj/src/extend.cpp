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


#include "netext/extend.hpp"

#include <algorithm>
#include <deque>

#include "netext/traversal.hpp"

namespace netext {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string Need(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw std::invalid_argument(std::string("plan action: missing string '") +
                                key + "'");
  }
  return j[key].get<std::string>();
}

std::string Cidr(const Prefix& p) {
  return p.address().ToString() + "/" + std::to_string(p.length());
}

}  // namespace

json action_to_json(const ExtensionAction& a) {
  return std::visit(
      Overloaded{
          [](const RelocateAction& r) {
            json j = {{"type", "relocate"}, {"host", r.host}, {"site", r.site}};
            if (r.via) j["via"] = *r.via;
            return j;
          },
          [](const MirrorAction& m) {
            return json{{"type", "mirror"},  {"middlebox", m.middlebox},
                        {"site", m.site},    {"new_id", m.new_id},
                        {"attach", m.attach}};
          },
          [](const ProxyAction& p) {
            return json{{"type", "proxy"},
                        {"host", p.host},
                        {"attachment", p.attachment},
                        {"proxy_id", p.proxy_id},
                        {"remote_id", p.remote_id}};
          },
          [](const TunnelAction& t) {
            return json{{"type", "tunnel"},     {"a", t.a},
                        {"a_site", t.a_site},   {"a_attach", t.a_attach},
                        {"b", t.b},             {"b_site", t.b_site},
                        {"b_attach", t.b_attach}, {"encrypted", t.encrypted}};
          },
          [](const RouteFixAction& r) {
            json entries = json::object();
            for (const auto& [k, v] : r.entries) {
              entries[k] = v ? json(*v) : json(nullptr);
            }
            return json{{"type", "route_fix"}, {"node", r.node}, {"entries", entries}};
          },
      },
      a);
}

ExtensionAction action_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("plan action: not an object");
  const std::string type = Need(j, "type");
  if (type == "relocate") {
    RelocateAction r{Need(j, "host"), Need(j, "site"), std::nullopt};
    if (j.contains("via")) r.via = Need(j, "via");
    return r;
  }
  if (type == "mirror") {
    MirrorAction m{Need(j, "middlebox"), Need(j, "site"), Need(j, "new_id"), {}};
    for (const auto& x : j.value("attach", json::array())) {
      m.attach.push_back(x.get<std::string>());
    }
    return m;
  }
  if (type == "proxy") {
    return ProxyAction{Need(j, "host"), Need(j, "attachment"),
                       Need(j, "proxy_id"), Need(j, "remote_id")};
  }
  if (type == "tunnel") {
    return TunnelAction{Need(j, "a"),        Need(j, "a_site"),
                        j.value("a_attach", ""), Need(j, "b"),
                        Need(j, "b_site"),   j.value("b_attach", ""),
                        j.value("encrypted", true)};
  }
  if (type == "route_fix") {
    RouteFixAction r{Need(j, "node"), {}};
    const json entries = j.value("entries", json::object());
    for (const auto& [k, v] : entries.items()) {
      r.entries[k] = v.is_null() ? std::nullopt
                                 : std::optional<NodeRef>(v.get<std::string>());
    }
    return r;
  }
  throw std::invalid_argument("plan action: unknown type '" + type + "'");
}

void CostModel::Validate() const {
  for (double w : {weight_mirror, weight_wan_crossing, weight_proxy}) {
    if (!(w >= 0)) throw std::invalid_argument("cost weights must be non-negative");
  }
  if (weight_mirror + weight_wan_crossing + weight_proxy <= 0) {
    throw std::invalid_argument("at least one cost weight must be positive");
  }
}

double Cost::Total(const CostModel& cm) const {
  return cm.weight_mirror * mirrored_boxes +
         cm.weight_wan_crossing * wan_crossings + cm.weight_proxy * proxies;
}

json plan_to_json(const ExtensionPlan& p) {
  json actions = json::array();
  for (const auto& a : p.actions) actions.push_back(action_to_json(a));
  return {{"actions", actions},
          {"node_map", p.node_map},
          {"scope_additions", p.scope_additions},
          {"cost",
           {{"mirrored_boxes", p.cost.mirrored_boxes},
            {"wan_crossings", p.cost.wan_crossings},
            {"proxies", p.cost.proxies}}}};
}

ExtensionPlan plan_from_json(const json& j) {
  ExtensionPlan p;
  for (const auto& a : j.value("actions", json::array())) {
    p.actions.push_back(action_from_json(a));
  }
  const json node_map = j.value("node_map", json::object());
  for (const auto& [k, v] : node_map.items()) {
    p.node_map[k] = v.get<std::vector<NodeRef>>();
  }
  const json additions = j.value("scope_additions", json::object());
  for (const auto& [k, v] : additions.items()) {
    p.scope_additions[k] = v.get<std::set<NodeRef>>();
  }
  const json cost = j.value("cost", json::object());
  p.cost.mirrored_boxes = cost.value("mirrored_boxes", 0);
  p.cost.wan_crossings = cost.value("wan_crossings", 0);
  p.cost.proxies = cost.value("proxies", 0);
  return p;
}

CheckContext ExtensionPlan::Context(const Topology& extended) const {
  CheckContext ctx;
  for (const auto& [orig, images] : node_map) {
    const Node* o = extended.Find(orig);
    for (const auto& img : images) {
      if (img == orig) continue;
      const Node* n = extended.Find(img);
      if (o && n && o->middlebox && n->middlebox && node_equiv(*o, *n)) {
        ctx.stand_ins[img] = orig;
      }
    }
  }
  ctx.scope_additions = scope_additions;
  return ctx;
}

namespace {

[[noreturn]] void Fail(const std::string& msg) { throw std::invalid_argument(msg); }

const Node& RequireNode(const Topology& t, const NodeRef& id, const char* what) {
  const Node* n = t.Find(id);
  if (!n) Fail(std::string(what) + " " + id + " does not exist");
  return *n;
}

const Site& RequireSite(const Topology& t, const SiteId& id) {
  const Site* s = t.FindSite(id);
  if (!s) Fail("site " + id + " does not exist");
  return *s;
}

bool IsL2(NodeKind k) {
  return k == NodeKind::kSwitch || k == NodeKind::kTunnelEndpoint;
}

// Points `node`'s entry for every address of `host` at `next`: a FIB entry on
// switches and tunnel endpoints, a host route elsewhere.
void PointAt(Topology& t, const NodeRef& node, const Node& host,
             const NodeRef& next) {
  Node& n = t.MutableNode(node);
  for (Ipv4 a : host.addresses) {
    if (IsL2(n.kind)) {
      n.forwarding.fib[a] = next;
    } else if (n.kind == NodeKind::kRouter || n.kind == NodeKind::kMiddlebox) {
      n.forwarding.routes[Prefix::Host(a)] = next;
    }
  }
}

void EnsureEndpoint(Topology& t, const NodeRef& id, const SiteId& site) {
  if (const Node* n = t.Find(id)) {
    if (n->kind != NodeKind::kTunnelEndpoint) {
      Fail(id + " exists and is not a tunnel endpoint");
    }
    return;
  }
  RequireSite(t, site);
  Node n;
  n.id = id;
  n.kind = NodeKind::kTunnelEndpoint;
  n.site = site;
  n.forwarding.flood_on_miss = true;
  t.AddNode(std::move(n));
}

void LinkIfAbsent(Topology& t, const NodeRef& a, const NodeRef& b) {
  if (!t.Adjacent(a, b)) t.AddLink(Link::Make(a, b));
}

void Apply(Topology& t, const RelocateAction& r) {
  const Node& h = RequireNode(t, r.host, "host");
  if (h.kind != NodeKind::kHost) Fail(r.host + " is not a host");
  RequireSite(t, r.site);
  t.Detach(r.host);
  Node& host = t.MutableNode(r.host);
  host.site = r.site;
  host.forwarding.gateway.reset();
  if (!r.via) return;
  if (*r.via == r.host) Fail("relocate: host cannot be its own gateway");
  if (!t.Find(*r.via)) {
    Node sw;
    sw.id = *r.via;
    sw.kind = NodeKind::kSwitch;
    sw.site = r.site;
    t.AddNode(std::move(sw));
  }
  t.AddLink(Link::Make(r.host, *r.via));
  t.MutableNode(r.host).forwarding.gateway = *r.via;
  PointAt(t, *r.via, t.At(r.host), r.host);
}

void Apply(Topology& t, const MirrorAction& m) {
  const Node& v = RequireNode(t, m.middlebox, "middlebox");
  if (v.kind != NodeKind::kMiddlebox || !v.middlebox) {
    Fail(m.middlebox + " is not a middlebox");
  }
  const Site& site = RequireSite(t, m.site);
  if (site.kind != SiteKind::kRemoteDc) Fail("site " + m.site + " is not a remote data center");
  if (site.flexibility == Flexibility::kRestricted) {
    Fail("site " + m.site + " is restricted and does not accept mirrored middleboxes");
  }
  if (t.Find(m.new_id)) Fail("mirror id " + m.new_id + " already exists");
  Node copy;
  copy.id = m.new_id;
  copy.kind = NodeKind::kMiddlebox;
  copy.site = m.site;
  copy.middlebox = v.middlebox;
  copy.forwarding = v.forwarding;
  std::vector<NodeRef> attach = m.attach;
  if (attach.empty()) {
    for (const auto& [id, n] : t.nodes()) {
      if (n.site == m.site && n.kind == NodeKind::kSwitch) attach.push_back(id);
    }
  }
  for (const auto& a : attach) RequireNode(t, a, "mirror attachment");
  t.AddNode(std::move(copy));
  for (const auto& a : attach) LinkIfAbsent(t, m.new_id, a);
}

void Apply(Topology& t, const ProxyAction& p) {
  const Node& h = RequireNode(t, p.host, "host");
  if (h.kind != NodeKind::kHost) Fail(p.host + " is not a host");
  const Site& hs = RequireSite(t, h.site);
  if (hs.kind != SiteKind::kRemoteDc) {
    Fail("proxy: host " + p.host + " has not been relocated to a remote data center");
  }
  const Node& att = RequireNode(t, p.attachment, "attachment");
  for (const auto& nb : t.Neighbors(p.attachment)) {
    for (Ipv4 a : h.addresses) {
      const Node& n = t.At(nb);
      const bool proxied =
          n.kind == NodeKind::kTunnelEndpoint && n.forwarding.fib.contains(a);
      if (n.Owns(a) || proxied) {
        Fail("proxy: address " + a.ToString() + " already answered at " +
             p.attachment + " by " + nb);
      }
    }
  }
  const SiteId att_site = att.site;
  EnsureEndpoint(t, p.proxy_id, att_site);
  EnsureEndpoint(t, p.remote_id, h.site);
  LinkIfAbsent(t, p.proxy_id, p.attachment);
  LinkIfAbsent(t, p.remote_id, p.host);
  t.AddLink(Link::Make(p.proxy_id, p.remote_id, /*tunnel=*/true, /*encrypted=*/true));

  const Node host = t.At(p.host);
  PointAt(t, p.proxy_id, host, p.remote_id);
  t.MutableNode(p.proxy_id).forwarding.fib_default = p.attachment;
  PointAt(t, p.remote_id, host, p.host);
  t.MutableNode(p.remote_id).forwarding.fib_default = p.proxy_id;
  t.MutableNode(p.host).forwarding.gateway = p.remote_id;
  PointAt(t, p.attachment, host, p.proxy_id);
}

void Apply(Topology& t, const TunnelAction& a) {
  if (a.a == a.b) Fail("tunnel: endpoints must differ");
  EnsureEndpoint(t, a.a, a.a_site);
  EnsureEndpoint(t, a.b, a.b_site);
  if (!a.a_attach.empty()) {
    RequireNode(t, a.a_attach, "tunnel attachment");
    LinkIfAbsent(t, a.a, a.a_attach);
  }
  if (!a.b_attach.empty()) {
    RequireNode(t, a.b_attach, "tunnel attachment");
    LinkIfAbsent(t, a.b, a.b_attach);
  }
  if (const Link* l = t.FindLink(a.a, a.b); l && !l->tunnel) {
    Fail("tunnel: " + a.a + " and " + a.b + " are already linked");
  }
  if (!t.Adjacent(a.a, a.b)) t.AddLink(Link::Make(a.a, a.b, true, a.encrypted));
}

void Apply(Topology& t, const RouteFixAction& r) {
  RequireNode(t, r.node, "route_fix node");
  for (const auto& [key, next] : r.entries) {
    if (next && !t.Adjacent(r.node, *next)) {
      Fail("route_fix " + r.node + ": next hop " + *next + " is not adjacent");
    }
    Forwarding& f = t.MutableNode(r.node).forwarding;
    if (key == "gateway") {
      f.gateway = next;
    } else if (key == "default") {
      f.fib_default = next;
    } else if (key.find('/') != std::string::npos) {
      auto p = Prefix::Parse(key);
      if (!p) Fail("route_fix " + r.node + ": bad prefix " + key);
      if (next) {
        f.routes[*p] = *next;
      } else {
        f.routes.erase(*p);
      }
    } else {
      auto a = Ipv4::Parse(key);
      if (!a) Fail("route_fix " + r.node + ": bad key " + key);
      if (next) {
        f.fib[*a] = *next;
      } else {
        f.fib.erase(*a);
      }
    }
  }
}

}  // namespace

Topology apply_action(const Topology& t, const ExtensionAction& a) {
  Topology out = t;
  std::visit([&](const auto& x) { Apply(out, x); }, a);
  out.PruneStaleForwarding();
  return out;
}

Topology apply_plan(const Topology& t, const ExtensionPlan& plan) {
  Topology out = t;
  for (const auto& a : plan.actions) {
    std::visit([&](const auto& x) { Apply(out, x); }, a);
    out.PruneStaleForwarding();
  }
  return out;
}

namespace {

void CheckRelocation(const Topology& t, const std::set<NodeRef>& hosts,
                     const SiteId& site) {
  const Site& s = RequireSite(t, site);
  if (s.kind != SiteKind::kRemoteDc) Fail("site " + site + " is not a remote data center");
  for (const auto& h : hosts) {
    const Node& n = RequireNode(t, h, "node");
    if (n.kind != NodeKind::kHost) Fail(h + " is not a host");
    const Site* hs = t.FindSite(n.site);
    if (!hs || hs->kind != SiteKind::kEnterprise) {
      Fail(h + " is not in the enterprise site");
    }
  }
}

// Closest switch to `from` by hop count, ties broken by id.
NodeRef NearestSwitch(const Topology& t, const NodeRef& from) {
  std::deque<NodeRef> queue{from};
  std::set<NodeRef> seen{from};
  while (!queue.empty()) {
    NodeRef cur = queue.front();
    queue.pop_front();
    if (cur != from && t.At(cur).kind == NodeKind::kSwitch) return cur;
    for (const auto& n : t.Neighbors(cur)) {
      if (seen.insert(n).second) queue.push_back(n);
    }
  }
  Fail("no switch reachable from " + from);
}

NodeRef FreshId(const Topology& t, NodeRef base,
                const std::set<NodeRef>& taken = {}) {
  while (t.Find(base) || taken.contains(base)) base += "'";
  return base;
}

std::string AddrKey(Ipv4 a) { return a.ToString(); }

}  // namespace

ExtensionPlan naive_plan(const Topology& t, const std::set<NodeRef>& hosts,
                         const SiteId& site) {
  CheckRelocation(t, hosts, site);
  ExtensionPlan plan;
  if (hosts.empty()) return plan;
  const SiteId ent = *t.EnterpriseSite();
  const NodeRef rs = FreshId(t, "RS_1");

  std::map<NodeRef, std::vector<NodeRef>> by_anchor;
  for (const auto& h : hosts) by_anchor[NearestSwitch(t, h)].push_back(h);

  for (const auto& h : hosts) {
    plan.actions.push_back(RelocateAction{h, site, rs});
    plan.node_map[h] = {h};
  }
  for (const auto& [anchor, members] : by_anchor) {
    const NodeRef te_e = FreshId(t, "TE_" + anchor);
    const NodeRef te_r = FreshId(t, "TE_" + anchor + "_" + site);
    plan.actions.push_back(TunnelAction{te_e, ent, anchor, te_r, site, rs, true});
    RouteFixAction fix_anchor{anchor, {}}, fix_e{te_e, {{"default", anchor}}},
        fix_r{te_r, {{"default", te_e}}};
    for (const auto& h : members) {
      for (Ipv4 a : t.At(h).addresses) {
        fix_anchor.entries[AddrKey(a)] = te_e;
        fix_e.entries[AddrKey(a)] = te_r;
        fix_r.entries[AddrKey(a)] = rs;
      }
    }
    plan.actions.push_back(fix_anchor);
    plan.actions.push_back(fix_e);
    plan.actions.push_back(fix_r);
    if (by_anchor.size() == 1) {
      plan.actions.push_back(RouteFixAction{rs, {{"default", te_r}}});
    }
  }
  return plan;
}

Topology relocate_naive(const Topology& t, const std::set<NodeRef>& hosts,
                        const SiteId& site) {
  return apply_plan(t, naive_plan(t, hosts, site));
}

std::pair<Topology, NodeRef> apply_mirror(const Topology& t, const NodeRef& v,
                                          const SiteId& site) {
  const NodeRef id = FreshId(t, v + "'");
  return {apply_action(t, MirrorAction{v, site, id, {}}), id};
}

Topology apply_proxy(const Topology& t, const NodeRef& relocated,
                     const NodeRef& original_attachment) {
  return apply_action(t, ProxyAction{relocated, original_attachment,
                                     FreshId(t, "PX_" + relocated),
                                     FreshId(t, "RT_" + relocated)});
}

int wan_crossings(const Topology& t, const PolicySet& ps, int hop_limit) {
  int total = 0;
  for (const auto& p : ps.policies) {
    auto probe = policy_probe(p, t);
    if (!probe || !t.Find(probe->inject_at)) continue;
    total += simulate(t, probe->inject_at, probe->header, hop_limit)
                 .TunnelCrossings(t);
  }
  return total;
}

HomomorphismVerdict verify_homomorphism(const Topology& t,
                                        const Topology& extended,
                                        const PolicySet& ps,
                                        const ExtensionPlan& plan) {
  HomomorphismVerdict v;
  for (const auto& [policy, nodes] : plan.scope_additions) {
    for (const auto& n : nodes) {
      const Node* node = extended.Find(n);
      if (!node || node->kind != NodeKind::kTunnelEndpoint || t.Find(n)) {
        v.problems.push_back("scope addition " + n + " for " + policy +
                             " is not a tunnel endpoint created by the plan");
      }
    }
  }
  for (const auto& [orig, images] : plan.node_map) {
    for (const auto& img : images) {
      if (!extended.Find(img)) {
        v.problems.push_back("node_map image " + img + " of " + orig +
                             " is missing");
      }
    }
  }
  CheckContext ctx = plan.Context(extended);
  // Only nodes the plan created may stand in for waypoints.
  std::erase_if(ctx.stand_ins, [&](const auto& e) { return t.Find(e.first) != nullptr; });
  for (const auto& p : ps.policies) {
    try {
      auto found = check_policy(extended, ps, p, ctx);
      v.failures.insert(v.failures.end(), found.begin(), found.end());
    } catch (const ConfigurationError& e) {
      v.problems.push_back(e.what());
    }
  }
  v.holds = v.failures.empty() && v.problems.empty();
  return v;
}

InfeasibleError::InfeasibleError(std::vector<std::string> blocking)
    : std::runtime_error([&] {
        std::string msg = "infeasible: no candidate plan satisfies";
        for (const auto& b : blocking) msg += " " + b;
        return msg;
      }()),
      blocking_(std::move(blocking)) {}

namespace {

// The host's access path: the inline two-port middleboxes between the host
// and the first switch or tunnel endpoint.
struct AccessChain {
  NodeRef host;
  NodeRef attachment;          // the host's only neighbor
  std::vector<NodeRef> boxes;  // host side first
  NodeRef anchor;
  bool mirrorable = false;
};

AccessChain ChainOf(const Topology& t, const NodeRef& h) {
  AccessChain c;
  c.host = h;
  auto nbrs = t.Neighbors(h);
  if (nbrs.size() != 1) return c;
  c.attachment = nbrs.front();
  NodeRef prev = h, cur = c.attachment;
  while (true) {
    const Node& n = t.At(cur);
    if (IsL2(n.kind)) {
      c.anchor = cur;
      c.mirrorable = true;
      return c;
    }
    auto around = t.Neighbors(cur);
    if (n.kind != NodeKind::kMiddlebox || around.size() != 2 ||
        std::find(c.boxes.begin(), c.boxes.end(), cur) != c.boxes.end()) {
      return c;
    }
    c.boxes.push_back(cur);
    NodeRef next = around[0] == prev ? around[1] : around[0];
    prev = cur;
    cur = next;
  }
}

enum class Strategy { kProxy, kMirror };

struct Candidate {
  ExtensionPlan plan;
  Topology extended;
  int violations = 0;
  std::vector<std::string> failing;  // policy ids
  bool ok = false;
  double total = 0;
  std::string order_key;
};

ExtensionPlan BuildPlan(const Topology& t, const std::vector<AccessChain>& chains,
                        const std::vector<Strategy>& choice, const SiteId& site) {
  const SiteId ent = *t.EnterpriseSite();
  ExtensionPlan plan;
  std::set<NodeRef> taken;
  auto fresh = [&](const NodeRef& base) {
    NodeRef id = FreshId(t, base, taken);
    taken.insert(id);
    return id;
  };

  // One tunnel pair per anchor shared by the mirrored hosts behind it.
  std::map<NodeRef, std::pair<NodeRef, NodeRef>> tunnels;
  for (size_t i = 0; i < chains.size(); ++i) {
    if (choice[i] != Strategy::kMirror) continue;
    const NodeRef& a = chains[i].anchor;
    if (tunnels.contains(a)) continue;
    auto te_e = fresh("TE_" + a);
    auto te_r = fresh("TE_" + a + "_" + site);
    tunnels[a] = {te_e, te_r};
    plan.actions.push_back(TunnelAction{te_e, ent, a, te_r, site, "", true});
    plan.actions.push_back(RouteFixAction{te_e, {{"default", a}}});
    plan.actions.push_back(RouteFixAction{te_r, {{"default", te_e}}});
  }

  for (size_t i = 0; i < chains.size(); ++i) {
    const AccessChain& c = chains[i];
    const Node& host = t.At(c.host);
    plan.node_map[c.host] = {c.host};
    if (choice[i] == Strategy::kProxy) {
      plan.actions.push_back(RelocateAction{c.host, site, std::nullopt});
      plan.actions.push_back(ProxyAction{c.host, c.attachment,
                                         fresh("PX_" + c.host),
                                         fresh("RT_" + c.host)});
      continue;
    }
    const auto [te_e, te_r] = tunnels.at(c.anchor);
    // Mirrors outermost first so each can attach to the previous one.
    const size_t k = c.boxes.size();
    std::vector<NodeRef> mirrors(k);
    for (size_t j = k; j-- > 0;) {
      mirrors[j] = fresh(c.boxes[j] + "'");
      const NodeRef outward = j + 1 == k ? te_r : mirrors[j + 1];
      plan.actions.push_back(MirrorAction{c.boxes[j], site, mirrors[j], {outward}});
      plan.node_map[c.boxes[j]] = {c.boxes[j], mirrors[j]};
    }
    plan.actions.push_back(
        RelocateAction{c.host, site, k == 0 ? te_r : mirrors[0]});
    for (size_t j = 0; j < k; ++j) {
      const NodeRef in_o = j == 0 ? c.host : c.boxes[j - 1];
      const NodeRef out_o = j + 1 == k ? c.anchor : c.boxes[j + 1];
      const NodeRef in_m = j == 0 ? c.host : mirrors[j - 1];
      const NodeRef out_m = j + 1 == k ? te_r : mirrors[j + 1];
      RouteFixAction fix{mirrors[j], {}};
      for (const auto& [prefix, next] : t.At(c.boxes[j]).forwarding.routes) {
        if (next == in_o) fix.entries[Cidr(prefix)] = in_m;
        if (next == out_o) fix.entries[Cidr(prefix)] = out_m;
      }
      if (!fix.entries.empty()) plan.actions.push_back(fix);
    }
    RouteFixAction fix_anchor{c.anchor, {}}, fix_e{te_e, {}}, fix_r{te_r, {}};
    for (Ipv4 a : host.addresses) {
      fix_anchor.entries[AddrKey(a)] = te_e;
      fix_e.entries[AddrKey(a)] = te_r;
      fix_r.entries[AddrKey(a)] = k == 0 ? c.host : mirrors[k - 1];
    }
    plan.actions.push_back(fix_anchor);
    plan.actions.push_back(fix_e);
    plan.actions.push_back(fix_r);
  }
  return plan;
}

Candidate Evaluate(const Topology& t, const PolicySet& ps, ExtensionPlan plan,
                   const CostModel& cm, const PlannerOptions& opts) {
  Candidate c;
  try {
    c.extended = apply_plan(t, plan);
  } catch (const std::invalid_argument&) {
    c.violations = 1 << 30;
    return c;
  }
  CheckContext ctx = plan.Context(c.extended);
  ctx.hop_limit = opts.hop_limit;
  // Tunnel endpoints the plan created may enter a policy's scope.
  auto report = check_all(c.extended, ps, ctx);
  for (const auto& v : report.violations) {
    if (v.category != Category::kScopeLeak) continue;
    bool endpoints_only = std::all_of(v.detail.begin(), v.detail.end(), [&](const NodeRef& n) {
      return !t.Find(n) && c.extended.At(n).kind == NodeKind::kTunnelEndpoint;
    });
    if (endpoints_only) {
      plan.scope_additions[v.policy_id].insert(v.detail.begin(), v.detail.end());
    }
  }
  if (!plan.scope_additions.empty()) {
    ctx = plan.Context(c.extended);
    ctx.hop_limit = opts.hop_limit;
    report = check_all(c.extended, ps, ctx);
  }
  c.violations = report.total + static_cast<int>(report.config_errors.size());
  for (const auto& [id, n] : report.per_policy_counts) c.failing.push_back(id);

  for (const auto& a : plan.actions) {
    if (std::holds_alternative<MirrorAction>(a)) ++plan.cost.mirrored_boxes;
    if (std::holds_alternative<ProxyAction>(a)) ++plan.cost.proxies;
  }
  plan.cost.wan_crossings = wan_crossings(c.extended, ps, opts.hop_limit);
  c.total = plan.cost.Total(cm);
  c.order_key = plan_to_json(plan)["actions"].dump();
  c.ok = c.violations == 0;
  c.plan = std::move(plan);
  return c;
}

bool Better(const Candidate& a, const Candidate& b) {
  if (a.total != b.total) return a.total < b.total;
  if (a.plan.actions.size() != b.plan.actions.size()) {
    return a.plan.actions.size() < b.plan.actions.size();
  }
  return a.order_key < b.order_key;
}

}  // namespace

ExtensionPlan plan_extension(const Topology& t, const PolicySet& ps,
                             const std::set<NodeRef>& hosts, const SiteId& site,
                             const CostModel& cm, const PlannerOptions& opts) {
  cm.Validate();
  CheckRelocation(t, hosts, site);
  CheckContext base_ctx;
  base_ctx.hop_limit = opts.hop_limit;
  auto before = check_all(t, ps, base_ctx);
  if (before.total != 0 || !before.config_errors.empty()) {
    throw NonConformantError("the starting network has " +
                             std::to_string(before.total) +
                             " policy violations");
  }
  if (hosts.empty()) return {};

  const bool mirrors_allowed = t.FindSite(site)->flexibility == Flexibility::kFull;
  std::vector<AccessChain> chains;
  for (const auto& h : hosts) {
    chains.push_back(ChainOf(t, h));
    if (chains.back().attachment.empty()) {
      Fail("host " + h + " must have exactly one link to be relocated");
    }
  }
  auto can_mirror = [&](size_t i) { return mirrors_allowed && chains[i].mirrorable; };

  std::optional<Candidate> best;
  std::optional<Candidate> closest;  // fewest violations, for diagnostics
  auto consider = [&](const std::vector<Strategy>& choice) {
    Candidate c = Evaluate(t, ps, BuildPlan(t, chains, choice, site), cm, opts);
    if (!c.ok) {
      if (!closest || c.violations < closest->violations) closest = c;
      return false;
    }
    if (!best || Better(c, *best)) best = c;
    return true;
  };

  const size_t n = chains.size();
  if (static_cast<int>(n) <= opts.exhaustive_limit) {
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<Strategy> choice(n, Strategy::kProxy);
      bool valid = true;
      for (size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) {
          if (!can_mirror(i)) valid = false;
          choice[i] = Strategy::kMirror;
        }
      }
      if (valid) consider(choice);
    }
  } else {
    std::vector<Strategy> choice(n, Strategy::kProxy);
    if (!consider(choice)) {
      for (size_t i = 0; i < n; ++i) {
        if (can_mirror(i)) choice[i] = Strategy::kMirror;
      }
      consider(choice);
    }
    for (size_t i = 0; i < n; ++i) {
      if (!best) break;
      std::vector<Strategy> trial = choice;
      trial[i] = trial[i] == Strategy::kProxy ? Strategy::kMirror : Strategy::kProxy;
      if (trial[i] == Strategy::kMirror && !can_mirror(i)) continue;
      const Candidate incumbent = *best;
      if (consider(trial) && Better(*best, incumbent)) choice = trial;
    }
  }

  if (!best) {
    std::vector<std::string> blocking;
    if (closest) blocking = closest->failing;
    throw InfeasibleError(blocking);
  }
  auto verdict = verify_homomorphism(t, best->extended, ps, best->plan);
  if (!verdict.holds) {
    std::set<std::string> ids;
    for (const auto& f : verdict.failures) ids.insert(f.policy_id);
    throw InfeasibleError({ids.begin(), ids.end()});
  }
  return best->plan;
}

}  // namespace netext
