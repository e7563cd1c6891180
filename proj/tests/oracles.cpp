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


#include "oracles.hpp"

#include <algorithm>
#include <functional>

namespace netext::oracle {

std::multiset<Finding> scan_waypoints(const WaypointSpec& spec,
                                      const std::vector<NodeRef>& sigma) {
  std::multiset<Finding> out;
  auto count = [&](const NodeRef& v) {
    int n = 0;
    for (const auto& s : sigma) n += s == v;
    return n;
  };
  for (const auto& c : spec.occurrence) {
    const int n = count(c.node);
    bool ok = false;
    switch (c.relation) {
      case Relation::kEq: ok = n == c.count; break;
      case Relation::kGe: ok = n >= c.count; break;
      case Relation::kLe: ok = n <= c.count; break;
    }
    if (!ok) out.insert({'C', {c.node}});
  }
  for (const auto& w : spec.waypoints) {
    bool has_constraint = false;
    for (const auto& c : spec.occurrence) has_constraint |= c.node == w;
    if (!has_constraint && count(w) == 0) out.insert({'M', {w}});
  }
  for (const auto& [a, b] : spec.precedence) {
    // Whichever of the two shows up first decides; absent means vacuous.
    for (const auto& s : sigma) {
      if (s == a) break;
      if (s == b) {
        if (count(a) > 0) out.insert({'O', {a, b}});
        break;
      }
    }
  }
  return out;
}

std::multiset<Finding> findings_of(const WaypointVerdict& v) {
  std::multiset<Finding> out;
  for (const auto& f : v.failures) {
    char k = f.kind == WaypointFailure::Kind::kMissed  ? 'M'
             : f.kind == WaypointFailure::Kind::kOrder ? 'O'
                                                       : 'C';
    out.insert({k, f.nodes});
  }
  return out;
}

WaypointSpec random_spec(std::mt19937_64& rng, const std::vector<NodeRef>& alphabet) {
  auto below = [&](int n) { return static_cast<int>(rng() % n); };
  std::vector<NodeRef> pool = alphabet;
  std::shuffle(pool.begin(), pool.end(), rng);
  WaypointSpec spec;
  const int k = below(static_cast<int>(alphabet.size())) + 1;
  spec.waypoints.assign(pool.begin(), pool.begin() + k);
  // Pairs only go forward in the shuffled order, so the relation is acyclic.
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      if (below(3) == 0) spec.precedence.insert({spec.waypoints[i], spec.waypoints[j]});
    }
  }
  for (const auto& w : spec.waypoints) {
    if (below(3) == 0) continue;
    OccurrenceConstraint c{w, static_cast<Relation>(below(3)), below(4)};
    if (c.relation == Relation::kGe && c.count == 0) c.count = 1;
    spec.occurrence.push_back(c);
  }
  return spec;
}

std::vector<std::vector<NodeRef>> all_sequences(const std::vector<NodeRef>& alphabet,
                                                int max_len) {
  std::vector<std::vector<NodeRef>> out{{}};
  std::vector<std::vector<NodeRef>> layer{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::vector<NodeRef>> next;
    for (const auto& s : layer) {
      for (const auto& a : alphabet) {
        auto t = s;
        t.push_back(a);
        next.push_back(std::move(t));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

std::set<NodeRef> closure_reach(const Topology& t, const NodeRef& inject,
                                const PacketHeader& pkt) {
  std::set<NodeRef> reach;
  std::set<NodeRef> on_walk;
  std::function<void(const NodeRef&, const std::optional<NodeRef>&)> walk =
      [&](const NodeRef& at, const std::optional<NodeRef>& ingress) {
        reach.insert(at);
        if (on_walk.contains(at)) return;
        on_walk.insert(at);
        const StepAction a = forward_step(t, at, pkt, ingress);
        for (const auto& c : a.copies) walk(c, at);
        if (a.kind == StepAction::Kind::kForward || a.kind == StepAction::Kind::kFlood) {
          for (const auto& n : a.next) walk(n, at);
        }
        on_walk.erase(at);
      };
  walk(inject, std::nullopt);
  return reach;
}

RandomNetwork random_network(std::mt19937_64& rng, int max_nodes) {
  auto below = [&](int n) { return static_cast<int>(rng() % n); };
  auto coin = [&](int one_in) { return below(one_in) == 0; };
  RandomNetwork r;
  Topology& t = r.topology;
  t.AddSite({"e", SiteKind::kEnterprise, Flexibility::kFull});

  const int n = 3 + below(max_nodes - 2);
  std::vector<Ipv4> host_addrs;
  for (int i = 0; i < n; ++i) {
    Node node;
    node.id = "n" + std::to_string(i);
    node.site = "e";
    node.kind = static_cast<NodeKind>(below(5));
    if (node.kind == NodeKind::kHost || (node.kind == NodeKind::kRouter && coin(2))) {
      node.addresses.push_back(Ipv4((10u << 24) | static_cast<uint32_t>(i + 1)));
      if (node.kind == NodeKind::kHost) host_addrs.push_back(node.addresses.back());
    }
    if (node.kind == NodeKind::kMiddlebox) node.middlebox = MiddleboxSpec{};
    t.AddNode(std::move(node));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (below(100) < 50) t.AddLink(Link::Make("n" + std::to_string(i), "n" + std::to_string(j)));
    }
  }

  std::vector<Ipv4> targets = host_addrs;
  targets.push_back(Ipv4((10u << 24) | 250u));
  auto random_pattern = [&] {
    Pattern p;
    if (coin(2)) p.dst = Prefix::Host(targets[below(static_cast<int>(targets.size()))]);
    if (coin(3)) p.proto = coin(2) ? "TCP" : "UDP";
    if (coin(3)) p.dport = coin(2) ? 80 : 1024;
    return p;
  };
  for (int i = 0; i < n; ++i) {
    const NodeRef id = "n" + std::to_string(i);
    const auto nbrs = t.Neighbors(id);
    if (nbrs.empty()) continue;
    auto pick = [&] { return nbrs[below(static_cast<int>(nbrs.size()))]; };
    Node& node = t.MutableNode(id);
    Forwarding& f = node.forwarding;
    switch (node.kind) {
      case NodeKind::kSwitch:
      case NodeKind::kTunnelEndpoint:
        for (Ipv4 a : targets) {
          if (coin(3)) f.fib[a] = pick();
        }
        if (coin(3)) f.fib_default = pick();
        f.flood_on_miss = !coin(5);
        break;
      case NodeKind::kRouter:
        for (Ipv4 a : targets) {
          if (coin(2)) f.routes[Prefix::Host(a)] = pick();
        }
        if (coin(2)) f.routes[Prefix(Ipv4(10u << 24), 8)] = pick();
        if (coin(2)) f.routes[Prefix(Ipv4(0), 0)] = pick();
        for (int k = below(3); k > 0; --k) f.acl.push_back({random_pattern(), !coin(3)});
        break;
      case NodeKind::kMiddlebox:
        for (int k = below(4); k > 0; --k) {
          MiddleboxRule rule;
          rule.match = random_pattern();
          const int a = below(4);
          rule.action = a == 0 ? RuleAction::kDeny : a == 1 ? RuleAction::kCopyTo : RuleAction::kAllow;
          if (rule.action == RuleAction::kCopyTo) rule.copy_to = pick();
          node.middlebox->rules.push_back(rule);
        }
        for (Ipv4 a : targets) {
          if (coin(3)) f.routes[Prefix::Host(a)] = pick();
        }
        if (coin(2)) f.routes[Prefix(Ipv4(0), 0)] = pick();
        break;
      case NodeKind::kHost:
        if (!coin(4)) f.gateway = pick();
        break;
    }
  }

  // Prefer injecting where the packet can go somewhere.
  r.inject = "n" + std::to_string(below(n));
  for (int tries = 0; tries < 4 && t.Neighbors(r.inject).empty(); ++tries) {
    r.inject = "n" + std::to_string(below(n));
  }
  r.header.src = host_addrs.empty() ? Ipv4((10u << 24) | 200u)
                                    : host_addrs[below(static_cast<int>(host_addrs.size()))];
  r.header.dst = targets[below(static_cast<int>(targets.size()))];
  r.header.sport = 1024;
  r.header.dport = coin(2) ? 80 : 1024;
  r.header.proto = coin(2) ? "TCP" : "UDP";
  return r;
}

}  // namespace netext::oracle
