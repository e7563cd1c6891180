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


#include "netext/traversal.hpp"

#include <deque>
#include <map>
#include <stdexcept>
#include <tuple>

namespace netext {
namespace {

StepAction Forward(NodeRef next) {
  StepAction a;
  a.kind = StepAction::Kind::kForward;
  a.next = {std::move(next)};
  return a;
}

StepAction Drop(std::string reason) {
  StepAction a;
  a.kind = StepAction::Kind::kDrop;
  a.reason = std::move(reason);
  return a;
}

StepAction Deliver() {
  StepAction a;
  a.kind = StepAction::Kind::kDeliver;
  return a;
}

std::optional<NodeRef> LongestPrefix(const std::map<Prefix, NodeRef>& routes,
                                     Ipv4 dst) {
  const NodeRef* best = nullptr;
  int best_len = -1;
  for (const auto& [prefix, next] : routes) {
    if (prefix.length() > best_len && prefix.Contains(dst)) {
      best = &next;
      best_len = prefix.length();
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

StepAction L2Step(const Topology& t, const Node& node, const PacketHeader& pkt,
                  const std::optional<NodeRef>& ingress) {
  const auto& f = node.forwarding;
  std::optional<NodeRef> out;
  if (auto it = f.fib.find(pkt.dst); it != f.fib.end()) {
    out = it->second;
  } else if (f.fib_default) {
    out = f.fib_default;
  }
  if (out) {
    if (ingress && *out == *ingress) return Drop("hairpin");
    return Forward(*out);
  }
  if (!f.flood_on_miss) return Drop("fib miss");
  StepAction a;
  a.kind = StepAction::Kind::kFlood;
  for (const auto& n : t.Neighbors(node.id)) {
    if (!ingress || n != *ingress) a.next.push_back(n);
  }
  if (a.next.empty()) return Drop("flood: no ports");
  return a;
}

StepAction L3Step(const Topology& t, const Node& node, const PacketHeader& pkt,
                  const std::optional<NodeRef>& ingress) {
  if (node.Owns(pkt.dst)) return Deliver();
  if (auto next = LongestPrefix(node.forwarding.routes, pkt.dst)) {
    return Forward(*next);
  }
  if (node.kind == NodeKind::kMiddlebox && ingress) {
    // Bump in the wire: a two-port box passes traffic through.
    const auto ports = t.Neighbors(node.id);
    if (ports.size() == 2) return Forward(ports[0] == *ingress ? ports[1] : ports[0]);
  }
  return Drop("no route");
}

std::string HeaderKey(const PacketHeader& h) { return h.ToString(); }

}  // namespace

StepAction forward_step(const Topology& t, const NodeRef& at,
                        const PacketHeader& pkt,
                        const std::optional<NodeRef>& ingress) {
  const Node& node = t.At(at);
  const bool originating = !ingress.has_value();
  switch (node.kind) {
    case NodeKind::kHost: {
      if (node.Owns(pkt.dst)) return Deliver();
      if (!originating) return Drop("not addressed to host");
      if (node.forwarding.gateway) return Forward(*node.forwarding.gateway);
      const auto ports = t.Neighbors(at);
      if (ports.size() == 1) return Forward(ports.front());
      return Drop("no gateway");
    }
    case NodeKind::kSwitch:
    case NodeKind::kTunnelEndpoint:
      return L2Step(t, node, pkt, ingress);
    case NodeKind::kRouter: {
      if (!originating) {
        for (const auto& rule : node.forwarding.acl) {
          if (!rule.match.Matches(pkt)) continue;
          if (!rule.permit) return Drop("acl");
          break;
        }
      }
      return L3Step(t, node, pkt, ingress);
    }
    case NodeKind::kMiddlebox: {
      PacketHeader h = pkt;
      std::optional<PacketHeader> rewritten;
      std::vector<NodeRef> copies;
      if (!originating && node.middlebox) {
        for (const auto& rule : node.middlebox->rules) {
          if (!rule.match.Matches(h)) continue;
          if (rule.action == RuleAction::kCopyTo) {
            copies.push_back(rule.copy_to);
            continue;
          }
          if (rule.action == RuleAction::kDeny) {
            StepAction a = Drop(ToString(node.middlebox->function_class) + " deny");
            a.copies = std::move(copies);
            return a;
          }
          if (rule.action == RuleAction::kRewrite) {
            if (rule.rewrite_src) h.src = *rule.rewrite_src;
            if (rule.rewrite_dst) h.dst = *rule.rewrite_dst;
            rewritten = h;
          }
          break;
        }
      }
      StepAction a = L3Step(t, node, h, ingress);
      a.rewritten = rewritten;
      a.copies = std::move(copies);
      return a;
    }
  }
  return Drop("unknown node kind");
}

std::string Outcome::ToString() const {
  switch (kind) {
    case Kind::kDelivered:
      return "delivered(" + at + ")";
    case Kind::kDropped:
      return "dropped(" + at + ", " + reason + ")";
    case Kind::kHopLimitExceeded:
      return "hop-limit-exceeded(" + at + ")";
  }
  return "?";
}

std::vector<NodeRef> Traversal::SegmentWalk(int seg) const {
  std::vector<NodeRef> walk;
  size_t from = 0;
  for (const auto& rw : rewrites) {
    if (rw.segment == seg) {
      walk.push_back(rw.at);
      from = rw.sigma_index + 1;
      break;
    }
  }
  for (size_t i = from; i < sigma.size(); ++i) {
    if (sigma_segments[i] == seg) walk.push_back(sigma[i]);
  }
  return walk;
}

std::vector<int> Traversal::SigmaSegmentIds() const {
  std::vector<int> ids;
  if (!sigma_segments.empty()) ids.push_back(sigma_segments.front());
  for (const auto& rw : rewrites) ids.push_back(rw.segment);
  return ids;
}

int Traversal::TunnelCrossings(const Topology& t) const {
  int n = 0;
  for (size_t i = 1; i < sigma.size(); ++i) {
    const Link* l = t.FindLink(sigma[i - 1], sigma[i]);
    if (l && l->tunnel) ++n;
  }
  return n;
}

Traversal simulate(const Topology& t, const NodeRef& inject_at,
                   const PacketHeader& pkt, int hop_limit, bool record_trace) {
  if (!t.Find(inject_at)) {
    throw std::invalid_argument("simulate: unknown injection node " + inject_at);
  }
  if (hop_limit < 1) throw std::invalid_argument("simulate: hop_limit < 1");

  struct Copy {
    int id = 0;
    NodeRef at;
    std::optional<NodeRef> ingress;
    PacketHeader header;
    int segment = 0;
    int hops = 0;
    bool primary = false;
    std::vector<NodeRef> path;
    std::vector<int> path_segments;
    std::vector<RewriteEvent> rewrites;
    std::set<std::pair<NodeRef, std::string>> lineage;
  };

  Traversal tr;
  tr.segments.push_back({-1, inject_at, pkt, {}});
  std::map<std::tuple<int, NodeRef, PacketHeader>, int> segment_index;

  std::set<std::tuple<NodeRef, std::optional<NodeRef>, PacketHeader, int>> seen;
  std::deque<Copy> queue;
  int next_id = 0;
  Copy first;
  first.id = next_id++;
  first.at = inject_at;
  first.header = pkt;
  first.primary = true;
  queue.push_back(std::move(first));

  bool delivered = false;
  bool primary_done = false;
  auto finish_primary = [&](const Copy& c, Outcome outcome) {
    if (delivered || primary_done || !c.primary) return;
    primary_done = true;
    tr.sigma = c.path;
    tr.sigma_segments = c.path_segments;
    tr.rewrites = c.rewrites;
    tr.outcome = std::move(outcome);
  };
  auto log = [&](const Copy& c, const std::string& action,
                 const PacketHeader& h) {
    if (record_trace) {
      tr.trace.push_back(std::to_string(c.id) + " " + c.at + " " + action +
                         " " + h.ToString());
    }
  };

  while (!queue.empty()) {
    Copy c = std::move(queue.front());
    queue.pop_front();
    ++tr.expansions;
    tr.reach_set.insert(c.at);
    tr.segments[c.segment].reach.insert(c.at);

    const std::pair<NodeRef, std::string> here{c.at, HeaderKey(c.header)};
    if (c.lineage.contains(here)) {
      log(c, "loop", c.header);
      finish_primary(c, {Outcome::Kind::kHopLimitExceeded, c.at, "loop"});
      continue;
    }
    c.lineage.insert(here);
    c.path.push_back(c.at);
    c.path_segments.push_back(c.segment);

    StepAction act = forward_step(t, c.at, c.header, c.ingress);
    // Delivery is local; anything that would take another hop is cut here.
    if (c.hops >= hop_limit && act.kind != StepAction::Kind::kDeliver &&
        act.kind != StepAction::Kind::kDrop) {
      log(c, "hop-limit", c.header);
      finish_primary(c, {Outcome::Kind::kHopLimitExceeded, c.at, "hop limit"});
      continue;
    }
    int out_segment = c.segment;
    if (act.rewritten) {
      const auto key = std::make_tuple(c.segment, c.at, *act.rewritten);
      auto it = segment_index.find(key);
      if (it == segment_index.end()) {
        it = segment_index.emplace(key, static_cast<int>(tr.segments.size())).first;
        tr.segments.push_back({c.segment, c.at, *act.rewritten, {}});
      }
      out_segment = it->second;
      tr.segments[out_segment].reach.insert(c.at);
      c.rewrites.push_back(
          {c.at, c.path.size() - 1, c.header, *act.rewritten, out_segment});
      log(c, "rewrite", *act.rewritten);
      c.header = *act.rewritten;
      // The walk is keyed on the header it carries from here on.
      c.lineage.insert({c.at, HeaderKey(c.header)});
    }

    // A copy keeps its id along its walk; forks and copy-to get fresh ids.
    auto spawn = [&](const NodeRef& to, bool primary, bool same_copy) {
      Copy child;
      child.at = to;
      child.ingress = c.at;
      child.header = c.header;
      child.segment = out_segment;
      child.hops = c.hops + 1;
      child.primary = primary;
      const auto state = std::make_tuple(to, child.ingress, child.header,
                                         child.segment);
      if (!seen.insert(state).second && !primary) return;
      child.id = same_copy ? c.id : next_id++;
      child.path = c.path;
      child.path_segments = c.path_segments;
      child.rewrites = c.rewrites;
      child.lineage = c.lineage;
      queue.push_back(std::move(child));
    };

    for (const auto& target : act.copies) {
      log(c, "copy:" + target, c.header);
      spawn(target, false, false);
    }

    switch (act.kind) {
      case StepAction::Kind::kDeliver:
        log(c, "deliver", c.header);
        if (!delivered) {
          delivered = true;
          tr.sigma = c.path;
          tr.sigma_segments = c.path_segments;
          tr.rewrites = c.rewrites;
          tr.outcome = {Outcome::Kind::kDelivered, c.at, ""};
        }
        break;
      case StepAction::Kind::kDrop:
        log(c, "drop:" + act.reason, c.header);
        finish_primary(c, {Outcome::Kind::kDropped, c.at, act.reason});
        break;
      case StepAction::Kind::kForward:
      case StepAction::Kind::kFlood: {
        std::string targets;
        for (const auto& n : act.next) targets += (targets.empty() ? "" : ",") + n;
        log(c, (act.kind == StepAction::Kind::kForward ? "forward:" : "flood:") +
                   targets,
            c.header);
        for (size_t i = 0; i < act.next.size(); ++i) {
          spawn(act.next[i], c.primary && i == 0, i == 0);
        }
        break;
      }
    }
  }
  return tr;
}

std::optional<Probe> policy_probe(const Policy& p, const Topology& t) {
  const auto& pat = p.packet_class.pattern;
  auto pick_host = [&](const std::optional<Prefix>& prefix,
                       std::optional<Ipv4> avoid) -> std::optional<Ipv4> {
    if (prefix && prefix->is_host()) return prefix->address();
    for (const auto& [id, node] : t.nodes()) {
      if (node.kind != NodeKind::kHost || node.addresses.empty()) continue;
      const Ipv4 a = node.addresses.front();
      if (avoid && a == *avoid) continue;
      if (!prefix || prefix->Contains(a)) return a;
    }
    return std::nullopt;
  };
  auto dst = pick_host(pat.dst, std::nullopt);
  if (!dst) return std::nullopt;
  auto src = pick_host(pat.src, dst);
  if (!src) return std::nullopt;
  Probe probe;
  probe.policy_id = p.id;
  probe.header = {*src, *dst, pat.sport.value_or(kProbeWildcardPort),
                  pat.dport.value_or(kProbeWildcardPort),
                  pat.proto.value_or("TCP")};
  if (p.packet_class.origin) {
    probe.inject_at = *p.packet_class.origin;
  } else if (const Node* owner = t.OwnerOf(*src)) {
    probe.inject_at = owner->id;
  } else {
    return std::nullopt;
  }
  return probe;
}

std::vector<Probe> probe_headers(const PolicySet& ps, const Topology& t,
                                 const std::vector<uint16_t>& deny_ports) {
  std::vector<Probe> probes;
  for (const auto& p : ps.policies) {
    if (auto probe = policy_probe(p, t)) probes.push_back(*probe);
  }
  std::vector<const Node*> hosts;
  for (const auto& [id, node] : t.nodes()) {
    if (node.kind == NodeKind::kHost && !node.addresses.empty()) {
      hosts.push_back(&node);
    }
  }
  for (const Node* s : hosts) {
    for (const Node* d : hosts) {
      if (s == d) continue;
      for (uint16_t port : deny_ports) {
        PacketHeader h{s->addresses.front(), d->addresses.front(),
                       kProbeWildcardPort, port, "TCP"};
        if (match_packet(ps, h, s->id).is_default_deny()) {
          probes.push_back({s->id, h, ""});
        }
      }
    }
  }
  return probes;
}

}  // namespace netext
