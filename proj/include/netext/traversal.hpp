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
#include <string>
#include <vector>

#include "netext/packet.hpp"
#include "netext/policy.hpp"
#include "netext/topology.hpp"

namespace netext {

inline constexpr int kDefaultHopLimit = 64;

// What a single device does with a packet. A rewrite is reported alongside
// the forwarding decision taken for the rewritten header.
struct StepAction {
  enum class Kind { kDeliver, kForward, kFlood, kDrop };
  Kind kind = Kind::kDrop;
  std::vector<NodeRef> next;              // kForward: one, kFlood: many
  std::optional<PacketHeader> rewritten;  // set iff the node rewrote
  std::vector<NodeRef> copies;            // copy-to targets (extra copies)
  std::string reason;                     // kDrop only

  bool is_rewrite() const { return rewritten.has_value(); }
};

// Pure per-node forwarding decision. `ingress` is the neighbor the packet came
// from; a packet with no ingress is being originated by `at`, in which case
// ACLs and middlebox rules are not applied (the node is the sender).
StepAction forward_step(const Topology& t, const NodeRef& at,
                        const PacketHeader& pkt,
                        const std::optional<NodeRef>& ingress = std::nullopt);

// A maximal stretch of the packet's life between rewrites.
struct Segment {
  int parent = -1;
  NodeRef start;  // injection point or rewriting node
  PacketHeader header;
  std::set<NodeRef> reach;  // nodes any copy touched within this segment
};

struct Outcome {
  enum class Kind { kDelivered, kDropped, kHopLimitExceeded };
  Kind kind = Kind::kDropped;
  NodeRef at;  // delivered-to node or drop location
  std::string reason;

  std::string ToString() const;
};

struct RewriteEvent {
  NodeRef at;
  size_t sigma_index = 0;
  PacketHeader before;
  PacketHeader after;
  int segment = 0;  // the segment this rewrite opens
};

struct Traversal {
  std::vector<NodeRef> sigma;
  // Segment id of each sigma position; a rewriting node carries the segment
  // it entered with.
  std::vector<int> sigma_segments;
  std::set<NodeRef> reach_set;
  std::vector<RewriteEvent> rewrites;  // along sigma
  std::vector<Segment> segments;
  Outcome outcome;
  size_t expansions = 0;
  std::vector<std::string> trace;  // filled when requested

  // The walk of segment `seg` along sigma, starting at its rewriting node.
  std::vector<NodeRef> SegmentWalk(int seg) const;
  // Segment ids along sigma in order.
  std::vector<int> SigmaSegmentIds() const;
  // Tunnel links traversed along sigma.
  int TunnelCrossings(const Topology& t) const;
};

// Breadth-first expansion over packet copies. sigma is the walk of the first
// copy delivered to the owner of its (possibly rewritten) destination; if no
// copy is delivered it is the walk of the primary copy (first successor at
// every fork) and the outcome reports how that copy ended. A copy revisiting
// a (node, header) pair already on its own walk is a forwarding loop and is
// reported as HopLimitExceeded.
//
// Throws std::invalid_argument if `inject_at` is unknown or hop_limit < 1.
Traversal simulate(const Topology& t, const NodeRef& inject_at,
                   const PacketHeader& pkt, int hop_limit = kDefaultHopLimit,
                   bool record_trace = false);

struct Probe {
  NodeRef inject_at;
  PacketHeader header;
  std::string policy_id;  // empty for default-deny probes

  bool is_default_deny() const { return policy_id.empty(); }
};

inline constexpr uint16_t kProbeWildcardPort = 1024;

// One representative probe per policy (wildcard ports become 1024, a
// wildcard or prefix source becomes the first matching host) followed by one
// TCP probe per ordered host pair and port in `deny_ports` that no policy
// matches.
std::vector<Probe> probe_headers(const PolicySet& ps, const Topology& t,
                                 const std::vector<uint16_t>& deny_ports = {80});

// Probe for a single policy, or nullopt if its class cannot be instantiated.
std::optional<Probe> policy_probe(const Policy& p, const Topology& t);

}  // namespace netext
