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


#include "netext/campus.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "netext/checker.hpp"
#include "netext/traversal.hpp"

namespace netext {
namespace {

// Draws that do not depend on the standard library's distribution
// implementations, so scenarios are identical across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}
  uint64_t Below(uint64_t n) { return engine_() % n; }
  double Unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool Chance(double p) { return Unit() < p; }

 private:
  std::mt19937_64 engine_;
};

Ipv4 Addr(uint32_t a, uint32_t b, uint32_t c, uint32_t d) {
  return Ipv4((a << 24) | (b << 16) | (c << 8) | d);
}

const Ipv4 kExtAddr = Addr(198, 51, 100, 10);
const Ipv4 kEdgeAddr = Addr(198, 51, 100, 1);
const Prefix kExtNet(Addr(198, 51, 100, 0), 24);
const Prefix kVipNet(Addr(203, 0, 113, 0), 24);
const Prefix kAny(Ipv4(0), 0);

Pattern Flow(Ipv4 src, Ipv4 dst, std::optional<uint16_t> sport,
             std::optional<uint16_t> dport) {
  Pattern p;
  p.src = Prefix::Host(src);
  p.dst = Prefix::Host(dst);
  p.sport = sport;
  p.dport = dport;
  p.proto = "TCP";
  return p;
}

MiddleboxSpec Spec(FunctionClass fc) {
  MiddleboxSpec s;
  s.function_class = fc;
  return s;
}

MiddleboxRule Allow(Pattern p) { return {std::move(p), RuleAction::kAllow, {}, {}, {}}; }
MiddleboxRule DenyAll() { return {Pattern{}, RuleAction::kDeny, {}, {}, {}}; }

struct Host {
  NodeRef id;
  int subnet = 0;
  Ipv4 addr;
  NodeRef attachment;  // inline IPS or the subnet switch
};

struct Draft {
  Topology t;
  std::vector<Host> hosts;
  std::vector<bool> subnet_fw;
  std::vector<PacketClass> classes;  // policy classes in id order
  std::vector<NodeRef> destinations;
};

NodeRef SubnetUplink(const Draft& d, int i) {
  return d.subnet_fw[i] ? "FW_" + std::to_string(i) : "CORE";
}

// Wires the fixed part and draws subnets, boxes and policy classes.
Draft DrawCampus(const ScenarioConfig& cfg, Rng& rng) {
  Draft d;
  Topology& t = d.t;
  t.AddSite({kCampusSite, SiteKind::kEnterprise, Flexibility::kFull});
  t.AddSite({kDcSite, SiteKind::kRemoteDc, Flexibility::kFull});
  t.AddSite({kRestrictedDcSite, SiteKind::kRemoteDc, Flexibility::kRestricted});

  auto add = [&](NodeRef id, NodeKind kind, std::vector<Ipv4> addrs = {},
                 std::optional<MiddleboxSpec> mb = std::nullopt) {
    Node n;
    n.id = std::move(id);
    n.kind = kind;
    n.site = kCampusSite;
    n.addresses = std::move(addrs);
    n.middlebox = std::move(mb);
    t.AddNode(std::move(n));
  };
  add("ext", NodeKind::kHost, {kExtAddr});
  add("EDGE", NodeKind::kRouter, {kEdgeAddr});
  add("FW0", NodeKind::kMiddlebox, {}, Spec(FunctionClass::kFirewall));
  add("LB0", NodeKind::kMiddlebox, {}, Spec(FunctionClass::kLoadBalancer));
  add("CORE", NodeKind::kRouter, {Addr(10, 0, 0, 1)});
  for (auto [a, b] : {std::pair{"ext", "EDGE"}, {"EDGE", "FW0"}, {"FW0", "LB0"},
                      {"LB0", "CORE"}}) {
    t.AddLink(Link::Make(a, b));
  }

  d.subnet_fw.assign(cfg.subnets + 1, false);
  for (int i = 1; i <= cfg.subnets; ++i) {
    const std::string s = std::to_string(i);
    d.subnet_fw[i] = rng.Chance(cfg.middlebox_density);
    add("SW_" + s, NodeKind::kSwitch);
    if (d.subnet_fw[i]) {
      add("FW_" + s, NodeKind::kMiddlebox, {}, Spec(FunctionClass::kFirewall));
      t.AddLink(Link::Make("CORE", "FW_" + s));
      t.AddLink(Link::Make("FW_" + s, "SW_" + s));
    } else {
      t.AddLink(Link::Make("CORE", "SW_" + s));
    }
    for (int j = 1; j <= cfg.hosts_per_subnet; ++j) {
      const std::string hs = s + "_" + std::to_string(j);
      Host h{"h_" + hs, i, Addr(10, i, 0, j), "SW_" + s};
      add(h.id, NodeKind::kHost, {h.addr});
      if (rng.Chance(cfg.middlebox_density)) {
        h.attachment = "IPS_" + hs;
        add(h.attachment, NodeKind::kMiddlebox, {}, Spec(FunctionClass::kIps));
        t.AddLink(Link::Make("SW_" + s, h.attachment));
      }
      t.AddLink(Link::Make(h.attachment, h.id));
      d.hosts.push_back(h);
    }
  }

  // Policy classes. Web services are published on 203.0.113.(10 + k).
  auto push = [&](PacketClass pc, NodeRef dest) {
    if (std::find(d.classes.begin(), d.classes.end(), pc) != d.classes.end()) return;
    d.classes.push_back(std::move(pc));
    d.destinations.push_back(std::move(dest));
  };
  std::set<NodeRef> published;
  int vip = 0;
  const int hps = cfg.hosts_per_subnet;
  for (int i = 1; i <= cfg.subnets; ++i) {
    for (int p = 0; p < cfg.policies_per_subnet; ++p) {
      const Host& a = d.hosts[(i - 1) * hps + rng.Below(hps)];
      switch (((i - 1) * cfg.policies_per_subnet + p) % 3) {
        case 0: {
          if (!published.insert(a.id).second) break;
          const Ipv4 v = Addr(203, 0, 113, 10 + vip);
          const std::string label = "VIP_" + std::to_string(vip++);
          Node& lb = t.MutableNode("LB0");
          lb.addresses.push_back(v);
          lb.labels[label] = v;
          lb.middlebox->rules.push_back({Flow(kExtAddr, v, {}, 80), RuleAction::kRewrite,
                                         {}, a.addr, {}});
          lb.middlebox->rules.push_back({Flow(a.addr, kExtAddr, 80, {}),
                                         RuleAction::kRewrite, v, {}, {}});
          push({Flow(kExtAddr, v, {}, 80), std::nullopt}, "LB0");
          push({Flow(kExtAddr, a.addr, {}, 80), NodeRef("LB0")}, a.id);
          push({Flow(a.addr, kExtAddr, 80, {}), std::nullopt}, "LB0");
          push({Flow(v, kExtAddr, 80, {}), NodeRef("LB0")}, "ext");
          break;
        }
        case 1:
        case 2: {
          const int other = cfg.subnets == 1 ? i : i % cfg.subnets + 1;
          const Host& b = d.hosts[(other - 1) * hps + rng.Below(hps)];
          if (a.id == b.id) break;
          const std::optional<uint16_t> port =
              ((i - 1) * cfg.policies_per_subnet + p) % 3 == 2
                  ? std::optional<uint16_t>(22)
                  : std::nullopt;
          push({Flow(a.addr, b.addr, {}, port), std::nullopt}, b.id);
          break;
        }
      }
    }
  }
  for (const auto& a : d.hosts) {
    for (const auto& b : d.hosts) {
      if (a.subnet == b.subnet && a.id != b.id) {
        push({Flow(a.addr, b.addr, {}, {}), std::nullopt}, b.id);
      }
    }
  }
  return d;
}

// Filtering and forwarding derived from the drawn policy classes.
void Configure(Draft& d, const ScenarioConfig& cfg) {
  Topology& t = d.t;
  auto crosses = [&](const Pattern& p, int subnet) {
    const Prefix net(Addr(10, subnet, 0, 0), 24);
    const bool src_in = net.Contains(p.src->address());
    const bool dst_in = net.Contains(p.dst->address());
    return src_in != dst_in;
  };

  Node& lb = t.MutableNode("LB0");
  lb.middlebox->rules.push_back(Allow(Pattern{}));
  lb.forwarding.routes = {{kExtNet, "FW0"}, {Prefix(Addr(10, 0, 0, 0), 8), "CORE"}};

  Node& fw0 = t.MutableNode("FW0");
  for (const auto& pc : d.classes) {
    const Pattern& p = pc.pattern;
    if (kVipNet.Contains(p.dst->address()) || kVipNet.Contains(p.src->address())) {
      fw0.middlebox->rules.push_back(Allow(p));
    }
  }
  fw0.middlebox->rules.push_back(DenyAll());
  fw0.forwarding.routes = {{kExtNet, "EDGE"}, {kAny, "LB0"}};

  Node& edge = t.MutableNode("EDGE");
  edge.forwarding.routes = {{Prefix::Host(kExtAddr), "ext"}, {kAny, "FW0"}};
  t.MutableNode("ext").forwarding.gateway = "EDGE";

  Node& core = t.MutableNode("CORE");
  core.forwarding.routes = {{kExtNet, "LB0"}, {kVipNet, "LB0"}};
  for (const auto& pc : d.classes) {
    const Pattern& p = pc.pattern;
    if (kVipNet.Contains(p.dst->address()) || kVipNet.Contains(p.src->address())) continue;
    bool intra = false;
    for (int i = 1; i <= cfg.subnets; ++i) {
      const Prefix net(Addr(10, i, 0, 0), 24);
      if (net.Contains(p.src->address()) && net.Contains(p.dst->address())) intra = true;
    }
    if (!intra) core.forwarding.acl.push_back({p, true});
  }
  core.forwarding.acl.push_back({Pattern{}, false});

  for (int i = 1; i <= cfg.subnets; ++i) {
    const std::string s = std::to_string(i);
    const Prefix net(Addr(10, i, 0, 0), 24);
    core.forwarding.routes[net] = d.subnet_fw[i] ? "FW_" + s : "SW_" + s;
    if (d.subnet_fw[i]) {
      Node& fw = t.MutableNode("FW_" + s);
      for (const auto& pc : d.classes) {
        if (!kVipNet.Contains(pc.pattern.dst->address()) && crosses(pc.pattern, i)) {
          fw.middlebox->rules.push_back(Allow(pc.pattern));
        }
      }
      fw.middlebox->rules.push_back(DenyAll());
      fw.forwarding.routes = {{net, "SW_" + s}, {kAny, "CORE"}};
    }
    Node& sw = t.MutableNode("SW_" + s);
    sw.forwarding.fib_default = SubnetUplink(d, i);
  }
  for (const auto& h : d.hosts) {
    const bool inline_ips = h.attachment != "SW_" + std::to_string(h.subnet);
    t.MutableNode("SW_" + std::to_string(h.subnet)).forwarding.fib[h.addr] =
        inline_ips ? h.attachment : h.id;
    t.MutableNode(h.id).forwarding.gateway = h.attachment;
    if (!inline_ips) continue;
    Node& ips = t.MutableNode(h.attachment);
    Pattern out;
    out.src = Prefix::Host(h.addr);
    ips.middlebox->rules.push_back(Allow(out));
    for (const auto& pc : d.classes) {
      if (pc.pattern.dst->address() == h.addr) ips.middlebox->rules.push_back(Allow(pc.pattern));
    }
    ips.middlebox->rules.push_back(DenyAll());
    ips.forwarding.routes = {{Prefix::Host(h.addr), h.id},
                             {kAny, "SW_" + std::to_string(h.subnet)}};
  }
}

// Scope and waypoints read off each class's simulated path.
PolicySet DerivePolicies(const Draft& d) {
  PolicySet ps;
  for (size_t k = 0; k < d.classes.size(); ++k) {
    Policy p;
    p.id = "P" + std::to_string(k + 1);
    p.packet_class = d.classes[k];
    p.destination = d.destinations[k];
    auto probe = policy_probe(p, d.t);
    if (!probe) continue;
    Traversal tr = simulate(d.t, probe->inject_at, probe->header);
    const int seg = tr.SigmaSegmentIds().front();
    p.scope = tr.segments[seg].reach;
    const auto walk = tr.SegmentWalk(seg);
    for (size_t i = 1; i < walk.size(); ++i) {
      const Node& n = d.t.At(walk[i]);
      if (n.kind != NodeKind::kMiddlebox) continue;
      auto& wp = p.waypoints;
      if (std::find(wp.waypoints.begin(), wp.waypoints.end(), n.id) != wp.waypoints.end()) {
        continue;
      }
      if (!wp.waypoints.empty()) wp.precedence.insert({wp.waypoints.back(), n.id});
      wp.waypoints.push_back(n.id);
      if (n.middlebox->function_class == FunctionClass::kIps) {
        wp.occurrence.push_back({n.id, Relation::kGe, 1});
      } else {
        wp.occurrence.push_back({n.id, Relation::kEq, occur(walk, n.id)});
      }
    }
    ps.policies.push_back(std::move(p));
  }
  return ps;
}

std::set<NodeRef> DrawMigration(const Draft& d, double fraction, Rng& rng) {
  std::vector<NodeRef> pool;
  for (const auto& h : d.hosts) pool.push_back(h.id);
  const size_t n = static_cast<size_t>(std::ceil(fraction * pool.size() - 1e-9));
  for (size_t i = 0; i < n && i < pool.size(); ++i) {
    std::swap(pool[i], pool[i + rng.Below(pool.size() - i)]);
  }
  return {pool.begin(), pool.begin() + std::min(n, pool.size())};
}

}  // namespace

void ScenarioConfig::Validate() const {
  if (subnets < 1 || subnets > 250) throw std::invalid_argument("subnets must be in [1, 250]");
  if (hosts_per_subnet < 1 || hosts_per_subnet > 250) {
    throw std::invalid_argument("hosts_per_subnet must be in [1, 250]");
  }
  if (policies_per_subnet < 1) throw std::invalid_argument("policies_per_subnet must be >= 1");
  if (!(middlebox_density >= 0 && middlebox_density <= 1)) {
    throw std::invalid_argument("middlebox_density must be in [0, 1]");
  }
  if (!(migrate_fraction > 0 && migrate_fraction <= 1)) {
    throw std::invalid_argument("migrate_fraction must be in (0, 1]");
  }
}

Scenario gen_campus(const ScenarioConfig& cfg) {
  cfg.Validate();
  constexpr int kAttempts = 8;
  std::string last_problem;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Rng rng(cfg.seed * 0x9E3779B97F4A7C15ull + static_cast<uint64_t>(attempt));
    Draft d = DrawCampus(cfg, rng);
    Configure(d, cfg);
    for (const auto& issue : validate_topology(d.t)) {
      if (issue.is_error()) throw std::logic_error("generated topology: " + issue.message);
    }
    PolicySet ps = DerivePolicies(d);
    auto issues = validate_policy_set(ps, d.t);
    if (!issues.empty()) {
      last_problem = issues.front();
      continue;
    }
    auto report = check_all(d.t, ps);
    if (report.total != 0 || !report.config_errors.empty()) {
      last_problem = report.violations.empty() ? report.config_errors.front()
                                               : report.violations.front().summary;
      continue;
    }
    Scenario s;
    s.id = "campus-" + std::to_string(cfg.seed);
    s.migrate = DrawMigration(d, cfg.migrate_fraction, rng);
    s.topology = std::move(d.t);
    s.policies = std::move(ps);
    s.attempts = attempt + 1;
    return s;
  }
  throw std::runtime_error("campus generation for seed " + std::to_string(cfg.seed) +
                           " not conformant after " + std::to_string(kAttempts) +
                           " attempts: " + last_problem);
}

double EvalResult::MeanNaive() const {
  if (rows.empty()) return 0;
  double sum = 0;
  for (const auto& r : rows) sum += r.naive_total;
  return sum / rows.size();
}

double EvalResult::MeanPlanner() const {
  double sum = 0;
  int n = 0;
  for (const auto& r : rows) {
    if (r.infeasible) continue;
    sum += r.planner_total;
    ++n;
  }
  return n ? sum / n : 0;
}

int EvalResult::InfeasibleCount() const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(),
                                        [](const EvalRow& r) { return r.infeasible; }));
}

namespace {

bool MiddleboxOnMigratedPath(const Scenario& s) {
  for (const auto& p : s.policies.policies) {
    auto probe = policy_probe(p, s.topology);
    if (!probe) continue;
    Traversal tr = simulate(s.topology, probe->inject_at, probe->header);
    bool migrated = false, box = false;
    for (const auto& n : tr.sigma) {
      migrated |= s.migrate.contains(n);
      box |= s.topology.At(n).kind == NodeKind::kMiddlebox;
    }
    if (migrated && box) return true;
  }
  return false;
}

EvalRow RunScenario(const ScenarioConfig& cfg, const EvalOptions& opts) {
  EvalRow row;
  row.seed = cfg.seed;
  row.scenario_id = "campus-" + std::to_string(cfg.seed);
  try {
    Scenario s = gen_campus(cfg);
    row.hosts_migrated = static_cast<int>(s.migrate.size());
    row.middlebox_on_path = MiddleboxOnMigratedPath(s);
    row.naive_total =
        check_all(relocate_naive(s.topology, s.migrate, opts.site), s.policies).total;
    try {
      ExtensionPlan plan = plan_extension(s.topology, s.policies, s.migrate, opts.site,
                                          opts.cost);
      Topology ext = apply_plan(s.topology, plan);
      row.planner_total = check_all(ext, s.policies, plan.Context(ext)).total;
      row.cost = plan.cost;
      row.cost_total = plan.cost.Total(opts.cost);
    } catch (const InfeasibleError& e) {
      row.infeasible = true;
      for (const auto& b : e.blocking()) row.note += (row.note.empty() ? "" : " ") + b;
    }
  } catch (const std::exception& e) {
    row.infeasible = true;
    row.error = true;
    row.note = e.what();
  }
  return row;
}

std::string Fixed(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << v;
  return out.str();
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

EvalResult cmd_eval(const ScenarioConfig& cfg, const EvalOptions& opts) {
  cfg.Validate();
  opts.cost.Validate();
  EvalResult result;
  for (int i = 0; i < opts.trials; ++i) {
    ScenarioConfig c = cfg;
    c.seed = cfg.seed + static_cast<uint64_t>(i);
    result.rows.push_back(RunScenario(c, opts));
  }
  return result;
}

std::string render_eval_text(const EvalResult& r) {
  std::ostringstream out;
  out << std::left << std::setw(14) << "scenario" << std::right << std::setw(8)
      << "hosts" << std::setw(6) << "mb" << std::setw(8) << "naive" << std::setw(9)
      << "planner" << std::setw(9) << "cost" << "  status\n";
  for (const auto& row : r.rows) {
    out << std::left << std::setw(14) << row.scenario_id << std::right << std::setw(8)
        << row.hosts_migrated << std::setw(6) << (row.middlebox_on_path ? "yes" : "no")
        << std::setw(8) << row.naive_total << std::setw(9)
        << (row.infeasible ? std::string("-") : std::to_string(row.planner_total))
        << std::setw(9) << (row.infeasible ? std::string("-") : Fixed(row.cost_total))
        << "  " << (row.infeasible ? "infeasible " + row.note : std::string("ok")) << "\n";
  }
  out << "scenarios: " << r.rows.size() << "  mean naive violations: "
      << Fixed(r.MeanNaive()) << "  mean planner violations: " << Fixed(r.MeanPlanner())
      << "  infeasible: " << r.InfeasibleCount() << "\n";
  return out.str();
}

std::string render_eval_csv(const EvalResult& r) {
  std::ostringstream out;
  out << "scenario,seed,hosts_migrated,middlebox_on_path,naive_total,planner_total,"
         "mirrored_boxes,wan_crossings,proxies,cost,infeasible,note\n";
  for (const auto& row : r.rows) {
    out << row.scenario_id << "," << row.seed << "," << row.hosts_migrated << ","
        << (row.middlebox_on_path ? 1 : 0) << "," << row.naive_total << ","
        << row.planner_total << "," << row.cost.mirrored_boxes << ","
        << row.cost.wan_crossings << "," << row.cost.proxies << ","
        << Fixed(row.cost_total) << "," << (row.infeasible ? 1 : 0) << ","
        << CsvField(row.note) << "\n";
  }
  return out.str();
}

}  // namespace netext
