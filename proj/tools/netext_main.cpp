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


// netext: check policies on a network, plan a policy-preserving extension
// into a remote data center, and compare against naive relocation.
//
// Exit codes: 0 ok, 1 violations, 2 input error, 3 infeasible.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "netext/campus.hpp"
#include "netext/checker.hpp"
#include "netext/extend.hpp"
#include "netext/fixture.hpp"
#include "netext/policy_dsl.hpp"

namespace {

using namespace netext;

constexpr int kOk = 0;
constexpr int kViolations = 1;
constexpr int kInputError = 2;
constexpr int kInfeasible = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw InputError(path + ": cannot write");
}

Topology LoadTopology(const std::string& path) {
  try {
    return build_topology_text(ReadFile(path));
  } catch (const TopologyError& e) {
    std::string msg = path + ": invalid topology";
    for (const auto& i : e.issues()) {
      if (i.is_error()) msg += "\n  " + i.message;
    }
    throw InputError(msg);
  }
}

PolicySet LoadPolicies(const std::string& path, const Topology& t) {
  try {
    return parse_policy_set(ReadFile(path), t);
  } catch (const PolicyParseError& e) {
    std::string msg;
    for (const auto& d : e.diagnostics()) {
      msg += (msg.empty() ? "" : "\n") + path + ":" + d.ToString();
    }
    throw InputError(msg);
  }
}

std::vector<uint16_t> ParsePorts(const std::vector<int>& ports) {
  std::vector<uint16_t> out;
  for (int p : ports) {
    if (p < 0 || p > 65535) throw InputError("probe port out of range: " + std::to_string(p));
    out.push_back(static_cast<uint16_t>(p));
  }
  return out;
}

struct CommonOpts {
  std::string topology;
  std::string policies;
  bool json = false;
  int hop_limit = kDefaultHopLimit;
  std::vector<int> probe_ports = {80};
};

void AddCommon(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--topology", o.topology, "Topology JSON file")->required();
  cmd->add_option("--policies", o.policies, "Policy file")->required();
  cmd->add_flag("--json", o.json, "Print JSON instead of text");
  cmd->add_option("--hop-limit", o.hop_limit, "Per-copy hop limit")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--probe-ports", o.probe_ports,
                  "Destination ports for default-deny probes");
}

int RunCheck(const CommonOpts& o, const std::string& plan_path) {
  Topology t = LoadTopology(o.topology);
  PolicySet ps = LoadPolicies(o.policies, t);
  CheckContext ctx;
  if (!plan_path.empty()) {
    ExtensionPlan plan;
    try {
      plan = plan_from_json(nlohmann::json::parse(ReadFile(plan_path)));
      t = apply_plan(t, plan);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(plan_path + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw InputError(plan_path + ": " + e.what());
    }
    ctx = plan.Context(t);
  }
  ctx.hop_limit = o.hop_limit;
  ctx.deny_ports = ParsePorts(o.probe_ports);
  ViolationReport r = check_all(t, ps, ctx);
  if (o.json) {
    std::cout << render_report_json(r).dump(2) << "\n";
  } else {
    std::cout << render_report_text(r);
  }
  return r.total == 0 && r.config_errors.empty() ? kOk : kViolations;
}

struct ExtendOpts {
  CommonOpts common;
  std::vector<std::string> hosts;
  std::string site = "dc";
  bool restricted = false;
  std::string plan_out;
  bool compare_naive = false;
  CostModel cost;
};

int RunExtend(const ExtendOpts& o) {
  Topology t = LoadTopology(o.common.topology);
  PolicySet ps = LoadPolicies(o.common.policies, t);
  if (!t.FindSite(o.site)) throw InputError("unknown site " + o.site);
  if (o.restricted) t.MutableSite(o.site).flexibility = Flexibility::kRestricted;
  const std::set<NodeRef> hosts(o.hosts.begin(), o.hosts.end());
  PlannerOptions popts;
  popts.hop_limit = o.common.hop_limit;

  ExtensionPlan plan;
  try {
    plan = plan_extension(t, ps, hosts, o.site, o.cost, popts);
  } catch (const InfeasibleError& e) {
    std::cerr << e.what() << "\n";
    return kInfeasible;
  } catch (const NonConformantError& e) {
    std::cerr << e.what() << "\n";
    return kViolations;
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }

  const Topology extended = apply_plan(t, plan);
  const auto verdict = verify_homomorphism(t, extended, ps, plan);
  CheckContext ctx = plan.Context(extended);
  ctx.hop_limit = o.common.hop_limit;
  ctx.deny_ports = ParsePorts(o.common.probe_ports);
  const ViolationReport post = check_all(extended, ps, ctx);

  // The naive baseline has no plan, so no stand-ins or scope additions.
  CheckContext naive_ctx;
  naive_ctx.hop_limit = o.common.hop_limit;
  naive_ctx.deny_ports = ctx.deny_ports;

  const std::string plan_text = plan_to_json(plan).dump(2) + "\n";
  if (!o.plan_out.empty()) WriteFile(o.plan_out, plan_text);

  if (o.common.json) {
    nlohmann::json out = {{"plan", plan_to_json(plan)},
                          {"homomorphism", verdict.holds ? "holds" : "fails"},
                          {"post_check", render_report_json(post)}};
    if (o.compare_naive) {
      out["naive"] =
          render_report_json(check_all(relocate_naive(t, hosts, o.site), ps, naive_ctx));
    }
    std::cout << out.dump(2) << "\n";
  } else {
    if (o.plan_out.empty()) std::cout << plan_text;
    std::cout << "cost: mirrored_boxes=" << plan.cost.mirrored_boxes
              << " wan_crossings=" << plan.cost.wan_crossings
              << " proxies=" << plan.cost.proxies << " total=" << plan.cost.Total(o.cost)
              << "\n";
    std::cout << "homomorphism: " << (verdict.holds ? "holds" : "fails") << "\n";
    for (const auto& p : verdict.problems) std::cout << "  " << p << "\n";
    for (const auto& f : verdict.failures) {
      std::cout << "  " << f.policy_id << " " << ToString(f.category) << ": " << f.summary
                << "\n";
    }
    std::cout << "post-check:\n" << render_report_text(post);
    if (o.compare_naive) {
      const auto naive = check_all(relocate_naive(t, hosts, o.site), ps, naive_ctx);
      std::cout << "\n" << render_comparison_text(compare_reports(naive, post), "naive", "planned");
    }
  }
  return verdict.holds ? kOk : kViolations;
}

struct EvalOpts {
  ScenarioConfig cfg;
  int trials = 10;
  bool restricted = false;
  std::string csv;
  CostModel cost;
};

int RunEval(const EvalOpts& o) {
  try {
    o.cfg.Validate();
    o.cost.Validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  EvalOptions eo;
  eo.trials = o.trials;
  eo.site = o.restricted ? kRestrictedDcSite : kDcSite;
  eo.cost = o.cost;
  EvalResult r = cmd_eval(o.cfg, eo);
  std::cout << render_eval_text(r);
  if (!o.csv.empty()) WriteFile(o.csv, render_eval_csv(r));
  return kOk;
}

int RunFixture(const std::string& out_dir) {
  if (out_dir.empty()) {
    std::cout << fixture_topology_document() << "\n" << fixture_policy_document();
    return kOk;
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw InputError(out_dir + ": " + ec.message());
  WriteFile(out_dir + "/fixture.topology.json", fixture_topology_document());
  WriteFile(out_dir + "/fixture.policies", fixture_policy_document());
  std::cout << out_dir << "/fixture.topology.json\n" << out_dir << "/fixture.policies\n";
  return kOk;
}

void AddCostFlags(CLI::App* cmd, CostModel& cm) {
  cmd->add_option("--weight-mirror", cm.weight_mirror, "Cost per mirrored middlebox");
  cmd->add_option("--weight-wan", cm.weight_wan_crossing, "Cost per tunnel crossing");
  cmd->add_option("--weight-proxy", cm.weight_proxy, "Cost per proxy");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Policy checking and policy-preserving network extension"};
  app.require_subcommand(1);

  CommonOpts check_opts;
  std::string check_plan;
  auto* check = app.add_subcommand("check", "Check a network against its policies");
  AddCommon(check, check_opts);
  check->add_option("--plan", check_plan, "Apply an extension plan before checking");

  ExtendOpts ext;
  auto* extend = app.add_subcommand("extend", "Plan moving hosts to a remote data center");
  AddCommon(extend, ext.common);
  extend->add_option("--hosts", ext.hosts, "Hosts to move")->delimiter(',')->required();
  extend->add_option("--site", ext.site, "Remote data center site id");
  extend->add_flag("--restricted", ext.restricted, "Treat the site as restricted (no mirrors)");
  extend->add_option("--plan-out", ext.plan_out, "Write the plan JSON here");
  extend->add_flag("--compare-naive", ext.compare_naive,
                   "Also check naive relocation and print the comparison");
  AddCostFlags(extend, ext.cost);

  EvalOpts ev;
  auto* eval = app.add_subcommand("eval", "Naive relocation versus planner on generated campuses");
  eval->add_option("--seed", ev.cfg.seed, "First seed");
  eval->add_option("--trials", ev.trials, "Number of scenarios")->check(CLI::NonNegativeNumber);
  eval->add_option("--subnets", ev.cfg.subnets, "Subnets per campus");
  eval->add_option("--hosts-per-subnet", ev.cfg.hosts_per_subnet, "Hosts per subnet");
  eval->add_option("--density", ev.cfg.middlebox_density, "Middlebox placement probability");
  eval->add_option("--policies-per-subnet", ev.cfg.policies_per_subnet, "Policies per subnet");
  eval->add_option("--migrate", ev.cfg.migrate_fraction, "Fraction of hosts to move");
  eval->add_flag("--restricted", ev.restricted, "Move into the restricted data center");
  eval->add_option("--csv", ev.csv, "Write per-scenario rows as CSV");
  AddCostFlags(eval, ev.cost);

  std::string fixture_dir;
  auto* fixture = app.add_subcommand("fixture", "Dump the built-in example network");
  fixture->add_option("--out-dir", fixture_dir, "Write files instead of printing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (check->parsed()) return RunCheck(check_opts, check_plan);
    if (extend->parsed()) return RunExtend(ext);
    if (eval->parsed()) return RunEval(ev);
    if (fixture->parsed()) return RunFixture(fixture_dir);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
