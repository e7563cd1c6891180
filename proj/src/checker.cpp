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


#include "netext/checker.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <tuple>

namespace netext {
namespace {

NodeRef Original(const CheckContext& ctx, const NodeRef& n) {
  auto it = ctx.stand_ins.find(n);
  return it == ctx.stand_ins.end() ? n : it->second;
}

Category FromWaypointFailure(WaypointFailure::Kind k) {
  switch (k) {
    case WaypointFailure::Kind::kMissed:
      return Category::kMissedWaypoint;
    case WaypointFailure::Kind::kOrder:
      return Category::kOrderViolation;
    case WaypointFailure::Kind::kOccurrence:
      return Category::kOccurrenceViolation;
  }
  return Category::kMissedWaypoint;
}

void JudgeSegment(const Policy& g, const Traversal& tr,
                  int seg, bool last, const Probe& probe,
                  const std::shared_ptr<const Traversal>& witness,
                  const CheckContext& ctx, std::vector<Violation>& out) {
  auto emit = [&](Category c, std::vector<NodeRef> detail, std::string summary) {
    out.push_back({g.id, c, std::move(detail), std::move(summary), probe, witness});
  };
  std::vector<NodeRef> walk = tr.SegmentWalk(seg);
  for (auto& n : walk) n = Original(ctx, n);

  const bool delivered =
      last ? (tr.outcome.kind == Outcome::Kind::kDelivered &&
              Original(ctx, tr.outcome.at) == g.destination)
           : (!walk.empty() && walk.back() == g.destination);
  if (!delivered) {
    const NodeRef where = walk.empty() ? probe.inject_at : walk.back();
    emit(Category::kDeliveryFailure, {g.destination},
         "not delivered to " + g.destination + ": " +
             (last ? tr.outcome.ToString() : "handed off at " + where));
  }

  for (const auto& f : check_waypoints(g.waypoints, walk).failures) {
    emit(FromWaypointFailure(f.kind), f.nodes, f.detail);
  }

  std::set<NodeRef> allowed = g.scope;
  if (auto it = ctx.scope_additions.find(g.id); it != ctx.scope_additions.end()) {
    allowed.insert(it->second.begin(), it->second.end());
  }
  std::set<NodeRef> leak;
  for (const auto& n : tr.segments[seg].reach) {
    if (!allowed.contains(n) && !allowed.contains(Original(ctx, n))) {
      leak.insert(n);
    }
  }
  if (!leak.empty()) {
    std::string who;
    for (const auto& n : leak) who += (who.empty() ? "" : ", ") + n;
    emit(Category::kScopeLeak, {leak.begin(), leak.end()},
         "reached outside scope: {" + who + "}");
  }
}

std::string HeaderText(const Topology& t, const PacketHeader& h) {
  return t.AddressToken(h.src) + ":" + std::to_string(h.sport) + " -> " +
         t.AddressToken(h.dst) + ":" + std::to_string(h.dport) + "/" + h.proto;
}

}  // namespace

std::string ToString(Category c) {
  switch (c) {
    case Category::kMissedWaypoint:
      return "MissedWaypoint";
    case Category::kOrderViolation:
      return "OrderViolation";
    case Category::kOccurrenceViolation:
      return "OccurrenceViolation";
    case Category::kScopeLeak:
      return "ScopeLeak";
    case Category::kDefaultDenyBreach:
      return "DefaultDenyBreach";
    case Category::kDeliveryFailure:
      return "DeliveryFailure";
  }
  return "?";
}

const std::vector<Category>& AllCategories() {
  static const std::vector<Category> all = {
      Category::kMissedWaypoint,      Category::kOrderViolation,
      Category::kOccurrenceViolation, Category::kScopeLeak,
      Category::kDefaultDenyBreach,   Category::kDeliveryFailure,
  };
  return all;
}

std::map<Category, int> ViolationReport::CategoryCounts() const {
  std::map<Category, int> counts;
  for (Category c : AllCategories()) counts[c] = 0;
  for (const auto& v : violations) ++counts[v.category];
  return counts;
}

std::vector<Violation> check_policy(const Topology& t, const PolicySet& ps,
                                    const Policy& p, const CheckContext& ctx) {
  auto probe = policy_probe(p, t);
  if (!probe) {
    throw ConfigurationError("policy " + p.id + ": cannot instantiate a probe");
  }
  if (!t.Find(probe->inject_at)) {
    throw ConfigurationError("policy " + p.id + ": probe origin " +
                             probe->inject_at + " is not in the topology");
  }
  auto first = match_packet(ps, probe->header, probe->inject_at);
  if (first.is_ambiguous()) {
    std::string ids;
    for (const auto& id : first.ambiguous_ids) ids += (ids.empty() ? "" : ", ") + id;
    throw ConfigurationError("policy " + p.id + ": probe " +
                             probe->header.ToString() +
                             " matches equally specific policies " + ids);
  }

  auto witness = std::make_shared<const Traversal>(
      simulate(t, probe->inject_at, probe->header, ctx.hop_limit));
  const Traversal& tr = *witness;
  std::vector<Violation> out;
  const auto segs = tr.SigmaSegmentIds();
  for (size_t k = 0; k < segs.size(); ++k) {
    const int seg = segs[k];
    const bool last = k + 1 == segs.size();
    if (k == 0) {
      JudgeSegment(p, tr, seg, last, *probe, witness, ctx, out);
      continue;
    }
    const Segment& s = tr.segments[seg];
    auto m = match_packet(ps, s.header, s.start);
    if (m.is_ambiguous()) {
      std::string ids;
      for (const auto& id : m.ambiguous_ids) ids += (ids.empty() ? "" : ", ") + id;
      throw ConfigurationError("policy " + p.id + ": rewritten packet " +
                               s.header.ToString() + " at " + s.start +
                               " matches equally specific policies " + ids);
    }
    if (m.is_policy()) {
      JudgeSegment(*m.policy, tr, seg, last, *probe, witness, ctx, out);
    } else if (last && tr.outcome.kind == Outcome::Kind::kDelivered) {
      out.push_back({kDefaultDenyId,
                     Category::kDefaultDenyBreach,
                     {Original(ctx, s.start), Original(ctx, tr.outcome.at)},
                     "unmatched packet " + HeaderText(t, s.header) +
                         " from " + s.start + " delivered to " + tr.outcome.at,
                     *probe,
                     witness});
    }
  }
  return out;
}

ViolationReport check_all(const Topology& t, const PolicySet& ps,
                          const CheckContext& ctx) {
  ViolationReport report;
  std::vector<Violation> all;
  for (const auto& p : ps.policies) {
    try {
      auto v = check_policy(t, ps, p, ctx);
      all.insert(all.end(), std::make_move_iterator(v.begin()),
                 std::make_move_iterator(v.end()));
    } catch (const ConfigurationError& e) {
      report.config_errors.push_back(e.what());
    }
  }
  for (const auto& probe : probe_headers(ps, t, ctx.deny_ports)) {
    if (!probe.is_default_deny()) continue;
    auto witness = std::make_shared<const Traversal>(
        simulate(t, probe.inject_at, probe.header, ctx.hop_limit));
    if (witness->outcome.kind != Outcome::Kind::kDelivered) continue;
    all.push_back({kDefaultDenyId,
                   Category::kDefaultDenyBreach,
                   {probe.inject_at, Original(ctx, witness->outcome.at)},
                   "unmatched packet " + HeaderText(t, probe.header) +
                       " from " + probe.inject_at + " delivered to " +
                       witness->outcome.at,
                   probe,
                   witness});
  }

  auto key = [](const Violation& v) {
    return std::tie(v.policy_id, v.category, v.detail);
  };
  std::stable_sort(all.begin(), all.end(),
                   [&](const Violation& a, const Violation& b) {
                     return key(a) < key(b);
                   });
  for (auto& v : all) {
    if (!report.violations.empty() && key(report.violations.back()) == key(v)) {
      continue;
    }
    report.violations.push_back(std::move(v));
  }
  for (const auto& v : report.violations) ++report.per_policy_counts[v.policy_id];
  report.total = static_cast<int>(report.violations.size());
  return report;
}

ReportComparison compare_reports(const ViolationReport& a,
                                 const ViolationReport& b) {
  ReportComparison c;
  const auto ca = a.CategoryCounts();
  const auto cb = b.CategoryCounts();
  for (Category cat : AllCategories()) {
    c.rows.push_back({ToString(cat), ca.at(cat), cb.at(cat)});
  }
  c.rows.push_back({"total", a.total, b.total});
  return c;
}

std::string render_report_text(const ViolationReport& r) {
  std::ostringstream out;
  if (r.violations.empty()) {
    out << "no violations\n";
  } else {
    out << std::left << std::setw(14) << "policy" << std::setw(22)
        << "category" << "detail\n";
    for (const auto& v : r.violations) {
      out << std::left << std::setw(14) << v.policy_id << std::setw(22)
          << ToString(v.category) << v.summary << "\n";
    }
  }
  for (const auto& e : r.config_errors) out << "configuration error: " << e << "\n";
  out << "total: " << r.total << "\n";
  return out.str();
}

nlohmann::json render_report_json(const ViolationReport& r) {
  using nlohmann::json;
  json violations = json::array();
  for (const auto& v : r.violations) {
    json w;
    if (v.witness) {
      w["sigma"] = v.witness->sigma;
      w["reach"] = v.witness->reach_set;
      w["outcome"] = v.witness->outcome.ToString();
    }
    violations.push_back({{"policy", v.policy_id},
                          {"category", ToString(v.category)},
                          {"detail", v.detail},
                          {"summary", v.summary},
                          {"probe",
                           {{"inject_at", v.probe.inject_at},
                            {"header", v.probe.header.ToString()}}},
                          {"witness", w}});
  }
  json by_category = json::object();
  for (const auto& [c, n] : r.CategoryCounts()) by_category[ToString(c)] = n;
  return {{"violations", violations},
          {"totals",
           {{"total", r.total},
            {"by_category", by_category},
            {"by_policy", r.per_policy_counts}}},
          {"config_errors", r.config_errors}};
}

std::string render_comparison_text(const ReportComparison& c,
                                   const std::string& left_name,
                                   const std::string& right_name) {
  std::ostringstream out;
  out << std::left << std::setw(22) << "category" << std::right
      << std::setw(10) << left_name << std::setw(10) << right_name
      << std::setw(8) << "delta" << "\n";
  for (const auto& row : c.rows) {
    std::string delta = (row.delta() > 0 ? "+" : "") + std::to_string(row.delta());
    out << std::left << std::setw(22) << row.label << std::right
        << std::setw(10) << row.left << std::setw(10) << row.right
        << std::setw(8) << delta << "\n";
  }
  return out.str();
}

}  // namespace netext
