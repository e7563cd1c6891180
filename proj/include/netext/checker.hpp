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
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "netext/policy.hpp"
#include "netext/topology.hpp"
#include "netext/traversal.hpp"

namespace netext {

enum class Category {
  kMissedWaypoint,
  kOrderViolation,
  kOccurrenceViolation,
  kScopeLeak,
  kDefaultDenyBreach,
  kDeliveryFailure,
};

std::string ToString(Category c);
const std::vector<Category>& AllCategories();

// Policy id used for violations of the implicit default-deny policy.
inline const std::string kDefaultDenyId = "default-deny";

struct Violation {
  std::string policy_id;
  Category category = Category::kDeliveryFailure;
  std::vector<NodeRef> detail;  // offending nodes
  std::string summary;          // the failed constraint, human readable
  Probe probe;
  std::shared_ptr<const Traversal> witness;
};

struct ViolationReport {
  std::vector<Violation> violations;
  std::map<std::string, int> per_policy_counts;
  int total = 0;
  // Problems with the inputs (ambiguous matches, uninstantiable probes).
  std::vector<std::string> config_errors;

  std::map<Category, int> CategoryCounts() const;
};

// Raised when a probe cannot be judged because the policy set is ambiguous
// for its header or the probe cannot be built.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// How the checker reads an extended network. `stand_ins` maps a node created
// by an extension to the original it replaces (a mirrored middlebox to its
// source); visits to a stand-in count as visits to the original and the
// stand-in is in scope wherever the original is. `scope_additions` widens a
// policy's scope by the listed nodes.
struct CheckContext {
  std::map<NodeRef, NodeRef> stand_ins;
  std::map<std::string, std::set<NodeRef>> scope_additions;
  int hop_limit = kDefaultHopLimit;
  std::vector<uint16_t> deny_ports = {80};
};

// Simulates p's representative probe and judges every segment of its walk:
// the first under p, later ones (after rewrites) under whichever policy
// matches the rewritten header at the rewriting node.
std::vector<Violation> check_policy(const Topology& t, const PolicySet& ps,
                                    const Policy& p,
                                    const CheckContext& ctx = {});

// All policies plus the default-deny sweep. Violations are deduplicated per
// (policy, category, detail) and ordered by policy id, then category.
ViolationReport check_all(const Topology& t, const PolicySet& ps,
                          const CheckContext& ctx = {});

struct ReportComparison {
  struct Row {
    std::string label;
    int left = 0;
    int right = 0;
    int delta() const { return right - left; }
  };
  std::vector<Row> rows;  // one per category, then "total"
};

ReportComparison compare_reports(const ViolationReport& a,
                                 const ViolationReport& b);

std::string render_report_text(const ViolationReport& r);
nlohmann::json render_report_json(const ViolationReport& r);
std::string render_comparison_text(const ReportComparison& c,
                                   const std::string& left_name,
                                   const std::string& right_name);

}  // namespace netext
