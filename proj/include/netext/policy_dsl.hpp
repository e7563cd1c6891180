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

#include <stdexcept>
#include <string>
#include <vector>

#include "netext/policy.hpp"
#include "netext/topology.hpp"

namespace netext {

// Textual policy language. One policy per statement:
//
//   policy P1: [u_e, L_1, *, 80, TCP] scope {LB1, F1, CE, S1, u_e}
//       waypoints [F1 -> LB1] occur {F1 == 1, LB1 == 1}
//
// Optional `from <node>` (origin qualifier) and `to <node>` (explicit
// destination) clauses follow the header. `#` starts a line comment. The full
// grammar is in docs/policy-grammar.ebnf.

struct ParseDiagnostic {
  int line = 0;
  int column = 0;
  std::string message;

  std::string ToString() const;
};

class PolicyParseError : public std::runtime_error {
 public:
  explicit PolicyParseError(std::vector<ParseDiagnostic> diagnostics);
  const std::vector<ParseDiagnostic>& diagnostics() const {
    return diagnostics_;
  }

 private:
  std::vector<ParseDiagnostic> diagnostics_;
};

// Node and address tokens are resolved against `t`. Throws PolicyParseError
// with every diagnostic found.
PolicySet parse_policy_set(const std::string& text, const Topology& t);

// Canonical text: scope tokens sorted, addresses rendered symbolically where
// `t` has a name for them. parse_policy_set(render_policy_set(ps, t), t) == ps.
std::string render_policy_set(const PolicySet& ps, const Topology& t);

}  // namespace netext
