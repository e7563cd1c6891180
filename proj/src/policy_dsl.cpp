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


#include "netext/policy_dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace netext {
namespace {

struct Token {
  enum class Kind { kWord, kPunct, kEnd };
  Kind kind = Kind::kEnd;
  std::string text;
  int line = 1;
  int column = 1;
};

bool IsWordChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '\'' || c == '/';
}

std::vector<Token> Lex(const std::string& text,
                       std::vector<ParseDiagnostic>& diags) {
  std::vector<Token> tokens;
  int line = 1;
  int col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token tok{Token::Kind::kPunct, "", line, col};
    if (IsWordChar(c)) {
      size_t j = i;
      while (j < text.size() && IsWordChar(text[j])) ++j;
      tok.kind = Token::Kind::kWord;
      tok.text = text.substr(i, j - i);
      advance(j - i);
      tokens.push_back(tok);
      continue;
    }
    static const char* kTwo[] = {"->", "==", ">=", "<="};
    bool matched = false;
    for (const char* op : kTwo) {
      if (text.compare(i, 2, op) == 0) {
        tok.text = op;
        advance(2);
        matched = true;
        break;
      }
    }
    if (!matched) {
      if (std::string_view("[]{}:,*=<>").find(c) == std::string_view::npos) {
        diags.push_back({line, col, std::string("unexpected character '") + c + "'"});
        advance(1);
        continue;
      }
      tok.text = std::string(1, c);
      advance(1);
    }
    tokens.push_back(tok);
  }
  tokens.push_back({Token::Kind::kEnd, "", line, col});
  return tokens;
}

struct SyntaxError {
  ParseDiagnostic diag;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, const Topology& t,
         std::vector<ParseDiagnostic>& diags)
      : tokens_(std::move(tokens)), topo_(t), diags_(diags) {}

  PolicySet Run() {
    PolicySet ps;
    while (Peek().kind != Token::Kind::kEnd) {
      const size_t errors_before = diags_.size();
      try {
        Policy p = ParsePolicy();
        if (diags_.size() == errors_before) ps.policies.push_back(std::move(p));
      } catch (const SyntaxError& e) {
        diags_.push_back(e.diag);
        Recover();
      }
    }
    return ps;
  }

 private:
  const Token& Peek() const { return tokens_[pos_]; }
  const Token& Next() {
    const Token& t = tokens_[pos_];
    if (t.kind != Token::Kind::kEnd) ++pos_;
    return t;
  }
  [[noreturn]] void Fail(const Token& at, const std::string& msg) {
    throw SyntaxError{{at.line, at.column,
                       msg + (at.kind == Token::Kind::kEnd
                                  ? " (at end of input)"
                                  : " (at '" + at.text + "')")}};
  }
  void Semantic(const Token& at, std::string msg) {
    diags_.push_back({at.line, at.column, std::move(msg)});
  }
  bool IsPunct(const std::string& p) const {
    return Peek().kind == Token::Kind::kPunct && Peek().text == p;
  }
  bool IsWord(const std::string& w) const {
    return Peek().kind == Token::Kind::kWord && Peek().text == w;
  }
  const Token& Expect(const std::string& p) {
    if (!IsPunct(p)) Fail(Peek(), "expected '" + p + "'");
    return Next();
  }
  void ExpectKeyword(const std::string& w) {
    if (!IsWord(w)) Fail(Peek(), "expected '" + w + "'");
    Next();
  }
  const Token& ExpectWord(const std::string& what) {
    if (Peek().kind != Token::Kind::kWord) Fail(Peek(), "expected " + what);
    return Next();
  }
  void Recover() {
    while (Peek().kind != Token::Kind::kEnd && !IsWord("policy")) Next();
    // Skip a 'policy' keyword that itself caused the failure.
    if (IsWord("policy") && pos_ > 0 && tokens_[pos_ - 1].text == "policy") {
      Next();
    }
  }

  NodeRef NodeToken(const Token& tok) {
    if (!topo_.Find(tok.text)) Semantic(tok, "unknown node token '" + tok.text + "'");
    return tok.text;
  }

  std::optional<Prefix> AddressField() {
    if (IsPunct("*")) {
      Next();
      return std::nullopt;
    }
    const Token& tok = ExpectWord("address, node or '*'");
    if (tok.text.find('/') != std::string::npos) {
      auto p = Prefix::Parse(tok.text);
      if (!p) Semantic(tok, "bad prefix '" + tok.text + "'");
      return p;
    }
    auto a = topo_.ResolveAddress(tok.text);
    if (!a) {
      Semantic(tok, "unknown node token '" + tok.text + "'");
      return std::nullopt;
    }
    return Prefix::Host(*a);
  }

  int Number(const Token& tok, int max) {
    int value = -1;
    auto [p, ec] = std::from_chars(tok.text.data(),
                                   tok.text.data() + tok.text.size(), value);
    if (ec != std::errc{} || p != tok.text.data() + tok.text.size() ||
        value < 0 || value > max) {
      Fail(tok, "expected a number in [0, " + std::to_string(max) + "]");
    }
    return value;
  }

  std::optional<uint16_t> PortField() {
    if (IsPunct("*")) {
      Next();
      return std::nullopt;
    }
    const Token& tok = ExpectWord("port or '*'");
    return static_cast<uint16_t>(Number(tok, 65535));
  }

  Policy ParsePolicy() {
    const Token& start = Peek();
    ExpectKeyword("policy");
    Policy p;
    p.id = ExpectWord("policy id").text;
    Expect(":");
    Expect("[");
    p.packet_class.pattern.src = AddressField();
    Expect(",");
    p.packet_class.pattern.dst = AddressField();
    Expect(",");
    p.packet_class.pattern.sport = PortField();
    Expect(",");
    p.packet_class.pattern.dport = PortField();
    Expect(",");
    if (IsPunct("*")) {
      Next();
    } else {
      std::string proto = ExpectWord("protocol or '*'").text;
      std::transform(proto.begin(), proto.end(), proto.begin(),
                     [](unsigned char c) { return std::toupper(c); });
      p.packet_class.pattern.proto = proto;
    }
    Expect("]");
    if (IsWord("from")) {
      Next();
      p.packet_class.origin = NodeToken(ExpectWord("origin node"));
    }
    std::optional<NodeRef> explicit_dest;
    if (IsWord("to")) {
      Next();
      explicit_dest = NodeToken(ExpectWord("destination node"));
    }

    ExpectKeyword("scope");
    Expect("{");
    if (!IsPunct("}")) {
      do {
        p.scope.insert(NodeToken(ExpectWord("scope node")));
      } while (IsPunct(",") && (Next(), true));
    }
    Expect("}");

    ExpectKeyword("waypoints");
    Expect("[");
    auto add_member = [&](const NodeRef& n) {
      auto& w = p.waypoints.waypoints;
      if (std::find(w.begin(), w.end(), n) == w.end()) w.push_back(n);
    };
    if (!IsPunct("]")) {
      do {
        NodeRef prev = NodeToken(ExpectWord("waypoint node"));
        add_member(prev);
        while (IsPunct("->")) {
          Next();
          NodeRef cur = NodeToken(ExpectWord("waypoint node"));
          add_member(cur);
          p.waypoints.precedence.insert({prev, cur});
          prev = cur;
        }
      } while (IsPunct(",") && (Next(), true));
    }
    Expect("]");

    ExpectKeyword("occur");
    Expect("{");
    if (!IsPunct("}")) {
      do {
        const Token& node_tok = ExpectWord("waypoint node");
        OccurrenceConstraint c;
        c.node = NodeToken(node_tok);
        const Token& op = Next();
        const Token& num = ExpectWord("count");
        int n = Number(num, 1 << 20);
        if (op.kind != Token::Kind::kPunct) Fail(op, "expected relation");
        if (op.text == "==" || op.text == "=") {
          c.relation = Relation::kEq;
        } else if (op.text == ">=") {
          c.relation = Relation::kGe;
        } else if (op.text == ">") {
          c.relation = Relation::kGe;
          ++n;
        } else if (op.text == "<=") {
          c.relation = Relation::kLe;
        } else if (op.text == "<") {
          if (n == 0) Semantic(op, "unsatisfiable constraint " + c.node + " < 0");
          c.relation = Relation::kLe;
          n = std::max(0, n - 1);
        } else {
          Fail(op, "expected relation");
        }
        c.count = n;
        if (c.relation == Relation::kGe && c.count == 0) {
          Semantic(node_tok, "vacuous constraint " + c.node + " >= 0");
        }
        p.waypoints.occurrence.push_back(c);
      } while (IsPunct(",") && (Next(), true));
    }
    Expect("}");

    if (explicit_dest) {
      p.destination = *explicit_dest;
    } else if (auto d = DefaultDestination(p.packet_class, topo_)) {
      p.destination = *d;
    }
    // Remaining invariants need the whole policy; report at its start.
    PolicySet single{{p}};
    for (const auto& msg : validate_policy_set(single, topo_)) {
      if (msg.find("unknown node") != std::string::npos) continue;  // reported
      if (msg.find("vacuous") != std::string::npos) continue;       // reported
      Semantic(start, msg);
    }
    if (seen_.contains(p.id)) {
      Semantic(start, "duplicate policy id " + p.id);
    }
    seen_.insert(p.id);
    return p;
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
  const Topology& topo_;
  std::vector<ParseDiagnostic>& diags_;
  std::set<std::string> seen_;
};

std::string RenderAddress(const std::optional<Prefix>& p, const Topology& t) {
  if (!p) return "*";
  if (p->is_host()) return t.AddressToken(p->address());
  return p->ToString();
}

std::string RenderPort(const std::optional<uint16_t>& port) {
  return port ? std::to_string(*port) : "*";
}

std::string RenderWaypoints(const WaypointSpec& spec) {
  const auto& w = spec.waypoints;
  std::string out;
  auto join = [&](const std::vector<std::string>& items, const char* sep) {
    std::string s;
    for (const auto& item : items) s += (s.empty() ? "" : sep) + item;
    return s;
  };
  // A single chain over all waypoints in listed order renders as "a -> b".
  std::set<std::pair<NodeRef, NodeRef>> chain;
  for (size_t i = 1; i < w.size(); ++i) chain.insert({w[i - 1], w[i]});
  if (!spec.precedence.empty() && spec.precedence == chain) {
    return join(w, " -> ");
  }
  std::vector<std::string> items(w.begin(), w.end());
  for (const auto& [a, b] : spec.precedence) items.push_back(a + " -> " + b);
  return join(items, ", ");
}

}  // namespace

std::string ParseDiagnostic::ToString() const {
  return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
}

PolicyParseError::PolicyParseError(std::vector<ParseDiagnostic> diagnostics)
    : std::runtime_error([&] {
        std::string msg = "policy parse failed";
        for (const auto& d : diagnostics) msg += "\n  " + d.ToString();
        return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

PolicySet parse_policy_set(const std::string& text, const Topology& t) {
  std::vector<ParseDiagnostic> diags;
  auto tokens = Lex(text, diags);
  Parser parser(std::move(tokens), t, diags);
  PolicySet ps = parser.Run();
  if (!diags.empty()) {
    std::stable_sort(diags.begin(), diags.end(),
                     [](const ParseDiagnostic& a, const ParseDiagnostic& b) {
                       return std::tie(a.line, a.column) <
                              std::tie(b.line, b.column);
                     });
    throw PolicyParseError(std::move(diags));
  }
  return ps;
}

std::string render_policy_set(const PolicySet& ps, const Topology& t) {
  std::ostringstream out;
  out << "# default: deny (packets matching no policy are filtered)\n";
  for (const auto& p : ps.policies) {
    const auto& pat = p.packet_class.pattern;
    out << "policy " << p.id << ": [" << RenderAddress(pat.src, t) << ", "
        << RenderAddress(pat.dst, t) << ", " << RenderPort(pat.sport) << ", "
        << RenderPort(pat.dport) << ", " << (pat.proto ? *pat.proto : "*")
        << "]";
    if (p.packet_class.origin) out << " from " << *p.packet_class.origin;
    if (DefaultDestination(p.packet_class, t) != p.destination) {
      out << " to " << p.destination;
    }
    out << "\n    scope {";
    bool first = true;
    for (const auto& n : p.scope) {
      out << (first ? "" : ", ") << n;
      first = false;
    }
    out << "}\n    waypoints [" << RenderWaypoints(p.waypoints) << "]";
    out << " occur {";
    first = true;
    for (const auto& c : p.waypoints.occurrence) {
      out << (first ? "" : ", ") << c.ToString();
      first = false;
    }
    out << "}\n";
  }
  return out.str();
}

}  // namespace netext
