#pragma once

// Text syntax for session types: systems of equations
//
//   system   := equation+
//   equation := IDENT "=" type ";"
//   type     := prefix ("+" prefix)*
//   prefix   := ("!" | "?") TAG "." prefix | "end" | IDENT | "(" type ")"
//
// and relation files for the auditor, which mix equations with lines
//
//   relation := pexpr "<=" pexpr [";"]
//   pexpr    := [ "(" label ("." label)* ")" "^" (n | NUMBER) "." ] type

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fairsub/graph.hpp"
#include "fairsub/syntax.hpp"

namespace fairsub {

namespace detail {

enum class Tok { Ident, TagName, End, Number, Eq, Semi, Plus, Dot, LParen, RParen, Bang, Query, Le, Caret, Eof };

struct Token {
  Tok kind;
  std::string text;
  int line, column;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;
      }
      ++i;
    }
  };
  auto word_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    int l = line, cl = col;
    if (std::isupper(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && word_char(src[j])) ++j;
      while (j < src.size() && src[j] == '\'') ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
    } else if (std::islower(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && word_char(src[j])) ++j;
      std::string w(src.substr(i, j - i));
      out.push_back({w == "end" ? Tok::End : Tok::TagName, w, l, cl});
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Number, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
    } else if (c == '<' && i + 1 < src.size() && src[i + 1] == '=') {
      out.push_back({Tok::Le, "<=", l, cl});
      advance(2);
    } else {
      Tok k;
      switch (c) {
        case '=': k = Tok::Eq; break;
        case ';': k = Tok::Semi; break;
        case '+': k = Tok::Plus; break;
        case '.': k = Tok::Dot; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '!': k = Tok::Bang; break;
        case '?': k = Tok::Query; break;
        case '^': k = Tok::Caret; break;
        default: throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
      }
      out.push_back({k, std::string(1, c), l, cl});
      advance(1);
    }
  }
  out.push_back({Tok::Eof, "", line, col});
  return out;
}

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Member {
  Polarity polarity;
  std::string tag;
  ExprPtr cont;
  int line, column;
};

struct Expr {
  enum Kind { End, Ref, Sum } kind = End;
  std::string name;
  std::vector<Member> members;
  int line = 0, column = 0;
};

struct Equation {
  std::string name;
  ExprPtr body;
  int line, column;
};

// Parametric side of a relation: word^count . body, where count is either a
// literal or the distinguished parameter n.
struct PExpr {
  LabelWord repeat;
  bool parametric = false;
  int count = 0;
  ExprPtr body;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  bool at_end() const { return peek().kind == Tok::Eof; }
  bool at_equation() const { return peek().kind == Tok::Ident && peek(1).kind == Tok::Eq; }

  Equation equation() {
    const Token& id = expect(Tok::Ident, "equation name");
    expect(Tok::Eq, "'='");
    ExprPtr body = type();
    expect(Tok::Semi, "';'");
    return Equation{id.text, body, id.line, id.column};
  }

  ExprPtr type() {
    const Token& first = peek();
    std::vector<ExprPtr> parts{prefix()};
    while (peek().kind == Tok::Plus) {
      next();
      parts.push_back(prefix());
    }
    if (parts.size() == 1) return parts[0];
    auto sum = std::make_shared<Expr>();
    sum->kind = Expr::Sum;
    sum->line = first.line;
    sum->column = first.column;
    for (const auto& p : parts) {
      if (p->kind != Expr::Sum) {
        throw ParseError("every member of a choice must be a prefixed branch", p->line, p->column);
      }
      for (const auto& m : p->members) sum->members.push_back(m);
    }
    return sum;
  }

  ExprPtr prefix() {
    const Token& t = peek();
    if (t.kind == Tok::Bang || t.kind == Tok::Query) {
      next();
      const Token& tag = expect(Tok::TagName, "message tag");
      expect(Tok::Dot, "'.'");
      ExprPtr cont = prefix();
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Sum;
      e->line = t.line;
      e->column = t.column;
      e->members.push_back(
          Member{t.kind == Tok::Bang ? Polarity::Output : Polarity::Input, tag.text, cont, t.line, t.column});
      return e;
    }
    if (t.kind == Tok::End) {
      next();
      auto e = std::make_shared<Expr>();
      e->line = t.line;
      e->column = t.column;
      return e;
    }
    if (t.kind == Tok::Ident) {
      next();
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Ref;
      e->name = t.text;
      e->line = t.line;
      e->column = t.column;
      return e;
    }
    if (t.kind == Tok::LParen) {
      next();
      ExprPtr inner = type();
      expect(Tok::RParen, "')'");
      return inner;
    }
    throw ParseError("expected a session type, found " + describe(t), t.line, t.column);
  }

  PExpr pexpr() {
    PExpr p;
    std::size_t save = pos_;
    if (peek().kind == Tok::LParen) {
      if (auto word = try_repeat_word()) {
        p.repeat = *word;
        const Token& c = peek();
        if (c.kind == Tok::TagName && c.text == "n") {
          p.parametric = true;
        } else if (c.kind == Tok::Number) {
          p.count = std::stoi(c.text);
        } else {
          throw ParseError("expected 'n' or a number after '^'", c.line, c.column);
        }
        next();
        expect(Tok::Dot, "'.'");
      } else {
        pos_ = save;
      }
    }
    p.body = type();
    return p;
  }

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  const Token& expect(Tok k, const char* what) {
    const Token& t = peek();
    if (t.kind != k) throw ParseError(std::string("expected ") + what + ", found " + describe(t), t.line, t.column);
    return next();
  }

 private:
  // "(" label ("." label)* ")" "^" ; returns nullopt if the input does not
  // have this shape (the caller then reparses it as a parenthesized type).
  std::optional<LabelWord> try_repeat_word() {
    next();
    LabelWord w;
    while (true) {
      const Token& p = peek();
      if (p.kind != Tok::Bang && p.kind != Tok::Query) return std::nullopt;
      next();
      if (peek().kind != Tok::TagName) return std::nullopt;
      w.push_back(Label{p.kind == Tok::Bang ? Polarity::Output : Polarity::Input, Tag(next().text)});
      if (peek().kind == Tok::Dot) {
        next();
        continue;
      }
      break;
    }
    if (peek().kind != Tok::RParen || peek(1).kind != Tok::Caret) return std::nullopt;
    next();
    next();
    return w;
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::Eof) return "end of input";
    return "'" + t.text + "'";
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Turns equation ASTs into graph states inside one GraphBuilder.
class SystemBuilder {
 public:
  SystemBuilder(const std::vector<Equation>& eqs, bool strict) : strict_(strict) {
    for (const auto& e : eqs) {
      if (!eqs_.emplace(e.name, &e).second)
        throw ParseError("duplicate definition of '" + e.name + "'", e.line, e.column);
    }
    end_ = gb_.add_end();
  }

  StateId state_for(const std::string& name, int line, int column) {
    if (auto it = states_.find(name); it != states_.end()) return it->second;
    auto eq = eqs_.find(name);
    if (eq == eqs_.end()) throw ParseError("undefined identifier '" + name + "'", line, column);
    const Expr& body = *eq->second->body;
    if (body.kind == Expr::Ref) {
      if (!resolving_.insert(name).second) {
        if (strict_) throw ParseError("unguarded equation cycle through '" + name + "'", eq->second->line, eq->second->column);
        StateId s = gb_.add_choice();
        states_[name] = s;
        issues_.push_back(WfViolation{"unguarded", s, "unguarded equation cycle through '" + name + "'"});
        return s;
      }
      StateId s = state_for(body.name, body.line, body.column);
      resolving_.erase(name);
      states_[name] = s;
      return s;
    }
    if (body.kind == Expr::End) return states_[name] = end_;
    StateId s = gb_.add_choice();
    states_[name] = s;
    fill(s, body);
    return s;
  }

  StateId build(const Expr& e) {
    switch (e.kind) {
      case Expr::End: return end_;
      case Expr::Ref: return state_for(e.name, e.line, e.column);
      case Expr::Sum: {
        StateId s = gb_.add_choice();
        fill(s, e);
        return s;
      }
    }
    return end_;
  }

  StateId chain(const LabelWord& w, int count, StateId tail) {
    StateId cur = tail;
    for (int k = 0; k < count; ++k)
      for (auto it = w.rbegin(); it != w.rend(); ++it) {
        StateId s = gb_.add_choice();
        gb_.add_branch(s, it->polarity, it->tag, cur);
        cur = s;
      }
    return cur;
  }

  bool has(const std::string& name) const { return eqs_.count(name) > 0; }

  GraphBuilder& graph() { return gb_; }
  std::vector<WfViolation>& issues() { return issues_; }

 private:
  void fill(StateId s, const Expr& e) {
    std::set<std::string> tags;
    for (const auto& m : e.members) {
      if (strict_) {
        if (!tags.insert(m.tag).second) throw ParseError("duplicate tag '" + m.tag + "' in choice", m.line, m.column);
        if (m.polarity != e.members.front().polarity)
          throw ParseError("mixed choice: inputs and outputs in the same choice", m.line, m.column);
      }
      gb_.add_branch(s, m.polarity, Tag(m.tag), build(*m.cont));
    }
  }

  bool strict_;
  GraphBuilder gb_;
  std::map<std::string, const Equation*> eqs_;
  std::map<std::string, StateId> states_;
  std::set<std::string> resolving_;
  std::vector<WfViolation> issues_;
  StateId end_;
};

}  // namespace detail

struct ParseOptions {
  std::optional<std::string> root;  // defaults to the first equation
  bool strict = true;               // reject mixed choices and duplicate tags
};

struct ParsedSystem {
  SessionType root;
  std::map<std::string, SessionType> equations;
  std::vector<WfViolation> issues;  // only populated in non-strict mode
};

inline ParsedSystem parse_system_full(std::string_view text, const ParseOptions& opt = {}) {
  detail::Parser p(text);
  std::vector<detail::Equation> eqs;
  while (!p.at_end()) eqs.push_back(p.equation());
  if (eqs.empty()) throw ParseError("expected at least one equation", 1, 1);
  detail::SystemBuilder b(eqs, opt.strict);
  std::string root = opt.root.value_or(eqs.front().name);
  if (!b.has(root)) throw Error("no equation defines root '" + root + "'");
  std::map<std::string, StateId> ids;
  for (const auto& e : eqs) ids[e.name] = b.state_for(e.name, e.line, e.column);
  StateId r = ids.at(root);
  auto issues = std::move(b.issues());
  SessionType g = b.graph().build(r);
  ParsedSystem out{g, {}, std::move(issues)};
  for (const auto& [name, id] : ids) out.equations.emplace(name, g.at(id));
  return out;
}

/// Parses an equation system and returns its root type.
inline SessionType parse_system(std::string_view text, const ParseOptions& opt = {}) {
  return parse_system_full(text, opt).root;
}

/// Accepts either a full system or a single closed type expression such as
/// "!a.?b.end".
inline SessionType parse_type(std::string_view text) {
  detail::Parser probe(text);
  if (probe.at_equation()) return parse_system(text);
  return parse_system("Main__ = " + std::string(text) + ";");
}

// A side of an audited relation, possibly parametric in n.
struct RelationSide {
  detail::PExpr expr;
};

struct RelationTemplate {
  RelationSide lhs, rhs;
  int line = 0;
  bool parametric() const { return lhs.expr.parametric || rhs.expr.parametric; }
};

struct RelationFile {
  std::vector<detail::Equation> equations;
  std::vector<RelationTemplate> relations;
};

inline RelationFile parse_relation_file(std::string_view text) {
  detail::Parser p(text);
  RelationFile f;
  while (!p.at_end()) {
    if (p.at_equation()) {
      f.equations.push_back(p.equation());
      continue;
    }
    RelationTemplate r;
    r.line = p.peek().line;
    r.lhs.expr = p.pexpr();
    p.expect(detail::Tok::Le, "'<='");
    r.rhs.expr = p.pexpr();
    if (p.peek().kind == detail::Tok::Semi) p.next();
    for (const auto* side : {&r.lhs.expr, &r.rhs.expr})
      for (const auto& l : side->repeat)
        if (l.polarity != Polarity::Output)
          throw ParseError("repeated prefix must consist of outputs only", r.line, 1);
    f.relations.push_back(std::move(r));
  }
  if (f.relations.empty()) throw ParseError("relation file lists no pairs", p.peek().line, p.peek().column);
  return f;
}

/// Instantiates every relation with the parameter n ranging over `ns`.
/// Non-parametric relations are produced once.
inline std::vector<std::pair<SessionType, SessionType>> instantiate(const RelationFile& f, const std::vector<int>& ns) {
  detail::SystemBuilder b(f.equations, true);
  std::vector<std::pair<StateId, StateId>> roots;
  auto side = [&](const detail::PExpr& e, int n) {
    StateId body = b.build(*e.body);
    return b.chain(e.repeat, e.parametric ? n : e.count, body);
  };
  for (const auto& r : f.relations) {
    if (r.parametric()) {
      for (int n : ns) roots.push_back({side(r.lhs.expr, n), side(r.rhs.expr, n)});
    } else {
      roots.push_back({side(r.lhs.expr, 0), side(r.rhs.expr, 0)});
    }
  }
  SessionType g = b.graph().build(0);
  std::vector<std::pair<SessionType, SessionType>> out;
  for (auto [l, r] : roots) out.push_back({g.at(l), g.at(r)});
  return out;
}

}  // namespace fairsub
