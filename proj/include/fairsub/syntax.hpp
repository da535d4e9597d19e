#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "fairsub/graph.hpp"

namespace fairsub {

struct WfViolation {
  std::string condition;  // "1", "2", "3", "mixed-choice" or "unguarded"
  StateId state = 0;
  std::string message;
};

struct WfReport {
  bool ok = true;
  std::vector<WfViolation> violations;

  void add(std::string condition, StateId state, std::string message) {
    violations.push_back(WfViolation{std::move(condition), state, std::move(message)});
    ok = false;
  }
};

inline WfReport check_well_formed(const SessionType& g) {
  WfReport report;
  auto reach = g.reachable();
  for (StateId s : reach) {
    const auto& body = g.body(s);
    if (body.is_end()) continue;
    if (body.branches.empty()) {
      report.add("1", s, "choice with no branches");
      continue;
    }
    std::set<Tag> seen;
    for (const auto& b : body.branches)
      if (!seen.insert(b.tag).second) report.add("1", s, "duplicate tag '" + b.tag.str() + "'");
    for (const auto& b : body.branches)
      if (b.polarity != body.branches.front().polarity) {
        report.add("mixed-choice", s, "choice mixes inputs and outputs");
        break;
      }
  }
  // Condition 3: backward search from end states over the reachable part.
  std::vector<std::vector<StateId>> preds(g.graph_size());
  std::vector<StateId> stack;
  std::vector<bool> good(g.graph_size(), false);
  for (StateId s : reach) {
    for (const auto& b : g.body(s).branches) preds[b.target].push_back(s);
    if (g.body(s).is_end()) {
      good[s] = true;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (StateId p : preds[s])
      if (!good[p]) {
        good[p] = true;
        stack.push_back(p);
      }
  }
  for (StateId s : reach)
    if (!good[s]) report.add("3", s, "no end state is reachable");
  return report;
}

/// Flips every polarity; structure is shared state for state.
inline SessionType dual(const SessionType& g) {
  std::vector<StateBody> states;
  states.reserve(g.graph_size());
  for (StateId s = 0; s < g.graph_size(); ++s) {
    StateBody b = g.body(s);
    for (auto& br : b.branches) br.polarity = dual(br.polarity);
    std::stable_sort(b.branches.begin(), b.branches.end(), [](const Branch& x, const Branch& y) {
      return std::tie(x.tag, x.polarity) < std::tie(y.tag, y.polarity);
    });
    states.push_back(std::move(b));
  }
  return SessionType(detail::make_graph(std::move(states), g.graph()->minimal), g.root());
}

inline SessionType canonical(const SessionType& g) { return g.canonical(); }

inline bool equivalent(const SessionType& a, const SessionType& b) { return a.key() == b.key(); }

/// True when no cycle is reachable from the root (the type is a finite tree).
inline bool is_finite(const SessionType& g) {
  std::vector<unsigned char> color(g.graph_size(), 0);
  std::vector<std::pair<StateId, std::size_t>> stack{{g.root(), 0}};
  color[g.root()] = 1;
  while (!stack.empty()) {
    auto& [s, i] = stack.back();
    const auto& br = g.body(s).branches;
    if (i == br.size()) {
      color[s] = 2;
      stack.pop_back();
      continue;
    }
    StateId t = br[i++].target;
    if (color[t] == 1) return false;
    if (color[t] == 0) {
      color[t] = 1;
      stack.push_back({t, 0});
    }
  }
  return true;
}

namespace detail {

inline std::string print_expr(const SessionType& g, const std::vector<std::string>& names, StateId s, bool top) {
  const auto& body = g.body(s);
  if (body.is_end()) return "end";
  if (!top && !names[s].empty()) return names[s];
  std::string out;
  for (std::size_t i = 0; i < body.branches.size(); ++i) {
    const auto& b = body.branches[i];
    if (i) out += " + ";
    out += symbol(b.polarity);
    out += b.tag.str();
    out += '.';
    out += print_expr(g, names, b.target, false);
  }
  if (!top && body.branches.size() > 1) out = "(" + out + ")";
  return out;
}

}  // namespace detail

/// Prints the reachable part of g as an equation system whose first equation
/// defines the root. States entered from a single edge are written inline.
inline std::string print_system(const SessionType& g, const std::string& root_name = "S") {
  if (g.is_end()) return root_name + " = end;\n";
  auto reach = g.reachable();
  std::vector<int> indegree(g.graph_size(), 0);
  for (StateId s : reach)
    for (const auto& b : g.body(s).branches) ++indegree[b.target];
  std::vector<std::string> names(g.graph_size());
  std::vector<StateId> named{g.root()};
  names[g.root()] = root_name;
  int counter = 0;
  for (StateId s : reach) {
    if (s == g.root() || g.body(s).is_end() || indegree[s] < 2) continue;
    names[s] = root_name + std::to_string(++counter);
    named.push_back(s);
  }
  std::string text;
  for (StateId s : named) text += names[s] + " = " + detail::print_expr(g, names, s, true) + ";\n";
  return text;
}

/// Single-line rendering for reports. Finite types print as one expression.
inline std::string to_string(const SessionType& g) {
  if (is_finite(g)) return detail::print_expr(g, std::vector<std::string>(g.graph_size()), g.root(), true);
  std::string s = print_system(g, "X");
  s.pop_back();
  for (auto& c : s)
    if (c == '\n') c = ' ';
  return s;
}

}  // namespace fairsub
