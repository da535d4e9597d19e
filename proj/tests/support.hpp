#pragma once

// Independent reference implementations used as oracles by the tests. They
// favour obviousness over speed and share no code with the library beyond
// the graph accessors.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fairsub/fairsub.hpp"

namespace oracle {

using namespace fairsub;

inline SessionType T(const std::string& text) { return parse_type(text); }

// Bisimilarity by coinductive pair search: assume related, fail on any
// structural mismatch.
inline bool bisimilar(const SessionType& a, const SessionType& b) {
  std::set<std::pair<StateId, StateId>> assumed;
  std::vector<std::pair<StateId, StateId>> todo{{a.root(), b.root()}};
  while (!todo.empty()) {
    auto [x, y] = todo.back();
    todo.pop_back();
    if (!assumed.insert({x, y}).second) continue;
    const auto& bx = a.body(x);
    const auto& by = b.body(y);
    if (bx.is_end() != by.is_end()) return false;
    if (bx.branches.size() != by.branches.size()) return false;
    for (const auto& br : bx.branches) {
      const Branch* match = nullptr;
      for (const auto& other : by.branches)
        if (other.tag == br.tag && other.polarity == br.polarity) match = &other;
      if (!match) return false;
      todo.push_back({br.target, match->target});
    }
  }
  return true;
}

// Number of bisimulation classes among reachable states, by naive Moore
// refinement on signatures.
inline std::size_t minimal_size(const SessionType& g) {
  auto reach = g.reachable();
  std::map<StateId, int> cls;
  for (auto s : reach) cls[s] = g.body(s).is_end() ? 0 : 1;
  for (;;) {
    std::map<std::vector<std::string>, int> ids;
    std::map<StateId, int> next;
    for (auto s : reach) {
      std::vector<std::string> sig{std::to_string(cls[s])};
      std::vector<std::string> edges;
      for (const auto& b : g.body(s).branches)
        edges.push_back(to_string(b.label()) + ">" + std::to_string(cls[b.target]));
      std::sort(edges.begin(), edges.end());
      sig.insert(sig.end(), edges.begin(), edges.end());
      next[s] = ids.emplace(sig, static_cast<int>(ids.size())).first->second;
    }
    std::set<int> before, after;
    for (auto& [s, c] : cls) before.insert(c);
    for (auto& [s, c] : next) after.insert(c);
    cls = next;
    if (before.size() == after.size()) return after.size();
  }
}

// ?a is blocked when some output-only path from the root reaches end or an
// input choice lacking a.
inline bool deep_enabled(const SessionType& s, const Tag& a) {
  if (s.is_end()) return false;
  std::set<StateId> seen;
  std::vector<StateId> todo{s.root()};
  while (!todo.empty()) {
    StateId x = todo.back();
    todo.pop_back();
    if (!seen.insert(x).second) continue;
    const auto& b = s.body(x);
    if (b.is_end()) return false;
    if (b.branches.front().polarity == Polarity::Input) {
      bool has = false;
      for (const auto& br : b.branches) has = has || br.tag == a;
      if (!has) return false;
      continue;
    }
    for (const auto& br : b.branches) todo.push_back(br.target);
  }
  return true;
}

// Residual after the deep input ?a: copy the output prefix, replacing each
// input choice by its a-continuation.
inline SessionType deep_derive(const SessionType& s, const Tag& a) {
  GraphBuilder gb;
  std::map<StateId, StateId> copy, prefix;
  auto graft = [&](auto& self, StateId x) -> StateId {
    if (auto it = copy.find(x); it != copy.end()) return it->second;
    const auto& b = s.body(x);
    StateId n = b.is_end() ? gb.add_end() : gb.add_choice();
    copy[x] = n;
    for (const auto& br : b.branches) gb.add_branch(n, br.polarity, br.tag, self(self, br.target));
    return n;
  };
  auto walk = [&](auto& self, StateId x) -> StateId {
    const auto& b = s.body(x);
    if (b.branches.front().polarity == Polarity::Input) {
      for (const auto& br : b.branches)
        if (br.tag == a) return graft(graft, br.target);
    }
    if (auto it = prefix.find(x); it != prefix.end()) return it->second;
    StateId n = gb.add_choice();
    prefix[x] = n;
    for (const auto& br : b.branches) gb.add_branch(n, br.polarity, br.tag, self(self, br.target));
    return n;
  };
  StateId root = walk(walk, s.root());
  return gb.build(root);
}

// Transitions: topmost outputs plus deep inputs, from the definitions above.
inline std::vector<std::pair<Label, SessionType>> steps(const SessionType& s) {
  std::vector<std::pair<Label, SessionType>> r;
  if (s.is_end()) return r;
  std::set<Tag> tags;
  for (auto x : s.reachable())
    for (const auto& br : s.body(x).branches)
      if (br.polarity == Polarity::Input) tags.insert(br.tag);
  if (s.is_output())
    for (const auto& br : s.branches()) r.push_back({br.label(), s.at(br.target)});
  for (const auto& a : tags)
    if (deep_enabled(s, a)) r.push_back({Label{Polarity::Input, a}, deep_derive(s, a)});
  return r;
}

// Plain recursive enumeration of terminated traces up to `len`, without
// pruning or memoization.
inline void traces_rec(const SessionType& s, std::size_t len, LabelWord& w, std::set<std::string>& out) {
  if (s.is_end()) out.insert(to_string(w));
  if (w.size() == len) return;
  for (const auto& [l, next] : steps(s)) {
    w.push_back(l);
    traces_rec(next, len, w, out);
    w.pop_back();
  }
}

inline std::set<std::string> traces(const SessionType& s, std::size_t len) {
  std::set<std::string> out;
  LabelWord w;
  traces_rec(s, len, w, out);
  return out;
}

// Some reachable cycle uses edges of a single polarity only.
inline bool single_polarity_cycle(const SessionType& g) {
  for (Polarity p : {Polarity::Output, Polarity::Input}) {
    std::vector<int> color(g.graph_size(), 0);
    bool found = false;
    auto dfs = [&](auto& self, StateId s) -> void {
      color[s] = 1;
      for (const auto& b : g.body(s).branches) {
        if (b.polarity != p) continue;
        if (color[b.target] == 1) found = true;
        else if (color[b.target] == 0) self(self, b.target);
      }
      color[s] = 2;
    };
    for (auto s : g.reachable())
      if (!color[s]) dfs(dfs, s);
    if (found) return true;
  }
  return false;
}

inline const std::vector<SessionType>& corpus() {
  static const std::vector<SessionType> c = [] {
    RandomTypeSpec spec;
    spec.max_states = 8;
    spec.seed = 42;
    return generate_corpus(spec, 1000);
  }();
  return c;
}

}  // namespace oracle
