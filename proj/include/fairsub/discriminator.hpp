#pragma once

// Counterexample partners: D(S,T) accepts everything T sends, sends only what
// T accepts, and steers towards the places where S falls short of T.

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fairsub/composition.hpp"
#include "fairsub/errors.hpp"
#include "fairsub/graph.hpp"
#include "fairsub/lts.hpp"
#include "fairsub/refinement.hpp"
#include "fairsub/syntax.hpp"

namespace fairsub {

using ConvergenceOracle = std::function<Outcome(const SessionType&, const SessionType&)>;

inline ConvergenceOracle bounded_oracle(const ConvergeBounds& b = {}) {
  return [b](const SessionType& s, const SessionType& t) { return converge_bounded(s, t, b).outcome; };
}

struct DiscriminatorStep {
  std::string left;
  std::string right;
  std::string rule;               // input, output, end, undefined, truncated
  std::vector<std::string> sent;  // tags offered as outputs (input case)
  std::vector<std::string> recursed;
  std::vector<std::string> grafted;  // tags whose continuation is dual(T_j)
  std::vector<std::string> notes;
};

struct DiscriminatorResult {
  SessionType partner;
  std::vector<DiscriminatorStep> log;
  bool truncated = false;
};

/// Builds D(S,T) by unfolding its defining equations, one node per distinct
/// pair of canonical types. `depth` bounds the length of any unfolding path.
inline DiscriminatorResult build_discriminator(const SessionType& s, const SessionType& t, std::size_t depth,
                                               const ConvergenceOracle& oracle = bounded_oracle(),
                                               std::size_t node_cap = kDefaultNodeCap) {
  TypeStore store(node_cap);
  std::map<std::pair<TypeId, TypeId>, Outcome> oracle_memo;
  auto ask = [&](TypeId x, TypeId y) {
    auto [it, fresh] = oracle_memo.emplace(std::make_pair(x, y), Outcome::Unknown);
    if (fresh) it->second = oracle(store.type(x), store.type(y));
    return it->second;
  };

  TypeId s0 = store.intern(s), t0 = store.intern(t);
  if (store.is_end(s0) && store.is_end(t0)) throw CaseUndefined("discriminator undefined when both types are end");
  if (ask(s0, t0) == Outcome::Yes) throw PreconditionFailed("oracle reports convergence at the root pair");

  DiscriminatorResult r;
  GraphBuilder gb;
  std::map<std::pair<TypeId, TypeId>, StateId> node_of;

  auto build = [&](auto& self, TypeId x, TypeId y, std::size_t level) -> StateId {
    auto key = std::make_pair(x, y);
    if (auto it = node_of.find(key); it != node_of.end()) return it->second;
    DiscriminatorStep step;
    step.left = to_string(store.type(x));
    step.right = to_string(store.type(y));
    if (level > depth) {
      step.rule = "truncated";
      r.truncated = true;
      r.log.push_back(std::move(step));
      StateId st = gb.add_end();
      node_of.emplace(key, st);
      return st;
    }
    if (store.is_end(y)) {
      step.rule = store.is_end(x) ? "undefined" : "end";
      if (store.is_end(x)) step.notes.push_back("both types are end");
      r.log.push_back(std::move(step));
      StateId st = gb.add_end();
      node_of.emplace(key, st);
      return st;
    }
    StateId st = gb.add_choice();
    node_of.emplace(key, st);
    const SessionType ty = store.type(y);
    std::vector<std::pair<Tag, std::pair<TypeId, TypeId>>> recurse;
    if (ty.is_input()) {
      step.rule = "input";
      std::vector<std::pair<Tag, std::pair<TypeId, TypeId>>> all;
      for (const auto& b : ty.branches()) {
        TypeId ti = store.intern(ty.at(b.target));
        auto si = store.step(x, Label{Polarity::Input, b.tag});
        if (!si) {
          step.notes.push_back("?" + b.tag.str() + " not enabled in the left type");
          continue;
        }
        all.push_back({b.tag, {*si, ti}});
        Outcome o = ask(*si, ti);
        if (o == Outcome::Yes) continue;
        if (o == Outcome::Unknown) step.notes.push_back("oracle unknown on ?" + b.tag.str() + ", branch kept");
        recurse.push_back({b.tag, {*si, ti}});
      }
      if (recurse.empty()) {
        step.notes.push_back("no branch refuted, keeping every enabled branch");
        recurse = all;
      }
      for (const auto& [tag, next] : recurse) step.sent.push_back(tag.str());
      step.recursed = step.sent;
      r.log.push_back(std::move(step));
      std::size_t at = r.log.size() - 1;
      for (const auto& [tag, next] : recurse) {
        StateId child = self(self, next.first, next.second, level + 1);
        gb.add_branch(st, Polarity::Output, tag, child);
      }
      if (recurse.empty()) r.log[at].notes.push_back("empty choice");
      return st;
    }
    step.rule = "output";
    std::vector<std::pair<Tag, StateId>> grafted;
    for (const auto& b : ty.branches()) {
      TypeId ti = store.intern(ty.at(b.target));
      auto si = store.is_output(x) ? store.step(x, Label{Polarity::Output, b.tag}) : std::nullopt;
      if (si) {
        recurse.push_back({b.tag, {*si, ti}});
        step.recursed.push_back(b.tag.str());
      } else {
        grafted.push_back({b.tag, gb.graft(dual(ty.at(b.target)))});
        step.grafted.push_back(b.tag.str());
      }
    }
    r.log.push_back(std::move(step));
    for (const auto& [tag, next] : recurse)
      gb.add_branch(st, Polarity::Input, tag, self(self, next.first, next.second, level + 1));
    for (const auto& [tag, target] : grafted) gb.add_branch(st, Polarity::Input, tag, target);
    return st;
  };
  StateId root = build(build, s0, t0, 0);
  r.partner = gb.build(root).canonical();
  return r;
}

struct DiscriminatorValidation {
  Verdict with_right;  // correct_bounded(R, T), expected Yes
  Verdict with_left;   // correct_bounded(R, S), expected No
  bool separates = false;
};

inline DiscriminatorValidation validate_discriminator(const SessionType& r, const SessionType& s, const SessionType& t,
                                                      const ExplorationBounds& b = {}) {
  DiscriminatorValidation v;
  v.with_right = correct_bounded(r, t, b);
  v.with_left = correct_bounded(r, s, b);
  v.separates = v.with_right.outcome != Outcome::No && v.with_left.outcome == Outcome::No;
  return v;
}

}  // namespace fairsub
