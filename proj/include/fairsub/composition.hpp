#pragma once

// Queue-less compositions S|T: a step pairs an output of one side with the
// (possibly deep) matching input of the other, and is only allowed when every
// topmost output of each side is an enabled input of the partner.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "fairsub/configurations.hpp"
#include "fairsub/explore.hpp"
#include "fairsub/lts.hpp"

namespace fairsub {

struct Composition {
  SessionType left;
  SessionType right;
};

inline std::string to_string(const Composition& c) { return "<" + to_string(c.left) + " | " + to_string(c.right) + ">"; }

namespace detail {

inline bool subset(const std::vector<Tag>& a, const std::vector<Tag>& b) {
  return std::all_of(a.begin(), a.end(), [&](const Tag& t) { return std::find(b.begin(), b.end(), t) != b.end(); });
}

// Steps of <l | r> over interned types; empty when stuck.
inline std::vector<std::pair<Step, std::pair<TypeId, TypeId>>> composition_moves(TypeStore& store, TypeId l, TypeId r) {
  std::vector<std::pair<Step, std::pair<TypeId, TypeId>>> moves;
  auto out_l = store.out(l), out_r = store.out(r);
  if (!subset(out_l, store.inp(r)) || !subset(out_r, store.inp(l))) return moves;
  for (const auto& a : out_l)
    moves.push_back({Step{Side::Left, Action::Sync, a},
                     {*store.step(l, Label{Polarity::Output, a}), *store.step(r, Label{Polarity::Input, a})}});
  for (const auto& a : out_r)
    moves.push_back({Step{Side::Right, Action::Sync, a},
                     {*store.step(l, Label{Polarity::Input, a}), *store.step(r, Label{Polarity::Output, a})}});
  return moves;
}

}  // namespace detail

inline std::vector<std::pair<Step, Composition>> composition_steps(const Composition& c,
                                                                   std::size_t node_cap = kDefaultNodeCap) {
  TypeStore store(node_cap);
  std::vector<std::pair<Step, Composition>> r;
  for (const auto& [step, next] : detail::composition_moves(store, store.intern(c.left), store.intern(c.right)))
    r.push_back({step, Composition{store.type(next.first), store.type(next.second)}});
  return r;
}

/// Bounded check that every composition reachable from <S|T> can reach
/// <end|end>.
inline Verdict correct_bounded(const SessionType& s, const SessionType& t, const ExplorationBounds& b = {}) {
  TypeStore store(b.max_derived_nodes);
  using State = std::pair<TypeId, TypeId>;
  State init{store.intern(s), store.intern(t)};
  auto expand = [&](const State& c) {
    Expansion<State> ex;
    ex.next = detail::composition_moves(store, c.first, c.second);
    return ex;
  };
  auto terminal = [&](const State& c) { return store.is_end(c.first) && store.is_end(c.second); };
  auto render = [&](const State& c) { return to_string(Composition{store.type(c.first), store.type(c.second)}); };
  return explore(init, expand, terminal, render, b.max_states);
}

enum class CrossStatus { Agree, Disagree, Inconclusive };

inline const char* to_string(CrossStatus s) {
  switch (s) {
    case CrossStatus::Agree: return "AGREE";
    case CrossStatus::Disagree: return "DISAGREE";
    case CrossStatus::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

struct CrossCheckReport {
  CrossStatus status = CrossStatus::Inconclusive;
  Verdict compliant;
  Verdict correct;
};

inline CrossCheckReport cross_check_semantics(const SessionType& s, const SessionType& t, const ExplorationBounds& b = {}) {
  CrossCheckReport r;
  r.compliant = compliant_bounded(s, t, b);
  r.correct = correct_bounded(s, t, b);
  if (r.compliant.outcome == Outcome::Unknown || r.correct.outcome == Outcome::Unknown)
    r.status = CrossStatus::Inconclusive;
  else
    r.status = r.compliant.outcome == r.correct.outcome ? CrossStatus::Agree : CrossStatus::Disagree;
  return r;
}

}  // namespace fairsub
