#pragma once

// Queue-less asynchronous semantics: topmost (synchronous) transitions plus
// input actions enabled underneath any number of pending outputs.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fairsub/graph.hpp"
#include "fairsub/syntax.hpp"

namespace fairsub {

inline constexpr std::size_t kDefaultNodeCap = 10000;

struct DerivedType {
  SessionType type;
  LabelWord provenance;
};

namespace detail {

// Greatest fixpoint of: E(n) iff n is an input choice offering a, or n is an
// output choice all of whose successors satisfy E.
inline std::vector<bool> enabled_set(const SessionType& s, const Tag& a) {
  const std::size_t n = s.graph_size();
  auto reach = s.reachable();
  std::vector<bool> in_e(n, false);
  std::vector<std::vector<StateId>> preds(n);
  std::deque<StateId> removed;
  auto offers = [&](StateId x) {
    for (const auto& b : s.body(x).branches)
      if (b.polarity == Polarity::Input && b.tag == a) return true;
    return false;
  };
  for (StateId x : reach) {
    const auto& body = s.body(x);
    bool output = !body.is_end() && !body.branches.empty() && body.branches.front().polarity == Polarity::Output;
    if (output) {
      in_e[x] = true;
      for (const auto& b : body.branches) preds[b.target].push_back(x);
    } else if (!body.is_end() && offers(x)) {
      in_e[x] = true;
    } else {
      removed.push_back(x);
    }
  }
  while (!removed.empty()) {
    StateId x = removed.front();
    removed.pop_front();
    for (StateId p : preds[x])
      if (in_e[p]) {
        in_e[p] = false;
        removed.push_back(p);
      }
  }
  return in_e;
}

inline std::set<Tag> candidate_input_tags(const SessionType& s) {
  std::set<Tag> tags;
  for (StateId x : s.reachable())
    for (const auto& b : s.body(x).branches)
      if (b.polarity == Polarity::Input) tags.insert(b.tag);
  return tags;
}

}  // namespace detail

inline bool input_enabled(const SessionType& s, const Tag& a) {
  if (!s.is_choice()) return false;
  return detail::enabled_set(s, a)[s.root()];
}

/// Residual of s after the (possibly deep) input ?a, canonicalized.
inline SessionType input_derivative(const SessionType& s, const Tag& a, std::size_t node_cap = kDefaultNodeCap) {
  if (s.is_input()) {
    if (auto next = s.successor(Label{Polarity::Input, a})) return next->canonical();
    throw NotEnabled("input ?" + a.str() + " is not enabled");
  }
  auto enabled = detail::enabled_set(s, a);
  if (!s.is_choice() || !enabled[s.root()]) throw NotEnabled("input ?" + a.str() + " is not enabled");

  std::vector<StateBody> states = s.graph()->states;
  const std::size_t base = states.size();
  std::unordered_map<StateId, StateId> fresh;
  std::vector<StateId> work;
  auto image = [&](StateId x) -> StateId {
    const auto& body = s.body(x);
    if (body.branches.front().polarity == Polarity::Input) {
      for (const auto& b : body.branches)
        if (b.tag == a) return b.target;
    }
    auto [it, added] = fresh.emplace(x, static_cast<StateId>(base + fresh.size()));
    if (added) {
      if (fresh.size() > node_cap) throw ResourceExceeded("input derivative exceeds node cap");
      states.push_back(StateBody{BodyKind::Choice, {}});
      work.push_back(x);
    }
    return it->second;
  };
  StateId root = image(s.root());
  while (!work.empty()) {
    StateId x = work.back();
    work.pop_back();
    StateId nx = fresh.at(x);
    std::vector<Branch> branches;
    for (const auto& b : s.body(x).branches) branches.push_back(Branch{b.polarity, b.tag, image(b.target)});
    states[nx].branches = std::move(branches);
  }
  SessionType result = SessionType(detail::make_graph(std::move(states)), root).canonical();
  if (result.graph_size() > node_cap) throw ResourceExceeded("derived type exceeds node cap");
  return result;
}

inline std::vector<Tag> out(const SessionType& s) {
  std::vector<Tag> tags;
  if (s.is_output())
    for (const auto& b : s.branches()) tags.push_back(b.tag);
  return tags;
}

inline std::vector<Tag> inp(const SessionType& s) {
  std::vector<Tag> tags;
  if (!s.is_choice()) return tags;
  for (const auto& a : detail::candidate_input_tags(s))
    if (input_enabled(s, a)) tags.push_back(a);
  return tags;
}

/// One pair per topmost branch.
inline std::vector<std::pair<Label, SessionType>> sync_transitions(const SessionType& s) {
  std::vector<std::pair<Label, SessionType>> r;
  for (const auto& b : s.branches()) r.push_back({b.label(), s.at(b.target).canonical()});
  std::sort(r.begin(), r.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return r;
}

/// Topmost outputs plus every deep input, ordered outputs first then by tag.
inline std::vector<std::pair<Label, SessionType>> transitions(const SessionType& s,
                                                               std::size_t node_cap = kDefaultNodeCap) {
  std::vector<std::pair<Label, SessionType>> r;
  if (s.is_output())
    for (const auto& b : s.branches()) r.push_back({b.label(), s.at(b.target).canonical()});
  for (const auto& a : inp(s)) r.push_back({Label{Polarity::Input, a}, input_derivative(s, a, node_cap)});
  return r;
}

inline std::optional<SessionType> step(const SessionType& s, const Label& l, std::size_t node_cap = kDefaultNodeCap) {
  if (l.polarity == Polarity::Output) {
    if (!s.is_output()) return std::nullopt;
    auto next = s.successor(l);
    if (!next) return std::nullopt;
    return next->canonical();
  }
  if (!input_enabled(s, l.tag)) return std::nullopt;
  return input_derivative(s, l.tag, node_cap);
}

inline DerivedType derivative_word(const SessionType& s, const LabelWord& w, std::size_t node_cap = kDefaultNodeCap) {
  SessionType cur = s.canonical();
  for (std::size_t i = 0; i < w.size(); ++i) {
    auto next = step(cur, w[i], node_cap);
    if (!next) throw NotEnabled("label " + to_string(w[i]) + " at position " + std::to_string(i) + " is not enabled", i);
    cur = *next;
  }
  return DerivedType{cur, w};
}

/// Output-only word leading to an input choice that offers ?a.
inline LabelWord output_path_witness(const SessionType& s, const Tag& a) {
  if (!input_enabled(s, a)) throw NotEnabled("input ?" + a.str() + " is not enabled");
  std::vector<std::optional<std::pair<StateId, Label>>> parent(s.graph_size());
  std::vector<bool> seen(s.graph_size(), false);
  std::deque<StateId> queue{s.root()};
  seen[s.root()] = true;
  while (!queue.empty()) {
    StateId x = queue.front();
    queue.pop_front();
    const auto& body = s.body(x);
    if (body.is_end() || body.branches.empty()) continue;
    if (body.branches.front().polarity == Polarity::Input) {
      bool offers = std::any_of(body.branches.begin(), body.branches.end(), [&](const Branch& b) { return b.tag == a; });
      if (!offers) continue;
      LabelWord w;
      for (StateId y = x; parent[y]; y = parent[y]->first) w.push_back(parent[y]->second);
      std::reverse(w.begin(), w.end());
      return w;
    }
    for (const auto& b : body.branches)
      if (!seen[b.target]) {
        seen[b.target] = true;
        parent[b.target] = std::make_pair(x, b.label());
        queue.push_back(b.target);
      }
  }
  throw NotEnabled("no output path reaches an input of ?" + a.str());
}

/// Shortest graph distance from the root to an end state; a lower bound on
/// the length of any trace.
inline std::size_t distance_to_end(const SessionType& s) {
  const std::size_t n = s.graph_size();
  std::vector<std::vector<StateId>> preds(n);
  std::vector<std::size_t> dist(n, std::numeric_limits<std::size_t>::max());
  std::deque<StateId> queue;
  for (StateId x = 0; x < n; ++x) {
    for (const auto& b : s.body(x).branches) preds[b.target].push_back(x);
    if (s.body(x).is_end()) {
      dist[x] = 0;
      queue.push_back(x);
    }
  }
  while (!queue.empty()) {
    StateId x = queue.front();
    queue.pop_front();
    for (StateId p : preds[x])
      if (dist[p] == std::numeric_limits<std::size_t>::max()) {
        dist[p] = dist[x] + 1;
        queue.push_back(p);
      }
  }
  return dist[s.root()];
}

using TypeId = std::uint32_t;

/// Interning table of canonical types with cached LTS queries. Every type is
/// identified by the key of its canonical form. Besides the per-type cap, the
/// store holds at most kStoreNodeFactor * node_cap nodes overall.
inline constexpr std::size_t kStoreNodeFactor = 64;

class TypeStore {
 public:
  explicit TypeStore(std::size_t node_cap = kDefaultNodeCap)
      : node_cap_(node_cap), total_cap_(node_cap * kStoreNodeFactor) {}

  TypeId intern(const SessionType& t) {
    SessionType c = t.canonical();
    const std::string& k = c.key();
    auto it = ids_.find(k);
    if (it != ids_.end()) return it->second;
    if (c.graph_size() > node_cap_) throw ResourceExceeded("type exceeds node cap");
    if (total_nodes_ + c.graph_size() > total_cap_) throw ResourceExceeded("derived types exceed store capacity");
    total_nodes_ += c.graph_size();
    auto id = static_cast<TypeId>(entries_.size());
    entries_.push_back(Entry{c});
    ids_.emplace(k, id);
    return id;
  }

  const SessionType& type(TypeId id) const { return entries_.at(id).type; }
  std::size_t size() const { return entries_.size(); }
  std::size_t node_cap() const { return node_cap_; }

  bool is_end(TypeId id) const { return type(id).is_end(); }
  bool is_output(TypeId id) const { return type(id).is_output(); }
  bool is_input(TypeId id) const { return type(id).is_input(); }

  const std::vector<std::pair<Label, TypeId>>& transitions(TypeId id) {
    auto& e = entries_.at(id);
    if (!e.transitions) {
      std::vector<std::pair<Label, TypeId>> r;
      SessionType t = e.type;
      for (auto& [l, next] : fairsub::transitions(t, node_cap_)) r.push_back({l, intern(next)});
      entries_.at(id).transitions = std::move(r);
    }
    return *entries_.at(id).transitions;
  }

  /// Topmost branches only.
  const std::vector<std::pair<Label, TypeId>>& sync(TypeId id) {
    if (!entries_.at(id).sync) {
      std::vector<std::pair<Label, TypeId>> r;
      SessionType t = entries_.at(id).type;
      for (const auto& b : t.branches()) r.push_back({b.label(), intern(t.at(b.target))});
      entries_.at(id).sync = std::move(r);
    }
    return *entries_.at(id).sync;
  }

  std::optional<TypeId> step(TypeId id, const Label& l) {
    for (const auto& [m, t] : transitions(id))
      if (m == l) return t;
    return std::nullopt;
  }

  std::vector<Tag> out(TypeId id) {
    std::vector<Tag> r;
    for (const auto& [l, t] : transitions(id))
      if (l.polarity == Polarity::Output) r.push_back(l.tag);
    return r;
  }

  std::vector<Tag> inp(TypeId id) {
    std::vector<Tag> r;
    for (const auto& [l, t] : transitions(id))
      if (l.polarity == Polarity::Input) r.push_back(l.tag);
    return r;
  }

  bool finite(TypeId id) {
    auto& e = entries_.at(id);
    if (e.finite < 0) e.finite = is_finite(e.type) ? 1 : 0;
    return e.finite == 1;
  }

  std::size_t dist(TypeId id) {
    auto& e = entries_.at(id);
    if (!e.dist) e.dist = distance_to_end(e.type);
    return *e.dist;
  }

 private:
  struct Entry {
    SessionType type;
    std::optional<std::vector<std::pair<Label, TypeId>>> transitions;
    std::optional<std::vector<std::pair<Label, TypeId>>> sync;
    int finite = -1;
    std::optional<std::size_t> dist;
  };

  std::size_t node_cap_;
  std::size_t total_cap_;
  std::size_t total_nodes_ = 0;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, TypeId> ids_;
};

/// All traces of length at most max_len, ordered by length then labels.
inline std::vector<LabelWord> traces_up_to(const SessionType& s, std::size_t max_len,
                                           std::size_t node_cap = kDefaultNodeCap) {
  TypeStore store(node_cap);
  std::vector<LabelWord> result;
  LabelWord word;
  auto dfs = [&](auto&& self, TypeId t) -> void {
    if (store.is_end(t)) {
      result.push_back(word);
      return;
    }
    if (store.dist(t) > max_len - word.size()) return;
    for (const auto& [l, next] : store.transitions(t)) {
      word.push_back(l);
      self(self, next);
      word.pop_back();
    }
  };
  dfs(dfs, store.intern(s));
  std::sort(result.begin(), result.end(), [](const LabelWord& x, const LabelWord& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return x < y;
  });
  return result;
}

}  // namespace fairsub
