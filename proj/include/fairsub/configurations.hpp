#pragma once

// Queue-based semantics: each side owns a FIFO of messages sent to it by the
// partner. Only the topmost structure of each type is used.

#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fairsub/explore.hpp"
#include "fairsub/lts.hpp"
#include "fairsub/syntax.hpp"

namespace fairsub {

struct Configuration {
  SessionType left;
  std::vector<Tag> left_queue;  // messages waiting to be received by left
  SessionType right;
  std::vector<Tag> right_queue;

  bool terminal() const { return left.is_end() && right.is_end() && left_queue.empty() && right_queue.empty(); }
};

inline std::string queue_string(const std::vector<Tag>& q) {
  if (q.empty()) return "ε";
  std::string s;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (i) s += '.';
    s += q[i].str();
  }
  return s;
}

inline std::string to_string(const Configuration& c) {
  return "[" + to_string(c.left) + ", " + queue_string(c.left_queue) + " | " + to_string(c.right) + ", " +
         queue_string(c.right_queue) + "]";
}

namespace detail {

// Successors of one side: sends append to the partner queue, receives pop the
// side's own queue.
template <class Type, class Succ>
void side_moves(Side side, const Type& self, const std::vector<Tag>& own, Succ&& succ_of,
                std::vector<std::tuple<Step, Type, std::vector<Tag>, std::vector<Tag>>>& out) {
  for (const auto& [label, next] : succ_of(self)) {
    if (label.polarity == Polarity::Output) {
      out.push_back({Step{side, Action::Send, label.tag}, next, own, {label.tag}});
    } else if (!own.empty() && own.front() == label.tag) {
      out.push_back({Step{side, Action::Receive, label.tag}, next, std::vector<Tag>(own.begin() + 1, own.end()), {}});
    }
  }
}

}  // namespace detail

/// Successors by the send and receive rules for both sides; left moves first,
/// then right, each ordered by label.
inline std::vector<std::pair<Step, Configuration>> config_transitions(const Configuration& c) {
  std::vector<std::pair<Step, Configuration>> r;
  auto succ = [](const SessionType& t) {
    std::vector<std::pair<Label, SessionType>> v;
    for (const auto& b : t.branches()) v.push_back({b.label(), t.at(b.target)});
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return v;
  };
  std::vector<std::tuple<Step, SessionType, std::vector<Tag>, std::vector<Tag>>> moves;
  detail::side_moves(Side::Left, c.left, c.left_queue, succ, moves);
  for (auto& [step, next, own, sent] : moves) {
    Configuration n{next, own, c.right, c.right_queue};
    for (const auto& t : sent) n.right_queue.push_back(t);
    r.push_back({step, std::move(n)});
  }
  moves.clear();
  detail::side_moves(Side::Right, c.right, c.right_queue, succ, moves);
  for (auto& [step, next, own, sent] : moves) {
    Configuration n{c.left, c.left_queue, next, own};
    for (const auto& t : sent) n.left_queue.push_back(t);
    r.push_back({step, std::move(n)});
  }
  return r;
}

namespace detail {

struct ConfigState {
  TypeId left;
  std::vector<Tag> left_queue;
  TypeId right;
  std::vector<Tag> right_queue;

  friend auto operator<=>(const ConfigState&, const ConfigState&) = default;
  friend bool operator==(const ConfigState&, const ConfigState&) = default;
};

}  // namespace detail

/// Bounded check that every configuration reachable from [S,ε | T,ε] can
/// still reach [end,ε | end,ε].
inline Verdict compliant_bounded(const SessionType& s, const SessionType& t, const ExplorationBounds& b = {}) {
  using detail::ConfigState;
  TypeStore store(b.max_derived_nodes);
  ConfigState init{store.intern(s), {}, store.intern(t), {}};
  auto expand = [&](const ConfigState& c) {
    Expansion<ConfigState> ex;
    auto succ = [&](TypeId id) { return store.sync(id); };
    std::vector<std::tuple<Step, TypeId, std::vector<Tag>, std::vector<Tag>>> moves;
    detail::side_moves(Side::Left, c.left, c.left_queue, succ, moves);
    detail::side_moves(Side::Right, c.right, c.right_queue, succ, moves);
    for (auto& [step, next, own, sent] : moves) {
      ConfigState n = c;
      if (step.side == Side::Left) {
        n.left = next;
        n.left_queue = own;
        for (const auto& x : sent) n.right_queue.push_back(x);
      } else {
        n.right = next;
        n.right_queue = own;
        for (const auto& x : sent) n.left_queue.push_back(x);
      }
      if (n.left_queue.size() > b.max_queue_length || n.right_queue.size() > b.max_queue_length) {
        ex.complete = false;
        ex.cut_reason = "queue bound (" + std::to_string(b.max_queue_length) + ") exceeded";
        continue;
      }
      ex.next.push_back({step, std::move(n)});
    }
    return ex;
  };
  auto terminal = [&](const ConfigState& c) {
    return store.is_end(c.left) && store.is_end(c.right) && c.left_queue.empty() && c.right_queue.empty();
  };
  auto render = [&](const ConfigState& c) {
    return to_string(Configuration{store.type(c.left), c.left_queue, store.type(c.right), c.right_queue});
  };
  return explore(init, expand, terminal, render, b.max_states);
}

}  // namespace fairsub
