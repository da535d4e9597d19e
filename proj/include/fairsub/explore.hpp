#pragma once

// Bounded exploration of a finitely branching transition system towards a
// distinguished terminal state. A state is bad when it cannot reach the
// terminal; a definite answer is only given when the relevant part of the
// state space was explored in full.

#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairsub/errors.hpp"
#include "fairsub/label.hpp"

namespace fairsub {

enum class Outcome { Yes, No, Unknown };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Yes: return "Yes";
    case Outcome::No: return "No";
    case Outcome::Unknown: return "Unknown";
  }
  return "?";
}

enum class Side { Left, Right };

inline const char* to_string(Side s) { return s == Side::Left ? "left" : "right"; }

enum class Action { Send, Receive, Sync };

/// One move of a configuration or composition. For compositions the side is
/// the one performing the output.
struct Step {
  Side side = Side::Left;
  Action action = Action::Sync;
  Tag tag;

  friend bool operator==(const Step&, const Step&) = default;
};

inline std::string to_string(const Step& s) {
  std::string who = to_string(s.side);
  switch (s.action) {
    case Action::Send: return who + " !" + s.tag.str();
    case Action::Receive: return who + " ?" + s.tag.str();
    case Action::Sync: return who + " !" + s.tag.str() + " -> " + (s.side == Side::Left ? "right" : "left") + " ?" + s.tag.str();
  }
  return "";
}

struct ExplorationBounds {
  std::size_t max_queue_length = 6;
  std::size_t max_states = 10000;
  std::size_t max_derived_nodes = 10000;
};

struct Verdict {
  Outcome outcome = Outcome::Unknown;
  std::vector<Step> path;          // No: from the initial state to a state that cannot terminate
  std::string state;               // No: rendering of that state
  std::vector<std::string> trail;  // No: rendering of every state along the path
  std::string reason;              // Unknown: exhausted bound
  std::size_t states_explored = 0;
};

template <class State>
struct Expansion {
  std::vector<std::pair<Step, State>> next;
  bool complete = true;  // false when some successor was cut by a bound
  std::string cut_reason;
};

/// Generic bounded analysis. `expand` returns the successors of a state,
/// `terminal` recognises the goal state and `render` prints states for
/// evidence. The exploration order is the order in which `expand` lists
/// successors, so results are deterministic.
template <class State, class Expand, class Terminal, class Render>
Verdict explore(const State& init, Expand expand, Terminal terminal, Render render, std::size_t max_states) {
  struct Node {
    State state;
    std::vector<std::size_t> succ;
    bool expanded = false;
    bool complete = true;
    std::optional<std::pair<std::size_t, Step>> parent;
  };
  std::vector<Node> nodes;
  std::map<State, std::size_t> index;
  std::string cut_reason;
  nodes.push_back(Node{init, {}, false, true, std::nullopt});
  index.emplace(init, 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Expansion<State> ex;
    try {
      ex = expand(nodes[i].state);
    } catch (const ResourceExceeded& e) {
      nodes[i].complete = false;
      if (cut_reason.empty()) cut_reason = std::string("derived-node cap: ") + e.what();
      continue;
    }
    nodes[i].expanded = true;
    if (!ex.complete) {
      nodes[i].complete = false;
      if (cut_reason.empty()) cut_reason = ex.cut_reason;
    }
    for (auto& [step, next] : ex.next) {
      auto it = index.find(next);
      if (it == index.end()) {
        if (nodes.size() >= max_states) {
          nodes[i].complete = false;
          if (cut_reason.empty()) cut_reason = "state cap (" + std::to_string(max_states) + ") reached";
          continue;
        }
        it = index.emplace(next, nodes.size()).first;
        nodes.push_back(Node{next, {}, false, true, std::make_pair(i, step)});
      }
      nodes[i].succ.push_back(it->second);
    }
  }

  const std::size_t n = nodes.size();
  std::vector<std::vector<std::size_t>> preds(n);
  for (std::size_t i = 0; i < n; ++i)
    for (auto j : nodes[i].succ) preds[j].push_back(i);
  auto backward = [&](std::vector<bool>& mark) {
    std::deque<std::size_t> q;
    for (std::size_t i = 0; i < n; ++i)
      if (mark[i]) q.push_back(i);
    while (!q.empty()) {
      auto j = q.front();
      q.pop_front();
      for (auto p : preds[j])
        if (!mark[p]) {
          mark[p] = true;
          q.push_back(p);
        }
    }
  };
  std::vector<bool> can_reach(n, false), open(n, false);
  bool pruned = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (terminal(nodes[i].state)) can_reach[i] = true;
    if (!nodes[i].expanded || !nodes[i].complete) {
      open[i] = true;
      pruned = true;
    }
  }
  backward(can_reach);
  backward(open);

  Verdict v;
  v.states_explored = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (can_reach[i] || open[i]) continue;
    v.outcome = Outcome::No;
    // Prefer a deadlocked state inside the (closed, failing) future of i.
    std::size_t target = i;
    {
      std::vector<bool> seen(n, false);
      std::deque<std::size_t> q{i};
      seen[i] = true;
      while (!q.empty()) {
        auto j = q.front();
        q.pop_front();
        if (nodes[j].succ.empty()) {
          target = j;
          break;
        }
        for (auto k : nodes[j].succ)
          if (!seen[k]) {
            seen[k] = true;
            q.push_back(k);
          }
      }
    }
    std::vector<std::size_t> chain;
    for (std::size_t j = target;; j = nodes[j].parent->first) {
      chain.push_back(j);
      if (!nodes[j].parent) break;
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      v.trail.push_back(render(nodes[*it].state));
      if (nodes[*it].parent) v.path.push_back(nodes[*it].parent->second);
    }
    v.state = render(nodes[target].state);
    return v;
  }
  if (!pruned) {
    v.outcome = Outcome::Yes;
    return v;
  }
  v.outcome = Outcome::Unknown;
  v.reason = cut_reason.empty() ? "exploration incomplete" : cut_reason;
  return v;
}

}  // namespace fairsub
