#pragma once

// Fair asynchronous subtyping: the coinductive game, the inductive
// convergence relation, the deep-output construction and their combination.

#include <algorithm>
#include <climits>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fairsub/explore.hpp"
#include "fairsub/graph.hpp"
#include "fairsub/lts.hpp"
#include "fairsub/parser.hpp"
#include "fairsub/syntax.hpp"

namespace fairsub {

struct GameBounds {
  std::size_t max_pairs = 4096;
  std::size_t node_cap = kDefaultNodeCap;
};

struct GameViolation {
  SessionType left, right;    // the offending pair
  std::string clause;         // "end", "input" or "output"
  std::optional<Label> label;
  LabelWord path;             // labels leading from the root pair
  std::string message;
};

struct GameVerdict {
  Outcome outcome = Outcome::Unknown;
  std::vector<std::pair<SessionType, SessionType>> witness;  // Yes: the closed relation
  std::optional<GameViolation> violation;                    // No
  std::string exhausted;                                     // Unknown
  std::size_t pairs_explored = 0;
};

namespace detail {

using TypePair = std::pair<TypeId, TypeId>;

struct GameRun {
  GameVerdict verdict;
  std::vector<TypePair> pairs;
};

inline constexpr std::size_t kReflexiveExpansions = 64;

inline GameRun run_game(TypeStore& store, TypeId s0, TypeId t0, std::size_t max_pairs) {
  GameRun run;
  std::map<TypePair, std::size_t> index;
  std::vector<std::optional<std::pair<std::size_t, Label>>> parent;
  auto& v = run.verdict;
  auto add = [&](TypePair p, std::optional<std::pair<std::size_t, Label>> from) {
    if (index.count(p)) return true;
    if (run.pairs.size() >= max_pairs) return false;
    index.emplace(p, run.pairs.size());
    run.pairs.push_back(p);
    parent.push_back(from);
    return true;
  };
  auto fail = [&](std::size_t i, std::string clause, std::optional<Label> label, std::string message) {
    LabelWord path;
    for (std::size_t j = i; parent[j]; j = parent[j]->first) path.push_back(parent[j]->second);
    std::reverse(path.begin(), path.end());
    v.outcome = Outcome::No;
    v.violation = GameViolation{store.type(run.pairs[i].first), store.type(run.pairs[i].second), std::move(clause),
                                label, std::move(path), std::move(message)};
    v.pairs_explored = run.pairs.size();
  };
  add({s0, t0}, std::nullopt);
  std::size_t reflexive = 0;
  try {
    for (std::size_t i = 0; i < run.pairs.size(); ++i) {
      auto [s, t] = run.pairs[i];
      // The identity is a subtyping relation, so reflexive pairs past a small
      // budget are left unexpanded.
      if (s == t && ++reflexive > kReflexiveExpansions) continue;
      if (store.is_end(t)) {
        if (!store.is_end(s)) {
          fail(i, "end", std::nullopt, "supertype is end but subtype is not");
          return run;
        }
        continue;
      }
      auto out_t = store.out(t);
      if (!out_t.empty()) {
        auto out_s = store.out(s);
        if (out_s.empty()) {
          fail(i, "output", std::nullopt, "out(supertype) holds whereas out(subtype) does not");
          return run;
        }
        for (const auto& a : out_s) {
          Label l{Polarity::Output, a};
          if (std::find(out_t.begin(), out_t.end(), a) == out_t.end()) {
            fail(i, "output", l, "subtype sends !" + a.str() + " which the supertype does not");
            return run;
          }
          if (!add({*store.step(s, l), *store.step(t, l)}, std::make_pair(i, l))) {
            v.outcome = Outcome::Unknown;
            v.exhausted = "maxPairs (" + std::to_string(max_pairs) + ")";
            v.pairs_explored = run.pairs.size();
            return run;
          }
        }
      }
      for (const auto& a : store.inp(t)) {
        Label l{Polarity::Input, a};
        auto ns = store.step(s, l);
        if (!ns) {
          fail(i, "input", l, "supertype accepts ?" + a.str() + " but subtype does not");
          return run;
        }
        if (!add({*ns, *store.step(t, l)}, std::make_pair(i, l))) {
          v.outcome = Outcome::Unknown;
          v.exhausted = "maxPairs (" + std::to_string(max_pairs) + ")";
          v.pairs_explored = run.pairs.size();
          return run;
        }
      }
    }
  } catch (const ResourceExceeded& e) {
    v.outcome = Outcome::Unknown;
    v.exhausted = std::string("nodeCap: ") + e.what();
    v.pairs_explored = run.pairs.size();
    return run;
  }
  v.outcome = Outcome::Yes;
  v.pairs_explored = run.pairs.size();
  for (auto [s, t] : run.pairs) v.witness.push_back({store.type(s), store.type(t)});
  return run;
}

}  // namespace detail

inline GameVerdict subtyping_game(const SessionType& s, const SessionType& t, const GameBounds& b = {}) {
  TypeStore store(b.node_cap);
  try {
    return detail::run_game(store, store.intern(s), store.intern(t), b.max_pairs).verdict;
  } catch (const ResourceExceeded& e) {
    GameVerdict v;
    v.exhausted = std::string("nodeCap: ") + e.what();
    return v;
  }
}

struct AuditReport {
  bool closed = true;  // every clause holds and every successor pair is a member (or flagged)
  bool exact = true;   // false when closure relied on flagged frontier pairs
  std::size_t pairs = 0;
  std::vector<std::string> failures;
  std::vector<std::string> flagged;
};

/// Checks that `members` is an asynchronous subtyping relation. Successor
/// pairs that belong to `frontier` (instances just outside a sampled
/// parametric family) are flagged instead of failed. With `with_identity`
/// reflexive successors count as members, i.e. the union with the identity
/// relation is audited.
inline AuditReport audit_relation(const std::vector<std::pair<SessionType, SessionType>>& members,
                                  const std::vector<std::pair<SessionType, SessionType>>& frontier = {},
                                  std::size_t node_cap = kDefaultNodeCap, bool with_identity = false) {
  TypeStore store(node_cap);
  AuditReport r;
  std::set<detail::TypePair> set, edge;
  std::vector<detail::TypePair> list;
  for (const auto& [s, t] : members) {
    detail::TypePair p{store.intern(s), store.intern(t)};
    if (set.insert(p).second) list.push_back(p);
  }
  for (const auto& [s, t] : frontier) edge.insert({store.intern(s), store.intern(t)});
  r.pairs = list.size();
  auto show = [&](detail::TypePair p) { return "(" + to_string(store.type(p.first)) + ", " + to_string(store.type(p.second)) + ")"; };
  auto fail = [&](std::string msg) {
    r.closed = false;
    r.failures.push_back(std::move(msg));
  };
  auto need = [&](detail::TypePair from, const Label& l, detail::TypePair p) {
    if (set.count(p) || (with_identity && p.first == p.second)) return;
    if (edge.count(p)) {
      r.exact = false;
      r.flagged.push_back(show(from) + " --" + to_string(l) + "--> " + show(p));
      return;
    }
    fail("successor " + show(p) + " of " + show(from) + " via " + to_string(l) + " is not in the relation");
  };
  for (auto p : list) {
    auto [s, t] = p;
    if (store.is_end(t)) {
      if (!store.is_end(s)) fail("clause end fails at " + show(p));
      continue;
    }
    for (const auto& a : store.inp(t)) {
      Label l{Polarity::Input, a};
      auto ns = store.step(s, l);
      if (!ns) {
        fail("clause input fails at " + show(p) + " on ?" + a.str());
        continue;
      }
      need(p, l, {*ns, *store.step(t, l)});
    }
    auto out_t = store.out(t);
    if (out_t.empty()) continue;
    auto out_s = store.out(s);
    if (out_s.empty()) fail("clause output fails at " + show(p) + ": subtype has no outputs");
    for (const auto& a : out_s) {
      Label l{Polarity::Output, a};
      if (std::find(out_t.begin(), out_t.end(), a) == out_t.end()) {
        fail("clause output fails at " + show(p) + " on !" + a.str());
        continue;
      }
      need(p, l, {*store.step(s, l), *store.step(t, l)});
    }
  }
  if (!r.closed) r.exact = false;
  return r;
}

struct ConvergeBounds {
  std::size_t max_len = 12;    // L: trace length bound
  std::size_t max_depth = 6;   // D: derivation depth bound
  std::size_t node_cap = kDefaultNodeCap;
  std::size_t max_trie = 200000;       // trace prefixes enumerated per pair
  std::size_t inclusion_pairs = 2000;  // exact trace-inclusion attempt
  std::size_t game_pairs = 512;        // game run backing the finite shortcut
};

/// One option (ψ, a) tried for a difference trace.
struct ConvOption {
  LabelWord psi;
  Tag tag;
  std::string result;  // "yes", "cycle", "refuted" or "unknown"
  int node = -1;       // derivation node of the child pair, if evaluated
};

struct ConvNode {
  SessionType left, right;
  std::size_t depth = 0;
  Outcome outcome = Outcome::Unknown;
  // "reflexive", "trace-inclusion", "finite-conv", "rule", "cycle", "depth-bound"
  std::string rule;
  bool saturated = true;
  std::vector<std::pair<LabelWord, ConvOption>> handled;  // Yes: φ and the option that resolved it
  LabelWord refuted;                                      // No: a difference trace with no option
  std::vector<ConvOption> refutation;                     // No: every option for `refuted`
  std::string reason;                                     // Unknown
};

struct ConvergenceVerdict {
  Outcome outcome = Outcome::Unknown;
  bool saturated = false;  // Yes: difference set was enumerated in full
  std::vector<ConvNode> nodes;  // nodes[0] is the root pair
  std::string reason;

  const ConvNode& root() const { return nodes.front(); }
};

namespace detail {

inline std::size_t height(const SessionType& g) {
  // Longest root-to-end path; only called on finite types.
  std::map<StateId, std::size_t> memo;
  auto go = [&](auto&& self, StateId s) -> std::size_t {
    if (auto it = memo.find(s); it != memo.end()) return it->second;
    std::size_t h = 0;
    for (const auto& b : g.body(s).branches) h = std::max(h, 1 + self(self, b.target));
    return memo[s] = h;
  };
  return go(go, g.root());
}

class Converger {
 public:
  Converger(TypeStore& store, const ConvergeBounds& b) : store_(store), b_(b) {}

  struct Result {
    Outcome outcome = Outcome::Unknown;
    int lowlink = INT_MAX;  // shallowest path position a No depends on
    bool saturated = true;
    int node = -1;
    std::string reason;
  };

  Result eval(TypeId s, TypeId t, std::size_t depth) {
    TypePair key{s, t};
    if (auto it = on_path_.find(key); it != on_path_.end())
      return Result{Outcome::No, static_cast<int>(it->second), true, -1, "cycle"};
    if (auto it = done_.find(key); it != done_.end()) return it->second;
    if (depth > b_.max_depth) {
      int n = new_node(s, t, depth);
      nodes_[n].rule = "depth-bound";
      nodes_[n].reason = "derivation depth bound (" + std::to_string(b_.max_depth) + ") reached";
      return Result{Outcome::Unknown, INT_MAX, false, n, nodes_[n].reason};
    }
    int n = new_node(s, t, depth);
    auto yes = [&](const std::string& rule, bool saturated) {
      nodes_[n].outcome = Outcome::Yes;
      nodes_[n].rule = rule;
      nodes_[n].saturated = saturated;
      Result r{Outcome::Yes, INT_MAX, saturated, n, ""};
      done_[key] = r;
      return r;
    };
    if (s == t) return yes("reflexive", true);
    if (included(t, s) == Outcome::Yes) return yes("trace-inclusion", true);
    if ((store_.finite(s) || store_.finite(t)) && game_yes(s, t)) return yes("finite-conv", true);

    on_path_[key] = depth;
    Result r = rule(s, t, depth, n);
    on_path_.erase(key);
    nodes_[n].outcome = r.outcome;
    if (r.outcome == Outcome::No && r.lowlink >= static_cast<int>(depth)) r.lowlink = INT_MAX;
    if (r.outcome == Outcome::Yes || (r.outcome == Outcome::No && r.lowlink == INT_MAX)) done_[key] = r;
    return r;
  }

  std::vector<ConvNode> take_nodes() { return std::move(nodes_); }

 private:
  int new_node(TypeId s, TypeId t, std::size_t depth) {
    ConvNode node;
    node.left = store_.type(s);
    node.right = store_.type(t);
    node.depth = depth;
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size() - 1);
  }

  // Exact tr(t) ⊆ tr(s) on the deterministic product, when it is finite.
  Outcome included(TypeId t, TypeId s) {
    std::set<TypePair> seen{{t, s}};
    std::deque<TypePair> queue{{t, s}};
    while (!queue.empty()) {
      auto [x, y] = queue.front();
      queue.pop_front();
      if (store_.is_end(x)) {
        if (!store_.is_end(y)) return Outcome::No;
        continue;
      }
      for (const auto& [l, nx] : store_.transitions(x)) {
        auto ny = store_.step(y, l);
        if (!ny) return Outcome::No;
        if (seen.insert({nx, *ny}).second) {
          if (seen.size() > b_.inclusion_pairs) return Outcome::Unknown;
          queue.push_back({nx, *ny});
        }
      }
    }
    return Outcome::Yes;
  }

  bool game_yes(TypeId s, TypeId t) {
    TypePair key{s, t};
    if (auto it = game_.find(key); it != game_.end()) return it->second;
    bool ok = run_game(store_, s, t, b_.game_pairs).verdict.outcome == Outcome::Yes;
    game_[key] = ok;
    return ok;
  }

  struct TrieNode {
    int parent;
    Label label;
    TypeId t;
    std::optional<TypeId> s;
    std::size_t len;
  };

  Result rule(TypeId s0, TypeId t0, std::size_t depth, int n) {
    std::vector<TrieNode> trie{{-1, Label{}, t0, s0, 0}};
    std::map<TypePair, Result> children;
    bool truncated = false, unknown = false, saturated = true;
    std::string unknown_reason;
    if (!store_.finite(t0) || height(store_.type(t0)) > b_.max_len) saturated = false;

    for (std::size_t head = 0; head < trie.size(); ++head) {
      const TrieNode node = trie[head];
      if (store_.is_end(node.t)) {
        if (node.s && store_.is_end(*node.s)) continue;
        // node spells a trace of t that s cannot perform
        LabelWord phi;
        std::vector<int> chain;
        for (int k = static_cast<int>(head); k >= 0; k = trie[k].parent) chain.push_back(k);
        for (auto it = chain.rbegin(); it != chain.rend(); ++it)
          if (trie[*it].parent >= 0) phi.push_back(trie[*it].label);
        std::vector<ConvOption> options;
        bool handled = false, definite = true;
        int low = INT_MAX;
        for (int k : chain) {  // longest prefix first
          const TrieNode& pk = trie[k];
          if (!pk.s) continue;
          auto out_s = store_.out(*pk.s), out_t = store_.out(pk.t);
          for (const auto& a : out_s) {
            if (std::find(out_t.begin(), out_t.end(), a) == out_t.end()) continue;
            Label l{Polarity::Output, a};
            TypePair child{*store_.step(*pk.s, l), *store_.step(pk.t, l)};
            Result cr;
            if (auto it = children.find(child); it != children.end()) {
              cr = it->second;
            } else {
              cr = eval(child.first, child.second, depth + 1);
              children[child] = cr;
            }
            ConvOption opt{LabelWord(phi.begin(), phi.begin() + static_cast<std::ptrdiff_t>(pk.len)), a, "", cr.node};
            if (cr.outcome == Outcome::Yes) {
              opt.result = "yes";
              saturated = saturated && cr.saturated;
              nodes_[n].handled.push_back({phi, opt});
              handled = true;
              break;
            }
            if (cr.outcome == Outcome::No) {
              opt.result = cr.reason == "cycle" ? "cycle" : "refuted";
              low = std::min(low, cr.lowlink);
            } else {
              opt.result = "unknown";
              definite = false;
              if (unknown_reason.empty()) unknown_reason = cr.reason;
            }
            options.push_back(std::move(opt));
          }
          if (handled) break;
        }
        if (handled) continue;
        if (definite) {
          nodes_[n].rule = "rule";
          nodes_[n].refuted = phi;
          nodes_[n].refutation = std::move(options);
          return Result{Outcome::No, low, true, n, "refuted"};
        }
        unknown = true;
        continue;
      }
      if (node.len >= b_.max_len) continue;
      for (const auto& [l, nt] : store_.transitions(node.t)) {
        if (store_.dist(nt) > b_.max_len - node.len - 1) continue;
        if (trie.size() >= b_.max_trie) {
          truncated = true;
          break;
        }
        std::optional<TypeId> ns;
        if (node.s) ns = store_.step(*node.s, l);
        trie.push_back({static_cast<int>(head), l, nt, ns, node.len + 1});
      }
    }
    nodes_[n].rule = "rule";
    if (truncated || unknown) {
      std::string why = truncated ? "trace enumeration cap (" + std::to_string(b_.max_trie) + ") reached" : unknown_reason;
      nodes_[n].reason = why;
      return Result{Outcome::Unknown, INT_MAX, false, n, why};
    }
    nodes_[n].saturated = saturated;
    return Result{Outcome::Yes, INT_MAX, saturated, n, ""};
  }

  TypeStore& store_;
  ConvergeBounds b_;
  std::map<TypePair, std::size_t> on_path_;
  std::map<TypePair, Result> done_;
  std::map<TypePair, bool> game_;
  std::vector<ConvNode> nodes_;
};

inline ConvergenceVerdict converge_in(TypeStore& store, TypeId s, TypeId t, const ConvergeBounds& b) {
  ConvergenceVerdict v;
  Converger c(store, b);
  try {
    auto r = c.eval(s, t, 0);
    v.outcome = r.outcome;
    v.saturated = r.outcome == Outcome::Yes && r.saturated;
    v.reason = r.reason;
    v.nodes = c.take_nodes();
  } catch (const ResourceExceeded& e) {
    v.outcome = Outcome::Unknown;
    v.reason = std::string("nodeCap: ") + e.what();
    v.nodes = c.take_nodes();
  }
  if (v.nodes.empty()) v.nodes.push_back(ConvNode{store.type(s), store.type(t)});
  return v;
}

}  // namespace detail

/// Bounded search for a derivation of S ⊑ T.
inline ConvergenceVerdict converge_bounded(const SessionType& s, const SessionType& t, const ConvergeBounds& b = {}) {
  TypeStore store(b.node_cap);
  try {
    return detail::converge_in(store, store.intern(s), store.intern(t), b);
  } catch (const ResourceExceeded& e) {
    ConvergenceVerdict v;
    v.reason = std::string("nodeCap: ") + e.what();
    v.nodes.push_back(ConvNode{s, t});
    return v;
  }
}

/// The type F(S,T) reached from T by the output !a performed underneath T's
/// leading inputs.
inline SessionType deep_output(const SessionType& s, const SessionType& t, const Tag& a,
                               std::size_t node_cap = kDefaultNodeCap) {
  TypeStore store(node_cap);
  GraphBuilder gb;
  std::map<detail::TypePair, StateId> memo;
  Label out_a{Polarity::Output, a};
  auto build = [&](auto&& self, TypeId x, TypeId y) -> StateId {
    detail::TypePair key{x, y};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const SessionType& ty = store.type(y);
    if (ty.is_output()) {
      auto next = ty.successor(out_a);
      if (!next) throw CaseUndefined("deep output !" + a.str() + " undefined: supertype offers no such output");
      return memo[key] = gb.graft(*next);
    }
    if (!ty.is_input()) throw CaseUndefined("deep output !" + a.str() + " undefined: supertype is end");
    StateId st = gb.add_choice();
    memo[key] = st;
    if (memo.size() > node_cap) throw ResourceExceeded("deep output exceeds node cap");
    for (const auto& [l, ny] : store.sync(y)) {
      auto nx = store.step(x, l);
      if (!nx) throw CaseUndefined("deep output undefined: subtype cannot input " + to_string(l));
      gb.add_branch(st, l.polarity, l.tag, self(self, *nx, ny));
    }
    return st;
  };
  StateId root = build(build, store.intern(s), store.intern(t));
  return gb.build(root).canonical();
}

struct FairParams {
  GameBounds game;
  ConvergeBounds converge;
};

struct FairVerdict {
  Outcome outcome = Outcome::Unknown;
  std::string leg;  // "game", "convergence" or "game+convergence"
  bool saturated = false;
  GameVerdict game;
  std::optional<ConvergenceVerdict> convergence;  // deciding (or root) convergence run
  std::optional<std::pair<SessionType, SessionType>> failing_pair;
  std::size_t pairs_converged = 0;
  std::string reason;
};

/// Combined verdict: the game establishes a candidate relation, convergence
/// must hold on every pair of it.
inline FairVerdict fair_subtype(const SessionType& s, const SessionType& t, const FairParams& p = {}) {
  FairVerdict v;
  TypeStore store(p.game.node_cap);
  TypeId si = 0, ti = 0;
  try {
    si = store.intern(s);
    ti = store.intern(t);
  } catch (const ResourceExceeded& e) {
    v.reason = e.what();
    return v;
  }
  auto play = [&](std::size_t max_pairs) {
    detail::GameRun run;
    try {
      run = detail::run_game(store, si, ti, max_pairs);
    } catch (const ResourceExceeded& e) {
      run.verdict.exhausted = std::string("nodeCap: ") + e.what();
    }
    return run;
  };
  // A short game first; when it does not close, a convergence failure at the
  // root settles the question before the full game is paid for.
  constexpr std::size_t kProbePairs = 256;
  std::optional<ConvergenceVerdict> root_conv;
  detail::GameRun run = play(std::min(p.game.max_pairs, kProbePairs));
  if (run.verdict.outcome == Outcome::Unknown && p.game.max_pairs > kProbePairs) {
    root_conv = detail::converge_in(store, si, ti, p.converge);
    if (root_conv->outcome == Outcome::No) {
      v.game = run.verdict;
      v.outcome = Outcome::No;
      v.leg = "convergence";
      v.failing_pair = std::make_pair(s, t);
      v.convergence = std::move(root_conv);
      return v;
    }
    run = play(p.game.max_pairs);
  }
  v.game = run.verdict;
  if (v.game.outcome == Outcome::No) {
    v.outcome = Outcome::No;
    v.leg = "game";
    return v;
  }
  if (v.game.outcome == Outcome::Yes) {
    v.leg = "game+convergence";
    v.saturated = true;
    bool unknown = false;
    for (auto [x, y] : run.pairs) {
      auto c = (x == si && y == ti && root_conv) ? *root_conv : detail::converge_in(store, x, y, p.converge);
      ++v.pairs_converged;
      if (x == si && y == ti) v.convergence = c;
      if (c.outcome == Outcome::No) {
        v.outcome = Outcome::No;
        v.leg = "convergence";
        v.failing_pair = std::make_pair(store.type(x), store.type(y));
        v.convergence = std::move(c);
        return v;
      }
      if (c.outcome == Outcome::Unknown) {
        if (!unknown) {
          v.reason = "convergence unknown on a witness pair: " + c.reason;
          v.failing_pair = std::make_pair(store.type(x), store.type(y));
        }
        unknown = true;
      }
      v.saturated = v.saturated && c.saturated;
    }
    v.outcome = unknown ? Outcome::Unknown : Outcome::Yes;
    return v;
  }
  auto c = root_conv ? *root_conv : detail::converge_in(store, si, ti, p.converge);
  if (c.outcome == Outcome::No) {
    v.outcome = Outcome::No;
    v.leg = "convergence";
    v.failing_pair = std::make_pair(s, t);
  } else {
    v.outcome = Outcome::Unknown;
    v.leg = "game";
    v.reason = "subtyping game did not close: " + v.game.exhausted;
  }
  v.convergence = std::move(c);
  return v;
}

struct AssistedReport {
  AuditReport audit;
  bool contains_root = false;
  std::size_t sampled = 0;
  std::size_t converged = 0;
  std::vector<std::string> problems;
  bool certified = false;  // closed within the sample, root included, every sampled pair converges
};

/// Assisted path: audit a user-supplied (possibly parametric) relation
/// sampled at n = 0..sample and run convergence on every sampled pair.
inline AssistedReport certify_with_relation(const SessionType& s, const SessionType& t, const RelationFile& rel,
                                            int sample, const ConvergeBounds& cb = {}) {
  AssistedReport r;
  std::vector<int> ns;
  for (int n = 0; n <= sample; ++n) ns.push_back(n);
  auto members = instantiate(rel, ns);
  auto frontier = instantiate(rel, {sample + 1});
  r.audit = audit_relation(members, frontier, cb.node_cap);
  const std::string root_key = s.key() + "|" + t.key();
  TypeStore store(cb.node_cap);
  std::set<detail::TypePair> seen;
  for (const auto& [x, y] : members) {
    if (x.key() + "|" + y.key() == root_key) r.contains_root = true;
    detail::TypePair p{store.intern(x), store.intern(y)};
    if (!seen.insert(p).second) continue;
    ++r.sampled;
    auto c = detail::converge_in(store, p.first, p.second, cb);
    if (c.outcome == Outcome::Yes)
      ++r.converged;
    else
      r.problems.push_back("convergence " + std::string(to_string(c.outcome)) + " on (" + to_string(x) + ", " +
                           to_string(y) + ")");
  }
  if (!r.contains_root) r.problems.push_back("relation does not contain the queried pair");
  r.certified = r.audit.closed && r.contains_root && r.converged == r.sampled;
  return r;
}

}  // namespace fairsub
