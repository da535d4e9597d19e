#pragma once

// Session type graphs: finite rooted graphs whose states are either `end`
// or a choice of tagged branches. Graphs are immutable once built and shared
// between the SessionType handles that point into them.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fairsub/errors.hpp"
#include "fairsub/label.hpp"

namespace fairsub {

using StateId = std::uint32_t;

struct Branch {
  Polarity polarity = Polarity::Output;
  Tag tag;
  StateId target = 0;

  Label label() const { return Label{polarity, tag}; }
};

enum class BodyKind : unsigned char { End, Choice };

struct StateBody {
  BodyKind kind = BodyKind::End;
  std::vector<Branch> branches;  // sorted by (tag, polarity)

  bool is_end() const { return kind == BodyKind::End; }
};

class SessionType;

namespace detail {

struct GraphData {
  std::vector<StateBody> states;
  bool minimal = false;  // no two states are bisimilar and numbering is canonical from state 0

  mutable std::mutex mutex;
  mutable std::vector<std::uint32_t> classes;  // bisimulation class per state, filled lazily
  mutable std::unordered_map<StateId, std::shared_ptr<const std::string>> keys;
  mutable std::unordered_map<StateId, std::pair<std::shared_ptr<const GraphData>, StateId>> canon;
};

/// Coarsest bisimulation on a deterministic labelled graph (Hopcroft-style
/// partition refinement). States start in blocks keyed by their kind and
/// label set; splitters are processed per label using inverse edges.
inline std::vector<std::uint32_t> bisimulation_classes(const std::vector<StateBody>& states) {
  const auto n = static_cast<std::uint32_t>(states.size());
  std::vector<std::uint32_t> block_of(n, 0);
  if (n == 0) return block_of;

  std::vector<Label> labels;
  for (const auto& s : states)
    for (const auto& b : s.branches) labels.push_back(b.label());
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  const auto num_labels = static_cast<std::uint32_t>(labels.size());
  auto label_id = [&](const Branch& b) {
    return static_cast<std::uint32_t>(std::lower_bound(labels.begin(), labels.end(), b.label()) - labels.begin());
  };

  // Outgoing label ids per state (sorted) and inverse edges in CSR form,
  // indexed by label * n + target.
  std::vector<std::uint32_t> out_off(n + 1, 0), out_label;
  std::vector<std::uint32_t> inv_off(static_cast<std::size_t>(num_labels) * n + 1, 0), inv_src;
  for (std::uint32_t s = 0; s < n; ++s) {
    out_off[s] = static_cast<std::uint32_t>(out_label.size());
    for (const auto& b : states[s].branches) {
      auto l = label_id(b);
      out_label.push_back(l);
      ++inv_off[static_cast<std::size_t>(l) * n + b.target + 1];
    }
    std::sort(out_label.begin() + out_off[s], out_label.end());
  }
  out_off[n] = static_cast<std::uint32_t>(out_label.size());
  for (std::size_t i = 1; i < inv_off.size(); ++i) inv_off[i] += inv_off[i - 1];
  inv_src.resize(out_label.size());
  {
    std::vector<std::uint32_t> fill(inv_off.begin(), inv_off.end() - 1);
    for (std::uint32_t s = 0; s < n; ++s)
      for (const auto& b : states[s].branches) inv_src[fill[static_cast<std::size_t>(label_id(b)) * n + b.target]++] = s;
  }

  struct Block {
    std::uint32_t begin, end, marked;
    bool in_worklist;
  };
  std::vector<std::uint32_t> elems(n), loc(n);
  std::vector<Block> blocks;
  for (std::uint32_t s = 0; s < n; ++s) elems[s] = s;
  auto sig_less = [&](std::uint32_t x, std::uint32_t y) {
    bool ex = states[x].is_end(), ey = states[y].is_end();
    if (ex != ey) return ex;
    return std::lexicographical_compare(out_label.begin() + out_off[x], out_label.begin() + out_off[x + 1],
                                        out_label.begin() + out_off[y], out_label.begin() + out_off[y + 1]);
  };
  std::sort(elems.begin(), elems.end(), sig_less);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (i == 0 || sig_less(elems[i - 1], elems[i])) blocks.push_back(Block{i, i, i, true});
    blocks.back().end = i + 1;
    loc[elems[i]] = i;
    block_of[elems[i]] = static_cast<std::uint32_t>(blocks.size() - 1);
  }
  std::deque<std::uint32_t> worklist;
  for (std::uint32_t b = 0; b < blocks.size(); ++b) worklist.push_back(b);

  std::vector<std::uint32_t> splitter, touched;
  while (!worklist.empty()) {
    std::uint32_t a = worklist.front();
    worklist.pop_front();
    blocks[a].in_worklist = false;
    splitter.assign(elems.begin() + blocks[a].begin, elems.begin() + blocks[a].end);
    for (std::uint32_t l = 0; l < num_labels; ++l) {
      touched.clear();
      const std::size_t base = static_cast<std::size_t>(l) * n;
      for (auto t : splitter) {
        for (std::uint32_t k = inv_off[base + t]; k < inv_off[base + t + 1]; ++k) {
          std::uint32_t s = inv_src[k];
          Block& blk = blocks[block_of[s]];
          std::uint32_t i = loc[s];
          if (i < blk.marked) continue;
          if (blk.marked == blk.begin) touched.push_back(block_of[s]);
          std::uint32_t j = blk.marked;
          std::swap(elems[i], elems[j]);
          loc[elems[i]] = i;
          loc[elems[j]] = j;
          ++blk.marked;
        }
      }
      for (auto bi : touched) {
        Block& blk = blocks[bi];
        if (blk.marked == blk.end) {
          blk.marked = blk.begin;
          continue;
        }
        Block nb{blk.begin, blk.marked, blk.begin, false};
        blk.begin = blk.marked;
        auto nid = static_cast<std::uint32_t>(blocks.size());
        for (std::uint32_t i = nb.begin; i < nb.end; ++i) block_of[elems[i]] = nid;
        bool old_in = blk.in_worklist;
        std::uint32_t old_size = blk.end - blk.begin;
        std::uint32_t new_size = nb.end - nb.begin;
        blocks.push_back(nb);
        if (old_in || new_size <= old_size) {
          blocks[nid].in_worklist = true;
          worklist.push_back(nid);
        } else {
          blocks[bi].in_worklist = true;
          worklist.push_back(bi);
        }
      }
    }
  }
  return block_of;
}

inline std::shared_ptr<GraphData> make_graph(std::vector<StateBody> states, bool minimal = false) {
  auto g = std::make_shared<GraphData>();
  g->states = std::move(states);
  g->minimal = minimal;
  return g;
}

}  // namespace detail

/// Handle on a state of an immutable session type graph. Cheap to copy.
class SessionType {
 public:
  /// The terminated session `end`.
  SessionType() : graph_(end_graph()), root_(0) {}

  static SessionType end() { return SessionType(); }

  SessionType(std::shared_ptr<const detail::GraphData> graph, StateId root) : graph_(std::move(graph)), root_(root) {
    if (root_ >= graph_->states.size()) throw Error("root state out of range");
  }

  StateId root() const { return root_; }
  std::size_t graph_size() const { return graph_->states.size(); }
  const std::shared_ptr<const detail::GraphData>& graph() const { return graph_; }

  const StateBody& body() const { return graph_->states[root_]; }
  const StateBody& body(StateId s) const { return graph_->states.at(s); }

  bool is_end() const { return body().is_end(); }
  bool is_choice() const { return !is_end(); }
  bool is_output() const { return is_choice() && !body().branches.empty() && body().branches.front().polarity == Polarity::Output; }
  bool is_input() const { return is_choice() && !body().branches.empty() && body().branches.front().polarity == Polarity::Input; }
  const std::vector<Branch>& branches() const { return body().branches; }

  /// Same graph, different root.
  SessionType at(StateId s) const { return SessionType(graph_, s); }

  /// Synchronous (topmost) successor for a label, if the top choice offers it.
  std::optional<SessionType> successor(const Label& l) const {
    for (const auto& b : branches())
      if (b.tag == l.tag && b.polarity == l.polarity) return at(b.target);
    return std::nullopt;
  }

  /// States reachable from the root, in breadth-first order (root first).
  std::vector<StateId> reachable() const {
    std::vector<StateId> order{root_};
    std::vector<bool> seen(graph_->states.size(), false);
    seen[root_] = true;
    for (std::size_t i = 0; i < order.size(); ++i)
      for (const auto& b : graph_->states[order[i]].branches)
        if (!seen[b.target]) {
          seen[b.target] = true;
          order.push_back(b.target);
        }
    return order;
  }

  std::size_t size() const { return reachable().size(); }

  /// Canonical (bisimulation-minimal, breadth-first numbered) version of this
  /// type. Two types are bisimilar iff their canonical forms are identical.
  SessionType canonical() const;

  /// Structural key of the canonical form; equal keys iff bisimilar.
  const std::string& key() const;

  bool is_canonical() const { return graph_->minimal && root_ == 0; }

 private:
  static const std::shared_ptr<const detail::GraphData>& end_graph() {
    static const std::shared_ptr<const detail::GraphData> g = detail::make_graph({StateBody{}}, true);
    return g;
  }

  std::shared_ptr<const detail::GraphData> graph_;
  StateId root_;
};

namespace detail {

inline const std::vector<std::uint32_t>& classes_locked(const GraphData& g) {
  if (g.classes.empty() && !g.states.empty()) {
    if (g.minimal) {
      g.classes.resize(g.states.size());
      for (std::size_t i = 0; i < g.states.size(); ++i) g.classes[i] = static_cast<std::uint32_t>(i);
    } else {
      g.classes = bisimulation_classes(g.states);
    }
  }
  return g.classes;
}

inline std::pair<std::shared_ptr<const GraphData>, StateId> canonical_locked(const std::shared_ptr<const GraphData>& gp,
                                                                            StateId root) {
  const GraphData& g = *gp;
  if (g.minimal && root == 0) return {gp, 0};
  auto it = g.canon.find(root);
  if (it != g.canon.end()) return it->second;
  const auto& cls = classes_locked(g);
  // Breadth-first numbering of the quotient from the root's class.
  constexpr StateId kNone = ~StateId{0};
  std::vector<StateId> number(g.states.size(), kNone);
  std::vector<StateId> representative;
  number[cls[root]] = 0;
  representative.push_back(root);
  std::vector<StateBody> out;
  for (std::size_t i = 0; i < representative.size(); ++i) {
    const StateBody& src = g.states[representative[i]];
    StateBody dst;
    dst.kind = src.kind;
    dst.branches.reserve(src.branches.size());
    for (const auto& b : src.branches) {
      auto c = cls[b.target];
      if (number[c] == kNone) {
        number[c] = static_cast<StateId>(representative.size());
        representative.push_back(b.target);
      }
      dst.branches.push_back(Branch{b.polarity, b.tag, number[c]});
    }
    out.push_back(std::move(dst));
  }
  std::pair<std::shared_ptr<const GraphData>, StateId> result{make_graph(std::move(out), true), 0};
  g.canon.emplace(root, result);
  return result;
}

inline std::string serialize_canonical(const GraphData& g) {
  std::string s;
  s.reserve(g.states.size() * 12);
  for (const auto& st : g.states) {
    if (st.is_end()) {
      s += 'E';
    } else {
      for (const auto& b : st.branches) {
        s += symbol(b.polarity);
        s += b.tag.str();
        s += '>';
        char buf[16];
        auto r = std::to_chars(buf, buf + sizeof buf, b.target);
        s.append(buf, r.ptr);
        s += ',';
      }
    }
    s += ';';
  }
  return s;
}

}  // namespace detail

inline SessionType SessionType::canonical() const {
  std::lock_guard<std::mutex> lock(graph_->mutex);
  auto [g, r] = detail::canonical_locked(graph_, root_);
  return SessionType(g, r);
}

inline const std::string& SessionType::key() const {
  SessionType c = canonical();
  std::lock_guard<std::mutex> lock(graph_->mutex);
  auto it = graph_->keys.find(root_);
  if (it == graph_->keys.end()) {
    auto k = std::make_shared<const std::string>(detail::serialize_canonical(*c.graph()));
    it = graph_->keys.emplace(root_, std::move(k)).first;
  }
  return *it->second;
}

/// Incremental construction of a graph. Branches are kept ordered by tag.
class GraphBuilder {
 public:
  StateId add_end() {
    states_.push_back(StateBody{});
    return static_cast<StateId>(states_.size() - 1);
  }

  StateId add_choice() {
    states_.push_back(StateBody{BodyKind::Choice, {}});
    return static_cast<StateId>(states_.size() - 1);
  }

  void add_branch(StateId from, Polarity p, Tag tag, StateId to) {
    states_.at(from).branches.push_back(Branch{p, std::move(tag), to});
  }

  /// Copies the states reachable from `t` into this builder; returns the new
  /// id of t's root. Repeated grafts of the same graph reuse earlier copies.
  StateId graft(const SessionType& t) {
    auto& map = grafts_[t.graph().get()];
    std::vector<StateId> pending;
    auto ensure = [&](StateId s) {
      auto [it, fresh] = map.emplace(s, 0);
      if (fresh) {
        it->second = t.body(s).is_end() ? add_end() : add_choice();
        pending.push_back(s);
      }
      return it->second;
    };
    StateId root = ensure(t.root());
    while (!pending.empty()) {
      StateId s = pending.back();
      pending.pop_back();
      StateId copy = map.at(s);
      for (const auto& b : t.body(s).branches) {
        StateId target = ensure(b.target);
        states_[copy].branches.push_back(Branch{b.polarity, b.tag, target});
      }
    }
    keep_alive_.push_back(t.graph());
    return root;
  }

  void set_kind(StateId s, BodyKind k) { states_.at(s).kind = k; }

  std::size_t size() const { return states_.size(); }

  SessionType build(StateId root) {
    for (auto& s : states_) {
      for (const auto& b : s.branches)
        if (b.target >= states_.size()) throw Error("branch target out of range");
      std::stable_sort(s.branches.begin(), s.branches.end(), [](const Branch& x, const Branch& y) {
        return std::tie(x.tag, x.polarity) < std::tie(y.tag, y.polarity);
      });
    }
    return SessionType(detail::make_graph(std::move(states_)), root);
  }

 private:
  std::vector<StateBody> states_;
  std::map<const detail::GraphData*, std::unordered_map<StateId, StateId>> grafts_;
  std::vector<std::shared_ptr<const detail::GraphData>> keep_alive_;
};

}  // namespace fairsub
