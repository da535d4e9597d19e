#pragma once

// Queue machines, a direct simulator, and their encodings into pairs of
// session types whose correctness (resp. convergence) mirrors acceptance.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <deque>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fairsub/composition.hpp"
#include "fairsub/errors.hpp"
#include "fairsub/graph.hpp"
#include "fairsub/refinement.hpp"
#include "fairsub/syntax.hpp"

namespace fairsub {

struct QueueMachine {
  std::vector<std::string> states;
  std::vector<std::string> input_alphabet;
  std::vector<std::string> queue_alphabet;
  std::string initial_symbol;
  std::string start;
  std::map<std::pair<std::string, std::string>, std::pair<std::string, std::vector<std::string>>> delta;
};

inline void validate(const QueueMachine& m) {
  auto has = [](const std::vector<std::string>& v, const std::string& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  };
  if (m.states.empty()) throw Error("queue machine has no states");
  if (!has(m.states, m.start)) throw Error("start state '" + m.start + "' is not a state");
  if (!has(m.queue_alphabet, m.initial_symbol)) throw Error("initial symbol is not in the queue alphabet");
  if (has(m.input_alphabet, m.initial_symbol)) throw Error("initial symbol must not be an input symbol");
  for (const auto& a : m.input_alphabet)
    if (!has(m.queue_alphabet, a)) throw Error("input symbol '" + a + "' is not in the queue alphabet");
  for (const auto& p : m.states)
    for (const auto& a : m.queue_alphabet) {
      auto it = m.delta.find({p, a});
      if (it == m.delta.end()) throw Error("delta undefined on (" + p + ", " + a + ")");
      if (!has(m.states, it->second.first)) throw Error("delta targets unknown state '" + it->second.first + "'");
      for (const auto& b : it->second.second)
        if (!has(m.queue_alphabet, b)) throw Error("delta pushes unknown symbol '" + b + "'");
    }
  for (const auto& [key, val] : m.delta)
    if (!has(m.states, key.first) || !has(m.queue_alphabet, key.second))
      throw Error("delta entry on unknown (" + key.first + ", " + key.second + ")");
}

/// Symbols of a pushed word: a JSON array of symbols, or a string of
/// whitespace-separated symbols ("" is the empty word).
inline std::vector<std::string> qm_word(const nlohmann::json& j) {
  std::vector<std::string> w;
  if (j.is_array()) {
    for (const auto& x : j) w.push_back(x.get<std::string>());
  } else {
    std::istringstream in(j.get<std::string>());
    for (std::string s; in >> s;) w.push_back(s);
  }
  return w;
}

inline QueueMachine queue_machine_from_json(const nlohmann::json& j) {
  QueueMachine m;
  try {
    m.states = j.at("states").get<std::vector<std::string>>();
    m.input_alphabet = j.at("input_alphabet").get<std::vector<std::string>>();
    m.queue_alphabet = j.at("queue_alphabet").get<std::vector<std::string>>();
    m.initial_symbol = j.at("initial_symbol").get<std::string>();
    m.start = j.at("start").get<std::string>();
    for (const auto& row : j.at("delta")) {
      if (!row.is_array() || row.size() != 4) throw Error("delta rows are [state, symbol, next_state, pushed_word]");
      auto key = std::make_pair(row[0].get<std::string>(), row[1].get<std::string>());
      if (m.delta.count(key)) throw Error("delta defined twice on (" + key.first + ", " + key.second + ")");
      m.delta[key] = {row[2].get<std::string>(), qm_word(row[3])};
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed queue machine: ") + e.what());
  }
  validate(m);
  return m;
}

inline QueueMachine load_queue_machine(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(path + ": " + e.what());
  }
  return queue_machine_from_json(j);
}

inline nlohmann::json to_json(const QueueMachine& m) {
  nlohmann::json j;
  j["states"] = m.states;
  j["input_alphabet"] = m.input_alphabet;
  j["queue_alphabet"] = m.queue_alphabet;
  j["initial_symbol"] = m.initial_symbol;
  j["start"] = m.start;
  j["delta"] = nlohmann::json::array();
  for (const auto& [key, val] : m.delta) j["delta"].push_back({key.first, key.second, val.first, val.second});
  return j;
}

struct QmRun {
  bool accepted = false;  // otherwise Unknown: machines never block
  std::size_t steps = 0;
  std::string state;
  std::vector<std::string> queue;
};

inline QmRun qm_run(const QueueMachine& m, const std::vector<std::string>& x, std::size_t max_steps) {
  for (const auto& a : x)
    if (std::find(m.input_alphabet.begin(), m.input_alphabet.end(), a) == m.input_alphabet.end())
      throw Error("symbol '" + a + "' is not in the input alphabet");
  std::deque<std::string> q(x.begin(), x.end());
  q.push_back(m.initial_symbol);
  QmRun r;
  r.state = m.start;
  while (!q.empty() && r.steps < max_steps) {
    const auto& [next, push] = m.delta.at({r.state, q.front()});
    q.pop_front();
    r.state = next;
    q.insert(q.end(), push.begin(), push.end());
    ++r.steps;
  }
  r.accepted = q.empty();
  r.queue.assign(q.begin(), q.end());
  return r;
}

namespace detail {

inline const char* const kMarkTag = "e_mark";
inline const char* const kPrimeTag = "e_prime";

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Tag for a queue symbol: "q_" plus the lowercased symbol, with characters
// outside [a-z0-9_] written as xHH.
inline Tag symbol_tag(const std::string& sym) {
  std::string t = "q_";
  static const char* hex = "0123456789abcdef";
  for (unsigned char c : sym) {
    if (std::isalnum(c) || c == '_') {
      t += static_cast<char>(std::tolower(c));
    } else {
      t += 'x';
      t += hex[c >> 4];
      t += hex[c & 15];
    }
  }
  return Tag(t);
}

inline std::map<std::string, Tag> symbol_tags(const QueueMachine& m) {
  validate(m);
  std::map<std::string, Tag> tags;
  std::set<std::string> used;
  for (const auto& a : m.queue_alphabet) {
    auto l = lower(a);
    if (l == "e" || l == "e'" || l == "e_mark" || l == "e_prime")
      throw Error("queue symbol '" + a + "' clashes with the reserved marker symbols");
    Tag t = symbol_tag(a);
    if (!used.insert(t.str()).second) throw Error("queue symbols collide on tag " + t.str());
    tags.emplace(a, t);
  }
  return tags;
}

struct Encoder {
  const QueueMachine& m;
  std::map<std::string, Tag> tags;
  GraphBuilder gb;

  explicit Encoder(const QueueMachine& machine) : m(machine), tags(symbol_tags(machine)) {}

  StateId chain(const std::vector<Tag>& word, Polarity p, StateId tail) {
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
      StateId s = gb.add_choice();
      gb.add_branch(s, p, *it, tail);
      tail = s;
    }
    return tail;
  }

  std::vector<Tag> word(const std::vector<std::string>& w) const {
    std::vector<Tag> r;
    for (const auto& a : w) r.push_back(tags.at(a));
    return r;
  }

  // T^M and T^M_E; returns T^M.
  StateId tm() {
    StateId t = gb.add_choice(), te = gb.add_choice();
    for (StateId from : {t, te})
      for (const auto& a : m.queue_alphabet) gb.add_branch(from, Polarity::Input, tags.at(a), chain({tags.at(a)}, Polarity::Output, t));
    gb.add_branch(t, Polarity::Input, Tag(kMarkTag), chain({Tag(kMarkTag)}, Polarity::Output, te));
    gb.add_branch(te, Polarity::Input, Tag(kMarkTag), chain({Tag(kPrimeTag)}, Polarity::Output, gb.add_end()));
    return t;
  }

  // S^M_p for every p; returns S^M_start.
  StateId sm() {
    std::map<std::string, StateId> sp;
    for (const auto& p : m.states) sp[p] = gb.add_choice();
    StateId end = gb.add_end();
    for (const auto& p : m.states) {
      for (const auto& a : m.queue_alphabet) {
        const auto& [q, push] = m.delta.at({p, a});
        gb.add_branch(sp[p], Polarity::Input, tags.at(a), chain(word(push), Polarity::Output, sp[q]));
      }
      gb.add_branch(sp[p], Polarity::Input, Tag(kMarkTag), chain({Tag(kMarkTag)}, Polarity::Output, sp[p]));
      gb.add_branch(sp[p], Polarity::Input, Tag(kPrimeTag), end);
    }
    return sp.at(m.start);
  }

  std::vector<Tag> preamble(const std::vector<std::string>& x) const {
    auto w = word(x);
    w.push_back(tags.at(m.initial_symbol));
    w.push_back(Tag(kMarkTag));
    return w;
  }
};

inline void check_input(const QueueMachine& m, const std::vector<std::string>& x) {
  for (const auto& a : x)
    if (std::find(m.input_alphabet.begin(), m.input_alphabet.end(), a) == m.input_alphabet.end())
      throw Error("symbol '" + a + "' is not in the input alphabet");
}

}  // namespace detail

/// (S^M_start, T^M_x): the composition reaches <end|end> iff M accepts x.
inline std::pair<SessionType, SessionType> encode_correctness(const QueueMachine& m, const std::vector<std::string>& x) {
  detail::check_input(m, x);
  detail::Encoder enc(m);
  StateId s = enc.sm();
  StateId t = enc.chain(enc.preamble(x), Polarity::Output, enc.tm());
  auto g = enc.gb.build(s);
  return {g.at(s).canonical(), g.at(t).canonical()};
}

/// (S^M_{start,x}, dual(T^M)): the first converges to the second iff M
/// accepts x.
inline std::pair<SessionType, SessionType> encode_convergence(const QueueMachine& m, const std::vector<std::string>& x) {
  detail::check_input(m, x);
  detail::Encoder enc(m);
  StateId s = enc.chain(enc.preamble(x), Polarity::Output, enc.sm());
  StateId t = enc.tm();
  auto g = enc.gb.build(s);
  return {g.at(s).canonical(), dual(g.at(t)).canonical()};
}

/// Number of symbols the T^M side dequeues on an accepting run, counting the
/// marker each time it passes the head of the queue; nullopt when the run
/// does not end within max_steps machine steps.
inline std::optional<std::size_t> qm_encoded_dequeues(const QueueMachine& m, const std::vector<std::string>& x,
                                                       std::size_t max_steps) {
  struct Sym {
    bool mark;
    std::string s;
  };
  std::deque<Sym> q;
  for (const auto& a : x) q.push_back({false, a});
  q.push_back({false, m.initial_symbol});
  q.push_back({true, ""});
  std::string state = m.start;
  std::size_t count = 0, steps = 0;
  bool after_mark = false;
  while (!q.empty()) {
    Sym h = q.front();
    q.pop_front();
    ++count;
    if (h.mark) {
      if (after_mark) return count;
      q.push_back(h);
      after_mark = true;
      continue;
    }
    after_mark = false;
    if (++steps > max_steps) return std::nullopt;
    const auto& [next, push] = m.delta.at({state, h.s});
    state = next;
    for (const auto& b : push) q.push_back({false, b});
  }
  return std::nullopt;
}

struct QmBounds {
  ExplorationBounds explore;
  ConvergeBounds converge;
};

/// Bounds for the encoded checks, scaled from the machine's own run. Without
/// an accepting run the caps follow max_steps instead.
inline QmBounds qm_auto_bounds(const QueueMachine& m, const std::vector<std::string>& x, std::size_t max_steps) {
  QmBounds b;
  std::size_t longest_push = 0;
  for (const auto& [key, val] : m.delta) longest_push = std::max(longest_push, val.second.size());
  auto dq = qm_encoded_dequeues(m, x, max_steps);
  std::size_t k = dq ? *dq : max_steps;
  std::size_t width = x.size() + 3 + longest_push;
  b.explore.max_states = std::max<std::size_t>(1000, 16 * (k + 1) * width * width);
  b.explore.max_queue_length = std::max<std::size_t>(6, width + k * longest_push);
  b.explore.max_derived_nodes = std::max<std::size_t>(kDefaultNodeCap, 64 * b.explore.max_queue_length);
  b.converge.max_len = 2 * k + 2;
  b.converge.node_cap = b.explore.max_derived_nodes;
  return b;
}

}  // namespace fairsub
