#pragma once

// Seeded random session types for property suites and the `gen` command.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fairsub/errors.hpp"
#include "fairsub/graph.hpp"
#include "fairsub/syntax.hpp"

namespace fairsub {

struct RandomTypeSpec {
  std::size_t max_states = 8;     // including the end state
  std::size_t max_branching = 3;
  std::vector<Tag> tag_universe = {Tag("a"), Tag("b"), Tag("c")};
  double end_bias = 0.3;          // probability that a branch goes straight to end
  std::uint64_t seed = 42;
};

namespace detail {

// Explicit arithmetic on the raw engine output keeps streams identical
// across standard libraries.
struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine() % n); }
  double unit() { return static_cast<double>(engine() >> 11) * (1.0 / 9007199254740992.0); }
};

inline SessionType random_type(Rng& rng, const RandomTypeSpec& spec) {
  const std::size_t choices = 1 + rng.below(spec.max_states - 1);
  const std::size_t width = std::min(spec.max_branching, spec.tag_universe.size());
  GraphBuilder gb;
  std::vector<StateId> ids;
  for (std::size_t i = 0; i < choices; ++i) ids.push_back(gb.add_choice());
  StateId end = gb.add_end();
  std::vector<std::vector<Branch>> out(choices);
  for (std::size_t i = 0; i < choices; ++i) {
    Polarity p = rng.below(2) ? Polarity::Input : Polarity::Output;
    std::vector<Tag> pool = spec.tag_universe;
    std::size_t k = 1 + rng.below(width);
    for (std::size_t j = 0; j < k; ++j) {
      std::size_t pick = rng.below(pool.size());
      Tag tag = pool[pick];
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
      StateId target = rng.unit() < spec.end_bias ? end : ids[rng.below(choices)];
      out[i].push_back(Branch{p, tag, target});
    }
  }
  // Repair: every choice state that cannot reach end gets a branch to end.
  std::vector<bool> good(choices, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < choices; ++i) {
      if (good[i]) continue;
      for (const auto& b : out[i])
        if (b.target == end || good[b.target]) {
          good[i] = true;
          changed = true;
          break;
        }
    }
    if (changed) continue;
    for (std::size_t i = 0; i < choices; ++i) {
      if (good[i]) continue;
      Tag fresh;
      bool found = false;
      for (const auto& t : spec.tag_universe) {
        bool used = false;
        for (const auto& b : out[i]) used = used || b.tag == t;
        if (!used) {
          fresh = t;
          found = true;
          break;
        }
      }
      if (found)
        out[i].push_back(Branch{out[i].front().polarity, fresh, end});
      else
        out[i].back().target = end;
      good[i] = true;
      changed = true;
      break;
    }
  }
  for (std::size_t i = 0; i < choices; ++i)
    for (const auto& b : out[i]) gb.add_branch(ids[i], b.polarity, b.tag, b.target);
  return gb.build(ids[0]).canonical();
}

}  // namespace detail

/// `count` well-formed types, reproducible for a given spec.
inline std::vector<SessionType> generate_corpus(const RandomTypeSpec& spec, std::size_t count) {
  if (spec.max_states < 2) throw Error("max_states must be at least 2");
  if (spec.max_branching < 1 || spec.tag_universe.empty()) throw Error("need at least one tag and branch");
  if (!(spec.end_bias > 0.0 && spec.end_bias <= 1.0)) throw Error("end_bias must lie in (0, 1]");
  detail::Rng rng(spec.seed);
  std::vector<SessionType> r;
  r.reserve(count);
  for (std::size_t i = 0; i < count; ++i) r.push_back(detail::random_type(rng, spec));
  return r;
}

}  // namespace fairsub
