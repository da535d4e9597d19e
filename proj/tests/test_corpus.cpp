#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace fairsub;

TEST_CASE("generation is deterministic") {
  RandomTypeSpec spec;
  auto a = generate_corpus(spec, 100);
  auto b = generate_corpus(spec, 100);
  REQUIRE(a.size() == 100);
  for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(print_system(a[i]) == print_system(b[i]));
  spec.seed = 43;
  auto c = generate_corpus(spec, 100);
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i].key() == c[i].key();
  CHECK(same < 100);
}

TEST_CASE("generated types respect the spec") {
  RandomTypeSpec spec;
  spec.max_states = 5;
  spec.max_branching = 2;
  for (const auto& g : generate_corpus(spec, 300)) {
    REQUIRE(check_well_formed(g).ok);
    REQUIRE(g.is_canonical());
    REQUIRE(g.size() <= 5);
    for (auto s : g.reachable()) {
      // Repair may add one branch to end.
      REQUIRE(g.body(s).branches.size() <= spec.max_branching + 1);
      for (const auto& b : g.body(s).branches) REQUIRE((b.tag.str() == "a" || b.tag.str() == "b" || b.tag.str() == "c"));
    }
  }
}

TEST_CASE("full end bias sends every branch to end") {
  RandomTypeSpec spec;
  spec.end_bias = 1.0;
  for (const auto& g : generate_corpus(spec, 100))
    for (auto s : g.reachable()) {
      if (g.body(s).is_end()) continue;
      bool direct = false;
      for (const auto& b : g.body(s).branches) direct = direct || g.body(b.target).is_end();
      REQUIRE(direct);
    }
}

TEST_CASE("the shared corpus is well formed and diverse") {
  const auto& c = oracle::corpus();
  REQUIRE(c.size() == 1000);
  std::set<std::string> keys;
  std::size_t cyclic = 0;
  for (const auto& g : c) {
    REQUIRE(check_well_formed(g).ok);
    REQUIRE(g.size() <= 8);
    keys.insert(g.key());
    cyclic += !is_finite(g);
  }
  CHECK(keys.size() > 500);
  CHECK(cyclic > 100);
}

TEST_CASE("invalid specs are rejected") {
  RandomTypeSpec spec;
  spec.max_states = 1;
  CHECK_THROWS_AS(generate_corpus(spec, 1), Error);
  spec = {};
  spec.end_bias = 0.0;
  CHECK_THROWS_AS(generate_corpus(spec, 1), Error);
  spec = {};
  spec.tag_universe.clear();
  CHECK_THROWS_AS(generate_corpus(spec, 1), Error);
}
