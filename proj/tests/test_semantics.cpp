#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace fairsub;
using oracle::T;

namespace {

const char* kDeadS = "S = !a.?a.end + !b.?b.end;";
const char* kDeadT = "T = !a.?a.end;";
const char* kSat = "S = !tc.S + !done.S1; S1 = ?tm.S1 + ?over.end;";

Configuration start(const SessionType& s, const SessionType& t) { return Configuration{s, {}, t, {}}; }

// Every configuration reachable from c, by plain breadth-first search with a
// queue cap; nullopt when the cap is hit.
std::optional<std::vector<Configuration>> reachable(const Configuration& c, std::size_t cap) {
  std::vector<Configuration> seen{c};
  std::set<std::string> keys{to_string(c)};
  for (std::size_t i = 0; i < seen.size(); ++i)
    for (auto& [step, n] : config_transitions(seen[i])) {
      if (n.left_queue.size() > cap || n.right_queue.size() > cap) return std::nullopt;
      if (keys.insert(to_string(n)).second) seen.push_back(n);
    }
  return seen;
}

}  // namespace

TEST_CASE("configuration transitions") {
  CHECK(config_transitions(start(T("end"), T("end"))).empty());
  CHECK(start(T("end"), T("end")).terminal());

  auto all = reachable(start(T(kDeadS), T(kDeadT)), 4);
  REQUIRE(all);
  bool stuck = false, done = false;
  for (const auto& c : *all) {
    if (to_string(c) == "[?b.end, a | ?a.end, b]") {
      stuck = true;
      CHECK(config_transitions(c).empty());
    }
    done = done || c.terminal();
  }
  CHECK(stuck);
  CHECK(done);
}

TEST_CASE("send and receive conserve messages") {
  for (std::size_t i = 0; i < 200; ++i) {
    const auto& g = oracle::corpus()[i];
    auto all = reachable(start(dual(g), g), 3);
    if (!all) continue;
    for (const auto& c : *all)
      for (const auto& [step, n] : config_transitions(c)) {
        auto before = c.left_queue.size() + c.right_queue.size();
        auto after = n.left_queue.size() + n.right_queue.size();
        if (step.action == Action::Send) REQUIRE(after == before + 1);
        if (step.action == Action::Receive) REQUIRE(after + 1 == before);
      }
  }
}

TEST_CASE("compliance") {
  auto v = compliant_bounded(T(kDeadS), T(kDeadT));
  REQUIRE(v.outcome == Outcome::No);
  CHECK(v.state == "[?b.end, a | ?a.end, b]");
  CHECK(v.trail.size() == v.path.size() + 1);

  auto ok = compliant_bounded(T("!a.?b.end"), T("?a.!b.end"));
  CHECK(ok.outcome == Outcome::Yes);
  auto all = reachable(start(T("!a.?b.end"), T("?a.!b.end")), 4);
  REQUIRE(all);
  CHECK(ok.states_explored == all->size());
  CHECK(all->size() == 5);

  ExplorationBounds tight;
  tight.max_queue_length = 2;
  auto stream = compliant_bounded(T("S = !a.S + !b.end;"), T("S = ?a.S + ?b.end;"), tight);
  CHECK(stream.outcome == Outcome::Unknown);
  CHECK_FALSE(stream.reason.empty());
}

TEST_CASE("composition steps") {
  CHECK(composition_steps(Composition{T(kDeadS), T(kDeadT)}).empty());
  auto two = composition_steps(Composition{T("!a.?b.end"), T("!b.?a.end")});
  REQUIRE(two.size() == 2);
  for (const auto& [step, c] : two) {
    auto next = composition_steps(c);
    REQUIRE(next.size() == 1);
    CHECK(next[0].second.left.is_end());
    CHECK(next[0].second.right.is_end());
  }
  CHECK(composition_steps(Composition{T("end"), T("end")}).empty());
}

TEST_CASE("correctness") {
  CHECK(correct_bounded(T("!a.?b.end"), T("?a.!b.end")).outcome == Outcome::Yes);
  auto dead = correct_bounded(T(kDeadS), T(kDeadT));
  REQUIRE(dead.outcome == Outcome::No);
  CHECK(dead.path.empty());
  auto sat = T(kSat);
  CHECK(correct_bounded(dual(sat), sat).outcome == Outcome::Yes);
}

TEST_CASE("cross check") {
  auto dead = cross_check_semantics(T(kDeadS), T(kDeadT));
  CHECK(dead.status == CrossStatus::Agree);
  CHECK(dead.correct.outcome == Outcome::No);
  auto ok = cross_check_semantics(T("!a.?b.end"), T("?a.!b.end"));
  CHECK(ok.status == CrossStatus::Agree);
  CHECK(ok.correct.outcome == Outcome::Yes);
}

TEST_CASE("duality yields correct and compliant pairs") {
  std::size_t small = 0, compliant_yes = 0;
  for (const auto& g : oracle::corpus()) {
    auto c = correct_bounded(dual(g), g);
    REQUIRE(c.outcome != Outcome::No);
    auto q = compliant_bounded(dual(g), g);
    REQUIRE(q.outcome != Outcome::No);
    if (g.size() <= 6) {
      ++small;
      REQUIRE(c.outcome == Outcome::Yes);
      if (q.outcome == Outcome::Yes) ++compliant_yes;
      // Queues only grow without bound along a single-polarity cycle.
      if (!oracle::single_polarity_cycle(g)) REQUIRE(q.outcome == Outcome::Yes);
    }
  }
  CHECK(small > 900);
  CHECK(compliant_yes > 0);
}

TEST_CASE("the two semantics never disagree") {
  const auto& c = oracle::corpus();
  std::size_t definite = 0;
  for (std::size_t i = 0; i < 2000; ++i) {
    const auto& s = c[i % c.size()];
    const auto& t = i < c.size() ? dual(c[(i * 7 + 3) % c.size()]) : dual(s);
    auto r = cross_check_semantics(s, t);
    REQUIRE(r.status != CrossStatus::Disagree);
    if (r.status == CrossStatus::Agree) ++definite;
  }
  CHECK(definite >= 1000);
}

TEST_CASE("verdicts are stable under larger bounds") {
  ExplorationBounds small, large;
  small.max_queue_length = 2;
  large.max_queue_length = 5;
  for (std::size_t i = 0; i < 200; ++i) {
    const auto& g = oracle::corpus()[i];
    auto a = compliant_bounded(dual(g), g, small);
    auto b = compliant_bounded(dual(g), g, large);
    if (a.outcome != Outcome::Unknown) REQUIRE(b.outcome == a.outcome);
  }
}
