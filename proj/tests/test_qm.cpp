#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace fairsub;

namespace {

QueueMachine one_state(const std::vector<std::string>& a_push, const std::vector<std::string>& b_push,
                       const std::vector<std::string>& end_push) {
  QueueMachine m;
  m.states = {"p"};
  m.input_alphabet = {"a", "b"};
  m.queue_alphabet = {"a", "b", "$"};
  m.initial_symbol = "$";
  m.start = "p";
  m.delta[{"p", "a"}] = {"p", a_push};
  m.delta[{"p", "b"}] = {"p", b_push};
  m.delta[{"p", "$"}] = {"p", end_push};
  return m;
}

QueueMachine eraser() { return one_state({}, {}, {}); }
QueueMachine copier() { return one_state({"a"}, {"b"}, {"$"}); }

std::vector<std::vector<std::string>> words_up_to(std::size_t n) {
  std::vector<std::vector<std::string>> all{{}};
  for (std::size_t i = 0; i < all.size(); ++i)
    if (all[i].size() < n)
      for (const char* c : {"a", "b"}) {
        auto w = all[i];
        w.push_back(c);
        all.push_back(w);
      }
  return all;
}

}  // namespace

TEST_CASE("queue machine simulation") {
  for (const auto& x : words_up_to(4)) {
    auto r = qm_run(eraser(), x, 100);
    REQUIRE(r.accepted);
    REQUIRE(r.steps == x.size() + 1);
    auto c = qm_run(copier(), x, 50);
    REQUIRE_FALSE(c.accepted);
    REQUIRE(c.queue.size() == x.size() + 1);
  }
  auto first = qm_run(copier(), {}, 1);
  CHECK(first.steps == 1);
  CHECK(first.queue == std::vector<std::string>{"$"});
  CHECK_THROWS_AS(qm_run(eraser(), {"z"}, 10), Error);
}

TEST_CASE("queue machine json") {
  auto j = to_json(copier());
  auto m = queue_machine_from_json(j);
  CHECK(m.delta == copier().delta);
  CHECK(qm_word(nlohmann::json("a b")) == std::vector<std::string>{"a", "b"});
  CHECK(qm_word(nlohmann::json::array({"$"})) == std::vector<std::string>{"$"});
  CHECK(qm_word(nlohmann::json("")).empty());

  auto missing = j;
  missing["delta"].erase(0);
  CHECK_THROWS_AS(queue_machine_from_json(missing), Error);
  auto bad_start = j;
  bad_start["start"] = "z";
  CHECK_THROWS_AS(queue_machine_from_json(bad_start), Error);
  CHECK_THROWS_AS(queue_machine_from_json(nlohmann::json::object()), Error);
}

TEST_CASE("symbol tags") {
  auto tags = detail::symbol_tags(copier());
  CHECK(tags.at("a").str() == "q_a");
  CHECK(tags.at("$").str() == "q_x24");

  auto clash = one_state({}, {}, {});
  clash.queue_alphabet.push_back("E");
  clash.delta[{"p", "E"}] = {"p", {}};
  CHECK_THROWS_AS(encode_correctness(clash, {}), Error);

  auto collide = one_state({}, {}, {});
  collide.queue_alphabet.push_back("A");
  collide.delta[{"p", "A"}] = {"p", {}};
  CHECK_THROWS_AS(encode_correctness(collide, {}), Error);
}

TEST_CASE("encoded types are well formed") {
  for (const auto& m : {eraser(), copier()})
    for (const auto& x : words_up_to(2)) {
      auto [s, t] = encode_correctness(m, x);
      REQUIRE(check_well_formed(s).ok);
      REQUIRE(check_well_formed(t).ok);
      auto [cs, ct] = encode_convergence(m, x);
      REQUIRE(check_well_formed(cs).ok);
      REQUIRE(check_well_formed(ct).ok);
    }
}

TEST_CASE("the queue side starts with the input, the initial symbol and the marker") {
  std::vector<std::string> x{"a", "b", "b"};
  auto t = encode_correctness(eraser(), x).second;
  std::vector<std::string> expected{"q_a", "q_b", "q_b", "q_x24", "e_mark"};
  for (const auto& tag : expected) {
    REQUIRE(t.is_output());
    REQUIRE(t.branches().size() == 1);
    CHECK(t.branches()[0].tag.str() == tag);
    t = t.at(t.branches()[0].target);
  }
  CHECK(t.is_input());
}

TEST_CASE("encoded compositions have no internal choice") {
  auto [s, t] = encode_correctness(copier(), {"a", "b"});
  std::vector<Composition> todo{{s, t}};
  std::set<std::string> seen;
  for (std::size_t i = 0; i < todo.size() && i < 200; ++i) {
    auto steps = composition_steps(todo[i]);
    int left = 0, right = 0;
    for (const auto& [step, next] : steps) {
      (step.side == Side::Left ? left : right)++;
      if (seen.insert(next.left.key() + "|" + next.right.key()).second) todo.push_back(next);
    }
    REQUIRE(left <= 1);
    REQUIRE(right <= 1);
  }
}

TEST_CASE("correctness tracks acceptance") {
  for (const auto& x : words_up_to(4)) {
    auto run = qm_run(eraser(), x, 1000);
    REQUIRE(run.accepted);
    auto [s, t] = encode_correctness(eraser(), x);
    auto b = qm_auto_bounds(eraser(), x, 1000);
    REQUIRE(correct_bounded(s, t, b.explore).outcome == Outcome::Yes);
  }
  auto [s, t] = encode_correctness(copier(), {"a"});
  auto b = qm_auto_bounds(copier(), {"a"}, 50);
  CHECK(qm_encoded_dequeues(copier(), {"a"}, 50) == std::nullopt);
  // The machine never accepts, so the encoding can never be correct.
  CHECK(correct_bounded(s, t, b.explore).outcome != Outcome::Yes);
}

TEST_CASE("convergence tracks acceptance") {
  auto [s, t] = encode_convergence(eraser(), {"a"});
  auto b = qm_auto_bounds(eraser(), {"a"}, 1000);
  CHECK(converge_bounded(s, t, b.converge).outcome == Outcome::Yes);

  auto [cs, ct] = encode_convergence(copier(), {"a"});
  auto cb = qm_auto_bounds(copier(), {"a"}, 8);
  CHECK(converge_bounded(cs, ct, cb.converge).outcome != Outcome::Yes);
}

TEST_CASE("dequeue count of the encoded run") {
  // x, $, the marker, then the marker again after the queue drained.
  for (const auto& x : words_up_to(3)) REQUIRE(qm_encoded_dequeues(eraser(), x, 100) == x.size() + 3);
}
