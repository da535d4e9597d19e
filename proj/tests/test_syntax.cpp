#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace fairsub;
using oracle::T;

TEST_CASE("tags and labels") {
  CHECK(Tag("req").str() == "req");
  CHECK_THROWS_AS(Tag("Req"), Error);
  CHECK_THROWS_AS(Tag(""), Error);
  CHECK_THROWS_AS(Tag("end"), Error);
  CHECK(dual(dual(in("a"))) == in("a"));
  CHECK(dual(out("a")) == in("a"));
  CHECK(to_string(parse_word("?req !resp")) == "?req !resp");
  CHECK(to_string(LabelWord{}) == "ε");
  auto w = parse_word("?a !b !c");
  CHECK(dual(w).size() == w.size());
}

TEST_CASE("parse basic systems") {
  auto e = parse_system("T = end;");
  CHECK(e.is_end());
  CHECK(e.size() == 1);

  auto s = parse_system("S = !tc.S + !done.S1; S1 = ?tm.S1 + ?over.end;");
  CHECK(s.size() == 3);
  CHECK(s.is_output());
  CHECK(out(s) == std::vector<Tag>{Tag("done"), Tag("tc")});

  auto c = parse_system("# comment\nS = ?a.(!b.end + !c.S); # trailing\n");
  CHECK(c.is_input());
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_system("X = !a.end + ?b.end;"), ParseError);
  CHECK_THROWS_AS(parse_system("X = Y; Y = X;"), ParseError);
  CHECK_THROWS_AS(parse_system("X = !a.Y;"), ParseError);
  CHECK_THROWS_AS(parse_system("X = !a.end + !a.end;"), ParseError);
  CHECK_THROWS_AS(parse_system("X = !a.end; X = end;"), ParseError);
  try {
    parse_system("S = !a.end;\nT = ?b.;");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).rfind("2:", 0) == 0);
  }
}

TEST_CASE("lenient parsing reports instead of rejecting") {
  ParseOptions opt;
  opt.strict = false;
  auto sys = parse_system_full("X = !a.end + ?b.end;", opt);
  auto r = check_well_formed(sys.root);
  REQUIRE_FALSE(r.ok);
  CHECK(r.violations.front().condition == "mixed-choice");

  auto dup = parse_system_full("S = !a.end + !a.end;", opt);
  auto rd = check_well_formed(dup.root);
  REQUIRE_FALSE(rd.ok);
  CHECK(rd.violations.front().condition == "1");
}

TEST_CASE("well-formedness") {
  CHECK(check_well_formed(T("S = !tc.S + !done.S1; S1 = ?tm.S1 + ?over.end;")).ok);
  auto r = check_well_formed(T("S = !a.S;"));
  REQUIRE_FALSE(r.ok);
  CHECK(r.violations.front().condition == "3");
  auto r2 = check_well_formed(T("S = !a.S + !b.X; X = ?c.X;"));
  REQUIRE_FALSE(r2.ok);
  CHECK(r2.violations.front().condition == "3");
  for (const auto& g : oracle::corpus()) REQUIRE(check_well_formed(g).ok);
}

TEST_CASE("duality") {
  CHECK(dual(T("end")).is_end());
  auto s = T("S = !tc.S + !done.S1; S1 = ?tm.S1 + ?over.end;");
  auto g = T("G = ?tc.G + ?done.G1; G1 = !tm.G1 + !over.end;");
  CHECK(equivalent(dual(s), g));
  for (const auto& x : oracle::corpus()) {
    REQUIRE(oracle::bisimilar(dual(dual(x)), x));
    REQUIRE(check_well_formed(dual(x)).ok);
  }
}

TEST_CASE("canonical forms") {
  auto two = parse_system("X = !a.Y; Y = !a.X;");
  auto one = parse_system("Z = !a.Z;");
  CHECK(two.canonical().size() == 1);
  CHECK(equivalent(two, one));
  CHECK(canonical(T("end")).is_end());
  CHECK_FALSE(equivalent(T("!a.end"), T("?a.end")));
  auto folded = parse_system("S = ?req.!resp.S + ?stop.end;");
  auto unfolded = parse_system("S = ?req.!resp.(?req.!resp.S + ?stop.end) + ?stop.end;");
  CHECK(equivalent(folded, unfolded));
  CHECK(oracle::bisimilar(folded, unfolded));

  for (const auto& g : oracle::corpus()) {
    auto c = g.canonical();
    REQUIRE(c.key() == c.canonical().key());
    REQUIRE(oracle::bisimilar(g, c));
    REQUIRE(c.size() == oracle::minimal_size(g));
  }
}

TEST_CASE("equivalence agrees with the bisimulation oracle") {
  const auto& c = oracle::corpus();
  for (std::size_t i = 0; i + 1 < 400; ++i) {
    const auto& a = c[i];
    const auto& b = c[(i * 13 + 5) % c.size()];
    REQUIRE(equivalent(a, b) == oracle::bisimilar(a, b));
    REQUIRE(equivalent(a, a));
  }
}

TEST_CASE("printing round-trips") {
  for (const auto& g : oracle::corpus()) {
    REQUIRE(equivalent(parse_system(print_system(g, "S")), g));
    REQUIRE(equivalent(parse_type(to_string(g)), g));
  }
  CHECK(to_string(T("!a.?b.end")) == "!a.?b.end");
  CHECK(to_string(T("?a.end + ?b.!c.end")) == "?a.end + ?b.!c.end");
}
