#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace fairsub;
using oracle::T;

namespace {

const char* kStream = "S = ?req.!resp.S + ?stop.!stop.end;";
const char* kBatch = "T = ?req.T + ?stop.T1; T1 = !resp.T1 + !stop.end;";
const char* kDeep = "S = !a.?c.S1 + !b.(?c.S2 + ?d.S3); S1 = !x.end; S2 = !y.end; S3 = !z.end;";

std::set<std::string> as_set(const std::vector<LabelWord>& ws) {
  std::set<std::string> r;
  for (const auto& w : ws) r.insert(to_string(w));
  return r;
}

}  // namespace

TEST_CASE("synchronous transitions") {
  CHECK(sync_transitions(T("end")).empty());
  auto t = sync_transitions(T("!a.?b.end"));
  REQUIRE(t.size() == 1);
  CHECK(t[0].first == out("a"));
  CHECK(equivalent(t[0].second, T("?b.end")));
  auto g = T("T = ?tm.T + ?over.T1; T1 = !tc.T1 + !done.end;");
  auto gt = sync_transitions(g);
  REQUIRE(gt.size() == 2);
  CHECK(gt[0].first.polarity == Polarity::Input);
  CHECK(gt[1].first.polarity == Polarity::Input);
}

TEST_CASE("deep input enabling") {
  auto s = T(kDeep);
  CHECK(input_enabled(s, Tag("c")));
  CHECK_FALSE(input_enabled(s, Tag("d")));
  auto loop = T("S = !a.S + !b.?c.end;");
  CHECK(input_enabled(loop, Tag("c")));
  CHECK_FALSE(input_enabled(T("end"), Tag("a")));
  CHECK(inp(s) == std::vector<Tag>{Tag("c")});
  CHECK(inp(T("end")).empty());
  CHECK(out(T("end")).empty());
  CHECK(out(T("S = !tc.S + !done.?x.end;")) == std::vector<Tag>{Tag("done"), Tag("tc")});
}

TEST_CASE("input derivatives") {
  auto s = T(kDeep);
  CHECK(equivalent(input_derivative(s, Tag("c")), T("!a.!x.end + !b.!y.end")));
  CHECK_THROWS_AS(input_derivative(s, Tag("d")), NotEnabled);
  auto loop = T("S = !a.S + !b.?c.!t.end;");
  CHECK(equivalent(input_derivative(loop, Tag("c")), T("X = !a.X + !b.!t.end;")));
  CHECK(input_derivative(T("?b.end"), Tag("b")).is_end());
}

TEST_CASE("transitions include deep inputs") {
  auto t = transitions(T("!a.?b.end"));
  REQUIRE(t.size() == 2);
  CHECK(t[0].first == out("a"));
  CHECK(equivalent(t[0].second, T("?b.end")));
  CHECK(t[1].first == in("b"));
  CHECK(equivalent(t[1].second, T("!a.end")));
  CHECK(transitions(T("end")).empty());
  auto s = T(kStream);
  bool found = false;
  for (const auto& [l, next] : transitions(s))
    if (l == in("req") && equivalent(next, T("S = !resp.(?req.S + ?stop.!stop.end);"))) found = true;
  CHECK(found);
}

TEST_CASE("transitions agree with the deep input oracle") {
  for (const auto& g : oracle::corpus()) {
    auto lib = transitions(g);
    auto ref = oracle::steps(g);
    REQUIRE(lib.size() == ref.size());
    for (std::size_t i = 0; i < lib.size(); ++i) {
      REQUIRE(lib[i].first == ref[i].first);
      REQUIRE(oracle::bisimilar(lib[i].second, ref[i].second));
    }
  }
}

TEST_CASE("word derivatives") {
  auto s = T(kStream);
  CHECK(equivalent(derivative_word(s, {}).type, s));
  auto d = derivative_word(s, parse_word("?req ?req ?stop"));
  CHECK(equivalent(d.type, T("!resp.!resp.!stop.end")));
  auto b = T(kBatch);
  auto d2 = derivative_word(b, parse_word("?req ?stop !resp"));
  CHECK(equivalent(d2.type, T("T1 = !resp.T1 + !stop.end;")));
  try {
    derivative_word(b, parse_word("?req !stop"));
    FAIL("expected NotEnabled");
  } catch (const NotEnabled& e) {
    CHECK(e.position() == 1);
  }
}

TEST_CASE("trace enumeration") {
  auto e = traces_up_to(T("end"), 3);
  REQUIRE(e.size() == 1);
  CHECK(e[0].empty());

  // Brute force from the shape (?req)^m ?stop (!resp)^n !stop.
  std::set<std::string> shape;
  for (int m = 0; m <= 4; ++m)
    for (int n = 0; m + n + 2 <= 4; ++n) {
      std::string w;
      for (int i = 0; i < m; ++i) w += "?req ";
      w += "?stop ";
      for (int i = 0; i < n; ++i) w += "!resp ";
      w += "!stop";
      shape.insert(w);
    }
  auto batch = as_set(traces_up_to(T(kBatch), 4));
  CHECK(batch.size() == 6);
  CHECK(batch == shape);
  CHECK(batch == oracle::traces(T(kBatch), 4));

  auto stream = traces_up_to(T(kStream), 6);
  CHECK(as_set(stream) == oracle::traces(T(kStream), 6));
  CHECK(stream.size() == oracle::traces(T(kStream), 6).size());
}

TEST_CASE("trace enumeration agrees with the oracle on the corpus") {
  const auto& c = oracle::corpus();
  for (std::size_t i = 0; i < 300; ++i) REQUIRE(as_set(traces_up_to(c[i], 5)) == oracle::traces(c[i], 5));
}

TEST_CASE("output path witnesses") {
  CHECK(output_path_witness(T("?b.end"), Tag("b")).empty());
  CHECK(to_string(output_path_witness(T("S = !a.S + !b.?c.end;"), Tag("c"))) == "!b");
  CHECK_THROWS_AS(output_path_witness(T("!a.end"), Tag("c")), NotEnabled);
}

TEST_CASE("enabled inputs have output-only witnesses") {
  std::size_t checked = 0;
  for (const auto& g : oracle::corpus())
    for (const auto& a : inp(g)) {
      auto w = output_path_witness(g, a);
      for (const auto& l : w) REQUIRE(l.polarity == Polarity::Output);
      auto at = derivative_word(g, w).type;
      REQUIRE(at.successor(in(a.str())).has_value());
      ++checked;
    }
  CHECK(checked > 0);
}

TEST_CASE("greatest fixpoint agrees with the reachability reading") {
  for (const auto& g : oracle::corpus())
    for (const std::string a : {"a", "b", "c"}) REQUIRE(input_enabled(g, Tag(a)) == oracle::deep_enabled(g, Tag(a)));
}

TEST_CASE("diamond property") {
  std::size_t squares = 0;
  for (const auto& g : oracle::corpus()) {
    auto ts = transitions(g);
    for (const auto& [li, si] : ts) {
      if (li.polarity != Polarity::Input) continue;
      for (const auto& [lo, so] : ts) {
        if (lo.polarity != Polarity::Output) continue;
        auto left = step(si, lo);
        auto right = step(so, li);
        REQUIRE(left.has_value());
        REQUIRE(right.has_value());
        REQUIRE(oracle::bisimilar(*left, *right));
        ++squares;
      }
    }
  }
  CHECK(squares > 0);
}

TEST_CASE("derivatives preserve well-formedness and outputs") {
  for (const auto& g : oracle::corpus())
    for (const auto& [l, next] : transitions(g)) {
      REQUIRE(check_well_formed(next).ok);
      if (l.polarity == Polarity::Input && g.is_output()) REQUIRE(out(next) == out(g));
    }
}

TEST_CASE("dual flips synchronous transitions") {
  for (const auto& g : oracle::corpus()) {
    auto a = sync_transitions(g);
    auto b = sync_transitions(dual(g));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      REQUIRE(dual(a[i].first) == b[i].first);
      REQUIRE(oracle::bisimilar(dual(a[i].second), b[i].second));
    }
  }
}

TEST_CASE("type store caps") {
  TypeStore small(2);
  CHECK_THROWS_AS(small.intern(T("!a.!b.!c.end")), ResourceExceeded);
  TypeStore store;
  auto id = store.intern(T(kBatch));
  CHECK(store.intern(T("T = ?req.T + ?stop.(T1); T1 = !resp.T1 + !stop.end;")) == id);
  CHECK(store.inp(id) == std::vector<Tag>{Tag("req"), Tag("stop")});
  CHECK_FALSE(store.finite(id));
  CHECK(store.dist(id) == 2);
}
