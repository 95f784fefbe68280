#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "pastmon/dense.hpp"

using namespace pastmon;
using testing::run_dense;
using testing::value_at;

namespace {

MonitorOptions dense() { return MonitorOptions{}.dense().disable_condensing(); }

oracle::DenseTrace figure_trace() {
  oracle::DenseTrace tr;
  tr.stamps = {0, 4, 7, 9};
  tr.states = {
      {{"p1", false}, {"nd", 1.23}, {"enm1", std::string("A")}},
      {{"p1", true}, {"nd", 0.01}, {"enm1", std::string("A")}},
      {{"p1", true}, {"nd", 9.12}, {"enm1", std::string("B")}},
      {{"p1", false}, {"nd", 9.18}, {"enm1", std::string("C")}},
  };
  return tr;
}

oracle::DenseTrace step_signal() {
  oracle::DenseTrace tr;
  tr.stamps = {0, 3, 6};
  tr.states = {{{"x", -1.1}}, {{"x", 1.1}}, {{"x", 1.1}}};
  return tr;
}

oracle::DenseTrace random_dense(std::mt19937_64& rng, const oracle::TraceShape& shape,
                                std::size_t length, double unit) {
  oracle::DenseTrace tr;
  tr.states = oracle::random_trace(rng, shape, length);
  double t = 0;
  for (std::size_t i = 0; i < length; ++i) {
    tr.stamps.push_back(t);
    t += unit * std::uniform_int_distribution<int>(1, 6)(rng);
  }
  return tr;
}

}  // namespace

TEST_CASE("segments condense by value") {
  std::vector<BooleanSegment> s{{0, 2, true}, {2, 5, true}};
  CHECK(condense(s) == std::vector<BooleanSegment>{{0, 5, true}});
  std::vector<BooleanSegment> d{{0, 2, true}, {2, 5, false}};
  CHECK(condense(d) == d);
  CHECK(condense(std::vector<BooleanSegment>{}).empty());
}

TEST_CASE("first message reports no span") {
  auto m = make_monitor("{p}", MonitorOptions{}.dense());
  CHECK(m.update(R"({"time": 0, "p": true})").empty());
  CHECK(m.now() == 0);
}

TEST_CASE("once latches on the dense example") {
  auto v = run_dense("once {p1}", figure_trace(), MonitorOptions{}.dense());
  REQUIRE(v.size() == 2);
  CHECK(v[0] == VerdictEntry{0, false});
  CHECK(v[1] == VerdictEntry{4, true});
}

TEST_CASE("since on the dense example holds on [7, 9)") {
  auto v = run_dense(R"({p1} since {enm1: "B"})", figure_trace(), MonitorOptions{}.dense());
  REQUIRE(v.size() == 2);
  CHECK(v[0] == VerdictEntry{0, false});
  CHECK(v[1] == VerdictEntry{7, true});
}

TEST_CASE("robust dense operators on a step signal") {
  auto robust = MonitorOptions{}.dense().robust();
  auto v = run_dense("once {x > 0}", step_signal(), robust);
  REQUIRE(v.size() == 2);
  CHECK(v[0] == VerdictEntry{0, -1.1});
  CHECK(v[1] == VerdictEntry{3, 1.1});
  v = run_dense("H[0:2] {x > 0}", step_signal(), robust);
  REQUIRE(v.size() == 2);
  CHECK(v[0] == VerdictEntry{0, -1.1});
  CHECK(v[1] == VerdictEntry{5, 1.1});
  v = run_dense("not once[0:1] {x > 0}", step_signal(), robust);
  CHECK(value_at(v, 2.5) == VerdictValue{1.1});
  CHECK(value_at(v, 3.5) == VerdictValue{-1.1});
}

TEST_CASE("constant signals propagate through unary operators") {
  oracle::DenseTrace tr;
  tr.stamps = {0, 2, 5};
  tr.states = {{{"x", 2.0}}, {{"x", 2.0}}, {{"x", 2.0}}};
  auto robust = MonitorOptions{}.dense().robust();
  for (const char* s : {"once {x > 0}", "H {x > 0}", "H[1:2] {x > 0}", "once[0.5:3] {x > 0}"}) {
    auto v = run_dense(s, tr, robust);
    CAPTURE(s);
    REQUIRE(!v.empty());
    for (double t : {0.0, 1.0, 2.5, 4.9}) {
      // Windows not yet reached by any input hold the empty-window value.
      auto x = std::get<double>(value_at(v, t));
      CHECK((x == 2.0 || std::isinf(x)));
    }
  }
  auto v = run_dense("not {x > 0}", tr, robust);
  CHECK(value_at(v, 3) == VerdictValue{-2.0});
}

TEST_CASE("finish reports the last span") {
  auto m = make_monitor("{p}", MonitorOptions{}.dense());
  m.update(R"({"time": 0, "p": true})");
  m.update(R"({"time": 1.5, "p": false})");
  auto v = m.finish(4);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == VerdictEntry{1.5, false});
  CHECK(m.now() == 4);
}

TEST_CASE("random boolean dense formulas match the grid reference") {
  std::mt19937_64 rng(31);
  oracle::ExprShape shape;
  shape.allow_previous = false;
  shape.bound_unit = 0.25;
  shape.max_bound = 12;
  oracle::TraceShape tshape;
  for (int i = 0; i < 300; ++i) {
    auto e = oracle::random_expr(rng, shape);
    auto tr = random_dense(rng, tshape, 10, 0.25);
    const std::string text = to_string(*e);
    CAPTURE(text);
    auto v = run_dense(text, tr, dense());
    oracle::DenseOracle<bool> ref(tr, 0.25);
    auto expected = ref.eval(*e);
    for (long g = 0; g < ref.points(); ++g) {
      CAPTURE(ref.time_of(g));
      CHECK(std::get<bool>(value_at(v, ref.time_of(g))) == expected[g]);
    }
  }
}

TEST_CASE("random robust dense formulas match the grid reference") {
  std::mt19937_64 rng(32);
  oracle::ExprShape shape;
  shape.allow_previous = false;
  shape.numeric_atoms = true;
  shape.bound_unit = 0.25;
  shape.max_bound = 12;
  oracle::TraceShape tshape;
  tshape.embed_booleans = true;
  for (int i = 0; i < 300; ++i) {
    auto e = oracle::random_expr(rng, shape);
    auto tr = random_dense(rng, tshape, 10, 0.25);
    for (auto& s : tr.states)
      for (auto& [k, v] : s) v = std::get<double>(v) * std::uniform_int_distribution<int>(1, 3)(rng);
    const std::string text = to_string(*e);
    CAPTURE(text);
    auto v = run_dense(text, tr, MonitorOptions{}.dense().robust().disable_condensing());
    oracle::DenseOracle<double> ref(tr, 0.25);
    auto expected = ref.eval(*e);
    for (long g = 0; g < ref.points(); ++g) {
      CAPTURE(ref.time_of(g));
      CHECK(std::get<double>(value_at(v, ref.time_of(g))) == expected[g]);
    }
  }
}
