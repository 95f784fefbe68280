#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pastmon/errors.hpp"
#include "pastmon/syntax.hpp"

using namespace pastmon;

namespace {

std::string round_trip(std::string_view text) { return to_string(*parse(text)); }

std::size_t error_position(std::string_view text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.position();
  }
  FAIL("no parse error for " << text);
  return 0;
}

}  // namespace

TEST_CASE("tokenizer splits symbols, keywords, strings and numbers") {
  auto tokens = tokenize(R"({nd > -9.5, enm1: "B\"x"} since[1:2] pre $ {f})");
  REQUIRE(tokens.size() == 20);
  CHECK(tokens[0].is(TokenKind::symbol, "{"));
  CHECK(tokens[1].is(TokenKind::identifier, "nd"));
  CHECK(tokens[3].kind == TokenKind::number);
  CHECK(tokens[3].number == -9.5);
  CHECK(tokens[7].kind == TokenKind::string);
  CHECK(tokens[7].text == "B\"x");
  CHECK(tokens[9].is(TokenKind::keyword, "since"));
  CHECK(tokens[15].is(TokenKind::keyword, "pre"));
  CHECK(tokens[15].offset == 37);
}

TEST_CASE("tokenizer reports offending offsets") {
  CHECK_THROWS_AS(tokenize("{p} # {q}"), ParseError);
  try {
    tokenize("{p} and \"open");
  } catch (const ParseError& e) {
    CHECK(e.position() == 8);
  }
}

TEST_CASE("operator spellings are interchangeable") {
  CHECK(round_trip("{a} && !{b} || {c}") == round_trip("({a} and not {b}) or {c}"));
  CHECK(round_trip("H[0:5]{open} -> P{x}") == round_trip("always[0:5] {open} implies once {x}"));
  CHECK(round_trip("Y {a} S {b}") == round_trip("(pre {a}) since {b}"));
}

TEST_CASE("precedence: not binds tighter than and, and than or, or than since") {
  CHECK(round_trip("not {a} and {b} or {c} since {d}") ==
        "((((not {a}) and {b}) or {c}) since {d})");
  CHECK(round_trip("{a} -> {b} -> {c}") == "(({a} implies {b}) implies {c})");
  CHECK(round_trip("once[2:] {a} or {b}") == "((once[2:] {a}) or {b})");
}

TEST_CASE("mixing implies and since needs parentheses") {
  CHECK_THROWS_AS(parse("{a} -> {b} since {c}"), ParseError);
  CHECK_NOTHROW(parse("{a} -> ({b} since {c})"));
}

TEST_CASE("atomic constraints keep their kinds") {
  auto e = parse(R"({p1: true, nd > 9.0, enm1: "B", k: 3, flag, v: *x})");
  REQUIRE(e->kind == ExprKind::atomic);
  REQUIRE(e->constraints.size() == 6);
  CHECK(e->constraints[0].kind == ConstraintKind::equals_bool);
  CHECK(e->constraints[1].kind == ConstraintKind::compare);
  CHECK(e->constraints[1].op == CompareOp::gt);
  CHECK(e->constraints[2].kind == ConstraintKind::equals_string);
  CHECK(e->constraints[3].kind == ConstraintKind::equals_number);
  CHECK(e->constraints[4].kind == ConstraintKind::bare_true);
  CHECK(e->constraints[5].kind == ConstraintKind::ref_var);
  CHECK(e->constraints[5].variable == "x");
}

TEST_CASE("parse errors carry positions") {
  CHECK(error_position("{p} since") == 9);
  CHECK(error_position("{p} and and {q}") == 8);
  CHECK(error_position("once[3:1] {p}") == 4);
  CHECK(error_position("({p}") == 4);
  try {
    parse("{p} since");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("since") != std::string::npos);
  }
}

TEST_CASE("quantifiers parse with variable lists") {
  auto e = parse("exists[var]. {key1: *var, key2: *var}");
  CHECK(e->kind == ExprKind::exists);
  CHECK(e->variables == std::vector<std::string>{"var"});
  CHECK_THROWS_AS(parse("forall[a, a]. {k: *a}"), ParseError);
}

TEST_CASE("printer output parses back to the same tree") {
  std::mt19937_64 rng(7);
  oracle::ExprShape shape;
  for (int i = 0; i < 300; ++i) {
    ExprPtr e = oracle::random_expr(rng, shape);
    const std::string text = to_string(*e);
    CAPTURE(text);
    CHECK(*parse(text) == *e);
  }
  CHECK(round_trip(R"({"odd key": "a\\b", n >= 0.25})") == R"({"odd key": "a\\b", n >= 0.25})");
}

TEST_CASE("validation depends on time model and semantics") {
  MonitorOptions discrete;
  MonitorOptions dense = MonitorOptions{}.dense();
  MonitorOptions robust = MonitorOptions{}.robust();
  CHECK_THROWS_AS(validate(parse("once[0:1.5] {p}"), discrete), UnsupportedFeature);
  CHECK_NOTHROW(validate(parse("once[0:1.5] {p}"), dense));
  CHECK_THROWS_AS(validate(parse("pre {p}"), dense), UnsupportedFeature);
  CHECK_THROWS_AS(validate(parse("exists[v]. {k: *v}"), robust), UnsupportedFeature);
  CHECK_THROWS_AS(validate(parse("exists[v]. {k: *v}"), dense), UnsupportedFeature);
  CHECK_THROWS_AS(validate(parse("{k: *v}"), discrete), UnsupportedFeature);
  CHECK_THROWS_AS(validate(parse("exists[v]. exists[v]. {k: *v}"), discrete), UnsupportedFeature);
  CHECK_NOTHROW(validate(parse("exists[v]. {k: *v}"), discrete));
  CHECK_THROWS_AS(validate(parse("{k > \"a\"}"), discrete), Error);
}
