#pragma once

// Specification language: tokens, abstract syntax and the parser.
//
// Grammar, loosest binding first:
//
//   expr     := quant | tier
//   quant    := ('exists' | 'forall') '[' ident (',' ident)* ']' '.' expr
//   tier     := disj (('implies' | '->') disj)*
//             | disj (('since' | 'S') bound? disj)*
//   disj     := conj (('or' | '||') conj)*
//   conj     := unary (('and' | '&&') unary)*
//   unary    := ('not' | '!' | 'pre' | 'Y') unary
//             | ('once' | 'P' | 'always' | 'H') bound? unary
//             | quant | primary
//   primary  := atom | '$' '{' ident '}' | '(' expr ')'
//   bound    := '[' number ':' number? ']'
//
// Binary operators are left associative. 'implies' and 'since' share the
// lowest tier and may not be mixed without parentheses.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pastmon/options.hpp"
#include "pastmon/value.hpp"

namespace pastmon {

enum class TokenKind {
  keyword,
  symbol,
  string,
  number,
  identifier,
};

struct Token {
  TokenKind kind;
  std::string text;  // keyword/symbol/identifier spelling, or decoded string contents
  double number = 0.0;
  std::size_t offset = 0;
  std::size_t length = 0;  // characters of source text covered

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  friend bool operator==(const Token&, const Token&) = default;
};

std::vector<Token> tokenize(std::string_view input);

/// Closed time window [lower, upper]; no upper means unbounded above.
struct TimeBound {
  double lower = 0.0;
  std::optional<double> upper;
  friend bool operator==(const TimeBound&, const TimeBound&) = default;
};

enum class ConstraintKind {
  bare_true,      // {key}
  equals_bool,    // {key: true}
  equals_string,  // {key: "text"}
  equals_number,  // {key: 3}
  compare,        // {key > 3}
  ref_var,        // {key: *v}
};

enum class CompareOp { lt, le, gt, ge, eq, ne };

const char* to_string(CompareOp op);

struct FieldConstraint {
  std::string key;
  ConstraintKind kind = ConstraintKind::bare_true;
  CompareOp op = CompareOp::eq;
  ScalarValue operand;
  std::string variable;

  friend bool operator==(const FieldConstraint&, const FieldConstraint&) = default;
  friend auto operator<=>(const FieldConstraint&, const FieldConstraint&) = default;
};

enum class ExprKind {
  atomic,
  custom,
  negation,
  conjunction,
  disjunction,
  implication,
  previous,
  once,
  historically,
  since,
  exists,
  forall,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind = ExprKind::atomic;
  std::vector<FieldConstraint> constraints;  // atomic
  std::string name;                          // custom predicate
  std::optional<TimeBound> bound;            // once, historically, since
  std::vector<std::string> variables;        // exists, forall
  ExprPtr lhs;                               // operand of unary operators
  ExprPtr rhs;

  std::size_t arity() const { return rhs ? 2 : (lhs ? 1 : 0); }
};

bool operator==(const Expr& a, const Expr& b);

ExprPtr make_atomic(std::vector<FieldConstraint> constraints);
ExprPtr make_custom(std::string name);
ExprPtr make_unary(ExprKind kind, ExprPtr operand, std::optional<TimeBound> bound = {});
ExprPtr make_binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs, std::optional<TimeBound> bound = {});
ExprPtr make_quantifier(ExprKind kind, std::vector<std::string> variables, ExprPtr body);

ExprPtr parse(std::span<const Token> tokens);
ExprPtr parse(std::string_view input);

/// Checks that every construct is legal for the configured time model and
/// semantics, and that quantifier variables are well scoped. Returns `expr`.
ExprPtr validate(const ExprPtr& expr, const MonitorOptions& options);

/// Fully parenthesized rendering that parses back to the same tree.
std::string to_string(const Expr& expr);

}  // namespace pastmon
