#include "pastmon/syntax.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "pastmon/errors.hpp"

namespace pastmon {

ParseError::ParseError(std::size_t position, const std::string& message,
                       std::vector<std::string> expected)
    : Error("parse error at offset " + std::to_string(position) + ": " + message),
      position_(position),
      detail_(message),
      expected_(std::move(expected)) {}

const char* to_string(TimeModel model) {
  return model == TimeModel::discrete ? "discrete" : "dense";
}

const char* to_string(Semantics semantics) {
  return semantics == Semantics::boolean ? "boolean" : "robust";
}

const char* to_string(CompareOp op) {
  switch (op) {
    case CompareOp::lt: return "<";
    case CompareOp::le: return "<=";
    case CompareOp::gt: return ">";
    case CompareOp::ge: return ">=";
    case CompareOp::eq: return "==";
    case CompareOp::ne: return "!=";
  }
  return "?";
}

namespace {

constexpr std::array<std::string_view, 14> kKeywords = {
    "not", "and", "or", "implies", "since", "once", "always",
    "pre", "exists", "forall", "H", "P", "Y", "S"};

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::vector<Token> tokenize(std::string_view input) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = input.size();

  auto push = [&](TokenKind kind, std::string text, std::size_t start, double number = 0.0) {
    tokens.push_back(Token{kind, std::move(text), number, start, i - start});
  };

  while (i < n) {
    const char c = input[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;

    if (is_digit(c) || (c == '-' && i + 1 < n && is_digit(input[i + 1]))) {
      if (c == '-') ++i;
      while (i < n && is_digit(input[i])) ++i;
      if (i + 1 < n && input[i] == '.' && is_digit(input[i + 1])) {
        ++i;
        while (i < n && is_digit(input[i])) ++i;
      }
      if (i < n && (input[i] == 'e' || input[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (input[j] == '+' || input[j] == '-')) ++j;
        if (j < n && is_digit(input[j])) {
          i = j;
          while (i < n && is_digit(input[i])) ++i;
        }
      }
      std::string text(input.substr(start, i - start));
      push(TokenKind::number, text, start, std::strtod(text.c_str(), nullptr));
      continue;
    }

    if (is_ident_start(c)) {
      while (i < n && is_ident_char(input[i])) ++i;
      std::string word(input.substr(start, i - start));
      push(is_keyword(word) ? TokenKind::keyword : TokenKind::identifier, word, start);
      continue;
    }

    if (c == '"') {
      std::string text;
      ++i;
      bool closed = false;
      while (i < n) {
        char d = input[i++];
        if (d == '"') {
          closed = true;
          break;
        }
        if (d == '\\') {
          if (i >= n) break;
          char e = input[i++];
          switch (e) {
            case 'n': text += '\n'; break;
            case 't': text += '\t'; break;
            case 'r': text += '\r'; break;
            default: text += e; break;
          }
        } else {
          text += d;
        }
      }
      if (!closed) throw ParseError(start, "unterminated string literal");
      push(TokenKind::string, std::move(text), start);
      continue;
    }

    auto two = input.substr(i, 2);
    if (two == "&&" || two == "||" || two == "->" || two == "<=" || two == ">=" || two == "==" ||
        two == "!=") {
      i += 2;
      push(TokenKind::symbol, std::string(two), start);
      continue;
    }
    if (std::string_view("!{}[]():,.*$<>").find(c) != std::string_view::npos) {
      ++i;
      push(TokenKind::symbol, std::string(1, c), start);
      continue;
    }
    throw ParseError(start, std::string("unexpected character '") + c + "'");
  }
  return tokens;
}

// --- AST construction -------------------------------------------------------

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.constraints != b.constraints || a.name != b.name ||
      a.bound != b.bound || a.variables != b.variables)
    return false;
  auto same = [](const ExprPtr& x, const ExprPtr& y) {
    if (!x || !y) return !x && !y;
    return x == y || *x == *y;
  };
  return same(a.lhs, b.lhs) && same(a.rhs, b.rhs);
}

ExprPtr make_atomic(std::vector<FieldConstraint> constraints) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::atomic;
  e->constraints = std::move(constraints);
  return e;
}

ExprPtr make_custom(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::custom;
  e->name = std::move(name);
  return e;
}

ExprPtr make_unary(ExprKind kind, ExprPtr operand, std::optional<TimeBound> bound) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->lhs = std::move(operand);
  e->bound = bound;
  return e;
}

ExprPtr make_binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs, std::optional<TimeBound> bound) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  e->bound = bound;
  return e;
}

ExprPtr make_quantifier(ExprKind kind, std::vector<std::string> variables, ExprPtr body) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->variables = std::move(variables);
  e->lhs = std::move(body);
  return e;
}

// --- Parser -----------------------------------------------------------------

namespace {

class Parser {
 public:
  explicit Parser(std::span<const Token> tokens) : tokens_(tokens) {}

  ExprPtr parse_all() {
    if (tokens_.empty()) throw ParseError(0, "empty specification", {"expression"});
    ExprPtr e = parse_expr();
    if (!at_end()) {
      throw ParseError(peek().offset, "unexpected '" + peek().text + "' after expression",
                       {"end of input"});
    }
    return e;
  }

 private:
  enum class Tier { none, implication, since };

  bool at_end() const { return pos_ >= tokens_.size(); }
  const Token& peek() const { return tokens_[pos_]; }

  std::size_t end_offset() const {
    if (tokens_.empty()) return 0;
    const Token& last = tokens_.back();
    return last.offset + last.length;
  }

  std::size_t here() const { return at_end() ? end_offset() : peek().offset; }

  bool check(TokenKind kind, std::string_view text) const {
    return !at_end() && peek().is(kind, text);
  }
  bool check_symbol(std::string_view s) const { return check(TokenKind::symbol, s); }
  bool check_keyword(std::string_view s) const { return check(TokenKind::keyword, s); }

  bool accept_symbol(std::string_view s) {
    if (!check_symbol(s)) return false;
    ++pos_;
    return true;
  }

  const Token& expect_symbol(std::string_view s, std::string_view context) {
    if (!check_symbol(s)) {
      std::string found = at_end() ? "end of input" : "'" + peek().text + "'";
      throw ParseError(here(),
                       "expected '" + std::string(s) + "' " + std::string(context) + ", found " +
                           found,
                       {std::string(s)});
    }
    return tokens_[pos_++];
  }

  std::string previous_text() const { return pos_ > 0 ? tokens_[pos_ - 1].text : ""; }

  [[noreturn]] void fail_expected_expression() const {
    if (at_end()) {
      std::string prev = previous_text();
      throw ParseError(here(),
                       prev.empty() ? "expected expression"
                                    : "expected expression after '" + prev + "'",
                       {"expression"});
    }
    throw ParseError(here(), "expected expression, found '" + peek().text + "'", {"expression"});
  }

  bool check_quantifier() const { return check_keyword("exists") || check_keyword("forall"); }

  ExprPtr parse_expr() {
    if (check_quantifier()) return parse_quantifier();
    return parse_tier();
  }

  ExprPtr parse_quantifier() {
    ExprKind kind = peek().text == "exists" ? ExprKind::exists : ExprKind::forall;
    ++pos_;
    expect_symbol("[", "after quantifier");
    std::vector<std::string> vars;
    while (true) {
      if (at_end() || peek().kind != TokenKind::identifier)
        throw ParseError(here(), "expected variable name", {"identifier"});
      const Token& tok = tokens_[pos_++];
      if (std::find(vars.begin(), vars.end(), tok.text) != vars.end())
        throw ParseError(tok.offset, "duplicate variable '" + tok.text + "'");
      vars.push_back(tok.text);
      if (accept_symbol(",")) continue;
      expect_symbol("]", "to close variable list");
      break;
    }
    expect_symbol(".", "after variable list");
    if (at_end()) fail_expected_expression();
    return make_quantifier(kind, std::move(vars), parse_expr());
  }

  ExprPtr parse_tier() {
    ExprPtr lhs = parse_disjunction();
    Tier tier = Tier::none;
    while (!at_end()) {
      const Token& op = peek();
      bool implication = op.is(TokenKind::keyword, "implies") || op.is(TokenKind::symbol, "->");
      bool since = op.is(TokenKind::keyword, "since") || op.is(TokenKind::keyword, "S");
      if (!implication && !since) break;
      Tier next = implication ? Tier::implication : Tier::since;
      if (tier != Tier::none && tier != next) {
        throw ParseError(op.offset,
                         "'implies' and 'since' cannot be mixed without parentheses");
      }
      tier = next;
      ++pos_;
      std::optional<TimeBound> bound;
      if (since) bound = parse_optional_bound();
      if (at_end()) fail_expected_expression();
      ExprPtr rhs = parse_disjunction();
      lhs = make_binary(implication ? ExprKind::implication : ExprKind::since, std::move(lhs),
                        std::move(rhs), bound);
    }
    return lhs;
  }

  ExprPtr parse_disjunction() {
    ExprPtr lhs = parse_conjunction();
    while (check_keyword("or") || check_symbol("||")) {
      ++pos_;
      lhs = make_binary(ExprKind::disjunction, std::move(lhs), parse_conjunction());
    }
    return lhs;
  }

  ExprPtr parse_conjunction() {
    ExprPtr lhs = parse_unary();
    while (check_keyword("and") || check_symbol("&&")) {
      ++pos_;
      lhs = make_binary(ExprKind::conjunction, std::move(lhs), parse_unary());
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (at_end()) fail_expected_expression();
    const Token& tok = peek();
    if (tok.is(TokenKind::keyword, "not") || tok.is(TokenKind::symbol, "!")) {
      ++pos_;
      return make_unary(ExprKind::negation, parse_unary());
    }
    if (tok.is(TokenKind::keyword, "pre") || tok.is(TokenKind::keyword, "Y")) {
      ++pos_;
      return make_unary(ExprKind::previous, parse_unary());
    }
    if (tok.is(TokenKind::keyword, "once") || tok.is(TokenKind::keyword, "P") ||
        tok.is(TokenKind::keyword, "always") || tok.is(TokenKind::keyword, "H")) {
      ExprKind kind = (tok.text == "once" || tok.text == "P") ? ExprKind::once
                                                              : ExprKind::historically;
      ++pos_;
      auto bound = parse_optional_bound();
      return make_unary(kind, parse_unary(), bound);
    }
    if (check_quantifier()) return parse_quantifier();
    return parse_primary();
  }

  ExprPtr parse_primary() {
    if (check_symbol("{")) return parse_atomic();
    if (accept_symbol("$")) {
      expect_symbol("{", "after '$'");
      if (at_end() || peek().kind != TokenKind::identifier)
        throw ParseError(here(), "expected predicate name", {"identifier"});
      std::string name = tokens_[pos_++].text;
      expect_symbol("}", "after predicate name");
      return make_custom(std::move(name));
    }
    if (accept_symbol("(")) {
      if (at_end()) fail_expected_expression();
      ExprPtr inner = parse_expr();
      expect_symbol(")", "to close parenthesis");
      return inner;
    }
    fail_expected_expression();
  }

  std::optional<TimeBound> parse_optional_bound() {
    if (!check_symbol("[")) return std::nullopt;
    const std::size_t open = peek().offset;
    ++pos_;
    TimeBound bound;
    bound.lower = expect_time_literal("lower time bound");
    expect_symbol(":", "in time bound");
    if (!check_symbol("]")) bound.upper = expect_time_literal("upper time bound");
    expect_symbol("]", "to close time bound");
    if (bound.upper && *bound.upper < bound.lower)
      throw ParseError(open, "time bound lower limit exceeds upper limit");
    return bound;
  }

  double expect_time_literal(std::string_view what) {
    if (at_end() || peek().kind != TokenKind::number)
      throw ParseError(here(), "expected " + std::string(what), {"number"});
    const Token& tok = tokens_[pos_++];
    if (tok.number < 0 || !std::isfinite(tok.number))
      throw ParseError(tok.offset, "time bounds must be finite and non-negative");
    return tok.number;
  }

  ExprPtr parse_atomic() {
    expect_symbol("{", "");
    std::vector<FieldConstraint> constraints;
    while (true) {
      constraints.push_back(parse_constraint());
      if (accept_symbol(",")) continue;
      expect_symbol("}", "to close atomic expression");
      break;
    }
    return make_atomic(std::move(constraints));
  }

  FieldConstraint parse_constraint() {
    if (at_end() || peek().kind == TokenKind::symbol || peek().kind == TokenKind::number)
      throw ParseError(here(), "expected field name", {"identifier", "string"});
    FieldConstraint c;
    c.key = tokens_[pos_++].text;
    if (c.key.empty()) throw ParseError(tokens_[pos_ - 1].offset, "empty field name");

    if (check_symbol(",") || check_symbol("}")) {
      c.kind = ConstraintKind::bare_true;
      return c;
    }
    if (accept_symbol(":")) {
      if (accept_symbol("*")) {
        if (at_end() || peek().kind != TokenKind::identifier)
          throw ParseError(here(), "expected variable name after '*'", {"identifier"});
        c.kind = ConstraintKind::ref_var;
        c.variable = tokens_[pos_++].text;
        return c;
      }
      c.operand = parse_literal();
      if (is_bool(c.operand)) c.kind = ConstraintKind::equals_bool;
      else if (is_number(c.operand)) c.kind = ConstraintKind::equals_number;
      else c.kind = ConstraintKind::equals_string;
      return c;
    }
    static constexpr std::array<std::pair<std::string_view, CompareOp>, 6> kOps = {{
        {"<", CompareOp::lt}, {"<=", CompareOp::le}, {">", CompareOp::gt},
        {">=", CompareOp::ge}, {"==", CompareOp::eq}, {"!=", CompareOp::ne}}};
    for (auto [text, op] : kOps) {
      if (accept_symbol(text)) {
        c.kind = ConstraintKind::compare;
        c.op = op;
        c.operand = parse_literal();
        return c;
      }
    }
    throw ParseError(here(), "expected ':', comparison, ',' or '}' after field name",
                     {":", "<", "<=", ">", ">=", "==", "!=", ",", "}"});
  }

  ScalarValue parse_literal() {
    if (at_end()) throw ParseError(here(), "expected value", {"number", "string", "true", "false"});
    const Token& tok = tokens_[pos_];
    if (tok.kind == TokenKind::number) {
      ++pos_;
      return tok.number;
    }
    if (tok.kind == TokenKind::string) {
      ++pos_;
      return tok.text;
    }
    if (tok.is(TokenKind::identifier, "true") || tok.is(TokenKind::identifier, "false")) {
      ++pos_;
      return tok.text == "true";
    }
    throw ParseError(tok.offset, "expected value, found '" + tok.text + "'",
                     {"number", "string", "true", "false"});
  }

  std::span<const Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse(std::span<const Token> tokens) { return Parser(tokens).parse_all(); }

ExprPtr parse(std::string_view input) {
  auto tokens = tokenize(input);
  if (tokens.empty()) throw ParseError(0, "empty specification", {"expression"});
  return parse(tokens);
}

// --- Validation -------------------------------------------------------------

namespace {

bool is_integral(double x) { return std::floor(x) == x; }

void validate_node(const Expr& e, const MonitorOptions& options,
                   std::vector<std::string>& scope) {
  const bool dense = options.time_model == TimeModel::dense;
  const bool robust = options.semantics == Semantics::robust;

  if (e.bound && !dense) {
    if (!is_integral(e.bound->lower) || (e.bound->upper && !is_integral(*e.bound->upper)))
      throw UnsupportedFeature("non-integer time bound in discrete time");
  }

  switch (e.kind) {
    case ExprKind::atomic:
      for (const auto& c : e.constraints) {
        if (c.kind == ConstraintKind::compare && !is_number(c.operand)) {
          throw UnsupportedFeature("comparison '" + std::string(to_string(c.op)) +
                                   "' on non-numeric operand for field '" + c.key + "'");
        }
        if (c.kind == ConstraintKind::ref_var) {
          if (robust) throw UnsupportedFeature("reference variable under robustness semantics");
          if (std::find(scope.begin(), scope.end(), c.variable) == scope.end())
            throw UnsupportedFeature("reference variable '*" + c.variable +
                                     "' is not bound by a quantifier");
        }
      }
      return;
    case ExprKind::previous:
      if (dense) throw UnsupportedFeature("pre in dense time");
      break;
    case ExprKind::exists:
    case ExprKind::forall: {
      if (robust) throw UnsupportedFeature("quantifier under robustness semantics");
      if (dense) throw UnsupportedFeature("quantifier in dense time");
      if (e.variables.empty()) throw UnsupportedFeature("quantifier without variables");
      for (const auto& v : e.variables) {
        if (std::find(scope.begin(), scope.end(), v) != scope.end())
          throw UnsupportedFeature("variable '" + v + "' shadows an enclosing quantifier");
      }
      scope.insert(scope.end(), e.variables.begin(), e.variables.end());
      validate_node(*e.lhs, options, scope);
      scope.resize(scope.size() - e.variables.size());
      return;
    }
    default:
      break;
  }
  if (e.lhs) validate_node(*e.lhs, options, scope);
  if (e.rhs) validate_node(*e.rhs, options, scope);
}

}  // namespace

ExprPtr validate(const ExprPtr& expr, const MonitorOptions& options) {
  if (!expr) throw UnsupportedFeature("empty expression");
  std::vector<std::string> scope;
  validate_node(*expr, options, scope);
  return expr;
}

// --- Printing ---------------------------------------------------------------

namespace {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  // Prefer the shortest representation that round-trips.
  for (int precision = 1; precision <= 17; ++precision) {
    char shorter[32];
    std::snprintf(shorter, sizeof shorter, "%.*g", precision, x);
    if (std::strtod(shorter, nullptr) == x) return shorter;
  }
  return buf;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c; break;
    }
  }
  return out + "\"";
}

std::string format_key(const std::string& key) {
  bool plain = !key.empty() && is_ident_start(key[0]) &&
               std::all_of(key.begin(), key.end(), is_ident_char);
  return plain ? key : quote(key);
}

std::string format_literal(const ScalarValue& v) {
  if (is_bool(v)) return std::get<bool>(v) ? "true" : "false";
  if (is_number(v)) return format_number(std::get<double>(v));
  if (is_string(v)) return quote(std::get<std::string>(v));
  return "null";
}

std::string format_bound(const std::optional<TimeBound>& b) {
  if (!b) return "";
  return "[" + format_number(b->lower) + ":" + (b->upper ? format_number(*b->upper) : "") + "]";
}

}  // namespace

std::string to_string(const ScalarValue& v) { return format_literal(v); }

std::string to_string(const Expr& e) {
  switch (e.kind) {
    case ExprKind::atomic: {
      std::string out = "{";
      for (std::size_t i = 0; i < e.constraints.size(); ++i) {
        const auto& c = e.constraints[i];
        if (i) out += ", ";
        out += format_key(c.key);
        switch (c.kind) {
          case ConstraintKind::bare_true: break;
          case ConstraintKind::ref_var: out += ": *" + c.variable; break;
          case ConstraintKind::compare:
            out += std::string(" ") + to_string(c.op) + " " + format_literal(c.operand);
            break;
          default: out += ": " + format_literal(c.operand); break;
        }
      }
      return out + "}";
    }
    case ExprKind::custom: return "${" + e.name + "}";
    case ExprKind::negation: return "(not " + to_string(*e.lhs) + ")";
    case ExprKind::previous: return "(pre " + to_string(*e.lhs) + ")";
    case ExprKind::once: return "(once" + format_bound(e.bound) + " " + to_string(*e.lhs) + ")";
    case ExprKind::historically:
      return "(always" + format_bound(e.bound) + " " + to_string(*e.lhs) + ")";
    case ExprKind::conjunction:
      return "(" + to_string(*e.lhs) + " and " + to_string(*e.rhs) + ")";
    case ExprKind::disjunction:
      return "(" + to_string(*e.lhs) + " or " + to_string(*e.rhs) + ")";
    case ExprKind::implication:
      return "(" + to_string(*e.lhs) + " implies " + to_string(*e.rhs) + ")";
    case ExprKind::since:
      return "(" + to_string(*e.lhs) + " since" + format_bound(e.bound) + " " +
             to_string(*e.rhs) + ")";
    case ExprKind::exists:
    case ExprKind::forall: {
      std::string out = e.kind == ExprKind::exists ? "(exists[" : "(forall[";
      for (std::size_t i = 0; i < e.variables.size(); ++i) {
        if (i) out += ", ";
        out += e.variables[i];
      }
      return out + "]. " + to_string(*e.lhs) + ")";
    }
  }
  return "?";
}

}  // namespace pastmon
