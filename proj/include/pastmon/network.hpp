#pragma once

// Lowering of validated expressions into a topologically ordered computation
// graph with shared subexpressions.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pastmon/options.hpp"
#include "pastmon/syntax.hpp"
#include "pastmon/value.hpp"

namespace pastmon {

/// Internal time: steps in discrete time, scaled integer units in dense time.
using Time = std::int64_t;
using NodeId = std::uint32_t;

/// Closed window [lower, upper] in internal time units.
struct Window {
  Time lower = 0;
  std::optional<Time> upper;
  friend bool operator==(const Window&, const Window&) = default;
};

enum class NodeKind {
  atomic,
  custom,
  negation,
  conjunction,
  disjunction,
  previous,
  once,
  historically,
  since,
  exists,
  forall,
};

const char* to_string(NodeKind kind);

struct Node {
  NodeKind kind = NodeKind::atomic;
  std::vector<NodeId> children;
  // atomic: constraints sorted by key, and the variable index of each
  // ref-var constraint (-1 otherwise).
  std::vector<FieldConstraint> constraints;
  std::vector<int> constraint_vars;
  std::size_t predicate = 0;
  std::optional<Window> window;
  std::vector<unsigned> variables;  // exists, forall

  bool is_leaf() const { return kind == NodeKind::atomic || kind == NodeKind::custom; }
  friend bool operator==(const Node&, const Node&) = default;
};

/// Boolean-valued function over the current field values.
using Predicate = std::function<bool(const FieldMap&)>;
using PredicateRegistry = std::map<std::string, Predicate, std::less<>>;

struct MonitorNetwork {
  std::vector<Node> nodes;
  NodeId output = 0;
  TimeModel time_model = TimeModel::discrete;
  Semantics semantics = Semantics::boolean;
  std::int64_t time_scale = 1;  // internal units per input unit

  std::vector<std::string> input_keys;  // sorted
  std::vector<std::string> numeric_keys;  // keys under a numeric comparison
  std::vector<std::string> string_keys;   // keys bound to reference variables
  std::vector<std::string> variables;     // quantified variables, by index
  std::vector<std::string> predicate_names;
  std::vector<Predicate> predicates;

  bool first_order() const { return !variables.empty(); }
};

/// Merges structurally identical nodes; children are re-pointed and order is
/// preserved. `remap`, when given, receives the new id of every old node.
std::vector<Node> cse_dedupe(const std::vector<Node>& nodes,
                             std::vector<NodeId>* remap = nullptr);

MonitorNetwork compile(const ExprPtr& expr, const MonitorOptions& options,
                       const PredicateRegistry& predicates = {});

/// One line per node: id, kind, children and payload.
std::string dump(const MonitorNetwork& network);

// Atom evaluation. `value` is null when the field is absent. Ordering
// comparisons against non-numeric values throw TypeError.
bool holds(const FieldConstraint& c, const ScalarValue* value);
double robustness(const FieldConstraint& c, const ScalarValue* value);

}  // namespace pastmon
