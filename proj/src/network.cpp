#include "pastmon/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "pastmon/errors.hpp"

namespace pastmon {

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::atomic: return "atomic";
    case NodeKind::custom: return "custom";
    case NodeKind::negation: return "not";
    case NodeKind::conjunction: return "and";
    case NodeKind::disjunction: return "or";
    case NodeKind::previous: return "pre";
    case NodeKind::once: return "once";
    case NodeKind::historically: return "always";
    case NodeKind::since: return "since";
    case NodeKind::exists: return "exists";
    case NodeKind::forall: return "forall";
  }
  return "?";
}

namespace {

void hash_combine(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

struct NodeHash {
  std::size_t operator()(const Node& n) const {
    std::size_t h = static_cast<std::size_t>(n.kind);
    for (NodeId c : n.children) hash_combine(h, c);
    for (const auto& c : n.constraints) {
      hash_combine(h, std::hash<std::string>{}(c.key));
      hash_combine(h, static_cast<std::size_t>(c.kind));
      hash_combine(h, static_cast<std::size_t>(c.op));
      hash_combine(h, std::hash<ScalarValue>{}(c.operand));
      hash_combine(h, std::hash<std::string>{}(c.variable));
    }
    for (int v : n.constraint_vars) hash_combine(h, static_cast<std::size_t>(v));
    hash_combine(h, n.predicate);
    if (n.window) {
      hash_combine(h, static_cast<std::size_t>(n.window->lower));
      hash_combine(h, n.window->upper ? static_cast<std::size_t>(*n.window->upper) : ~0ULL);
    }
    for (unsigned v : n.variables) hash_combine(h, v);
    return h;
  }
};

}  // namespace

std::vector<Node> cse_dedupe(const std::vector<Node>& nodes, std::vector<NodeId>* remap) {
  std::vector<Node> out;
  std::vector<NodeId> mapping(nodes.size());
  std::unordered_map<Node, NodeId, NodeHash> seen;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Node n = nodes[i];
    for (NodeId& c : n.children) c = mapping.at(c);
    auto [it, inserted] = seen.try_emplace(n, static_cast<NodeId>(out.size()));
    if (inserted) out.push_back(std::move(n));
    mapping[i] = it->second;
  }
  if (remap) *remap = std::move(mapping);
  return out;
}

namespace {

class Lowering {
 public:
  Lowering(const MonitorOptions& options, const PredicateRegistry& registry,
           MonitorNetwork& network)
      : options_(options), registry_(registry), net_(network) {}

  void declare_variables(const Expr& e) {
    if (e.kind == ExprKind::exists || e.kind == ExprKind::forall) {
      for (const auto& v : e.variables) {
        if (std::find(net_.variables.begin(), net_.variables.end(), v) == net_.variables.end())
          net_.variables.push_back(v);
      }
    }
    if (e.lhs) declare_variables(*e.lhs);
    if (e.rhs) declare_variables(*e.rhs);
  }

  NodeId lower(const Expr& e) {
    Node n;
    switch (e.kind) {
      case ExprKind::atomic: return lower_atomic(e);
      case ExprKind::custom: {
        auto it = registry_.find(e.name);
        if (it == registry_.end()) throw CompileError("unknown predicate " + e.name);
        auto pos = std::find(net_.predicate_names.begin(), net_.predicate_names.end(), e.name);
        n.kind = NodeKind::custom;
        n.predicate = static_cast<std::size_t>(pos - net_.predicate_names.begin());
        if (pos == net_.predicate_names.end()) {
          net_.predicate_names.push_back(e.name);
          net_.predicates.push_back(it->second);
        }
        return emit(std::move(n));
      }
      case ExprKind::negation: return unary(NodeKind::negation, lower(*e.lhs));
      case ExprKind::previous: return unary(NodeKind::previous, lower(*e.lhs));
      case ExprKind::conjunction: return binary(NodeKind::conjunction, e);
      case ExprKind::disjunction: return binary(NodeKind::disjunction, e);
      case ExprKind::implication: {
        NodeId antecedent = unary(NodeKind::negation, lower(*e.lhs));
        NodeId consequent = lower(*e.rhs);
        n.kind = NodeKind::disjunction;
        n.children = {antecedent, consequent};
        return emit(std::move(n));
      }
      case ExprKind::once:
      case ExprKind::historically: {
        n.kind = e.kind == ExprKind::once ? NodeKind::once : NodeKind::historically;
        n.children = {lower(*e.lhs)};
        n.window = scale(e.bound);
        return emit(std::move(n));
      }
      case ExprKind::since: {
        n.kind = NodeKind::since;
        NodeId lhs = lower(*e.lhs);
        NodeId rhs = lower(*e.rhs);
        n.children = {lhs, rhs};
        n.window = scale(e.bound);
        return emit(std::move(n));
      }
      case ExprKind::exists:
      case ExprKind::forall: {
        n.kind = e.kind == ExprKind::exists ? NodeKind::exists : NodeKind::forall;
        n.children = {lower(*e.lhs)};
        for (const auto& v : e.variables) n.variables.push_back(variable_index(v));
        std::sort(n.variables.begin(), n.variables.end());
        return emit(std::move(n));
      }
    }
    throw CompileError("unsupported expression");
  }

 private:
  NodeId emit(Node n) {
    net_.nodes.push_back(std::move(n));
    return static_cast<NodeId>(net_.nodes.size() - 1);
  }

  NodeId unary(NodeKind kind, NodeId child) {
    Node n;
    n.kind = kind;
    n.children = {child};
    return emit(std::move(n));
  }

  NodeId binary(NodeKind kind, const Expr& e) {
    NodeId lhs = lower(*e.lhs);
    NodeId rhs = lower(*e.rhs);
    Node n;
    n.kind = kind;
    n.children = {lhs, rhs};
    return emit(std::move(n));
  }

  unsigned variable_index(const std::string& name) const {
    auto it = std::find(net_.variables.begin(), net_.variables.end(), name);
    if (it == net_.variables.end()) throw CompileError("undeclared variable " + name);
    return static_cast<unsigned>(it - net_.variables.begin());
  }

  NodeId lower_atomic(const Expr& e) {
    Node n;
    n.kind = NodeKind::atomic;
    n.constraints = e.constraints;
    std::sort(n.constraints.begin(), n.constraints.end(),
              [](const FieldConstraint& a, const FieldConstraint& b) {
                return (a <=> b) == std::partial_ordering::less;
              });
    n.constraints.erase(std::unique(n.constraints.begin(), n.constraints.end()),
                        n.constraints.end());
    for (const auto& c : n.constraints) {
      n.constraint_vars.push_back(c.kind == ConstraintKind::ref_var
                                      ? static_cast<int>(variable_index(c.variable))
                                      : -1);
    }
    return emit(std::move(n));
  }

  Time to_internal(double units) const {
    if (options_.time_model == TimeModel::discrete) return static_cast<Time>(units);
    double scaled = units * static_cast<double>(options_.time_scale);
    if (scaled > static_cast<double>(std::numeric_limits<Time>::max() / 4))
      throw CompileError("time bound too large");
    return static_cast<Time>(std::llround(scaled));
  }

  std::optional<Window> scale(const std::optional<TimeBound>& bound) const {
    if (!bound) return std::nullopt;
    Window w;
    w.lower = to_internal(bound->lower);
    if (bound->upper) w.upper = to_internal(*bound->upper);
    if (w.lower == 0 && !w.upper) return std::nullopt;  // [0:] is the untimed operator
    return w;
  }

  const MonitorOptions& options_;
  const PredicateRegistry& registry_;
  MonitorNetwork& net_;
};

void add_unique(std::vector<std::string>& v, const std::string& s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

}  // namespace

MonitorNetwork compile(const ExprPtr& expr, const MonitorOptions& options,
                       const PredicateRegistry& predicates) {
  if (!expr) throw CompileError("empty expression");
  if (options.time_model == TimeModel::dense && options.time_scale <= 0)
    throw CompileError("time scale must be positive");

  MonitorNetwork net;
  net.time_model = options.time_model;
  net.semantics = options.semantics;
  net.time_scale = options.time_model == TimeModel::dense ? options.time_scale : 1;

  Lowering lowering(options, predicates, net);
  lowering.declare_variables(*expr);
  net.output = lowering.lower(*expr);

  if (options.cse) {
    std::vector<NodeId> remap;
    net.nodes = cse_dedupe(net.nodes, &remap);
    net.output = remap[net.output];
  }

  for (const auto& n : net.nodes) {
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (n.children[i] >= static_cast<NodeId>(&n - net.nodes.data()))
        throw CompileError("network is not topologically ordered");
    }
    for (const auto& c : n.constraints) {
      add_unique(net.input_keys, c.key);
      if (c.kind == ConstraintKind::compare) add_unique(net.numeric_keys, c.key);
      if (c.kind == ConstraintKind::ref_var) add_unique(net.string_keys, c.key);
    }
  }
  std::sort(net.input_keys.begin(), net.input_keys.end());
  std::sort(net.numeric_keys.begin(), net.numeric_keys.end());
  std::sort(net.string_keys.begin(), net.string_keys.end());
  return net;
}

namespace {

std::string format_window(const std::optional<Window>& w) {
  if (!w) return "";
  return "[" + std::to_string(w->lower) + ":" + (w->upper ? std::to_string(*w->upper) : "") + "]";
}

}  // namespace

std::string dump(const MonitorNetwork& net) {
  std::ostringstream out;
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    const Node& n = net.nodes[i];
    out << i << ' ' << to_string(n.kind) << format_window(n.window);
    for (NodeId c : n.children) out << ' ' << c;
    if (n.kind == NodeKind::atomic) out << ' ' << to_string(*make_atomic(n.constraints));
    if (n.kind == NodeKind::custom) out << " ${" << net.predicate_names[n.predicate] << '}';
    if (!n.variables.empty()) {
      out << " [";
      for (std::size_t k = 0; k < n.variables.size(); ++k)
        out << (k ? ", " : "") << net.variables[n.variables[k]];
      out << ']';
    }
    if (i == net.output) out << " (output)";
    out << '\n';
  }
  return out.str();
}

namespace {

[[noreturn]] void type_error(const FieldConstraint& c, const ScalarValue& v) {
  throw TypeError("comparison '" + std::string(to_string(c.op)) + "' on field '" + c.key +
                  "' with non-numeric value " + to_string(v));
}

bool compare(CompareOp op, double x, double c) {
  switch (op) {
    case CompareOp::lt: return x < c;
    case CompareOp::le: return x <= c;
    case CompareOp::gt: return x > c;
    case CompareOp::ge: return x >= c;
    case CompareOp::eq: return x == c;
    case CompareOp::ne: return x != c;
  }
  return false;
}

}  // namespace

bool holds(const FieldConstraint& c, const ScalarValue* value) {
  if (value == nullptr) return false;
  switch (c.kind) {
    case ConstraintKind::bare_true: return is_bool(*value) && std::get<bool>(*value);
    case ConstraintKind::equals_bool:
    case ConstraintKind::equals_string:
    case ConstraintKind::equals_number: return *value == c.operand;
    case ConstraintKind::compare:
      if (!is_number(*value)) type_error(c, *value);
      return compare(c.op, std::get<double>(*value), std::get<double>(c.operand));
    case ConstraintKind::ref_var: return false;  // resolved by the first-order engine
  }
  return false;
}

double robustness(const FieldConstraint& c, const ScalarValue* value) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (c.kind == ConstraintKind::compare && value != nullptr) {
    if (!is_number(*value)) type_error(c, *value);
    double x = std::get<double>(*value);
    double k = std::get<double>(c.operand);
    switch (c.op) {
      case CompareOp::gt:
      case CompareOp::ge: return x - k;
      case CompareOp::lt:
      case CompareOp::le: return k - x;
      default: return compare(c.op, x, k) ? inf : -inf;
    }
  }
  return holds(c, value) ? inf : -inf;
}

}  // namespace pastmon
