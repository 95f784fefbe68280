#pragma once

// Discrete-time evaluation of a compiled network, one step per message.

#include <memory>
#include <optional>
#include <vector>

#include "pastmon/domain.hpp"
#include "pastmon/network.hpp"
#include "pastmon/window.hpp"

namespace pastmon {

template <class D>
class DiscreteEngine {
 public:
  using V = typename D::value_type;

  explicit DiscreteEngine(std::shared_ptr<const MonitorNetwork> network)
      : net_(std::move(network)), values_(net_->nodes.size(), D::bottom()) {
    memory_.reserve(net_->nodes.size());
    for (const Node& n : net_->nodes) memory_.push_back(initial_memory(n));
  }

  /// Evaluates step `t` over the current field values and returns the output.
  /// Leaves are evaluated before any node state is touched, so a throwing
  /// leaf leaves the engine unchanged.
  V step(const FieldMap& fields, Time t) {
    const auto& nodes = net_->nodes;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].is_leaf()) values_[i] = leaf(nodes[i], fields);
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const Node& n = nodes[i];
      if (!n.is_leaf()) values_[i] = advance(n, memory_[i], t);
    }
    return values_[net_->output];
  }

  const MonitorNetwork& network() const { return *net_; }

 private:
  struct Memory {
    V last = D::bottom();
    std::optional<WindowAggregator<D, true>> once;
    std::optional<WindowAggregator<D, false>> always;
    std::optional<BoundedSince<D>> since;
  };

  static Memory initial_memory(const Node& n) {
    Memory m;
    if (n.kind == NodeKind::historically) m.last = D::top();
    if (n.window) {
      if (n.kind == NodeKind::once) m.once.emplace(n.window->lower, n.window->upper);
      if (n.kind == NodeKind::historically) m.always.emplace(n.window->lower, n.window->upper);
      if (n.kind == NodeKind::since) m.since.emplace(n.window->lower, n.window->upper);
    }
    return m;
  }

  V leaf(const Node& n, const FieldMap& fields) const {
    if (n.kind == NodeKind::custom) {
      return net_->predicates[n.predicate](fields) ? D::top() : D::bottom();
    }
    V v = D::top();
    for (const FieldConstraint& c : n.constraints) {
      auto it = fields.find(c.key);
      const ScalarValue* value = it == fields.end() ? nullptr : &it->second;
      if constexpr (std::is_same_v<V, bool>) {
        v = v && holds(c, value);
      } else {
        v = D::meet(v, robustness(c, value));
      }
    }
    return v;
  }

  V advance(const Node& n, Memory& m, Time t) {
    const auto& c = n.children;
    switch (n.kind) {
      case NodeKind::negation: return D::negate(values_[c[0]]);
      case NodeKind::conjunction: return D::meet(values_[c[0]], values_[c[1]]);
      case NodeKind::disjunction: return D::join(values_[c[0]], values_[c[1]]);
      case NodeKind::previous: {
        V out = m.last;
        m.last = values_[c[0]];
        return out;
      }
      case NodeKind::once:
        if (m.once) return m.once->step(t, values_[c[0]]);
        return m.last = D::join(m.last, values_[c[0]]);
      case NodeKind::historically:
        if (m.always) return m.always->step(t, values_[c[0]]);
        return m.last = D::meet(m.last, values_[c[0]]);
      case NodeKind::since:
        if (m.since) return m.since->step(t, values_[c[0]], values_[c[1]]);
        return m.last = D::join(values_[c[1]], D::meet(values_[c[0]], m.last));
      default:
        return D::bottom();
    }
  }

  std::shared_ptr<const MonitorNetwork> net_;
  std::vector<V> values_;
  std::vector<Memory> memory_;
};

using BooleanEngine = DiscreteEngine<BooleanDomain>;
using RobustEngine = DiscreteEngine<RobustDomain>;

}  // namespace pastmon
