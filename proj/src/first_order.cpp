#include "pastmon/first_order.hpp"

#include <algorithm>

#include "pastmon/errors.hpp"

namespace pastmon {

ValueDictionary::ValueDictionary(unsigned bits) : bits_(bits) {
  if (bits == 0 || bits > 32) throw CompileError("variable bit width must be in [1, 32]");
}

std::uint64_t ValueDictionary::capacity() const { return std::uint64_t{1} << bits_; }

std::uint64_t ValueDictionary::code(std::string_view value) {
  if (auto found = find(value)) return *found;
  std::uint64_t next = codes_.size() + 1;
  if (next >= capacity()) {
    throw CapacityError("value dictionary overflow: more than " +
                        std::to_string(capacity() - 1) + " distinct values for " +
                        std::to_string(bits_) + "-bit variables");
  }
  codes_.emplace(std::string(value), next);
  return next;
}

std::optional<std::uint64_t> ValueDictionary::find(std::string_view value) const {
  auto it = codes_.find(std::string(value));
  if (it == codes_.end()) return std::nullopt;
  return it->second;
}

std::size_t ValueDictionary::missing(const std::vector<std::string_view>& values) const {
  std::vector<std::string_view> fresh;
  for (auto v : values) {
    if (!find(v) && std::find(fresh.begin(), fresh.end(), v) == fresh.end()) fresh.push_back(v);
  }
  return fresh.size();
}

BddRef encode_eq(BddKernel& kernel, unsigned var, unsigned bits, std::string_view value,
                 ValueDictionary& dictionary) {
  return kernel.cube(var * bits, bits, dictionary.code(value));
}

FirstOrderEngine::FirstOrderEngine(std::shared_ptr<const MonitorNetwork> network, unsigned bits)
    : net_(std::move(network)),
      bits_(bits),
      kernel_(static_cast<unsigned>(net_->variables.size()) * bits),
      dictionary_(bits),
      values_(net_->nodes.size(), BddKernel::kFalse),
      memory_(net_->nodes.size()) {
  for (std::size_t i = 0; i < net_->nodes.size(); ++i) {
    if (net_->nodes[i].kind == NodeKind::historically) {
      memory_[i].last = BddKernel::kTrue;
      memory_[i].settled = BddKernel::kTrue;
    }
  }
}

void FirstOrderEngine::check(const FieldMap& fields) const {
  std::vector<std::string_view> values;
  for (const Node& n : net_->nodes) {
    for (const FieldConstraint& c : n.constraints) {
      auto it = fields.find(c.key);
      if (it == fields.end()) continue;
      if (c.kind == ConstraintKind::ref_var) {
        if (!is_string(it->second)) {
          throw TypeError("reference variable '*" + c.variable + "' reads non-string field '" +
                          c.key + "' = " + to_string(it->second));
        }
        values.push_back(std::get<std::string>(it->second));
      } else if (c.kind == ConstraintKind::compare && !is_number(it->second)) {
        holds(c, &it->second);  // throws the TypeError
      }
    }
  }
  if (dictionary_.size() + dictionary_.missing(values) >= dictionary_.capacity()) {
    throw CapacityError("value dictionary overflow: more than " +
                        std::to_string(dictionary_.capacity() - 1) + " distinct values for " +
                        std::to_string(bits_) + "-bit variables");
  }
}

bool FirstOrderEngine::step(const FieldMap& fields, Time t) {
  check(fields);
  const auto& nodes = net_->nodes;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].is_leaf()) values_[i] = leaf(nodes[i], fields);
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].is_leaf()) values_[i] = advance(nodes[i], memory_[i], t);
  }
  return values_[net_->output] != BddKernel::kFalse;
}

BddRef FirstOrderEngine::leaf(const Node& n, const FieldMap& fields) {
  if (n.kind == NodeKind::custom) {
    return net_->predicates[n.predicate](fields) ? BddKernel::kTrue : BddKernel::kFalse;
  }
  BddRef r = BddKernel::kTrue;
  for (std::size_t k = 0; k < n.constraints.size(); ++k) {
    const FieldConstraint& c = n.constraints[k];
    auto it = fields.find(c.key);
    const ScalarValue* value = it == fields.end() ? nullptr : &it->second;
    BddRef term;
    if (c.kind == ConstraintKind::ref_var) {
      term = value ? encode_eq(kernel_, static_cast<unsigned>(n.constraint_vars[k]), bits_,
                               std::get<std::string>(*value), dictionary_)
                   : BddKernel::kFalse;
    } else {
      term = holds(c, value) ? BddKernel::kTrue : BddKernel::kFalse;
    }
    r = kernel_.conjoin(r, term);
  }
  return r;
}

BddRef FirstOrderEngine::domain(unsigned var) {
  // Codes 0 (unseen) through the last assigned code.
  std::uint64_t key = (std::uint64_t{var} << 40) | dictionary_.size();
  auto it = domain_cache_.find(key);
  if (it != domain_cache_.end()) return it->second;
  BddRef d = kernel_.at_most(var * bits_, bits_, dictionary_.size());
  domain_cache_.emplace(key, d);
  return d;
}

BddRef FirstOrderEngine::advance(const Node& n, Memory& m, Time t) {
  const auto& c = n.children;
  switch (n.kind) {
    case NodeKind::negation: return kernel_.negate(values_[c[0]]);
    case NodeKind::conjunction: return kernel_.conjoin(values_[c[0]], values_[c[1]]);
    case NodeKind::disjunction: return kernel_.disjoin(values_[c[0]], values_[c[1]]);
    case NodeKind::previous: {
      BddRef out = m.last;
      m.last = values_[c[0]];
      return out;
    }
    case NodeKind::once:
      if (n.window) return window_fold(n, m, t, values_[c[0]], true);
      return m.last = kernel_.disjoin(m.last, values_[c[0]]);
    case NodeKind::historically:
      if (n.window) return window_fold(n, m, t, values_[c[0]], false);
      return m.last = kernel_.conjoin(m.last, values_[c[0]]);
    case NodeKind::since:
      if (n.window) return timed_since(n, m, t, values_[c[0]], values_[c[1]]);
      return m.last = kernel_.disjoin(values_[c[1]], kernel_.conjoin(values_[c[0]], m.last));
    case NodeKind::exists:
    case NodeKind::forall: {
      const bool universal = n.kind == NodeKind::forall;
      BddRef body = universal ? kernel_.negate(values_[c[0]]) : values_[c[0]];
      for (unsigned v : n.variables) body = kernel_.conjoin(body, domain(v));
      for (unsigned v : n.variables) body = kernel_.exists(body, v * bits_, bits_);
      return universal ? kernel_.negate(body) : body;
    }
    default: return BddKernel::kFalse;
  }
}

BddRef FirstOrderEngine::window_fold(const Node& n, Memory& m, Time t, BddRef input, bool join) {
  const Window& w = *n.window;
  const BddRef identity = join ? BddKernel::kFalse : BddKernel::kTrue;
  auto combine = [&](BddRef a, BddRef b) {
    return join ? kernel_.disjoin(a, b) : kernel_.conjoin(a, b);
  };
  m.pending.emplace_back(t, input);
  while (!m.pending.empty() && m.pending.front().first <= t - w.lower) {
    if (w.upper) {
      m.released.push_back(m.pending.front());
    } else {
      m.settled = combine(m.settled, m.pending.front().second);
    }
    m.pending.pop_front();
  }
  if (!w.upper) return m.settled;
  while (!m.released.empty() && m.released.front().first < t - *w.upper) m.released.pop_front();
  BddRef acc = identity;
  for (const auto& [index, value] : m.released) acc = combine(acc, value);
  return acc;
}

BddRef FirstOrderEngine::timed_since(const Node& n, Memory& m, Time t, BddRef phi, BddRef psi) {
  const Window& w = *n.window;
  // Every start point must see phi at all later steps.
  for (auto& entry : m.pending) entry.second = kernel_.conjoin(entry.second, phi);
  for (auto& entry : m.released) entry.second = kernel_.conjoin(entry.second, phi);
  m.settled = kernel_.conjoin(m.settled, phi);

  m.pending.emplace_back(t, psi);
  while (!m.pending.empty() && m.pending.front().first <= t - w.lower) {
    if (w.upper) {
      m.released.push_back(m.pending.front());
    } else {
      m.settled = kernel_.disjoin(m.settled, m.pending.front().second);
    }
    m.pending.pop_front();
  }
  if (!w.upper) return m.settled;
  while (!m.released.empty() && m.released.front().first < t - *w.upper) m.released.pop_front();
  BddRef acc = BddKernel::kFalse;
  for (const auto& [index, value] : m.released) acc = kernel_.disjoin(acc, value);
  return acc;
}

}  // namespace pastmon
