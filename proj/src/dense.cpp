#include "pastmon/dense.hpp"

#include <algorithm>
#include <limits>

#include "pastmon/domain.hpp"

namespace pastmon {

std::vector<BooleanSegment> to_segments(const IntervalSet& set, Time begin, Time end) {
  std::vector<BooleanSegment> out;
  Time cursor = begin;
  for (const Interval& i : clip(set, begin, end)) {
    if (i.begin > cursor) out.push_back({cursor, i.begin, false});
    out.push_back({i.begin, i.end, true});
    cursor = i.end;
  }
  if (cursor < end) out.push_back({cursor, end, false});
  return out;
}

namespace {

/// Sorted breakpoints of [begin, end) induced by the boundaries of the inputs.
template <class Fn>
void for_each_piece(Time begin, Time end, const std::vector<Time>& cuts, Fn&& fn) {
  Time prev = begin;
  for (Time c : cuts) {
    if (c <= prev || c >= end) continue;
    fn(prev, c);
    prev = c;
  }
  if (prev < end) fn(prev, end);
}

std::vector<Time> boundaries(const IntervalSet& a, const IntervalSet& b) {
  std::vector<Time> cuts;
  for (const auto& i : a) cuts.insert(cuts.end(), {i.begin, i.end});
  for (const auto& i : b) cuts.insert(cuts.end(), {i.begin, i.end});
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

}  // namespace

// --- Boolean ------------------------------------------------------------------

DenseBooleanEngine::DenseBooleanEngine(std::shared_ptr<const MonitorNetwork> network)
    : net_(std::move(network)), values_(net_->nodes.size()), memory_(net_->nodes.size()) {}

IntervalSet DenseBooleanEngine::update(const FieldMap& fields, Time begin, Time end) {
  const auto& nodes = net_->nodes;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (!n.is_leaf()) continue;
    bool truth = true;
    if (n.kind == NodeKind::custom) {
      truth = net_->predicates[n.predicate](fields);
    } else {
      for (const FieldConstraint& c : n.constraints) {
        auto it = fields.find(c.key);
        truth = holds(c, it == fields.end() ? nullptr : &it->second) && truth;
      }
    }
    values_[i] = truth ? IntervalSet{{begin, end}} : IntervalSet{};
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].is_leaf()) values_[i] = advance(nodes[i], memory_[i], begin, end);
  }
  return values_[net_->output];
}

IntervalSet DenseBooleanEngine::advance(const Node& n, Memory& m, Time begin, Time end) {
  const auto& c = n.children;
  switch (n.kind) {
    case NodeKind::negation: return complement(values_[c[0]], begin, end);
    case NodeKind::conjunction: return intersect(values_[c[0]], values_[c[1]]);
    case NodeKind::disjunction: return unite(values_[c[0]], values_[c[1]]);
    case NodeKind::once: {
      const IntervalSet& in = values_[c[0]];
      if (n.window) return timed_once(*n.window, m.history, in, begin, end);
      if (!m.latch && !in.empty()) m.latch = in.intervals().front().begin;
      return m.latch ? IntervalSet{{std::max(*m.latch, begin), end}} : IntervalSet{};
    }
    case NodeKind::historically: {
      IntervalSet falsified = complement(values_[c[0]], begin, end);
      if (n.window) {
        return complement(timed_once(*n.window, m.history, falsified, begin, end), begin, end);
      }
      if (!m.latch && !falsified.empty()) m.latch = falsified.intervals().front().begin;
      return IntervalSet{{begin, m.latch ? std::min(*m.latch, end) : end}};
    }
    case NodeKind::since: return since(n, m, values_[c[0]], values_[c[1]], begin, end);
    default: return {};
  }
}

IntervalSet DenseBooleanEngine::timed_once(const Window& w, std::deque<Interval>& history,
                                           const IntervalSet& input, Time begin, Time end) {
  for (const Interval& i : input) {
    if (!w.upper && !history.empty()) break;  // the earliest interval dominates
    if (!history.empty() && history.back().end == i.begin) {
      history.back().end = i.end;
    } else {
      history.push_back(i);
    }
  }
  IntervalSet out;
  for (const Interval& i : history) {
    Time b = std::max(i.begin + w.lower, begin);
    Time e = std::min(w.upper ? i.end + *w.upper : kForever, end);
    if (b < e) out.append({b, e});
  }
  // Intervals whose shifted image ends before the next span are spent.
  if (w.upper) {
    while (!history.empty() && history.front().end + *w.upper <= end) history.pop_front();
  }
  return out;
}

IntervalSet DenseBooleanEngine::since(const Node& n, Memory& m, const IntervalSet& phi,
                                      const IntervalSet& psi, Time begin, Time end) {
  IntervalSet out;
  auto cuts = boundaries(phi, psi);
  for_each_piece(begin, end, cuts, [&](Time x, Time y) {
    const bool f = phi.contains(x);
    const bool g = psi.contains(x);
    if (!n.window) {
      if (g || (m.carry && f)) out.append({x, y});
      m.carry = (m.carry || g) && f;
      return;
    }
    const Window& w = *n.window;
    if (!f) {
      // No start point survives a stretch where phi fails.
      m.history.clear();
      if (g && w.lower == 0) out.append({x, y});
      return;
    }
    if (g) {
      if (!m.history.empty() && m.history.back().end == x) {
        m.history.back().end = y;
      } else if (w.upper || m.history.empty()) {
        m.history.push_back({x, y});
      }
    }
    for (const Interval& s : m.history) {
      Time b = std::max(s.begin + w.lower, x);
      Time e = std::min(w.upper ? s.end + *w.upper : kForever, y);
      if (b < e) out.append({b, e});
    }
    if (w.upper) {
      while (!m.history.empty() && m.history.front().end + *w.upper <= y) m.history.pop_front();
    }
  });
  return out;
}

// --- Robustness -----------------------------------------------------------------

namespace {

using Signal = DenseRobustEngine::Signal;

void push_segment(Signal& s, Time b, Time e, double v) {
  if (b >= e) return;
  if (!s.empty() && s.back().end == b && s.back().value == v) {
    s.back().end = e;
  } else {
    s.push_back({b, e, v});
  }
}

template <class Op>
Signal zip(const Signal& a, const Signal& b, Op op) {
  Signal out;
  auto x = a.begin(), y = b.begin();
  while (x != a.end() && y != b.end()) {
    Time lo = std::max(x->begin, y->begin);
    Time hi = std::min(x->end, y->end);
    push_segment(out, lo, hi, op(x->value, y->value));
    if (x->end < y->end) ++x;
    else if (y->end < x->end) ++y;
    else {
      ++x;
      ++y;
    }
  }
  return out;
}

double value_at(const Signal& s, Time t) {
  for (const auto& seg : s) {
    if (seg.begin <= t && t < seg.end) return seg.value;
  }
  return RobustDomain::bottom();
}

}  // namespace

DenseRobustEngine::DenseRobustEngine(std::shared_ptr<const MonitorNetwork> network)
    : net_(std::move(network)), values_(net_->nodes.size()), memory_(net_->nodes.size()) {
  for (std::size_t i = 0; i < net_->nodes.size(); ++i) {
    const Node& n = net_->nodes[i];
    memory_[i].running = n.kind == NodeKind::historically ? RobustDomain::top()
                                                          : RobustDomain::bottom();
  }
}

Signal DenseRobustEngine::update(const FieldMap& fields, Time begin, Time end) {
  const auto& nodes = net_->nodes;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (!n.is_leaf()) continue;
    double v = RobustDomain::top();
    if (n.kind == NodeKind::custom) {
      v = net_->predicates[n.predicate](fields) ? RobustDomain::top() : RobustDomain::bottom();
    } else {
      for (const FieldConstraint& c : n.constraints) {
        auto it = fields.find(c.key);
        v = std::min(v, robustness(c, it == fields.end() ? nullptr : &it->second));
      }
    }
    values_[i] = Signal{{begin, end, v}};
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].is_leaf()) values_[i] = advance(nodes[i], memory_[i], begin, end);
  }
  return values_[net_->output];
}

Signal DenseRobustEngine::advance(const Node& n, Memory& m, Time begin, Time end) {
  const auto& c = n.children;
  switch (n.kind) {
    case NodeKind::negation: {
      Signal out;
      for (const auto& s : values_[c[0]]) push_segment(out, s.begin, s.end, -s.value);
      return out;
    }
    case NodeKind::conjunction:
      return zip(values_[c[0]], values_[c[1]], [](double a, double b) { return std::min(a, b); });
    case NodeKind::disjunction:
      return zip(values_[c[0]], values_[c[1]], [](double a, double b) { return std::max(a, b); });
    case NodeKind::once:
    case NodeKind::historically: {
      const bool join = n.kind == NodeKind::once;
      if (n.window) return sliding(*n.window, join, m, values_[c[0]], begin, end);
      Signal out;
      for (const auto& s : values_[c[0]]) {
        m.running = join ? std::max(m.running, s.value) : std::min(m.running, s.value);
        push_segment(out, s.begin, s.end, m.running);
      }
      return out;
    }
    case NodeKind::since: {
      const Signal& phi = values_[c[0]];
      const Signal& psi = values_[c[1]];
      if (n.window) return timed_since(*n.window, m, phi, psi, begin, end);
      // carry: sup over t' < x of min(psi(t'), inf of phi on (t', x))
      Signal out;
      std::vector<Time> cuts;
      for (const auto& s : phi) cuts.push_back(s.begin);
      for (const auto& s : psi) cuts.push_back(s.begin);
      std::sort(cuts.begin(), cuts.end());
      for_each_piece(begin, end, cuts, [&](Time x, Time y) {
        double f = value_at(phi, x), g = value_at(psi, x);
        push_segment(out, x, y, std::max(std::min(m.running, f), g));
        m.running = std::min(std::max(m.running, g), f);
      });
      return out;
    }
    default: return {};
  }
}

namespace {

/// Upper (join) or lower (meet) envelope of boxes over [begin, end).
Signal envelope(const std::vector<std::pair<Interval, double>>& boxes, bool join, Time begin,
                Time end) {
  const double identity = join ? RobustDomain::bottom() : RobustDomain::top();
  std::vector<Time> cuts;
  for (const auto& [span, v] : boxes) cuts.insert(cuts.end(), {span.begin, span.end});
  std::sort(cuts.begin(), cuts.end());
  Signal out;
  for_each_piece(begin, end, cuts, [&](Time x, Time y) {
    double acc = identity;
    for (const auto& [span, v] : boxes) {
      if (span.begin <= x && x < span.end) acc = join ? std::max(acc, v) : std::min(acc, v);
    }
    push_segment(out, x, y, acc);
  });
  return out;
}

Time shifted_end(Time end, const Window& w) {
  return w.upper ? std::min(end + *w.upper, kForever) : kForever;
}

}  // namespace

Signal DenseRobustEngine::sliding(const Window& w, bool join, Memory& m, const Signal& input,
                                  Time begin, Time end) {
  auto dominates = [join](double newer, double older) {
    return join ? older <= newer : newer <= older;
  };
  for (const auto& s : input) m.pending.push_back({s.begin + w.lower, shifted_end(s.end, w), s.value});

  // Boxes that have started by `begin` join the wedge; the front is then the
  // aggregate until something newer starts or the front expires.
  while (!m.pending.empty() && m.pending.front().begin <= begin) {
    Box b = m.pending.front();
    m.pending.pop_front();
    while (!m.eligible.empty() && dominates(b.value, m.eligible.back().value)) m.eligible.pop_back();
    m.eligible.push_back(b);
  }
  while (!m.eligible.empty() && m.eligible.front().end <= begin) m.eligible.pop_front();

  std::vector<std::pair<Interval, double>> boxes;
  for (const Box& b : m.eligible) boxes.push_back({{b.begin, b.end}, b.value});
  for (const Box& b : m.pending) {
    if (b.begin >= end) break;
    boxes.push_back({{b.begin, b.end}, b.value});
  }
  return envelope(boxes, join, begin, end);
}

Signal DenseRobustEngine::timed_since(const Window& w, Memory& m, const Signal& phi,
                                      const Signal& psi, Time begin, Time end) {
  Signal out;
  std::vector<Time> cuts;
  for (const auto& s : phi) cuts.push_back(s.begin);
  for (const auto& s : psi) cuts.push_back(s.begin);
  std::sort(cuts.begin(), cuts.end());

  for_each_piece(begin, end, cuts, [&](Time x, Time y) {
    const double f = value_at(phi, x);
    const double g = value_at(psi, x);
    for (auto& c : m.candidates) c.value = std::min(c.value, f);

    std::vector<std::pair<Interval, double>> boxes;
    for (const auto& c : m.candidates) {
      boxes.push_back({{std::max(c.start + w.lower, c.stop), shifted_end(c.stop, w)}, c.value});
    }
    // Start points inside the current piece.
    if (w.lower == 0) {
      boxes.push_back({{x, y}, g});
    } else {
      boxes.push_back({{x + w.lower, y}, std::min(g, f)});
    }
    for (const auto& s : envelope(boxes, true, x, y)) push_segment(out, s.begin, s.end, s.value);

    m.candidates.push_back({x, y, std::min(g, f)});
    if (w.upper) {
      while (!m.candidates.empty() && m.candidates.front().stop + *w.upper <= y)
        m.candidates.pop_front();
    }
    // An older started candidate is useless once a newer started one is at
    // least as large: it expires earlier and later caps affect both alike.
    double best = RobustDomain::bottom();
    bool have_best = false;
    std::deque<Candidate> kept;
    for (auto it = m.candidates.rbegin(); it != m.candidates.rend(); ++it) {
      const bool started = std::max(it->start + w.lower, it->stop) <= y;
      if (started && have_best && it->value <= best) continue;
      if (started) {
        best = have_best ? std::max(best, it->value) : it->value;
        have_best = true;
      }
      kept.push_front(*it);
    }
    m.candidates = std::move(kept);
  });
  return out;
}

}  // namespace pastmon
