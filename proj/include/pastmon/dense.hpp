#pragma once

// Dense-time evaluation. Field values are constant between messages, so every
// node output over an elapsed span is piecewise constant: an interval set for
// Boolean semantics, a list of segments for robustness semantics. Each update
// finalizes the output on one span and never revisits it.

#include <deque>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "pastmon/interval_set.hpp"
#include "pastmon/network.hpp"

namespace pastmon {

/// Constant value over [begin, end).
template <class V>
struct BasicSegment {
  Time begin = 0;
  Time end = 0;
  V value{};
  friend bool operator==(const BasicSegment&, const BasicSegment&) = default;
};

using RobustSegment = BasicSegment<double>;
using BooleanSegment = BasicSegment<bool>;

/// Merges adjacent segments that carry equal values.
template <class V>
std::vector<BasicSegment<V>> condense(const std::vector<BasicSegment<V>>& segments) {
  std::vector<BasicSegment<V>> out;
  for (const auto& s : segments) {
    if (!out.empty() && out.back().end == s.begin && out.back().value == s.value) {
      out.back().end = s.end;
    } else {
      out.push_back(s);
    }
  }
  return out;
}

/// Truth set of `set` within [begin, end) as a tiling of Boolean segments.
std::vector<BooleanSegment> to_segments(const IntervalSet& set, Time begin, Time end);

class DenseBooleanEngine {
 public:
  explicit DenseBooleanEngine(std::shared_ptr<const MonitorNetwork> network);

  /// Output truth set on [begin, end), during which `fields` held.
  IntervalSet update(const FieldMap& fields, Time begin, Time end);

  const MonitorNetwork& network() const { return *net_; }

 private:
  struct Memory {
    std::optional<Time> latch;     // untimed once/always: first true/false time
    bool carry = false;            // untimed since
    std::deque<Interval> history;  // timed once/always: child (or negated child) truth
  };

  IntervalSet advance(const Node& n, Memory& m, Time begin, Time end);
  static IntervalSet timed_once(const Window& w, std::deque<Interval>& history,
                                const IntervalSet& input, Time begin, Time end);
  IntervalSet since(const Node& n, Memory& m, const IntervalSet& phi, const IntervalSet& psi,
                    Time begin, Time end);

  std::shared_ptr<const MonitorNetwork> net_;
  std::vector<IntervalSet> values_;
  std::vector<Memory> memory_;
};

class DenseRobustEngine {
 public:
  using Signal = std::vector<RobustSegment>;

  explicit DenseRobustEngine(std::shared_ptr<const MonitorNetwork> network);

  /// Output signal on [begin, end), during which `fields` held.
  Signal update(const FieldMap& fields, Time begin, Time end);

  const MonitorNetwork& network() const { return *net_; }

 private:
  // A value that applies on [begin, end) of output time.
  struct Box {
    Time begin, end;
    double value;
  };
  // Start-point candidate of a timed since: input span [start, stop) and its
  // value capped by every later phi.
  struct Candidate {
    Time start, stop;
    double value;
  };
  struct Memory {
    double running = 0.0;
    std::deque<Box> eligible;  // timed once/always: wedge of started boxes
    std::deque<Box> pending;   // timed once/always: boxes not yet started
    std::deque<Candidate> candidates;  // timed since
  };

  Signal advance(const Node& n, Memory& m, Time begin, Time end);
  static Signal sliding(const Window& w, bool join, Memory& m, const Signal& input, Time begin,
                        Time end);
  static Signal timed_since(const Window& w, Memory& m, const Signal& phi, const Signal& psi,
                            Time begin, Time end);

  std::shared_ptr<const MonitorNetwork> net_;
  std::vector<Signal> values_;
  std::vector<Memory> memory_;
};

}  // namespace pastmon
