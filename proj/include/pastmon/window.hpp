#pragma once

// Sliding-window aggregation over discrete time for the timed operators.
// Inputs are stored as runs of equal values, so memory is proportional to the
// number of value changes inside a window rather than to its length, and the
// amortized cost per step does not depend on the window bounds.

#include <cassert>
#include <deque>
#include <optional>

#include "pastmon/network.hpp"

namespace pastmon {

/// Fixed delay line: values pushed at step t are read back at step t + delay.
template <class V>
class RunDelay {
 public:
  void push(Time t, V value) {
    if (!runs_.empty() && runs_.back().value == value && runs_.back().last + 1 == t) {
      runs_.back().last = t;
    } else {
      runs_.push_back({t, t, value});
    }
  }

  /// Value pushed at `index`; earlier entries are discarded.
  V take(Time index) {
    while (!runs_.empty() && runs_.front().last < index) runs_.pop_front();
    assert(!runs_.empty() && runs_.front().first <= index);
    return runs_.front().value;
  }

  std::size_t size() const { return runs_.size(); }

 private:
  struct Run {
    Time first, last;
    V value;
  };
  std::deque<Run> runs_;
};

/// Aggregates the values of steps [t - upper, t - lower] clipped to [0, t],
/// with the lattice join (Join = true, timed once) or meet (timed always).
/// An empty window yields the identity of the aggregation.
template <class D, bool Join>
class WindowAggregator {
 public:
  using V = typename D::value_type;

  WindowAggregator(Time lower, std::optional<Time> upper) : lower_(lower), upper_(upper) {}

  V step(Time t, V value) {
    push_pending(t, value);
    const Time release = t - lower_;
    while (!pending_.empty() && pending_.front().first <= release) {
      Run& front = pending_.front();
      if (front.last <= release) {
        insert(front);
        pending_.pop_front();
      } else {
        insert({front.first, release, front.value});
        front.first = release + 1;
      }
    }
    if (upper_) {
      while (!wedge_.empty() && wedge_.front().last < t - *upper_) wedge_.pop_front();
    }
    return wedge_.empty() ? identity() : wedge_.front().value;
  }

  std::size_t footprint() const { return pending_.size() + wedge_.size(); }

 private:
  struct Run {
    Time first, last;
    V value;
  };

  static V identity() { return Join ? D::bottom() : D::top(); }
  static bool dominates(V newer, V older) {
    return Join ? D::leq(older, newer) : D::leq(newer, older);
  }

  void push_pending(Time t, V value) {
    if (!pending_.empty() && pending_.back().value == value && pending_.back().last + 1 == t) {
      pending_.back().last = t;
    } else {
      pending_.push_back({t, t, value});
    }
  }

  void insert(Run run) {
    while (!wedge_.empty() && dominates(run.value, wedge_.back().value)) wedge_.pop_back();
    wedge_.push_back(run);
  }

  Time lower_;
  std::optional<Time> upper_;
  std::deque<Run> pending_;  // steps newer than t - lower
  std::deque<Run> wedge_;    // monotone: front is the aggregate
};

/// Timed since over discrete time:
///   y(t) = join over t' in [t - upper, t - lower] of
///          meet(psi(t'), meet over (t', t] of phi).
///
/// A start point t' becomes eligible once t' <= t - lower; at that moment
/// its value is psi(t') capped by the meet of phi over the last `lower`
/// steps. Eligible candidates are kept in a wedge ordered by index with
/// strictly decreasing values, and every new phi caps the whole wedge.
template <class D>
class BoundedSince {
 public:
  using V = typename D::value_type;

  BoundedSince(Time lower, std::optional<Time> upper)
      : lower_(lower), upper_(upper), recent_phi_(0, lower > 0 ? lower - 1 : 0) {}

  V step(Time t, V phi, V psi) {
    cap(phi);

    // Meet of phi over (t - lower, t]; only needed when lower > 0.
    V recent = lower_ > 0 ? recent_phi_.step(t, phi) : D::top();
    if (lower_ > 0) delayed_psi_.push(t, psi);

    const Time start = t - lower_;
    if (start >= 0) {
      V initial = lower_ > 0 ? delayed_psi_.take(start) : psi;
      V value = D::meet(initial, recent);
      while (!eligible_.empty() && D::leq(eligible_.back().value, value)) eligible_.pop_back();
      eligible_.push_back({start, value});
    }
    if (upper_) {
      while (!eligible_.empty() && eligible_.front().index < t - *upper_) eligible_.pop_front();
    }
    return eligible_.empty() ? D::bottom() : eligible_.front().value;
  }

  std::size_t footprint() const { return eligible_.size() + delayed_psi_.size(); }

 private:
  struct Candidate {
    Time index;
    V value;
  };

  void cap(V phi) {
    while (eligible_.size() >= 2 && D::leq(phi, eligible_[1].value)) eligible_.pop_front();
    if (!eligible_.empty()) eligible_.front().value = D::meet(eligible_.front().value, phi);
  }

  Time lower_;
  std::optional<Time> upper_;
  WindowAggregator<D, false> recent_phi_;
  RunDelay<V> delayed_psi_;
  std::deque<Candidate> eligible_;
};

}  // namespace pastmon
