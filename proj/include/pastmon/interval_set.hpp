#pragma once

#include <limits>
#include <vector>

#include "pastmon/network.hpp"

namespace pastmon {

/// Stand-in for +infinity in internal time.
inline constexpr Time kForever = std::numeric_limits<Time>::max() / 4;

/// Half-open interval [begin, end).
struct Interval {
  Time begin = 0;
  Time end = 0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Sorted, pairwise disjoint and non-adjacent half-open intervals. Logically
/// equal sets have identical representations.
class IntervalSet {
 public:
  IntervalSet() = default;
  IntervalSet(std::initializer_list<Interval> intervals);
  explicit IntervalSet(std::vector<Interval> intervals);

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  std::size_t size() const { return intervals_.size(); }
  bool contains(Time t) const;

  /// Adds an interval starting at or after the start of the last one.
  void append(Interval i);

  auto begin() const { return intervals_.begin(); }
  auto end() const { return intervals_.end(); }

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> intervals_;
};

IntervalSet unite(const IntervalSet& a, const IntervalSet& b);
IntervalSet intersect(const IntervalSet& a, const IntervalSet& b);
/// Complement within the horizon [lo, hi).
IntervalSet complement(const IntervalSet& a, Time lo, Time hi);
IntervalSet clip(const IntervalSet& a, Time lo, Time hi);
/// Union of [s + lower, e + upper) over all members: the points t that have a
/// member point in [t - upper, t - lower].
IntervalSet shift_sum(const IntervalSet& a, const Window& window);

}  // namespace pastmon
