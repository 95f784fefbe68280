#include "pastmon/interval_set.hpp"

#include <algorithm>

namespace pastmon {

IntervalSet::IntervalSet(std::initializer_list<Interval> intervals)
    : IntervalSet(std::vector<Interval>(intervals)) {}

IntervalSet::IntervalSet(std::vector<Interval> intervals) {
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.begin < b.begin; });
  for (const Interval& i : intervals) append(i);
}

bool IntervalSet::contains(Time t) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t,
                             [](Time x, const Interval& i) { return x < i.begin; });
  return it != intervals_.begin() && std::prev(it)->end > t;
}

void IntervalSet::append(Interval i) {
  if (i.begin >= i.end) return;
  if (!intervals_.empty() && intervals_.back().end >= i.begin) {
    intervals_.back().end = std::max(intervals_.back().end, i.end);
  } else {
    intervals_.push_back(i);
  }
}

IntervalSet unite(const IntervalSet& a, const IntervalSet& b) {
  IntervalSet out;
  auto x = a.begin(), y = b.begin();
  while (x != a.end() || y != b.end()) {
    if (y == b.end() || (x != a.end() && x->begin <= y->begin)) {
      out.append(*x++);
    } else {
      out.append(*y++);
    }
  }
  return out;
}

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
  IntervalSet out;
  auto x = a.begin(), y = b.begin();
  while (x != a.end() && y != b.end()) {
    Time lo = std::max(x->begin, y->begin);
    Time hi = std::min(x->end, y->end);
    if (lo < hi) out.append({lo, hi});
    if (x->end < y->end) ++x;
    else ++y;
  }
  return out;
}

IntervalSet complement(const IntervalSet& a, Time lo, Time hi) {
  IntervalSet out;
  Time cursor = lo;
  for (const Interval& i : a) {
    if (i.end <= lo) continue;
    if (i.begin >= hi) break;
    if (i.begin > cursor) out.append({cursor, i.begin});
    cursor = std::max(cursor, i.end);
  }
  if (cursor < hi) out.append({cursor, hi});
  return out;
}

IntervalSet clip(const IntervalSet& a, Time lo, Time hi) {
  IntervalSet out;
  for (const Interval& i : a) {
    Time b = std::max(i.begin, lo), e = std::min(i.end, hi);
    if (b < e) out.append({b, e});
  }
  return out;
}

IntervalSet shift_sum(const IntervalSet& a, const Window& window) {
  IntervalSet out;
  for (const Interval& i : a) {
    Time b = i.begin + window.lower;
    Time e = window.upper ? i.end + *window.upper : kForever;
    out.append({b, std::min(e, kForever)});
  }
  return out;
}

}  // namespace pastmon
