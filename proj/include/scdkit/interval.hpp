#pragma once

#include <algorithm>
#include <vector>

namespace scdkit {

// Half-open time span [start, end) in seconds.
struct Interval {
  double start = 0.0;
  double end = 0.0;

  double length() const { return end - start; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

inline double overlap(const Interval& a, const Interval& b) {
  return std::max(0.0, std::min(a.end, b.end) - std::max(a.start, b.start));
}

// Sorted, disjoint union of the inputs. Touching intervals are fused.
std::vector<Interval> interval_union(std::vector<Interval> intervals);

double total_length(const std::vector<Interval>& intervals);

// Length of the intersection of two sorted, disjoint interval lists.
double intersection_length(const std::vector<Interval>& a,
                           const std::vector<Interval>& b);

}  // namespace scdkit
