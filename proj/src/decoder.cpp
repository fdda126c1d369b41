#include "scdkit/decoder.hpp"

#include <algorithm>

#include "scdkit/error.hpp"

namespace scdkit {

ChangePointSet detect_peaks(const FrameSeries& scores, double threshold) {
  if (scores.values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot decode an empty series");
  }
  ChangePointSet out;
  out.threshold_used = threshold;
  const auto& v = scores.values;
  const std::size_t n = v.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[j + 1] == v[i]) ++j;
    bool left_lower = i == 0 || v[i - 1] < v[i];
    bool right_lower = j + 1 == n || v[j + 1] < v[i];
    if (v[i] > threshold && left_lower && right_lower) {
      out.points.push_back(scores.center(i + (j - i) / 2));
    }
    i = j + 1;
  }
  return out;
}

IntervalSet binarize(const FrameSeries& scores, double threshold) {
  if (scores.values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot decode an empty series");
  }
  IntervalSet out;
  out.threshold_used = threshold;
  const auto& v = scores.values;
  for (std::size_t i = 0; i < v.size();) {
    if (!(v[i] >= threshold)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < v.size() && v[j] >= threshold) ++j;
    out.intervals.push_back({scores.frame_start(i), scores.frame_start(j)});
    i = j;
  }
  return out;
}

std::vector<Interval> points_to_segments(const ChangePointSet& points,
                                         double extent) {
  std::vector<Interval> segments;
  double start = 0.0;
  for (double p : points.points) {
    p = std::clamp(p, 0.0, extent);
    if (p > start) {
      segments.push_back({start, p});
      start = p;
    }
  }
  if (extent > start) segments.push_back({start, extent});
  return segments;
}

}  // namespace scdkit
