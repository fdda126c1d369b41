#pragma once

#include <vector>

#include "scdkit/frame_series.hpp"
#include "scdkit/interval.hpp"

namespace scdkit {

struct ChangePointSet {
  std::vector<double> points;  // strictly increasing, seconds
  double threshold_used = 0.0;
};

struct IntervalSet {
  std::vector<Interval> intervals;  // sorted, disjoint
  double threshold_used = 0.0;
};

// Local maxima strictly above the threshold. A run of equal values is one
// peak when both neighbours are strictly smaller (or absent) and is reported
// at its center frame, the lower one for even-length runs. Times are frame
// centers. Throws Error(kInvalidArgument) on an empty series.
ChangePointSet detect_peaks(const FrameSeries& scores, double threshold);

// Maximal runs of frames with score >= threshold, as [first frame start,
// last frame end]. Throws Error(kInvalidArgument) on an empty series.
IntervalSet binarize(const FrameSeries& scores, double threshold);

// Consecutive segments between 0, the points, and the extent, with
// zero-length segments dropped. Points are clamped into [0, extent].
std::vector<Interval> points_to_segments(const ChangePointSet& points,
                                         double extent);

}  // namespace scdkit
