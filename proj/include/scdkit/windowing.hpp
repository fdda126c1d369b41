#pragma once

#include <span>
#include <vector>

#include "scdkit/frame_series.hpp"
#include "scdkit/interval.hpp"

namespace scdkit {

// Fixed-length inference windows over a recording, and the stretch of each
// window whose predictions survive stitching.
//
// Interior windows keep their central `hop` seconds, the first window keeps
// from 0 and the last keeps through the extent. When the extent is not a
// whole number of hops, the final window is anchored to the end of the audio
// rather than padded. Keep ranges are half-open and partition [0, extent];
// the last one is closed at the extent.
struct WindowPlan {
  double extent = 0.0;
  double window_len = 20.0;
  double hop = 10.0;
  std::vector<Interval> windows;
  std::vector<Interval> keep_ranges;

  std::size_t size() const { return windows.size(); }

  // Index of the window whose keep range owns time t (clamped to the file).
  std::size_t owner(double t) const;
};

WindowPlan plan_windows(double extent, double window_len = 20.0,
                        double hop = 10.0);

// Frames a window of the plan must carry at the given frame hop.
std::size_t expected_window_frames(const WindowPlan& plan, std::size_t index,
                                   double frame_hop);

// Joins per-window predictions into one series of floor(extent / hop)
// frames. Every output frame is a copy of the frame of its owning window
// that covers the same instant; nothing is averaged. Throws
// Error(kFrameMismatch) naming the first window whose frame count or hop
// does not match the plan.
FrameSeries stitch(const WindowPlan& plan, std::span<const FrameSeries> per_window);

struct IndexedSeries {
  std::size_t window = 0;
  FrameSeries series;
};

// Same as above for windows arriving in any order.
FrameSeries stitch(const WindowPlan& plan, std::vector<IndexedSeries> per_window);

}  // namespace scdkit
