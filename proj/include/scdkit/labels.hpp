#pragma once

#include <vector>

#include "scdkit/frame_series.hpp"
#include "scdkit/interval.hpp"
#include "scdkit/rttm.hpp"

namespace scdkit {

struct LabelConfig {
  // Half-width of the triangle placed on each change point.
  double scd_half_width = 0.2;
  // Total width of the linear ramp across each activity boundary.
  double boundary_slope = 0.4;
  // Same-speaker gaps strictly shorter than this are fused (training only).
  double merge_gap = 1.0;
  double hop = 0.02;

  void validate() const;
};

// Change points closer together than this collapse into one.
inline constexpr double kChangePointResolution = 0.001;

// Per speaker, fuses consecutive turns separated by less than `merge_gap`
// (overlapping turns included). Speakers never interact.
Timeline merge_short_gaps(const Timeline& timeline, double merge_gap);

// Every turn onset and offset, sorted and deduplicated at 1 ms. Points are
// clamped to [0, extent] when the extent is bound.
std::vector<double> extract_change_points(const Timeline& timeline);

// Triangular label at time t: max over points of max(0, 1 - |t - p| / w).
double scd_label_at(const std::vector<double>& points, double t,
                    double half_width);

FrameSeries scd_labels(const std::vector<double>& change_points, double extent,
                       const LabelConfig& cfg = {});

// Regions where at least one (VAD) or two (OSD) distinct speakers are active.
// Throws Error(kInvalidArgument) for SCD.
std::vector<Interval> positive_regions(const Timeline& timeline, TaskKind task);

// Trapezoid label at time t: 0.5 on each region boundary, ramping linearly
// to 0 and 1 at half the slope width outside and inside. Regions combine by
// max.
double activity_label_at(const std::vector<Interval>& regions, double t,
                         double slope);

// Requires a bound extent. Throws Error(kInvalidArgument) for SCD.
FrameSeries activity_labels(const Timeline& timeline, TaskKind task,
                            const LabelConfig& cfg = {});

// Labels for any task. SCD labels use the timeline's change points as given;
// merge_short_gaps is the caller's policy choice.
FrameSeries task_labels(const Timeline& timeline, TaskKind task,
                        const LabelConfig& cfg = {});

// Distinct speakers with onset <= t < offset.
int active_speaker_count(const Timeline& timeline, double t);

}  // namespace scdkit
