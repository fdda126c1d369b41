#include "scdkit/labels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "scdkit/error.hpp"

namespace scdkit {

void LabelConfig::validate() const {
  if (!(scd_half_width > 0.0) || !(boundary_slope > 0.0) ||
      !(merge_gap > 0.0) || !(hop > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "label config values must be strictly positive");
  }
  if (scd_half_width < hop) {
    throw Error(ErrorCode::kInvalidArgument,
                "scd_half_width must be at least one hop");
  }
}

Timeline merge_short_gaps(const Timeline& timeline, double merge_gap) {
  std::map<std::string, std::vector<const SpeakerTurn*>> by_speaker;
  for (const auto& turn : timeline.turns()) {
    by_speaker[turn.speaker].push_back(&turn);
  }

  std::vector<SpeakerTurn> merged;
  for (auto& [speaker, turns] : by_speaker) {
    // Turns are already onset-sorted within the timeline.
    double start = turns.front()->onset;
    double end = turns.front()->offset();
    for (std::size_t i = 1; i < turns.size(); ++i) {
      if (turns[i]->onset - end < merge_gap) {
        end = std::max(end, turns[i]->offset());
      } else {
        merged.push_back({timeline.file_id(), start, end - start, speaker});
        start = turns[i]->onset;
        end = turns[i]->offset();
      }
    }
    merged.push_back({timeline.file_id(), start, end - start, speaker});
  }
  return Timeline(timeline.file_id(), std::move(merged), timeline.extent());
}

std::vector<double> extract_change_points(const Timeline& timeline) {
  std::vector<double> raw;
  raw.reserve(timeline.turns().size() * 2);
  for (const auto& turn : timeline.turns()) {
    raw.push_back(turn.onset);
    raw.push_back(turn.offset());
  }
  if (timeline.extent()) {
    for (auto& p : raw) p = std::clamp(p, 0.0, *timeline.extent());
  }
  std::sort(raw.begin(), raw.end());
  std::vector<double> points;
  for (double p : raw) {
    if (points.empty() || p - points.back() >= kChangePointResolution) {
      points.push_back(p);
    }
  }
  return points;
}

double scd_label_at(const std::vector<double>& points, double t,
                    double half_width) {
  // Only points within half_width of t contribute.
  auto it = std::lower_bound(points.begin(), points.end(), t - half_width);
  double best = 0.0;
  for (; it != points.end() && *it <= t + half_width; ++it) {
    best = std::max(best, 1.0 - std::abs(t - *it) / half_width);
  }
  return best;
}

FrameSeries scd_labels(const std::vector<double>& change_points, double extent,
                       const LabelConfig& cfg) {
  cfg.validate();
  if (!(extent > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "extent must be positive");
  }
  FrameSeries series;
  series.hop = cfg.hop;
  series.values.assign(frame_count(extent, cfg.hop), 0.0);
  for (std::size_t i = 0; i < series.size(); ++i) {
    series.values[i] =
        scd_label_at(change_points, series.center(i), cfg.scd_half_width);
  }
  return series;
}

std::vector<Interval> positive_regions(const Timeline& timeline,
                                       TaskKind task) {
  if (task == TaskKind::kScd) {
    throw Error(ErrorCode::kInvalidArgument,
                "SCD has no activity regions; use scd_labels");
  }
  const int needed = task == TaskKind::kVad ? 1 : 2;

  // Same-speaker turns are unioned first so that each speaker contributes at
  // most one to the active count.
  std::map<std::string, std::vector<Interval>> by_speaker;
  for (const auto& turn : timeline.turns()) {
    by_speaker[turn.speaker].push_back({turn.onset, turn.offset()});
  }
  std::vector<std::pair<double, int>> events;
  for (auto& [speaker, spans] : by_speaker) {
    for (const auto& iv : interval_union(std::move(spans))) {
      events.emplace_back(iv.start, +1);
      events.emplace_back(iv.end, -1);
    }
  }
  // At equal times, offsets apply before onsets (half-open turns).
  std::sort(events.begin(), events.end());

  std::vector<Interval> regions;
  int active = 0;
  double region_start = 0.0;
  for (std::size_t i = 0; i < events.size();) {
    const double t = events[i].first;
    const int before = active;
    for (; i < events.size() && events[i].first == t; ++i) {
      active += events[i].second;
    }
    if (before < needed && active >= needed) {
      region_start = t;
    } else if (before >= needed && active < needed) {
      regions.push_back({region_start, t});
    }
  }
  return interval_union(std::move(regions));
}

double activity_label_at(const std::vector<Interval>& regions, double t,
                         double slope) {
  const double half = slope / 2.0;
  auto it = std::lower_bound(
      regions.begin(), regions.end(), t - half,
      [](const Interval& r, double x) { return r.end < x; });
  double best = 0.0;
  for (; it != regions.end() && it->start <= t + half; ++it) {
    double rising = 0.5 + (t - it->start) / slope;
    double falling = 0.5 + (it->end - t) / slope;
    best = std::max(best, std::clamp(std::min(rising, falling), 0.0, 1.0));
  }
  return best;
}

FrameSeries activity_labels(const Timeline& timeline, TaskKind task,
                            const LabelConfig& cfg) {
  cfg.validate();
  const auto regions = positive_regions(timeline, task);
  const double extent = timeline.require_extent();
  FrameSeries series;
  series.hop = cfg.hop;
  series.values.assign(frame_count(extent, cfg.hop), 0.0);
  for (std::size_t i = 0; i < series.size(); ++i) {
    series.values[i] =
        activity_label_at(regions, series.center(i), cfg.boundary_slope);
  }
  return series;
}

FrameSeries task_labels(const Timeline& timeline, TaskKind task,
                        const LabelConfig& cfg) {
  if (task == TaskKind::kScd) {
    return scd_labels(extract_change_points(timeline),
                      timeline.require_extent(), cfg);
  }
  return activity_labels(timeline, task, cfg);
}

int active_speaker_count(const Timeline& timeline, double t) {
  if (t < 0.0 || (timeline.extent() && t > *timeline.extent())) {
    throw Error(ErrorCode::kPrecondition,
                "time outside the timeline extent");
  }
  std::set<std::string_view> active;
  for (const auto& turn : timeline.turns()) {
    if (turn.onset > t) break;
    if (t < turn.offset()) active.insert(turn.speaker);
  }
  return static_cast<int>(active.size());
}

}  // namespace scdkit
