#include "scdkit/windowing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scdkit/error.hpp"

namespace scdkit {
namespace {

constexpr double kTimeSlack = 1e-9;

}  // namespace

std::size_t WindowPlan::owner(double t) const {
  auto it = std::upper_bound(
      keep_ranges.begin(), keep_ranges.end(), t,
      [](double x, const Interval& r) { return x < r.end; });
  if (it == keep_ranges.end()) return keep_ranges.size() - 1;
  return static_cast<std::size_t>(it - keep_ranges.begin());
}

WindowPlan plan_windows(double extent, double window_len, double hop) {
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw Error(ErrorCode::kInvalidArgument, "extent must be positive");
  }
  if (!(hop > 0.0) || !(hop <= window_len)) {
    throw Error(ErrorCode::kInvalidArgument,
                "window hop must satisfy 0 < hop <= window_len");
  }
  WindowPlan plan;
  plan.extent = extent;
  plan.window_len = window_len;
  plan.hop = hop;

  if (extent <= window_len + kTimeSlack) {
    plan.windows.push_back({0.0, extent});
    plan.keep_ranges.push_back({0.0, extent});
    return plan;
  }

  for (std::size_t k = 0;; ++k) {
    double start = static_cast<double>(k) * hop;
    if (start + window_len > extent + kTimeSlack) break;
    plan.windows.push_back({start, start + window_len});
  }
  if (plan.windows.back().end < extent - kTimeSlack) {
    plan.windows.push_back({extent - window_len, extent});
  }

  const double margin = (window_len - hop) / 2.0;
  double keep_start = 0.0;
  for (std::size_t i = 0; i < plan.windows.size(); ++i) {
    bool last = i + 1 == plan.windows.size();
    double keep_end = last ? extent : plan.windows[i].end - margin;
    plan.keep_ranges.push_back({keep_start, keep_end});
    keep_start = keep_end;
  }
  return plan;
}

std::size_t expected_window_frames(const WindowPlan& plan, std::size_t index,
                                   double frame_hop) {
  return frame_count(plan.windows.at(index).length(), frame_hop);
}

FrameSeries stitch(const WindowPlan& plan,
                   std::span<const FrameSeries> per_window) {
  if (per_window.size() != plan.size()) {
    throw Error(ErrorCode::kFrameMismatch,
                "expected " + std::to_string(plan.size()) + " windows, got " +
                    std::to_string(per_window.size()));
  }
  const double frame_hop = per_window.front().hop;
  for (std::size_t w = 0; w < per_window.size(); ++w) {
    const auto& s = per_window[w];
    if (std::abs(s.hop - frame_hop) > 1e-12) {
      throw Error(ErrorCode::kFrameMismatch,
                  "window " + std::to_string(w) + " has a different hop");
    }
    std::size_t want = expected_window_frames(plan, w, frame_hop);
    if (s.size() != want) {
      throw Error(ErrorCode::kFrameMismatch,
                  "window " + std::to_string(w) + " has " +
                      std::to_string(s.size()) + " frames, expected " +
                      std::to_string(want));
    }
  }

  FrameSeries out;
  out.hop = frame_hop;
  out.values.resize(frame_count(plan.extent, frame_hop));
  std::size_t w = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double t = out.center(i);
    while (w + 1 < plan.size() && t >= plan.keep_ranges[w].end) ++w;
    const auto& src = per_window[w];
    double local = (t - plan.windows[w].start) / frame_hop;
    std::size_t j = static_cast<std::size_t>(std::max(0.0, std::floor(local)));
    j = std::min(j, src.size() - 1);
    out.values[i] = src.values[j];
  }
  return out;
}

FrameSeries stitch(const WindowPlan& plan,
                   std::vector<IndexedSeries> per_window) {
  std::sort(per_window.begin(), per_window.end(),
            [](const auto& a, const auto& b) { return a.window < b.window; });
  std::vector<FrameSeries> ordered;
  ordered.reserve(per_window.size());
  for (std::size_t i = 0; i < per_window.size(); ++i) {
    if (per_window[i].window != i) {
      throw Error(ErrorCode::kFrameMismatch,
                  "missing or duplicate window " + std::to_string(i));
    }
    ordered.push_back(std::move(per_window[i].series));
  }
  return stitch(plan, std::span<const FrameSeries>(ordered));
}

}  // namespace scdkit
