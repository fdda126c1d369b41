#include "scdkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scdkit/error.hpp"
#include "scdkit/labels.hpp"

namespace scdkit {
namespace {

constexpr double kPartitionSlack = 1e-6;

double harmonic_mean(double a, double b) {
  return a + b > 0.0 ? 2.0 * a * b / (a + b) : 0.0;
}

void check_partition(const std::vector<Interval>& segments, double extent) {
  if (segments.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "hypothesis has no segments");
  }
  if (std::abs(segments.front().start) > kPartitionSlack ||
      std::abs(segments.back().end - extent) > kPartitionSlack) {
    throw Error(ErrorCode::kInvalidArgument,
                "hypothesis segments must span [0, extent]");
  }
  for (std::size_t k = 0; k < segments.size(); ++k) {
    if (!(segments[k].end > segments[k].start)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "hypothesis segment " + std::to_string(k) + " is empty");
    }
    if (k > 0 &&
        std::abs(segments[k].start - segments[k - 1].end) > kPartitionSlack) {
      throw Error(ErrorCode::kInvalidArgument,
                  "hypothesis segments " + std::to_string(k - 1) + " and " +
                      std::to_string(k) + " are not contiguous");
    }
  }
}

// First cell whose center is >= x.
std::size_t first_cell_from(double x, double grid) {
  auto center = [grid](std::size_t i) {
    return (static_cast<double>(i) + 0.5) * grid;
  };
  double guess = std::ceil(x / grid - 0.5);
  std::size_t i = guess > 0.0 ? static_cast<std::size_t>(guess) : 0;
  while (i > 0 && center(i - 1) >= x) --i;
  while (center(i) < x) ++i;
  return i;
}

void mark_cells(std::vector<std::uint8_t>& cells,
                const std::vector<Interval>& intervals, double grid,
                std::uint8_t bit) {
  for (const auto& iv : intervals) {
    std::size_t lo = std::min(first_cell_from(iv.start, grid), cells.size());
    std::size_t hi = std::min(first_cell_from(iv.end, grid), cells.size());
    for (std::size_t i = lo; i < hi; ++i) cells[i] |= bit;
  }
}

}  // namespace

SegmentationTally& SegmentationTally::operator+=(
    const SegmentationTally& other) {
  coverage_num += other.coverage_num;
  coverage_den += other.coverage_den;
  purity_num += other.purity_num;
  purity_den += other.purity_den;
  return *this;
}

SegMetrics SegmentationTally::metrics() const {
  if (!(coverage_den > 0.0) || !(purity_den > 0.0)) {
    throw Error(ErrorCode::kUndefinedMetric,
                "purity/coverage undefined without reference speech");
  }
  SegMetrics m;
  m.coverage = coverage_num / coverage_den;
  m.purity = purity_num / purity_den;
  m.f1 = harmonic_mean(m.purity, m.coverage);
  return m;
}

SegmentationTally segmentation_tally(const std::vector<Interval>& hyp_segments,
                                     const Timeline& reference,
                                     PurityNorm norm) {
  if (reference.empty()) {
    throw Error(ErrorCode::kUndefinedMetric,
                "segmentation metrics need at least one reference turn");
  }
  const double extent = reference.extent()
                            ? *reference.extent()
                            : (hyp_segments.empty() ? 0.0 : hyp_segments.back().end);
  check_partition(hyp_segments, extent);

  SegmentationTally tally;
  std::vector<double> best_per_segment(hyp_segments.size(), 0.0);
  std::vector<Interval> speech;
  for (const auto& turn : reference.turns()) {
    const Interval r{turn.onset, std::min(turn.offset(), extent)};
    speech.push_back(r);
    tally.coverage_den += turn.duration;
    auto it = std::upper_bound(
        hyp_segments.begin(), hyp_segments.end(), r.start,
        [](double x, const Interval& s) { return x < s.end; });
    double best = 0.0;
    for (; it != hyp_segments.end() && it->start < r.end; ++it) {
      double ov = overlap(*it, r);
      best = std::max(best, ov);
      auto k = static_cast<std::size_t>(it - hyp_segments.begin());
      best_per_segment[k] = std::max(best_per_segment[k], ov);
    }
    tally.coverage_num += best;
  }
  for (double b : best_per_segment) tally.purity_num += b;
  tally.purity_den = norm == PurityNorm::kSpeech
                         ? total_length(interval_union(std::move(speech)))
                         : extent;
  return tally;
}

SegMetrics segmentation_metrics(const std::vector<Interval>& hyp_segments,
                                const Timeline& reference, PurityNorm norm) {
  return segmentation_tally(hyp_segments, reference, norm).metrics();
}

DetectionCounts& DetectionCounts::operator+=(const DetectionCounts& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  tn += other.tn;
  return *this;
}

DetMetrics DetectionCounts::metrics() const {
  const std::uint64_t positives = tp + fn;
  if (positives == 0) {
    throw Error(ErrorCode::kUndefinedMetric,
                "miss/false-alarm rates undefined without reference positives");
  }
  const auto d = [](std::uint64_t x) { return static_cast<double>(x); };
  DetMetrics m;
  m.precision = tp + fp > 0 ? d(tp) / d(tp + fp) : 0.0;
  m.recall = d(tp) / d(positives);
  m.f1 = harmonic_mean(m.precision, m.recall);
  m.accuracy = d(tp + tn) / d(total());
  m.miss_rate = d(fn) / d(positives);
  m.fa_rate = d(fp) / d(positives);
  m.error_rate = m.miss_rate + m.fa_rate;
  return m;
}

DetectionCounts detection_counts(const std::vector<Interval>& hyp,
                                 const std::vector<Interval>& ref,
                                 double extent, double grid) {
  if (!(grid > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "evaluation grid must be positive");
  }
  std::vector<std::uint8_t> cells(frame_count(extent, grid), 0);
  mark_cells(cells, hyp, grid, 1);
  mark_cells(cells, ref, grid, 2);
  DetectionCounts c;
  for (auto cell : cells) {
    switch (cell) {
      case 3: ++c.tp; break;
      case 1: ++c.fp; break;
      case 2: ++c.fn; break;
      default: ++c.tn; break;
    }
  }
  return c;
}

DetMetrics detection_metrics(const IntervalSet& hyp, const IntervalSet& ref,
                             double extent, double grid) {
  return detection_counts(hyp.intervals, ref.intervals, extent, grid).metrics();
}

TaskTally& operator+=(TaskTally& into, const TaskTally& other) {
  if (into.index() != other.index()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot pool tallies of different tasks");
  }
  std::visit(
      [&other](auto& lhs) {
        lhs += std::get<std::decay_t<decltype(lhs)>>(other);
      },
      into);
  return into;
}

MetricRecord to_metrics(const TaskTally& tally) {
  return std::visit([](const auto& t) -> MetricRecord { return t.metrics(); },
                    tally);
}

bool objective_maximized(TaskKind task) { return task != TaskKind::kVad; }

double objective_value(TaskKind task, const MetricRecord& record) {
  if (task == TaskKind::kScd) return std::get<SegMetrics>(record).f1;
  const auto& det = std::get<DetMetrics>(record);
  return task == TaskKind::kOsd ? det.f1 : det.error_rate;
}

TaskTally score_tally(const FrameSeries& scores, const Timeline& reference,
                      TaskKind task, double threshold,
                      const EvalOptions& options) {
  const double extent = reference.require_extent();
  if (task == TaskKind::kScd) {
    auto segments = points_to_segments(detect_peaks(scores, threshold), extent);
    return segmentation_tally(segments, reference, options.purity_norm);
  }
  const auto hyp = binarize(scores, threshold);
  return detection_counts(hyp.intervals, positive_regions(reference, task),
                          extent, options.grid);
}

std::vector<CurvePoint> sweep_curve(const FrameSeries& scores,
                                    const Timeline& reference, TaskKind task,
                                    std::vector<double> thresholds,
                                    const EvalOptions& options) {
  if (thresholds.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "threshold list is empty");
  }
  for (double t : thresholds) {
    if (!std::isfinite(t)) {
      throw Error(ErrorCode::kInvalidArgument, "thresholds must be finite");
    }
  }
  std::sort(thresholds.begin(), thresholds.end());
  std::vector<CurvePoint> curve;
  curve.reserve(thresholds.size());
  for (double t : thresholds) {
    curve.push_back(
        {t, to_metrics(score_tally(scores, reference, task, t, options))});
  }
  return curve;
}

}  // namespace scdkit
