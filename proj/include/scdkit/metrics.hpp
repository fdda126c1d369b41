#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "scdkit/decoder.hpp"
#include "scdkit/frame_series.hpp"
#include "scdkit/interval.hpp"
#include "scdkit/rttm.hpp"

namespace scdkit {

struct SegMetrics {
  double coverage = 0.0;
  double purity = 0.0;
  double f1 = 0.0;
};

// What the purity denominator counts: hypothesis time inside reference
// speech only, or all hypothesis time.
enum class PurityNorm { kSpeech, kFull };

// Raw sums behind purity and coverage. Tallies of several files add up to
// the tally of the files treated as one recording.
struct SegmentationTally {
  double coverage_num = 0.0;
  double coverage_den = 0.0;
  double purity_num = 0.0;
  double purity_den = 0.0;

  SegmentationTally& operator+=(const SegmentationTally& other);
  SegMetrics metrics() const;
};

// Purity and coverage of a hypothesis segmentation against reference turns,
// in exact interval arithmetic. Overlapping reference turns each count in
// the coverage denominator. Throws Error(kInvalidArgument) when the segments
// do not partition [0, extent] and Error(kUndefinedMetric) for an empty
// reference.
SegmentationTally segmentation_tally(const std::vector<Interval>& hyp_segments,
                                     const Timeline& reference,
                                     PurityNorm norm = PurityNorm::kSpeech);

SegMetrics segmentation_metrics(const std::vector<Interval>& hyp_segments,
                                const Timeline& reference,
                                PurityNorm norm = PurityNorm::kSpeech);

struct DetMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  double miss_rate = 0.0;
  double fa_rate = 0.0;
  double error_rate = 0.0;  // miss_rate + fa_rate, may exceed 1
};

inline constexpr double kDefaultEvalGrid = 0.01;

// Cell counts on a uniform grid. Miss and false-alarm rates are relative to
// the reference positives, so metrics() throws Error(kUndefinedMetric) when
// there are none. Precision is 0 when nothing was detected.
struct DetectionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  DetectionCounts& operator+=(const DetectionCounts& other);
  DetMetrics metrics() const;
};

// Grid cell i covers [i, i + 1) * grid and is positive in a set when its
// center lies in one of the half-open intervals. There are
// floor(extent / grid) cells.
DetectionCounts detection_counts(const std::vector<Interval>& hyp,
                                 const std::vector<Interval>& ref,
                                 double extent, double grid = kDefaultEvalGrid);

DetMetrics detection_metrics(const IntervalSet& hyp, const IntervalSet& ref,
                             double extent, double grid = kDefaultEvalGrid);

using TaskTally = std::variant<SegmentationTally, DetectionCounts>;
using MetricRecord = std::variant<SegMetrics, DetMetrics>;

TaskTally& operator+=(TaskTally& into, const TaskTally& other);
MetricRecord to_metrics(const TaskTally& tally);

// The value a tuner optimizes: F1 for SCD and OSD, detection error rate for
// VAD (lower is better).
double objective_value(TaskKind task, const MetricRecord& record);
bool objective_maximized(TaskKind task);

struct EvalOptions {
  PurityNorm purity_norm = PurityNorm::kSpeech;
  double grid = kDefaultEvalGrid;
};

// Decodes the scores of one task at a threshold and tallies them against
// the reference (which needs a bound extent). SCD goes through peak picking
// and segmentation; VAD and OSD through binarization.
TaskTally score_tally(const FrameSeries& scores, const Timeline& reference,
                      TaskKind task, double threshold,
                      const EvalOptions& options = {});

struct CurvePoint {
  double threshold = 0.0;
  MetricRecord metrics;
};

// One metric record per threshold, ordered by threshold.
std::vector<CurvePoint> sweep_curve(const FrameSeries& scores,
                                    const Timeline& reference, TaskKind task,
                                    std::vector<double> thresholds,
                                    const EvalOptions& options = {});

}  // namespace scdkit
