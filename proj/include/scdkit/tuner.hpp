#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scdkit/metrics.hpp"
#include "scdkit/rttm.hpp"
#include "scdkit/score_io.hpp"

namespace scdkit {

// One recording of a dev or test set: model scores and its reference with a
// bound extent.
struct EvalItem {
  ScoreFile scores;
  Timeline reference;
};

// Pairs score files with references by file_id. The reference extent comes
// from `durations` when present (e.g. audio headers), otherwise it is the
// larger of the scored span and the last turn offset. Throws
// Error(kMissingReference) listing every score file without a reference.
std::vector<EvalItem> pair_with_references(
    std::vector<ScoreFile> scores, const std::map<std::string, Timeline>& references,
    const std::map<std::string, double>& durations = {});

// 0.05, 0.10, ..., 0.95.
std::vector<double> default_threshold_grid();

// Per-file tallies for every threshold, computed on a worker pool. Result
// is indexed [threshold][file] and independent of scheduling.
std::vector<std::vector<TaskTally>> tally_grid(std::span<const EvalItem> items,
                                               TaskKind task,
                                               const std::vector<double>& thresholds,
                                               const EvalOptions& options = {});

struct TuneResult {
  TaskKind task = TaskKind::kScd;
  double best_threshold = 0.0;
  bool maximized = true;  // max F1 (SCD, OSD) or min error rate (VAD)
  double dev_value = 0.0;
  std::vector<CurvePoint> per_threshold;
};

// Pools durations over the whole set per threshold, then picks the best
// objective. Ties go to the lower threshold.
TuneResult tune_threshold(std::span<const EvalItem> dev_set, TaskKind task,
                          std::vector<double> grid = default_threshold_grid(),
                          const EvalOptions& options = {});

struct FileRecord {
  std::string file_id;
  TaskTally tally;
};

struct CorpusReport {
  TaskKind task = TaskKind::kScd;
  double threshold = 0.0;
  TaskTally pooled;
  std::vector<FileRecord> files;

  MetricRecord metrics() const { return to_metrics(pooled); }
};

// Throws Error(kInvalidArgument) for an empty set.
CorpusReport evaluate_corpus(std::span<const EvalItem> test_set, TaskKind task,
                             double threshold, const EvalOptions& options = {});

// Tab-separated table with percentages at two decimals, one row per file
// and a final "ALL" row. Undefined per-file metrics print as "nan".
std::string render_table(const CorpusReport& report);

// Full-precision companion of render_table.
std::string render_json(const CorpusReport& report);

// Threshold, coverage, purity rows (SCD) or threshold, precision, recall,
// error rows (VAD/OSD), ordered by threshold.
std::string render_curve(TaskKind task, const std::vector<CurvePoint>& curve);

}  // namespace scdkit
