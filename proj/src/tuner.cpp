#include "scdkit/tuner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include <nlohmann/json.hpp>

#include "scdkit/error.hpp"

namespace scdkit {
namespace {

TaskTally empty_tally(TaskKind task) {
  if (task == TaskKind::kScd) return SegmentationTally{};
  return DetectionCounts{};
}

std::optional<MetricRecord> try_metrics(const TaskTally& tally) {
  try {
    return to_metrics(tally);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUndefinedMetric) throw;
    return std::nullopt;
  }
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
  return buf;
}

std::vector<std::string> metric_columns(TaskKind task) {
  if (task == TaskKind::kScd) return {"coverage", "purity", "f1"};
  return {"precision", "recall", "f1", "accuracy", "error", "miss", "fa"};
}

std::vector<double> metric_values(const MetricRecord& record) {
  if (const auto* seg = std::get_if<SegMetrics>(&record)) {
    return {seg->coverage, seg->purity, seg->f1};
  }
  const auto& d = std::get<DetMetrics>(record);
  return {d.precision, d.recall, d.f1, d.accuracy, d.error_rate, d.miss_rate, d.fa_rate};
}

void check_task(std::span<const EvalItem> items, TaskKind task) {
  for (const auto& item : items) {
    if (!item.scores.has(task)) {
      throw Error(ErrorCode::kMissingTask,
                  "score file '" + item.scores.file_id + "' has no " +
                      std::string(to_string(task)) + " scores");
    }
  }
}

}  // namespace

std::vector<EvalItem> pair_with_references(
    std::vector<ScoreFile> scores, const std::map<std::string, Timeline>& references,
    const std::map<std::string, double>& durations) {
  std::string missing;
  for (const auto& s : scores) {
    if (!references.count(s.file_id)) missing += (missing.empty() ? "" : ", ") + s.file_id;
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::kMissingReference, "no reference for: " + missing);
  }
  std::vector<EvalItem> items;
  for (auto& s : scores) {
    const Timeline& ref = references.at(s.file_id);
    double extent = 0.0;
    if (auto it = durations.find(s.file_id); it != durations.end()) {
      extent = it->second;
    } else {
      const auto& first = s.series.front();
      extent = std::max(first.origin + static_cast<double>(first.size()) * first.hop,
                        ref.max_offset());
    }
    Timeline bound = bind_extent(ref, extent);
    items.push_back({std::move(s), std::move(bound)});
  }
  return items;
}

std::vector<double> default_threshold_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 19; ++i) grid.push_back(i / 20.0);
  return grid;
}

std::vector<std::vector<TaskTally>> tally_grid(std::span<const EvalItem> items,
                                               TaskKind task,
                                               const std::vector<double>& thresholds,
                                               const EvalOptions& options) {
  check_task(items, task);
  std::vector<std::vector<TaskTally>> grid(
      thresholds.size(), std::vector<TaskTally>(items.size(), empty_tally(task)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t f; (f = next++) < items.size() && !failed;) {
      try {
        const auto& scores = items[f].scores.at(task);
        for (std::size_t t = 0; t < thresholds.size(); ++t) {
          grid[t][f] = score_tally(scores, items[f].reference, task, thresholds[t], options);
        }
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(
      std::thread::hardware_concurrency(), 1, std::max<std::size_t>(1, items.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 1; i < workers; ++i) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
  return grid;
}

TuneResult tune_threshold(std::span<const EvalItem> dev_set, TaskKind task,
                          std::vector<double> grid, const EvalOptions& options) {
  if (dev_set.empty()) throw Error(ErrorCode::kInvalidArgument, "dev set is empty");
  if (grid.empty()) throw Error(ErrorCode::kInvalidArgument, "threshold grid is empty");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const auto tallies = tally_grid(dev_set, task, grid, options);
  TuneResult result;
  result.task = task;
  result.maximized = objective_maximized(task);
  bool have_best = false;
  for (std::size_t t = 0; t < grid.size(); ++t) {
    TaskTally pooled = empty_tally(task);
    for (const auto& tally : tallies[t]) pooled += tally;
    MetricRecord record = to_metrics(pooled);
    const double value = objective_value(task, record);
    const bool better = result.maximized ? value > result.dev_value
                                         : value < result.dev_value;
    if (!have_best || better) {
      result.best_threshold = grid[t];
      result.dev_value = value;
      have_best = true;
    }
    result.per_threshold.push_back({grid[t], record});
  }
  return result;
}

CorpusReport evaluate_corpus(std::span<const EvalItem> test_set, TaskKind task,
                             double threshold, const EvalOptions& options) {
  if (test_set.empty()) throw Error(ErrorCode::kInvalidArgument, "test set is empty");
  const auto tallies = tally_grid(test_set, task, {threshold}, options);
  CorpusReport report;
  report.task = task;
  report.threshold = threshold;
  report.pooled = empty_tally(task);
  for (std::size_t f = 0; f < test_set.size(); ++f) {
    report.pooled += tallies[0][f];
    report.files.push_back({test_set[f].scores.file_id, tallies[0][f]});
  }
  return report;
}

std::string render_table(const CorpusReport& report) {
  const auto columns = metric_columns(report.task);
  std::string out = "file_id";
  for (const auto& c : columns) out += "\t" + c;
  out += "\n";
  auto row = [&](const std::string& id, const TaskTally& tally) {
    out += id;
    auto record = try_metrics(tally);
    if (record) {
      for (double v : metric_values(*record)) out += "\t" + percent(v);
    } else {
      for (std::size_t i = 0; i < columns.size(); ++i) out += "\tnan";
    }
    out += "\n";
  };
  for (const auto& f : report.files) row(f.file_id, f.tally);
  row("ALL", report.pooled);
  return out;
}

std::string render_json(const CorpusReport& report) {
  const auto columns = metric_columns(report.task);
  auto record_json = [&](const TaskTally& tally) {
    nlohmann::json j = nlohmann::json::object();
    if (auto record = try_metrics(tally)) {
      const auto values = metric_values(*record);
      for (std::size_t i = 0; i < columns.size(); ++i) j[columns[i]] = values[i];
    } else {
      for (const auto& c : columns) j[c] = nullptr;
    }
    return j;
  };
  nlohmann::json out;
  out["task"] = std::string(to_string(report.task));
  out["threshold"] = report.threshold;
  out["corpus"] = record_json(report.pooled);
  auto& files = out["files"] = nlohmann::json::array();
  for (const auto& f : report.files) {
    auto j = record_json(f.tally);
    j["file_id"] = f.file_id;
    files.push_back(std::move(j));
  }
  return out.dump(2) + "\n";
}

std::string render_curve(TaskKind task, const std::vector<CurvePoint>& curve) {
  std::string out = task == TaskKind::kScd ? "threshold\tcoverage\tpurity\n"
                                           : "threshold\tprecision\trecall\terror\n";
  char buf[128];
  for (const auto& point : curve) {
    if (const auto* seg = std::get_if<SegMetrics>(&point.metrics)) {
      std::snprintf(buf, sizeof buf, "%.4f\t%.6f\t%.6f\n", point.threshold,
                    seg->coverage, seg->purity);
    } else {
      const auto& d = std::get<DetMetrics>(point.metrics);
      std::snprintf(buf, sizeof buf, "%.4f\t%.6f\t%.6f\t%.6f\n", point.threshold,
                    d.precision, d.recall, d.error_rate);
    }
    out += buf;
  }
  return out;
}

}  // namespace scdkit
