// scdkit: labels, synthetic corpora, stitching, decoding and evaluation of
// frame-level speaker change / overlap / voice activity scores.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scdkit/decoder.hpp"
#include "scdkit/error.hpp"
#include "scdkit/labels.hpp"
#include "scdkit/metrics.hpp"
#include "scdkit/rttm.hpp"
#include "scdkit/score_io.hpp"
#include "scdkit/synth.hpp"
#include "scdkit/tuner.hpp"
#include "scdkit/wav.hpp"
#include "scdkit/windowing.hpp"

namespace fs = std::filesystem;
using namespace scdkit;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

TaskKind require_task(const std::string& name) {
  auto task = parse_task(name);
  if (!task) throw UsageError("unknown task '" + name + "' (expected SCD, OSD or VAD)");
  return *task;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.empty()) return default_threshold_grid();
  if (text.find(':') != std::string::npos) {
    double lo = 0, hi = 0, step = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || !(step > 0) ||
        hi < lo) {
      throw UsageError("grid must be lo:hi:step");
    }
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) {
      grid.push_back(std::round((lo + static_cast<double>(i) * step) * 1e9) / 1e9);
    }
    return grid;
  }
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    try {
      grid.push_back(std::stod(text.substr(pos, comma - pos)));
    } catch (const std::exception&) {
      throw UsageError("bad threshold '" + text.substr(pos, comma - pos) + "'");
    }
    pos = comma + 1;
  }
  return grid;
}

std::map<std::string, Timeline> load_references(const std::vector<std::string>& paths) {
  std::map<std::string, Timeline> refs;
  for (const auto& path : paths) {
    auto doc = read_rttm_file(path);
    if (doc.skipped_records) {
      std::cerr << path << ": skipped " << doc.skipped_records << " non-SPEAKER records\n";
    }
    for (auto& [id, timeline] : doc.timelines) {
      if (!refs.emplace(id, std::move(timeline)).second) {
        throw Error(ErrorCode::kParse, "file '" + id + "' appears in several RTTM inputs");
      }
    }
  }
  return refs;
}

std::map<std::string, double> wav_durations(const std::string& dir,
                                            const std::vector<ScoreFile>& scores) {
  std::map<std::string, double> out;
  if (dir.empty()) return out;
  for (const auto& s : scores) {
    out[s.file_id] = read_wav_info((fs::path(dir) / (s.file_id + ".wav")).string()).duration();
  }
  return out;
}

// Shared options of tune, eval and curve.
struct CorpusArgs {
  std::vector<std::string> scores;
  std::vector<std::string> rttm;
  std::string task = "SCD";
  std::string wav_dir;
  std::string purity_norm = "speech";

  void attach(CLI::App* cmd) {
    cmd->add_option("--scores", scores, "Score files")->required()->check(CLI::ExistingFile);
    cmd->add_option("--rttm", rttm, "Reference RTTM files")->required()->check(CLI::ExistingFile);
    cmd->add_option("--task", task, "SCD, OSD or VAD")->capture_default_str();
    cmd->add_option("--wav-dir", wav_dir, "Directory of <file_id>.wav giving true durations");
    cmd->add_option("--purity-norm", purity_norm, "speech or full")
        ->check(CLI::IsMember({"speech", "full"}))
        ->capture_default_str();
  }

  EvalOptions options() const {
    EvalOptions o;
    o.purity_norm = purity_norm == "full" ? PurityNorm::kFull : PurityNorm::kSpeech;
    return o;
  }

  std::vector<EvalItem> load() const {
    std::vector<ScoreFile> files;
    for (const auto& p : scores) files.push_back(read_scores(p));
    auto durations = wav_durations(wav_dir, files);
    return pair_with_references(std::move(files), load_references(rttm), durations);
  }
};

std::string threshold_text(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", t);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speaker change, overlap and voice activity scoring toolkit"};
  app.set_config("--config", "", "key=value configuration file");
  app.require_subcommand(1);

  // labels
  auto* labels = app.add_subcommand("labels", "Fuzzy reference labels from an RTTM file");
  std::string lab_rttm, lab_task = "ALL", lab_file_id, lab_wav, lab_out;
  std::optional<double> lab_extent;
  bool lab_training = false;
  LabelConfig label_cfg;
  labels->add_option("--rttm", lab_rttm)->required()->check(CLI::ExistingFile);
  labels->add_option("--task", lab_task, "SCD, OSD, VAD or ALL")->capture_default_str();
  labels->add_option("--file-id", lab_file_id, "Recording to label when the RTTM holds several");
  labels->add_option("--extent", lab_extent, "Audio duration in seconds");
  labels->add_option("--wav", lab_wav, "Audio file providing the duration")->check(CLI::ExistingFile);
  labels->add_flag("--training", lab_training, "Fuse same-speaker gaps shorter than --merge-gap");
  labels->add_option("--merge-gap", label_cfg.merge_gap)->capture_default_str();
  labels->add_option("--hop", label_cfg.hop)->capture_default_str();
  labels->add_option("--scd-half-width", label_cfg.scd_half_width)->capture_default_str();
  labels->add_option("--slope", label_cfg.boundary_slope)->capture_default_str();
  labels->add_option("--out", lab_out)->required();

  // synth
  auto* synth = app.add_subcommand("synth", "Build an A-B-A-B-A synthetic conversation corpus");
  std::string syn_pool, syn_template = "{speaker}/*/*.wav", syn_out, syn_manifest;
  std::size_t syn_n = 500;
  std::uint64_t syn_seed = 0;
  SynthConfig syn_cfg;
  synth->add_option("--pool", syn_pool, "Root of the utterance tree")->required()->check(CLI::ExistingDirectory);
  synth->add_option("--template", syn_template, "Path template with {speaker}")->capture_default_str();
  synth->add_option("-n,--sequences", syn_n)->capture_default_str();
  synth->add_option("--seed", syn_seed)->capture_default_str();
  synth->add_option("--taper", syn_cfg.taper, "Seconds of silence kept and faded")->capture_default_str();
  synth->add_option("--pause-probability", syn_cfg.pause_probability)->capture_default_str();
  synth->add_option("--max-amount", syn_cfg.max_amount, "Longest pause/overlap in seconds")->capture_default_str();
  synth->add_option("--manifest", syn_manifest, "Regenerate the recipes of an existing manifest")->check(CLI::ExistingFile);
  synth->add_option("--out", syn_out)->required();

  // stitch
  auto* stitch_cmd = app.add_subcommand("stitch", "Join per-window score files");
  std::vector<std::string> st_inputs;
  std::optional<double> st_extent;
  std::string st_wav, st_out, st_file_id;
  double st_window = 20.0, st_hop = 10.0;
  bool st_print_plan = false;
  stitch_cmd->add_option("inputs", st_inputs, "Score files in window order");
  stitch_cmd->add_option("--extent", st_extent);
  stitch_cmd->add_option("--wav", st_wav)->check(CLI::ExistingFile);
  stitch_cmd->add_option("--window", st_window)->capture_default_str();
  stitch_cmd->add_option("--window-hop", st_hop)->capture_default_str();
  stitch_cmd->add_option("--file-id", st_file_id);
  stitch_cmd->add_flag("--print-plan", st_print_plan, "Print the window plan and exit");
  stitch_cmd->add_option("--out", st_out);

  // decode
  auto* decode = app.add_subcommand("decode", "Threshold scores into RTTM events");
  std::string dec_scores, dec_task = "SCD", dec_out;
  double dec_threshold = 0.5;
  std::optional<double> dec_extent;
  bool dec_points = false;
  decode->add_option("--scores", dec_scores)->required()->check(CLI::ExistingFile);
  decode->add_option("--task", dec_task)->capture_default_str();
  decode->add_option("--threshold", dec_threshold)->capture_default_str();
  decode->add_option("--extent", dec_extent, "Audio duration (default: scored span)");
  decode->add_flag("--points", dec_points, "Print SCD change points instead of segments");
  decode->add_option("--out", dec_out, "Output file (default: stdout)");

  // tune / eval / curve
  auto* tune = app.add_subcommand("tune", "Pick a threshold on a development set");
  CorpusArgs tune_args;
  std::string tune_grid;
  tune_args.attach(tune);
  tune->add_option("--grid", tune_grid, "lo:hi:step or comma list (default 0.05:0.95:0.05)");

  auto* eval = app.add_subcommand("eval", "Evaluate a test set at a fixed threshold");
  CorpusArgs eval_args;
  double eval_threshold = 0.5;
  std::string eval_json;
  eval_args.attach(eval);
  eval->add_option("--threshold", eval_threshold)->required();
  eval->add_option("--json", eval_json, "Write full-precision results here");

  auto* curve = app.add_subcommand("curve", "Metric trade-off rows over a threshold grid");
  CorpusArgs curve_args;
  std::string curve_grid;
  curve_args.attach(curve);
  curve->add_option("--grid", curve_grid);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*labels) {
      auto doc = read_rttm_file(lab_rttm);
      if (doc.timelines.empty()) throw Error(ErrorCode::kParse, "no SPEAKER records in " + lab_rttm);
      if (lab_file_id.empty()) {
        if (doc.timelines.size() != 1) throw UsageError("RTTM has several files; pass --file-id");
        lab_file_id = doc.timelines.begin()->first;
      }
      auto it = doc.timelines.find(lab_file_id);
      if (it == doc.timelines.end()) throw Error(ErrorCode::kParse, "no turns for '" + lab_file_id + "'");
      if (!lab_extent && lab_wav.empty()) throw UsageError("pass --extent or --wav");
      const double extent = lab_extent ? *lab_extent : read_wav_info(lab_wav).duration();
      Timeline timeline = bind_extent(it->second, extent);
      if (lab_training) timeline = merge_short_gaps(timeline, label_cfg.merge_gap);

      std::map<TaskKind, FrameSeries> series;
      if (lab_task == "ALL") {
        for (TaskKind t : kAllTasks) series[t] = task_labels(timeline, t, label_cfg);
      } else {
        TaskKind t = require_task(lab_task);
        series[t] = task_labels(timeline, t, label_cfg);
      }
      write_scores(lab_out, lab_file_id, series);
    } else if (*synth) {
      auto pool = UtterancePool::scan(syn_pool, syn_template);
      std::cerr << "pool: " << pool.size() << " utterances, " << pool.speakers().size()
                << " speakers\n";
      CorpusManifest manifest;
      if (!syn_manifest.empty()) {
        manifest = write_corpus(pool, read_manifest(syn_manifest), syn_out);
      } else {
        manifest = build_corpus(pool, syn_n, syn_seed, syn_out, syn_cfg);
      }
      std::printf("%zu sequences, %.3f hours\n", manifest.recipes.size(),
                  manifest.total_duration / 3600.0);
    } else if (*stitch_cmd) {
      if (!st_extent && st_wav.empty()) throw UsageError("pass --extent or --wav");
      const double extent = st_extent ? *st_extent : read_wav_info(st_wav).duration();
      const WindowPlan plan = plan_windows(extent, st_window, st_hop);
      if (st_print_plan) {
        std::printf("window\tstart\tend\tkeep_start\tkeep_end\n");
        for (std::size_t i = 0; i < plan.size(); ++i) {
          std::printf("%zu\t%.3f\t%.3f\t%.3f\t%.3f\n", i, plan.windows[i].start,
                      plan.windows[i].end, plan.keep_ranges[i].start, plan.keep_ranges[i].end);
        }
        return 0;
      }
      if (st_out.empty()) throw UsageError("--out is required");
      if (st_inputs.size() != plan.size()) {
        throw UsageError("plan has " + std::to_string(plan.size()) + " windows but " +
                         std::to_string(st_inputs.size()) + " inputs were given");
      }
      std::vector<ScoreFile> windows;
      for (const auto& p : st_inputs) windows.push_back(read_scores(p));
      std::map<TaskKind, FrameSeries> out;
      for (TaskKind task : windows.front().tasks) {
        std::vector<FrameSeries> per_window;
        for (const auto& w : windows) per_window.push_back(w.at(task));
        out[task] = stitch(plan, per_window);
      }
      write_scores(st_out, st_file_id.empty() ? windows.front().file_id : st_file_id, out);
    } else if (*decode) {
      const ScoreFile file = read_scores(dec_scores);
      const TaskKind task = require_task(dec_task);
      const FrameSeries& scores = file.at(task);
      const double extent =
          dec_extent ? *dec_extent : scores.origin + static_cast<double>(scores.size()) * scores.hop;
      Timeline events(file.file_id);
      std::string text;
      if (task == TaskKind::kScd) {
        const auto points = detect_peaks(scores, dec_threshold);
        if (dec_points) {
          char buf[32];
          for (double p : points.points) {
            std::snprintf(buf, sizeof buf, "%.3f\n", p);
            text += buf;
          }
        } else {
          int k = 0;
          for (const auto& seg : points_to_segments(points, extent)) {
            events.add({file.file_id, seg.start, seg.length(), "seg" + std::to_string(k++)});
          }
          text = write_rttm(events);
        }
      } else {
        const std::string label = task == TaskKind::kVad ? "speech" : "overlap";
        for (const auto& iv : binarize(scores, dec_threshold).intervals) {
          events.add({file.file_id, iv.start, iv.length(), label});
        }
        text = write_rttm(events);
      }
      if (dec_out.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
      } else {
        write_text_file(dec_out, text);
      }
    } else if (*tune) {
      const TaskKind task = require_task(tune_args.task);
      const auto items = tune_args.load();
      const auto result = tune_threshold(items, task, parse_grid(tune_grid), tune_args.options());
      std::fputs(render_curve(task, result.per_threshold).c_str(), stdout);
      std::printf("best_threshold\t%s\n%s\t%.6f\n", threshold_text(result.best_threshold).c_str(),
                  result.maximized ? "f1" : "error_rate", result.dev_value);
    } else if (*eval) {
      const TaskKind task = require_task(eval_args.task);
      const auto items = eval_args.load();
      const auto report = evaluate_corpus(items, task, eval_threshold, eval_args.options());
      std::fputs(render_table(report).c_str(), stdout);
      if (!eval_json.empty()) write_text_file(eval_json, render_json(report));
    } else if (*curve) {
      const TaskKind task = require_task(curve_args.task);
      const auto items = curve_args.load();
      const auto result = tune_threshold(items, task, parse_grid(curve_grid), curve_args.options());
      std::fputs(render_curve(task, result.per_threshold).c_str(), stdout);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
