// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. argv[1] is a scratch directory.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "fake_speech.hpp"
#include "oracles.hpp"
#include "scdkit/decoder.hpp"
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

// Tolerances and limits.
constexpr double kSegTolerance = 0.005;
constexpr double kOracleSeconds = 10.0;
constexpr double kScdPeakFloor = 0.95;
constexpr double kLabelEps = 1e-9;
constexpr double kEndToEndSeconds = 60.0;
constexpr double kScdThreshold = 0.35, kScdMinF1 = 0.99;
constexpr double kOsdThreshold = 0.20, kOsdMinF1 = 0.98;
constexpr double kVadThreshold = 0.50, kVadMaxError = 0.02;
constexpr double kTargetHours = 8.0, kHoursSlack = 0.30;
constexpr double kKsCritical = 1.628;  // alpha = 0.01, asymptotic
constexpr std::uint64_t kSeed = 20240521;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Checker {
 public:
  void fail(const std::string& why) {
    if (out_.pass) out_.detail = why;
    out_.pass = false;
  }
  void expect(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
  Outcome take(std::string summary) {
    if (out_.pass) out_.detail = std::move(summary);
    return out_;
  }

 private:
  Outcome out_;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// ---------------------------------------------------------------------------

Outcome segmentation_oracle() {
  Checker c;
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<int> extent_s(3, 20), n_cuts(0, 11);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const double extent = extent_s(rng);
    auto ref = oracle::random_timeline(rng, 10, extent, 4);
    std::uniform_real_distribution<double> at(0.0, extent);
    std::vector<double> cuts;
    for (int i = 0, n = n_cuts(rng); i < n; ++i) cuts.push_back(at(rng));
    std::sort(cuts.begin(), cuts.end());
    std::vector<Interval> hyp;
    double start = 0.0;
    for (double x : cuts) {
      if (x > start) hyp.push_back({start, x});
      start = std::max(start, x);
    }
    hyp.push_back({start, extent});
    for (auto norm : {PurityNorm::kSpeech, PurityNorm::kFull}) {
      auto m = segmentation_metrics(hyp, ref, norm);
      auto o = oracle::segmentation_on_grid(hyp, ref, extent, norm == PurityNorm::kSpeech);
      const double err = std::max(std::abs(m.coverage - o.coverage), std::abs(m.purity - o.purity));
      worst = std::max(worst, err);
      c.expect(err <= kSegTolerance, fmt("case %d: deviation %.6f", trial, err));
    }
  }
  return c.take(fmt("200 cases, max deviation %.6f", worst));
}

Outcome detection_oracle() {
  Checker c;
  std::mt19937_64 rng(kSeed + 1);
  std::uniform_real_distribution<double> extent_s(1.0, 60.0);
  std::uniform_int_distribution<int> n_iv(0, 8);
  for (int trial = 0; trial < 200; ++trial) {
    const double extent = extent_s(rng);
    std::uniform_real_distribution<double> at(0.0, extent);
    auto draw = [&] {
      std::vector<Interval> out;
      for (int i = 0, n = n_iv(rng); i < n; ++i) {
        double a = at(rng), b = at(rng);
        if (a != b) out.push_back({std::min(a, b), std::max(a, b)});
      }
      return interval_union(std::move(out));
    };
    auto hyp = draw();
    auto ref = draw();
    if (ref.empty()) ref.push_back({0.25 * extent, 0.5 * extent});
    auto counts = detection_counts(hyp, ref, extent);
    auto o = oracle::detection_on_grid(hyp, ref, extent, 0.01);
    c.expect(counts.tp == o.tp && counts.fp == o.fp && counts.fn == o.fn && counts.tn == o.tn,
             fmt("case %d: cell counts differ", trial));
    const auto m = detection_metrics({hyp, 0.0}, {ref, 0.0}, extent);
    const double tp = o.tp, fp = o.fp, fn = o.fn, tn = o.tn;
    const double pos = tp + fn;
    c.expect(m.precision == (tp + fp > 0 ? tp / (tp + fp) : 0.0), fmt("case %d: precision", trial));
    c.expect(m.recall == tp / pos, fmt("case %d: recall", trial));
    c.expect(m.accuracy == (tp + tn) / (tp + fp + fn + tn), fmt("case %d: accuracy", trial));
    c.expect(m.miss_rate == fn / pos, fmt("case %d: miss", trial));
    c.expect(m.fa_rate == fp / pos, fmt("case %d: false alarm", trial));
    c.expect(m.error_rate == m.miss_rate + m.fa_rate, fmt("case %d: error identity", trial));
  }
  return c.take("200 cases, exact");
}

Outcome label_invariants() {
  Checker c;
  std::mt19937_64 rng(kSeed + 2);
  std::uniform_int_distribution<int> extent_s(5, 60), shift_ms(1, 5000);
  const LabelConfig cfg;
  for (int trial = 0; trial < 100; ++trial) {
    const double extent = extent_s(rng);
    auto tl = oracle::random_timeline(rng, 12, extent, 3, "t");
    std::map<TaskKind, FrameSeries> labels;
    for (TaskKind task : kAllTasks) labels[task] = task_labels(tl, task, cfg);

    for (auto& [task, s] : labels) {
      for (double v : s.values) {
        c.expect(v >= 0.0 && v <= 1.0, fmt("case %d: label %.6f out of range", trial, v));
      }
    }

    const auto& scd = labels[TaskKind::kScd];
    for (double p : extract_change_points(tl)) {
      auto i = static_cast<std::ptrdiff_t>(std::llround(p / cfg.hop - 0.5));
      i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(scd.size()) - 1);
      c.expect(scd.values[i] >= kScdPeakFloor - kLabelEps,
               fmt("case %d: SCD label %.4f at change point %.3f", trial, scd.values[i], p));
    }

    for (TaskKind task : {TaskKind::kVad, TaskKind::kOsd}) {
      const auto& s = labels[task];
      std::vector<double> bounds;
      for (const auto& r : positive_regions(tl, task)) {
        bounds.push_back(r.start);
        bounds.push_back(r.end);
      }
      for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if ((s.values[i] >= 0.5) == (s.values[i + 1] >= 0.5)) continue;
        const double a = s.values[i], b = s.values[i + 1];
        const double t = s.center(i) + (0.5 - a) / (b - a) * cfg.hop;
        double nearest = 1e9;
        for (double x : bounds) nearest = std::min(nearest, std::abs(x - t));
        c.expect(nearest <= cfg.hop + kLabelEps,
                 fmt("case %d: %s crossing at %.4f is %.4f s from a boundary", trial,
                     std::string(to_string(task)).c_str(), t, nearest));
      }
      // Isolated interior boundaries must produce a crossing next to them.
      for (std::size_t k = 0; k < bounds.size(); ++k) {
        const double x = bounds[k];
        if (x < 2 * cfg.hop || x > extent - 2 * cfg.hop) continue;
        if ((k > 0 && x - bounds[k - 1] < 2 * cfg.hop) ||
            (k + 1 < bounds.size() && bounds[k + 1] - x < 2 * cfg.hop)) {
          continue;
        }
        bool found = false;
        for (std::size_t i = 0; i + 1 < s.size() && !found; ++i) {
          if (std::abs(s.center(i) - x) > cfg.hop + kLabelEps) continue;
          found = (s.values[i] >= 0.5) != (s.values[i + 1] >= 0.5);
        }
        c.expect(found, fmt("case %d: no 0.5 crossing near boundary %.3f", trial, x));
      }
    }

    auto merged = merge_short_gaps(tl, cfg.merge_gap);
    c.expect(merge_short_gaps(merged, cfg.merge_gap) == merged,
             fmt("case %d: merge_short_gaps not idempotent", trial));

    const double delta = shift_ms(rng) / 1000.0;
    std::vector<SpeakerTurn> moved = tl.turns();
    for (auto& t : moved) t.onset += delta;
    Timeline shifted("t", moved, extent + delta);
    const auto k = static_cast<std::size_t>(std::llround(delta / cfg.hop));
    const double residual = std::abs(delta - static_cast<double>(k) * cfg.hop);
    for (TaskKind task : kAllTasks) {
      const auto moved_labels = task_labels(shifted, task, cfg);
      const double slope = task == TaskKind::kScd ? 1.0 / cfg.scd_half_width
                                                  : 1.0 / cfg.boundary_slope;
      const double allowed = slope * residual + 1e-6;
      const auto& orig = labels[task].values;
      for (std::size_t j = 0; j < orig.size() && j + k < moved_labels.size(); ++j) {
        const double d = std::abs(moved_labels.values[j + k] - orig[j]);
        if (d > allowed) {
          c.fail(fmt("case %d: %s not translation equivariant (shift %.3f, frame %zu)", trial,
                     std::string(to_string(task)).c_str(), delta, j));
          break;
        }
      }
    }
  }
  return c.take("100 timelines");
}

Outcome windowing_partition() {
  Checker c;
  std::mt19937_64 rng(kSeed + 3);
  std::uniform_real_distribution<double> extent_s(1.0, 3600.0);
  const double frame_hop = 0.02;
  for (int trial = 0; trial < 500; ++trial) {
    double extent = extent_s(rng);
    if (extent <= 1.0) extent = std::nextafter(1.0, 2.0);
    const auto plan = plan_windows(extent);
    const auto& keep = plan.keep_ranges;

    // Every millisecond cell belongs to exactly one keep range.
    const std::size_t n = oracle::cells(extent, 0.001);
    std::size_t r = 0;
    bool ok = !keep.empty() && keep.front().start == 0.0 && keep.back().end == extent;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const double t = oracle::cell_center(i, 0.001);
      while (r + 1 < keep.size() && t >= keep[r].end) ++r;
      int owners = 0;
      for (std::size_t q = r == 0 ? 0 : r - 1; q <= std::min(r + 1, keep.size() - 1); ++q) {
        if (oracle::inside(t, keep[q]) || (q + 1 == keep.size() && t == keep[q].end)) ++owners;
      }
      ok = owners == 1;
    }
    c.expect(ok, fmt("extent %.6f: keep ranges do not partition", extent));

    // Per-window frames carry unique values encoding their provenance.
    std::vector<FrameSeries> windows(plan.size());
    std::unordered_map<double, int> seen;
    for (std::size_t w = 0; w < plan.size(); ++w) {
      windows[w].hop = frame_hop;
      windows[w].origin = plan.windows[w].start;
      const std::size_t frames = expected_window_frames(plan, w, frame_hop);
      for (std::size_t j = 0; j < frames; ++j) {
        const double v = static_cast<double>(w) * 4096.0 + static_cast<double>(j);
        windows[w].values.push_back(v);
        ++seen[v];
      }
    }
    const auto out = stitch(plan, windows);
    c.expect(out.size() == frame_count(extent, frame_hop),
             fmt("extent %.6f: stitched length %zu", extent, out.size()));
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double v = out.values[i];
      auto it = seen.find(v);
      if (it == seen.end() || it->second != 1) {
        c.fail(fmt("extent %.6f: frame %zu matches no single source frame", extent, i));
        break;
      }
      const auto w = static_cast<std::size_t>(v / 4096.0);
      const auto j = static_cast<std::size_t>(v - static_cast<double>(w) * 4096.0);
      const double t = out.center(i);
      const double local = windows[w].center(j);
      if (plan.owner(t) != w || std::abs(local - t) > frame_hop / 2 + 1e-9) {
        c.fail(fmt("extent %.6f: frame %zu taken from window %zu frame %zu", extent, i, w, j));
        break;
      }
    }
  }
  return c.take("500 extents");
}

Outcome decoder_monotonicity() {
  Checker c;
  std::mt19937_64 rng(kSeed + 4);
  std::uniform_int_distribution<int> len(50, 2000), level(0, 64);
  std::uniform_int_distribution<int> run(1, 4);
  auto same = [](const ChangePointSet& a, const ChangePointSet& b) { return a.points == b.points; };
  for (int trial = 0; trial < 100; ++trial) {
    FrameSeries s;
    const int n = len(rng);
    while (static_cast<int>(s.size()) < n) {
      const double v = level(rng) / 64.0;
      for (int r = run(rng); r > 0; --r) s.values.push_back(v);
    }
    FrameSeries cubed = s;
    for (auto& v : cubed.values) v = v * v * v;

    ChangePointSet prev_peaks;
    double prev_cov = 1e300;
    std::vector<Interval> prev_bin;
    for (int k = 0; k <= 64; ++k) {
      const double thr = (2 * k - 1) / 128.0;
      auto peaks = detect_peaks(s, thr);
      auto bin = binarize(s, thr);
      if (k > 0) {
        c.expect(std::includes(prev_peaks.points.begin(), prev_peaks.points.end(),
                               peaks.points.begin(), peaks.points.end()),
                 fmt("case %d: raising to %.4f added a peak", trial, thr));
        const double cov = total_length(bin.intervals);
        c.expect(cov <= prev_cov, fmt("case %d: coverage grew at %.4f", trial, thr));
        c.expect(std::abs(intersection_length(bin.intervals, prev_bin) - cov) <= 1e-9,
                 fmt("case %d: binarized set not nested at %.4f", trial, thr));
        prev_cov = cov;
      }
      c.expect(same(peaks, detect_peaks(cubed, thr * thr * thr)),
               fmt("case %d: peaks move under x^3 at %.4f", trial, thr));
      c.expect(bin.intervals == binarize(cubed, thr * thr * thr).intervals,
               fmt("case %d: binarization changes under x^3 at %.4f", trial, thr));
      prev_peaks = std::move(peaks);
      prev_bin = std::move(bin.intervals);
    }
  }
  return c.take("100 series, 65 thresholds each");
}

// ---------------------------------------------------------------------------


UtterancePool scan_pool(const fs::path& root) {
  return UtterancePool::scan(root, "{speaker}/*/*.wav");
}

Outcome self_consistency(const fs::path& pool_root, const fs::path& work) {
  Checker c;
  auto pool = scan_pool(pool_root);
  const auto out_dir = work / "e2e";
  fs::remove_all(out_dir);
  build_corpus(pool, 20, kSeed, out_dir);

  std::vector<ScoreFile> scores;
  std::map<std::string, Timeline> refs;
  std::map<std::string, double> durations;
  for (const auto& recipe : read_manifest(out_dir / "manifest.jsonl")) {
    const auto name = recipe.name();
    auto doc = read_rttm_file((out_dir / (name + ".rttm")).string());
    const double duration = read_wav_info((out_dir / (name + ".wav")).string()).duration();
    auto tl = bind_extent(doc.timelines.at(name), duration);
    std::map<TaskKind, FrameSeries> labels;
    for (TaskKind task : kAllTasks) labels[task] = task_labels(tl, task);
    const auto path = (out_dir / (name + ".scores")).string();
    write_scores(path, name, labels);
    scores.push_back(read_scores(path));
    refs.emplace(name, tl);
    durations[name] = duration;
  }
  const auto items = pair_with_references(scores, refs, durations);

  // SCD F1 of the exact reference change points: the best any decoder can do
  // under the per-turn coverage definition when turns overlap.
  SegmentationTally ceiling;
  for (const auto& item : items) {
    const auto& ref = item.reference;
    ChangePointSet exact{extract_change_points(ref), 0.0};
    ceiling += segmentation_tally(points_to_segments(exact, ref.require_extent()), ref);
  }

  const auto scd = std::get<SegMetrics>(evaluate_corpus(items, TaskKind::kScd, kScdThreshold).metrics());
  const auto osd = std::get<DetMetrics>(evaluate_corpus(items, TaskKind::kOsd, kOsdThreshold).metrics());
  const auto vad = std::get<DetMetrics>(evaluate_corpus(items, TaskKind::kVad, kVadThreshold).metrics());
  const std::string summary =
      fmt("SCD F1 %.4f (>= %.2f, exact boundaries give %.4f), OSD F1 %.4f (P %.4f R %.4f, >= %.2f), VAD error %.4f (<= %.2f)",
          scd.f1, kScdMinF1, ceiling.metrics().f1, osd.f1, osd.precision, osd.recall, kOsdMinF1, vad.error_rate,
          kVadMaxError);
  c.expect(scd.f1 >= kScdMinF1 && osd.f1 >= kOsdMinF1 && vad.error_rate <= kVadMaxError, summary);
  return c.take(summary);
}

double ks_uniform(std::vector<double> xs, double lo, double hi) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = (xs[i] - lo) / (hi - lo);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

Outcome corpus_statistics(const fs::path& pool_root, const fs::path& work) {
  Checker c;
  auto pool = scan_pool(pool_root);
  const SynthConfig config;
  const auto recipes = plan_corpus(pool, 500, kSeed, config);

  double total = 0.0;
  std::vector<double> amounts;
  std::string manifest;
  for (const auto& r : recipes) {
    total += sequence_duration(pool, r);
    for (const auto& j : r.joins) amounts.push_back(j.amount);
    manifest += recipe_to_json(r) + "\n";
  }
  const double hours = total / 3600.0;
  c.expect(std::abs(hours - kTargetHours) <= kHoursSlack * kTargetHours,
           fmt("total %.3f h outside 8 h +- 30%%", hours));

  const double d = ks_uniform(amounts, 0.0, config.max_amount);
  const double stat = d * std::sqrt(static_cast<double>(amounts.size()));
  c.expect(stat < kKsCritical, fmt("join amounts not uniform: sqrt(n) D = %.4f", stat));

  // Regeneration: manifest round trip, identical replanning from a fresh
  // scan, and byte-identical audio and RTTM for a rendered subset.
  const auto dir = work / "stats";
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_text_file((dir / "manifest.jsonl").string(), manifest);
  const auto reread = read_manifest(dir / "manifest.jsonl");
  c.expect(reread == recipes, "manifest does not round trip");

  auto fresh = scan_pool(pool_root);
  std::string again;
  for (const auto& r : plan_corpus(fresh, 500, kSeed, config)) again += recipe_to_json(r) + "\n";
  c.expect(again == manifest, "replanning with the same seed differs");

  const std::vector<SynthRecipe> subset(recipes.begin(), recipes.begin() + 10);
  const std::vector<SynthRecipe> subset_again(reread.begin(), reread.begin() + 10);
  write_corpus(pool, subset, dir / "a");
  write_corpus(fresh, subset_again, dir / "b");
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    const auto other = dir / "b" / entry.path().filename();
    c.expect(fs::exists(other) && slurp(entry.path()) == slurp(other),
             "regenerated " + entry.path().filename().string() + " differs");
    ++compared;
  }
  c.expect(compared == 21, fmt("expected 21 files, found %zu", compared));
  fs::remove_all(dir / "a");
  fs::remove_all(dir / "b");
  return c.take(fmt("%.3f h over 500 sequences, KS sqrt(n) D = %.4f (< %.3f), %zu files identical",
                    hours, stat, kKsCritical, compared));
}

Outcome round_trips() {
  Checker c;
  std::mt19937_64 rng(kSeed + 5);
  for (int trial = 0; trial < 100; ++trial) {
    auto tl = oracle::random_timeline(rng, 20, 600, 5, "rec" + std::to_string(trial));
    Timeline unbound(tl.file_id(), tl.turns());
    const auto text = write_rttm(unbound);
    const auto doc = parse_rttm(text);
    c.expect(doc.timelines.size() == 1 && doc.timelines.at(tl.file_id()) == unbound,
             fmt("rttm case %d: parse(write(t)) != t", trial));
    c.expect(write_rttm(doc.timelines.at(tl.file_id())) == text,
             fmt("rttm case %d: write not a fixpoint", trial));
  }
  // Unaligned times only need write to reach a fixpoint after one pass.
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<SpeakerTurn> turns;
    for (int i = 0; i < 5; ++i) turns.push_back({"x", u(rng), u(rng) / 10, "s" + std::to_string(i)});
    const auto once = write_rttm(Timeline("x", turns));
    c.expect(write_rttm(parse_rttm(once).timelines.at("x")) == once,
             fmt("rttm case %d: unaligned write not a fixpoint", trial));
  }

  std::uniform_int_distribution<std::uint32_t> bits;
  std::uniform_int_distribution<int> frames(1, 3000);
  for (int trial = 0; trial < 100; ++trial) {
    std::map<TaskKind, FrameSeries> by_task;
    const int n = frames(rng);
    for (TaskKind task : kAllTasks) {
      FrameSeries s;
      s.hop = trial % 2 ? 0.02 : 0.01;
      s.origin = trial * 0.125;
      for (int i = 0; i < n; ++i) {
        float f;
        do {
          const std::uint32_t b = bits(rng);
          std::memcpy(&f, &b, sizeof f);
        } while (std::isnan(f));
        s.values.push_back(f);
      }
      by_task[task] = std::move(s);
    }
    const auto file = make_score_file("f" + std::to_string(trial), by_task);
    const auto bytes = encode_scores(file);
    const auto back = decode_scores(bytes);
    bool same = back.file_id == file.file_id && back.tasks == file.tasks;
    for (std::size_t t = 0; same && t < file.series.size(); ++t) {
      same = back.series[t].hop == file.series[t].hop &&
             back.series[t].origin == file.series[t].origin &&
             back.series[t].values.size() == file.series[t].values.size();
      for (std::size_t i = 0; same && i < file.series[t].values.size(); ++i) {
        const float a = static_cast<float>(file.series[t].values[i]);
        const float b = static_cast<float>(back.series[t].values[i]);
        same = std::memcmp(&a, &b, sizeof a) == 0;
      }
    }
    c.expect(same, fmt("score case %d: decode(encode(x)) != x", trial));
    c.expect(encode_scores(back) == bytes, fmt("score case %d: encode not a fixpoint", trial));
  }
  return c.take("100 RTTM timelines, 100 unaligned, 100 score files");
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "scdkit_acceptance";
  fs::create_directories(work);

  // LibriSpeech-shaped stand-in pool: 40 speakers, 8 utterances each.
  const auto pool_root = work / "pool";
  if (!fs::exists(pool_root / "done")) {
    fs::remove_all(pool_root);
    fake::write_pool(pool_root, 40, 8, 2.5, 20.0, kSeed);
    std::ofstream(pool_root / "done") << "ok\n";
  }

  struct Criterion {
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"segmentation metrics match the 1 ms grid oracle", kOracleSeconds, segmentation_oracle},
      {"detection metrics match the 10 ms grid oracle", kOracleSeconds, detection_oracle},
      {"label generation invariants", 0, label_invariants},
      {"windowing keep ranges partition and stitching provenance", 0, windowing_partition},
      {"decoder threshold monotonicity and transform invariance", 0, decoder_monotonicity},
      {"synthetic self-consistency end to end", kEndToEndSeconds,
       [&] { return self_consistency(pool_root, work); }},
      {"synthetic corpus statistics and regeneration", 0,
       [&] { return corpus_statistics(pool_root, work); }},
      {"RTTM and score file round trips", 0, round_trips},
  };

  int failed = 0;
  for (const auto& criterion : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criterion.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (criterion.limit_seconds > 0 && secs >= criterion.limit_seconds && out.pass) {
      out = {false, fmt("took %.2f s, limit %.0f s", secs, criterion.limit_seconds)};
    }
    std::printf("%s  %s: %s [%.2f s]\n", out.pass ? "PASS" : "FAIL", criterion.name,
                out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failed;
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
