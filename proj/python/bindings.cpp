#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "scdkit/decoder.hpp"
#include "scdkit/error.hpp"
#include "scdkit/labels.hpp"
#include "scdkit/metrics.hpp"
#include "scdkit/rttm.hpp"
#include "scdkit/score_io.hpp"
#include "scdkit/synth.hpp"
#include "scdkit/tuner.hpp"
#include "scdkit/windowing.hpp"

namespace py = pybind11;
using namespace scdkit;

PYBIND11_MODULE(_scdkit, m) {
  m.doc() = "Frame-level speaker change, overlap and voice activity toolkit.";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::enum_<TaskKind>(m, "TaskKind")
      .value("SCD", TaskKind::kScd)
      .value("OSD", TaskKind::kOsd)
      .value("VAD", TaskKind::kVad);

  py::class_<Interval>(m, "Interval")
      .def(py::init<double, double>(), py::arg("start"), py::arg("end"))
      .def_readwrite("start", &Interval::start)
      .def_readwrite("end", &Interval::end)
      .def("__eq__", [](const Interval& a, const Interval& b) { return a == b; })
      .def("__repr__", [](const Interval& iv) {
        return "Interval(" + std::to_string(iv.start) + ", " + std::to_string(iv.end) + ")";
      });

  py::class_<SpeakerTurn>(m, "SpeakerTurn")
      .def(py::init([](std::string file_id, double onset, double duration, std::string speaker) {
             SpeakerTurn t{std::move(file_id), onset, duration, std::move(speaker)};
             t.validate();
             return t;
           }),
           py::arg("file_id"), py::arg("onset"), py::arg("duration"), py::arg("speaker"))
      .def_readonly("file_id", &SpeakerTurn::file_id)
      .def_readonly("onset", &SpeakerTurn::onset)
      .def_readonly("duration", &SpeakerTurn::duration)
      .def_readonly("speaker", &SpeakerTurn::speaker)
      .def_property_readonly("offset", &SpeakerTurn::offset);

  py::class_<Timeline>(m, "Timeline")
      .def(py::init<std::string, std::vector<SpeakerTurn>, std::optional<double>>(),
           py::arg("file_id"), py::arg("turns") = std::vector<SpeakerTurn>{},
           py::arg("extent") = std::nullopt)
      .def_property_readonly("file_id", &Timeline::file_id)
      .def_property_readonly("turns", &Timeline::turns)
      .def_property_readonly("extent", &Timeline::extent)
      .def("add", &Timeline::add)
      .def("__eq__", [](const Timeline& a, const Timeline& b) { return a == b; });

  m.def("parse_rttm", [](std::string_view text) { return parse_rttm(text).timelines; },
        py::arg("text"), "Parse RTTM text into {file_id: Timeline}.");
  m.def("write_rttm", [](const std::vector<Timeline>& t) { return write_rttm(t); });
  m.def("bind_extent", &bind_extent, py::arg("timeline"), py::arg("duration"));

  py::class_<FrameSeries>(m, "FrameSeries")
      .def(py::init([](std::vector<double> values, double hop, double origin) {
             return FrameSeries{hop, origin, std::move(values)};
           }),
           py::arg("values"), py::arg("hop") = 0.02, py::arg("origin") = 0.0)
      .def_readwrite("hop", &FrameSeries::hop)
      .def_readwrite("origin", &FrameSeries::origin)
      .def_readwrite("values", &FrameSeries::values)
      .def("__len__", &FrameSeries::size);

  py::class_<LabelConfig>(m, "LabelConfig")
      .def(py::init<>())
      .def_readwrite("scd_half_width", &LabelConfig::scd_half_width)
      .def_readwrite("boundary_slope", &LabelConfig::boundary_slope)
      .def_readwrite("merge_gap", &LabelConfig::merge_gap)
      .def_readwrite("hop", &LabelConfig::hop);

  m.def("merge_short_gaps", &merge_short_gaps, py::arg("timeline"), py::arg("merge_gap") = 1.0);
  m.def("extract_change_points", &extract_change_points);
  m.def("scd_labels", &scd_labels, py::arg("change_points"), py::arg("extent"),
        py::arg("cfg") = LabelConfig{});
  m.def("activity_labels", &activity_labels, py::arg("timeline"), py::arg("task"),
        py::arg("cfg") = LabelConfig{});
  m.def("task_labels", &task_labels, py::arg("timeline"), py::arg("task"),
        py::arg("cfg") = LabelConfig{});
  m.def("positive_regions", &positive_regions);
  m.def("active_speaker_count", &active_speaker_count);

  py::class_<WindowPlan>(m, "WindowPlan")
      .def_readonly("extent", &WindowPlan::extent)
      .def_readonly("window_len", &WindowPlan::window_len)
      .def_readonly("hop", &WindowPlan::hop)
      .def_readonly("windows", &WindowPlan::windows)
      .def_readonly("keep_ranges", &WindowPlan::keep_ranges)
      .def("expected_frames", [](const WindowPlan& p, std::size_t i, double hop) {
        return expected_window_frames(p, i, hop);
      }, py::arg("index"), py::arg("frame_hop") = 0.02);
  m.def("plan_windows", &plan_windows, py::arg("extent"), py::arg("window_len") = 20.0,
        py::arg("hop") = 10.0);
  m.def("stitch", [](const WindowPlan& plan, const std::vector<FrameSeries>& w) {
    return stitch(plan, std::span<const FrameSeries>(w));
  });

  py::class_<ChangePointSet>(m, "ChangePointSet")
      .def_readonly("points", &ChangePointSet::points)
      .def_readonly("threshold_used", &ChangePointSet::threshold_used);
  py::class_<IntervalSet>(m, "IntervalSet")
      .def(py::init([](std::vector<Interval> ivs) { return IntervalSet{std::move(ivs), 0.0}; }))
      .def_readonly("intervals", &IntervalSet::intervals)
      .def_readonly("threshold_used", &IntervalSet::threshold_used);
  m.def("detect_peaks", &detect_peaks);
  m.def("binarize", &binarize);
  m.def("points_to_segments", &points_to_segments);

  py::enum_<PurityNorm>(m, "PurityNorm")
      .value("SPEECH", PurityNorm::kSpeech)
      .value("FULL", PurityNorm::kFull);
  py::class_<SegMetrics>(m, "SegMetrics")
      .def_readonly("coverage", &SegMetrics::coverage)
      .def_readonly("purity", &SegMetrics::purity)
      .def_readonly("f1", &SegMetrics::f1);
  py::class_<DetMetrics>(m, "DetMetrics")
      .def_readonly("precision", &DetMetrics::precision)
      .def_readonly("recall", &DetMetrics::recall)
      .def_readonly("f1", &DetMetrics::f1)
      .def_readonly("accuracy", &DetMetrics::accuracy)
      .def_readonly("miss_rate", &DetMetrics::miss_rate)
      .def_readonly("fa_rate", &DetMetrics::fa_rate)
      .def_readonly("error_rate", &DetMetrics::error_rate);
  m.def("segmentation_metrics", &segmentation_metrics, py::arg("hyp_segments"),
        py::arg("reference"), py::arg("norm") = PurityNorm::kSpeech);
  m.def("detection_metrics", &detection_metrics, py::arg("hyp"), py::arg("ref"),
        py::arg("extent"), py::arg("grid") = kDefaultEvalGrid);
  m.def("sweep_curve",
        [](const FrameSeries& s, const Timeline& ref, TaskKind task, std::vector<double> thr) {
          std::vector<std::pair<double, MetricRecord>> out;
          for (auto& p : sweep_curve(s, ref, task, std::move(thr))) {
            out.emplace_back(p.threshold, p.metrics);
          }
          return out;
        });

  py::class_<ScoreFile>(m, "ScoreFile")
      .def_readonly("file_id", &ScoreFile::file_id)
      .def_readonly("tasks", &ScoreFile::tasks)
      .def("__getitem__", &ScoreFile::at, py::return_value_policy::copy)
      .def("__contains__", &ScoreFile::has);
  m.def("write_scores",
        [](const std::map<TaskKind, FrameSeries>& s, std::string file_id, const std::string& path) {
          write_scores(path, std::move(file_id), s);
        },
        py::arg("series_by_task"), py::arg("file_id"), py::arg("path"));
  m.def("read_scores", &read_scores);
  m.def("encode_scores", [](const std::string& file_id, const std::map<TaskKind, FrameSeries>& s) {
    return py::bytes(encode_scores(make_score_file(file_id, s)));
  });
  m.def("decode_scores", [](const py::bytes& b) { return decode_scores(std::string(b)); });

  py::class_<TuneResult>(m, "TuneResult")
      .def_readonly("task", &TuneResult::task)
      .def_readonly("best_threshold", &TuneResult::best_threshold)
      .def_readonly("dev_value", &TuneResult::dev_value);
  m.def("tune_threshold",
        [](std::vector<std::pair<ScoreFile, Timeline>> pairs, TaskKind task,
           std::vector<double> grid) {
          std::vector<EvalItem> items;
          for (auto& [s, t] : pairs) items.push_back({std::move(s), std::move(t)});
          return tune_threshold(items, task, std::move(grid));
        },
        py::arg("dev_set"), py::arg("task"), py::arg("grid") = default_threshold_grid());
  m.def("evaluate_corpus",
        [](std::vector<std::pair<ScoreFile, Timeline>> pairs, TaskKind task, double threshold) {
          std::vector<EvalItem> items;
          for (auto& [s, t] : pairs) items.push_back({std::move(s), std::move(t)});
          return to_metrics(evaluate_corpus(items, task, threshold).pooled);
        });

  m.def("read_manifest", [](const std::filesystem::path& p) {
    std::vector<std::string> lines;
    for (const auto& r : read_manifest(p)) lines.push_back(recipe_to_json(r));
    return lines;
  });
}
