// Inputs for the CLI tests that cannot be written by hand.
//
//   scdkit_testgen pool <dir>               small LibriSpeech-shaped wav tree
//   scdkit_testgen windows <dir> <extent>   per-window score files and the
//                                           full series they stitch into

#include <cstdio>
#include <cstdlib>
#include <string>

#include "fake_speech.hpp"
#include "scdkit/score_io.hpp"
#include "scdkit/windowing.hpp"

using namespace scdkit;

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: scdkit_testgen pool <dir> | windows <dir> <extent>\n");
    return 1;
  }
  const std::string cmd = argv[1];
  const std::filesystem::path dir = argv[2];
  if (cmd == "pool") {
    fake::write_pool(dir, 3, 4, 2.5, 6.0, 99);
    return 0;
  }
  if (cmd == "windows" && argc == 4) {
    std::filesystem::create_directories(dir);
    const double extent = std::atof(argv[3]);
    const auto plan = plan_windows(extent);
    const double hop = 0.02;
    auto value = [](double t) { return static_cast<double>(static_cast<float>(t)); };
    FrameSeries full;
    for (std::size_t i = 0; i < frame_count(extent, hop); ++i) full.values.push_back(value(full.center(i)));
    write_scores((dir / "full.scores").string(), "win", {{TaskKind::kVad, full}});
    for (std::size_t w = 0; w < plan.size(); ++w) {
      FrameSeries s;
      s.origin = plan.windows[w].start;
      for (std::size_t j = 0; j < expected_window_frames(plan, w, hop); ++j) {
        s.values.push_back(value(s.center(j)));
      }
      write_scores((dir / ("w" + std::to_string(w) + ".scores")).string(), "win",
                   {{TaskKind::kVad, s}});
    }
    std::printf("%zu\n", plan.size());
    return 0;
  }
  std::fprintf(stderr, "unknown command\n");
  return 1;
}
