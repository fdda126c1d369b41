#pragma once

// Stand-in for read speech: a voiced-ish tone complex with a slow envelope,
// framed by near-silent noise. Loud enough everywhere inside the speech
// region for the energy detector.

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "scdkit/synth.hpp"
#include "scdkit/wav.hpp"

namespace fake {

struct Shape {
  double lead = 0.3;
  double speech = 3.0;
  double tail = 0.3;
};

inline scdkit::Audio audio(const Shape& shape, std::uint64_t seed,
                           std::uint32_t rate = 16000) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pitch(90.0, 250.0), jitter(-1.0, 1.0);
  const double f0 = pitch(rng);
  const auto lead = static_cast<std::size_t>(std::llround(shape.lead * rate));
  const auto speech = static_cast<std::size_t>(std::llround(shape.speech * rate));
  const auto tail = static_cast<std::size_t>(std::llround(shape.tail * rate));
  scdkit::Audio out;
  out.sample_rate = rate;
  out.samples.resize(lead + speech + tail);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    double v = 2e-5 * jitter(rng);
    if (i >= lead && i < lead + speech) {
      const double t = static_cast<double>(i - lead) / rate;
      const double env = 0.2 + 0.1 * std::sin(2 * M_PI * 3.0 * t);
      v += env * (0.6 * std::sin(2 * M_PI * f0 * t) + 0.3 * std::sin(2 * M_PI * 2 * f0 * t) +
                  0.1 * jitter(rng));
    }
    out.samples[i] = static_cast<float>(v);
  }
  return out;
}

inline scdkit::Utterance utterance(const std::string& id, const std::string& speaker,
                                   const Shape& shape, std::uint64_t seed) {
  scdkit::Utterance u;
  u.id = id;
  u.speaker = speaker;
  u.audio = audio(shape, seed);
  u.bounds = scdkit::detect_speech_bounds(u.audio);
  return u;
}

// LibriSpeech-like tree <root>/<speaker>/<chapter>/<speaker>-<chapter>-<n>.wav
// with speech durations uniform on [min_speech, max_speech].
inline void write_pool(const std::filesystem::path& root, int speakers, int per_speaker,
                       double min_speech, double max_speech, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pad(0.1, 0.8), len(min_speech, max_speech);
  for (int s = 0; s < speakers; ++s) {
    const std::string spk = std::to_string(100 + s);
    const std::string chapter = std::to_string(5000 + s);
    const auto dir = root / spk / chapter;
    std::filesystem::create_directories(dir);
    for (int k = 0; k < per_speaker; ++k) {
      char name[64];
      std::snprintf(name, sizeof name, "%s-%s-%04d.wav", spk.c_str(), chapter.c_str(), k);
      Shape shape{pad(rng), len(rng), pad(rng)};
      scdkit::write_wav((dir / name).string(), audio(shape, rng()));
    }
  }
}

}  // namespace fake
