#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace scdkit {

struct WavInfo {
  std::uint32_t sample_rate = 0;
  std::uint16_t channels = 0;
  std::uint16_t bits_per_sample = 0;
  std::uint64_t frames = 0;  // samples per channel

  double duration() const {
    return sample_rate ? static_cast<double>(frames) / sample_rate : 0.0;
  }
};

// Mono audio as floats in [-1, 1).
struct Audio {
  std::uint32_t sample_rate = 16000;
  std::vector<float> samples;

  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Reads the RIFF/WAVE header only. Throws Error(kIo) or Error(kParse).
WavInfo read_wav_info(const std::string& path);

// Reads 16-bit PCM mono. Anything else is rejected with Error(kParse); no
// resampling or down-mixing happens here.
Audio read_wav(const std::string& path);

// Writes 16-bit PCM mono, rounding and saturating each sample.
void write_wav(const std::string& path, const Audio& audio);

std::int16_t to_pcm16(float sample);

}  // namespace scdkit
