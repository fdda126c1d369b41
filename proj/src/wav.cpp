#include "scdkit/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "scdkit/error.hpp"

namespace scdkit {
namespace {

std::uint32_t le32(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
         std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

struct Layout {
  WavInfo info;
  std::uint64_t data_offset = 0;
  std::uint64_t data_bytes = 0;
};

Layout scan(std::ifstream& in, const std::string& path) {
  unsigned char riff[12];
  if (!in.read(reinterpret_cast<char*>(riff), 12) ||
      std::memcmp(riff, "RIFF", 4) != 0 || std::memcmp(riff + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::kParse, "'" + path + "' is not a RIFF/WAVE file");
  }
  Layout layout;
  bool have_fmt = false;
  std::uint16_t format = 0;
  unsigned char chunk[8];
  while (in.read(reinterpret_cast<char*>(chunk), 8)) {
    const std::uint32_t size = le32(chunk + 4);
    const auto body = static_cast<std::uint64_t>(in.tellg());
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw Error(ErrorCode::kParse, "short fmt chunk in '" + path + "'");
      unsigned char fmt[16];
      in.read(reinterpret_cast<char*>(fmt), 16);
      format = le16(fmt);
      layout.info.channels = le16(fmt + 2);
      layout.info.sample_rate = le32(fmt + 4);
      layout.info.bits_per_sample = le16(fmt + 14);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw Error(ErrorCode::kParse, "data before fmt in '" + path + "'");
      in.seekg(0, std::ios::end);
      const auto file_end = static_cast<std::uint64_t>(in.tellg());
      layout.data_offset = body;
      // Streaming writers leave the size at 0 or 0xffffffff.
      layout.data_bytes = std::min<std::uint64_t>(size, file_end - body);
      if (size == 0 || size == 0xffffffffu) layout.data_bytes = file_end - body;
      // WAVE_FORMAT_EXTENSIBLE carries PCM in a sub-format; accept it as PCM.
      if (format != 1 && format != 0xfffe) {
        throw Error(ErrorCode::kParse, "'" + path + "' is not PCM");
      }
      const std::uint32_t frame_bytes =
          layout.info.channels * (layout.info.bits_per_sample / 8u);
      if (frame_bytes == 0) throw Error(ErrorCode::kParse, "bad fmt in '" + path + "'");
      layout.info.frames = layout.data_bytes / frame_bytes;
      return layout;
    }
    in.seekg(static_cast<std::streamoff>(body + size + (size & 1)));
  }
  throw Error(ErrorCode::kParse, "no data chunk in '" + path + "'");
}

}  // namespace

WavInfo read_wav_info(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  return scan(in, path).info;
}

Audio read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  const Layout layout = scan(in, path);
  if (layout.info.channels != 1 || layout.info.bits_per_sample != 16) {
    throw Error(ErrorCode::kParse,
                "'" + path + "' must be 16-bit mono PCM");
  }
  std::string raw(layout.info.frames * 2, '\0');
  in.clear();
  in.seekg(static_cast<std::streamoff>(layout.data_offset));
  if (!in.read(raw.data(), static_cast<std::streamsize>(raw.size()))) {
    throw Error(ErrorCode::kTruncated, "short read from '" + path + "'");
  }
  Audio audio;
  audio.sample_rate = layout.info.sample_rate;
  audio.samples.resize(layout.info.frames);
  const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
  for (std::size_t i = 0; i < audio.samples.size(); ++i) {
    auto s = static_cast<std::int16_t>(le16(p + 2 * i));
    audio.samples[i] = static_cast<float>(s) / 32768.0f;
  }
  return audio;
}

std::int16_t to_pcm16(float sample) {
  float scaled = std::nearbyint(sample * 32768.0f);
  return static_cast<std::int16_t>(std::clamp(scaled, -32768.0f, 32767.0f));
}

void write_wav(const std::string& path, const Audio& audio) {
  const auto data_bytes = static_cast<std::uint32_t>(audio.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put32(out, 16);
  put16(out, 1);
  put16(out, 1);
  put32(out, audio.sample_rate);
  put32(out, audio.sample_rate * 2);
  put16(out, 2);
  put16(out, 16);
  out += "data";
  put32(out, data_bytes);
  for (float s : audio.samples) put16(out, static_cast<std::uint16_t>(to_pcm16(s)));

  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error(ErrorCode::kIo, "write failed for '" + path + "'");
}

}  // namespace scdkit
