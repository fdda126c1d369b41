#include "scdkit/score_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <set>

#include "scdkit/error.hpp"

namespace scdkit {
namespace {

constexpr std::size_t kMaxHeaderBytes = 64 * 1024;

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

[[noreturn]] void bad_header(const std::string& why) {
  throw Error(ErrorCode::kParse, "score header: " + why);
}

struct Header {
  int version = 0;
  std::string file_id;
  double hop = 0.0;
  double origin = 0.0;
  std::vector<TaskKind> tasks;
  std::uint64_t frame_count = 0;
};

template <typename T>
T parse_value(std::string_view key, std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    bad_header("bad value for '" + std::string(key) + "'");
  }
  return value;
}

Header parse_header(std::string_view line) {
  Header h;
  bool seen_version = false, seen_id = false, seen_hop = false,
       seen_tasks = false, seen_count = false;
  std::size_t pos = 0;
  while (pos < line.size()) {
    std::size_t end = line.find(' ', pos);
    if (end == std::string_view::npos) end = line.size();
    std::string_view pair = line.substr(pos, end - pos);
    pos = end + 1;
    if (pair.empty()) continue;
    std::size_t eq = pair.find('=');
    if (eq == std::string_view::npos) bad_header("expected key=value");
    std::string_view key = pair.substr(0, eq);
    std::string_view value = pair.substr(eq + 1);
    if (key == "format_version") {
      h.version = parse_value<int>(key, value);
      seen_version = true;
    } else if (key == "file_id") {
      h.file_id = std::string(value);
      seen_id = true;
    } else if (key == "hop") {
      h.hop = parse_value<double>(key, value);
      seen_hop = true;
    } else if (key == "origin") {
      h.origin = parse_value<double>(key, value);
    } else if (key == "frame_count") {
      h.frame_count = parse_value<std::uint64_t>(key, value);
      seen_count = true;
    } else if (key == "tasks") {
      seen_tasks = true;
      std::size_t p = 0;
      while (p <= value.size()) {
        std::size_t comma = value.find(',', p);
        if (comma == std::string_view::npos) comma = value.size();
        auto task = parse_task(value.substr(p, comma - p));
        if (!task) bad_header("unknown task '" + std::string(value.substr(p, comma - p)) + "'");
        if (std::find(h.tasks.begin(), h.tasks.end(), *task) != h.tasks.end()) {
          throw Error(ErrorCode::kDuplicateTask,
                      "score header lists task " + std::string(to_string(*task)) +
                          " twice");
        }
        h.tasks.push_back(*task);
        p = comma + 1;
      }
    }
  }
  if (!seen_version) bad_header("missing format_version");
  if (h.version != kScoreFormatVersion) {
    throw Error(ErrorCode::kUnsupportedVersion,
                "unsupported score format version " + std::to_string(h.version));
  }
  if (!seen_id || !seen_hop || !seen_tasks || !seen_count) {
    bad_header("missing one of file_id, hop, tasks, frame_count");
  }
  if (!(h.hop > 0.0) || !std::isfinite(h.hop) || !std::isfinite(h.origin)) {
    bad_header("hop must be positive and finite");
  }
  if (h.frame_count < 1) bad_header("frame_count must be at least 1");
  return h;
}

std::uint64_t body_bytes(const Header& h) {
  const std::uint64_t row = h.tasks.size() * 4;
  if (h.frame_count > std::numeric_limits<std::uint64_t>::max() / row) {
    throw Error(ErrorCode::kTruncated, "score frame_count overflows");
  }
  return h.frame_count * row;
}

void check_body_size(const Header& h, std::uint64_t available) {
  const std::uint64_t need = body_bytes(h);
  if (available < need) {
    throw Error(ErrorCode::kTruncated,
                "score body has " + std::to_string(available) + " bytes, need " +
                    std::to_string(need));
  }
  if (available > need) {
    throw Error(ErrorCode::kTrailingData,
                "score body has " + std::to_string(available - need) +
                    " bytes past the last frame");
  }
}

ScoreFile decode_body(const Header& h, std::string_view body) {
  ScoreFile file;
  file.file_id = h.file_id;
  file.tasks = h.tasks;
  const std::size_t n = static_cast<std::size_t>(h.frame_count);
  const std::size_t width = h.tasks.size();
  file.series.resize(width);
  for (auto& s : file.series) {
    s.hop = h.hop;
    s.origin = h.origin;
    s.values.resize(n);
  }
  const auto* p = reinterpret_cast<const unsigned char*>(body.data());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < width; ++k, p += 4) {
      std::uint32_t bits = std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
                           std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
      file.series[k].values[i] = std::bit_cast<float>(bits);
    }
  }
  return file;
}

}  // namespace

bool ScoreFile::has(TaskKind task) const {
  return std::find(tasks.begin(), tasks.end(), task) != tasks.end();
}

const FrameSeries& ScoreFile::at(TaskKind task) const {
  auto it = std::find(tasks.begin(), tasks.end(), task);
  if (it == tasks.end()) {
    throw Error(ErrorCode::kMissingTask, "score file '" + file_id +
                                             "' has no " +
                                             std::string(to_string(task)) +
                                             " scores");
  }
  return series[static_cast<std::size_t>(it - tasks.begin())];
}

ScoreFile make_score_file(std::string file_id,
                          const std::map<TaskKind, FrameSeries>& series_by_task) {
  ScoreFile file;
  file.file_id = std::move(file_id);
  for (const auto& [task, s] : series_by_task) {
    file.tasks.push_back(task);
    file.series.push_back(s);
  }
  encode_scores(file);  // validates
  return file;
}

std::string encode_scores(const ScoreFile& file) {
  if (file.tasks.empty() || file.tasks.size() != file.series.size()) {
    throw Error(ErrorCode::kInvalidArgument, "score file needs one series per task");
  }
  if (file.file_id.empty() ||
      file.file_id.find_first_of(" \t\r\n=") != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "file_id must be non-empty without whitespace or '='");
  }
  std::set<TaskKind> seen(file.tasks.begin(), file.tasks.end());
  if (seen.size() != file.tasks.size()) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate task in score file");
  }
  const FrameSeries& first = file.series.front();
  if (first.values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "score series must be non-empty");
  }
  for (const auto& s : file.series) {
    if (s.values.size() != first.values.size() || s.hop != first.hop ||
        s.origin != first.origin) {
      throw Error(ErrorCode::kInvalidArgument,
                  "score series differ in length, hop or origin");
    }
  }

  std::string out = "format_version=" + std::to_string(kScoreFormatVersion) +
                    " file_id=" + file.file_id + " hop=" + format_double(first.hop) +
                    " origin=" + format_double(first.origin) + " tasks=";
  for (std::size_t k = 0; k < file.tasks.size(); ++k) {
    if (k) out += ',';
    out += to_string(file.tasks[k]);
  }
  out += " frame_count=" + std::to_string(first.values.size()) + "\n";

  const std::size_t n = first.values.size();
  out.reserve(out.size() + n * file.tasks.size() * 4);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& s : file.series) {
      auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(s.values[i]));
      for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
    }
  }
  return out;
}

ScoreFile decode_scores(std::string_view bytes) {
  std::size_t eol = bytes.substr(0, kMaxHeaderBytes).find('\n');
  if (eol == std::string_view::npos) bad_header("no terminated header line");
  Header h = parse_header(bytes.substr(0, eol));
  std::string_view body = bytes.substr(eol + 1);
  check_body_size(h, body.size());
  return decode_body(h, body);
}

void write_scores(const std::string& path, const ScoreFile& file) {
  const std::string bytes = encode_scores(file);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path + "'");
}

void write_scores(const std::string& path, std::string file_id,
                  const std::map<TaskKind, FrameSeries>& series_by_task) {
  write_scores(path, make_score_file(std::move(file_id), series_by_task));
}

ScoreFile read_scores(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::uint64_t>(in.tellg());
  in.seekg(0);

  std::string head(std::min<std::uint64_t>(size, kMaxHeaderBytes), '\0');
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  std::size_t eol = head.find('\n');
  if (eol == std::string::npos) bad_header("no terminated header line");
  Header h = parse_header(std::string_view(head).substr(0, eol));
  // Validate the claimed frame count against the real size before
  // allocating anything proportional to it.
  check_body_size(h, size - (eol + 1));

  std::string body(static_cast<std::size_t>(body_bytes(h)), '\0');
  in.clear();
  in.seekg(static_cast<std::streamoff>(eol + 1));
  if (!in.read(body.data(), static_cast<std::streamsize>(body.size()))) {
    throw Error(ErrorCode::kTruncated, "short read from '" + path + "'");
  }
  return decode_body(h, body);
}

}  // namespace scdkit
