#include "scdkit/rttm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

#include "scdkit/error.hpp"

namespace scdkit {
namespace {

// Slack for turns that end past the bound extent because of decimal rounding
// in the annotation or the audio duration.
constexpr double kExtentSlack = 1e-6;

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

std::optional<double> parse_number(std::string_view text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

[[noreturn]] void fail_line(std::size_t line_no, const std::string& why) {
  throw Error(ErrorCode::kParse,
              "rttm line " + std::to_string(line_no) + ": " + why);
}

}  // namespace

void SpeakerTurn::validate() const {
  if (!(onset >= 0.0) || !std::isfinite(onset)) {
    throw Error(ErrorCode::kInvalidArgument,
                "turn onset must be finite and non-negative");
  }
  if (!(duration > 0.0) || !std::isfinite(offset())) {
    throw Error(ErrorCode::kInvalidArgument,
                "turn duration must be positive with a finite offset");
  }
  if (speaker.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "turn speaker must be non-empty");
  }
}

bool turn_order(const SpeakerTurn& a, const SpeakerTurn& b) {
  return std::tie(a.onset, a.speaker, a.duration) <
         std::tie(b.onset, b.speaker, b.duration);
}

Timeline::Timeline(std::string file_id, std::vector<SpeakerTurn> turns,
                   std::optional<double> extent)
    : file_id_(std::move(file_id)) {
  for (auto& turn : turns) {
    if (turn.file_id.empty()) turn.file_id = file_id_;
    if (turn.file_id != file_id_) {
      throw Error(ErrorCode::kInvalidArgument,
                  "turn for file '" + turn.file_id + "' added to timeline '" +
                      file_id_ + "'");
    }
    turn.validate();
  }
  std::stable_sort(turns.begin(), turns.end(), turn_order);
  turns_ = std::move(turns);
  if (extent) *this = bind_extent(*this, *extent);
}

void Timeline::add(SpeakerTurn turn) {
  if (turn.file_id.empty()) turn.file_id = file_id_;
  if (turn.file_id != file_id_) {
    throw Error(ErrorCode::kInvalidArgument,
                "turn for file '" + turn.file_id + "' added to timeline '" +
                    file_id_ + "'");
  }
  turn.validate();
  if (extent_ && turn.offset() > *extent_ + kExtentSlack) {
    throw Error(ErrorCode::kPrecondition, "turn ends past the bound extent");
  }
  auto pos = std::upper_bound(turns_.begin(), turns_.end(), turn, turn_order);
  turns_.insert(pos, std::move(turn));
}

double Timeline::max_offset() const {
  double result = 0.0;
  for (const auto& turn : turns_) result = std::max(result, turn.offset());
  return result;
}

double Timeline::require_extent() const {
  if (!extent_) {
    throw Error(ErrorCode::kPrecondition,
                "timeline '" + file_id_ + "' has no extent bound");
  }
  return *extent_;
}

RttmDocument parse_rttm(std::string_view text) {
  RttmDocument doc;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    auto fields = split_fields(line);
    if (fields.empty() || fields[0].front() == ';') continue;
    if (fields[0] != "SPEAKER") {
      ++doc.skipped_records;
      continue;
    }
    // Older files omit the trailing signal-lookahead field.
    if (fields.size() != 9 && fields.size() != 10) {
      fail_line(line_no, "expected 9 or 10 fields, got " +
                             std::to_string(fields.size()));
    }
    auto onset = parse_number(fields[3]);
    auto duration = parse_number(fields[4]);
    if (!onset) fail_line(line_no, "non-numeric onset '" + std::string(fields[3]) + "'");
    if (!duration) fail_line(line_no, "non-numeric duration '" + std::string(fields[4]) + "'");
    if (*duration <= 0.0) fail_line(line_no, "duration must be positive");
    if (*onset < 0.0) fail_line(line_no, "onset must be non-negative");

    SpeakerTurn turn{std::string(fields[1]), *onset, *duration,
                     std::string(fields[7])};
    auto [it, inserted] = doc.timelines.try_emplace(turn.file_id, turn.file_id);
    it->second.add(std::move(turn));
  }
  return doc;
}

std::string write_rttm(std::span<const Timeline> timelines) {
  std::string out;
  char buf[64];
  for (const auto& timeline : timelines) {
    for (const auto& turn : timeline.turns()) {
      out += "SPEAKER ";
      out += timeline.file_id();
      std::snprintf(buf, sizeof buf, " 1 %.3f %.3f ", turn.onset, turn.duration);
      out += buf;
      out += "<NA> <NA> ";
      out += turn.speaker;
      out += " <NA> <NA>\n";
    }
  }
  return out;
}

std::string write_rttm(const Timeline& timeline) {
  return write_rttm(std::span<const Timeline>(&timeline, 1));
}

Timeline bind_extent(const Timeline& timeline, double duration) {
  if (!std::isfinite(duration) || duration < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "extent must be finite and >= 0");
  }
  for (const auto& turn : timeline.turns()) {
    if (turn.offset() > duration + kExtentSlack) {
      std::ostringstream msg;
      msg << "turn of speaker '" << turn.speaker << "' at " << turn.onset
          << "s ends at " << turn.offset() << "s, past the extent " << duration
          << "s of '" << timeline.file_id() << "'";
      throw Error(ErrorCode::kPrecondition, msg.str());
    }
  }
  Timeline bound = timeline;
  bound.extent_ = duration;
  return bound;
}

RttmDocument read_rttm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_rttm(ss.str());
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path + "'");
}

}  // namespace scdkit
