#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scdkit {

// One unbroken stretch of activity by one speaker. Times are in seconds.
struct SpeakerTurn {
  std::string file_id;
  double onset = 0.0;
  double duration = 0.0;
  std::string speaker;

  double offset() const { return onset + duration; }

  // Throws Error(kInvalidArgument) when onset < 0, duration <= 0, the offset
  // is not finite or the speaker is empty.
  void validate() const;

  friend bool operator==(const SpeakerTurn&, const SpeakerTurn&) = default;
};

// Ordering used inside a Timeline: onset, then speaker, then duration.
bool turn_order(const SpeakerTurn& a, const SpeakerTurn& b);

// The annotated speaker turns of one recording, kept sorted by turn_order.
//
// Turns of different speakers may overlap, and so may turns of the same
// speaker: real corpora contain such artifacts and they are preserved here.
// The extent (total audio duration) is unknown until bound to audio.
class Timeline {
 public:
  Timeline() = default;
  explicit Timeline(std::string file_id) : file_id_(std::move(file_id)) {}
  Timeline(std::string file_id, std::vector<SpeakerTurn> turns,
           std::optional<double> extent = std::nullopt);

  const std::string& file_id() const { return file_id_; }
  const std::vector<SpeakerTurn>& turns() const { return turns_; }
  const std::optional<double>& extent() const { return extent_; }
  bool empty() const { return turns_.empty(); }

  // Inserts in sorted position. The turn's file_id must match.
  void add(SpeakerTurn turn);

  // Largest turn offset, or 0 for an empty timeline.
  double max_offset() const;

  // Extent if bound, otherwise throws Error(kPrecondition).
  double require_extent() const;

  friend bool operator==(const Timeline&, const Timeline&) = default;

 private:
  friend Timeline bind_extent(const Timeline&, double);

  std::string file_id_;
  std::vector<SpeakerTurn> turns_;
  std::optional<double> extent_;
};

struct RttmDocument {
  std::map<std::string, Timeline> timelines;
  // Records of a type other than SPEAKER, which are skipped.
  std::size_t skipped_records = 0;
};

// Parses SPEAKER records. Blank lines and ';' comments are ignored, CRLF is
// accepted. Throws Error(kParse) with the 1-based line number on malformed
// lines.
RttmDocument parse_rttm(std::string_view text);

// Emits one SPEAKER line per turn with times at millisecond precision.
std::string write_rttm(std::span<const Timeline> timelines);
std::string write_rttm(const Timeline& timeline);

// Returns a copy of the timeline with its extent set. Throws
// Error(kPrecondition) naming the first turn that ends past `duration`.
Timeline bind_extent(const Timeline& timeline, double duration);

RttmDocument read_rttm_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace scdkit
