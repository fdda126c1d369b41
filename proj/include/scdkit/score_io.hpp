#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "scdkit/frame_series.hpp"

namespace scdkit {

// Frame scores of one recording, one series per task, all sharing hop,
// origin and length.
//
// On disk: a single LF-terminated UTF-8 header line of space-separated
// key=value pairs
//
//   format_version=1 file_id=EN2002b hop=0.02 origin=0 tasks=SCD,OSD,VAD frame_count=1000
//
// followed by frame_count rows of |tasks| little-endian IEEE-754 float32
// values (row-major: all tasks of frame 0, then frame 1, ...). Unknown keys
// are ignored when reading.
struct ScoreFile {
  std::string file_id;
  std::vector<TaskKind> tasks;
  std::vector<FrameSeries> series;  // parallel to tasks

  bool has(TaskKind task) const;
  // Throws Error(kMissingTask).
  const FrameSeries& at(TaskKind task) const;
};

inline constexpr int kScoreFormatVersion = 1;

// Throws Error(kInvalidArgument) when series disagree in hop, origin or
// length, a task repeats, the series are empty, or the file_id contains
// whitespace or '='.
ScoreFile make_score_file(std::string file_id,
                          const std::map<TaskKind, FrameSeries>& series_by_task);

std::string encode_scores(const ScoreFile& file);

// Distinct error codes: kTruncated for a short body, kTrailingData for extra
// bytes, kUnsupportedVersion, kDuplicateTask, kParse for anything else.
ScoreFile decode_scores(std::string_view bytes);

void write_scores(const std::string& path, const ScoreFile& file);
void write_scores(const std::string& path, std::string file_id,
                  const std::map<TaskKind, FrameSeries>& series_by_task);
ScoreFile read_scores(const std::string& path);

}  // namespace scdkit
