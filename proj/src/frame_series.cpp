#include "scdkit/frame_series.hpp"

namespace scdkit {

std::string_view to_string(TaskKind task) {
  switch (task) {
    case TaskKind::kScd: return "SCD";
    case TaskKind::kOsd: return "OSD";
    case TaskKind::kVad: return "VAD";
  }
  return "?";
}

std::optional<TaskKind> parse_task(std::string_view name) {
  if (name == "SCD" || name == "scd") return TaskKind::kScd;
  if (name == "OSD" || name == "osd") return TaskKind::kOsd;
  if (name == "VAD" || name == "vad") return TaskKind::kVad;
  return std::nullopt;
}

}  // namespace scdkit
