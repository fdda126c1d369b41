#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scdkit {

enum class TaskKind { kScd, kOsd, kVad };

inline constexpr TaskKind kAllTasks[] = {TaskKind::kScd, TaskKind::kOsd,
                                         TaskKind::kVad};

std::string_view to_string(TaskKind task);
std::optional<TaskKind> parse_task(std::string_view name);

// Uniformly spaced per-frame values: fuzzy labels or raw model scores.
// Frame i stands for the instant origin + (i + 0.5) * hop.
struct FrameSeries {
  double hop = 0.02;
  double origin = 0.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double center(std::size_t i) const {
    return origin + (static_cast<double>(i) + 0.5) * hop;
  }
  double frame_start(std::size_t i) const {
    return origin + static_cast<double>(i) * hop;
  }
};

// Number of whole frames of length `hop` in `extent`. A relative slack
// absorbs representation error (10.0 / 0.02 is 499.999... in binary).
inline std::size_t frame_count(double extent, double hop) {
  double n = extent / hop;
  return static_cast<std::size_t>(std::floor(n + 1e-9 * std::max(1.0, n)));
}

}  // namespace scdkit
