#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace manet {

using NodeId = std::uint32_t;
using Seconds = double;

inline constexpr NodeId kBroadcast = std::numeric_limits<NodeId>::max();

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double Distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace manet
