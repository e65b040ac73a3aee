#pragma once

#include <iosfwd>
#include <limits>
#include <vector>

#include "manet/engine.h"
#include "manet/types.h"

namespace manet {

struct MobilityParams {
  double width = 800.0;
  double height = 600.0;
  double vMax = 5.0;
  double vMin = 0.5;
  Seconds pauseTime = 0.0;
};

/// Straight-line move from start to end at constant speed, then a pause.
struct WaypointLeg {
  Vec2 start;
  Vec2 end;
  Seconds depart = 0.0;
  double speed = 0.0;
  Seconds pauseAfter = 0.0;

  Seconds Duration() const { return Distance(start, end) / speed; }
  Seconds Arrival() const { return depart + Duration(); }
};

/// Piecewise-linear trajectory of one node. Before the first leg departs the
/// node sits at its initial position; after the last leg it stays put.
class MobilitySchedule {
 public:
  MobilitySchedule() = default;
  explicit MobilitySchedule(Vec2 initial) : m_initial(initial) {}
  MobilitySchedule(Vec2 initial, std::vector<WaypointLeg> legs);

  /// Exact position by interpolation along the leg active at t.
  Vec2 PositionAt(Seconds t) const;

  Vec2 Initial() const { return m_initial; }
  const std::vector<WaypointLeg>& Legs() const { return m_legs; }
  double MaxSpeed() const;

 private:
  Vec2 m_initial;
  std::vector<WaypointLeg> m_legs;  // sorted by depart, non-overlapping
};

/// Random waypoint: uniform initial placement, an initial pause, then
/// repeated (uniform destination, uniform speed in [vMin, vMax], pause) legs
/// until the horizon is covered. pauseTime >= horizon gives a static node.
MobilitySchedule GenerateSchedule(const MobilityParams& params, Seconds horizon, RngStream& rng);

/// Debug export: one line per leg, "node time x y speed pause" where (x, y)
/// is the leg destination; the first line per node is the placement at t=0.
void WriteSchedule(std::ostream& out, NodeId node, const MobilitySchedule& schedule);

}  // namespace manet
