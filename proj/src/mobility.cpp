#include "manet/mobility.h"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace manet {

MobilitySchedule::MobilitySchedule(Vec2 initial, std::vector<WaypointLeg> legs)
    : m_initial(initial), m_legs(std::move(legs)) {
  for (std::size_t i = 0; i < m_legs.size(); ++i) {
    const WaypointLeg& leg = m_legs[i];
    if (!(leg.speed > 0.0)) {
      throw std::invalid_argument("waypoint leg speed must be positive");
    }
    if (i > 0 && leg.depart + 1e-9 < m_legs[i - 1].Arrival()) {
      throw std::invalid_argument("waypoint legs overlap in time");
    }
  }
}

Vec2 MobilitySchedule::PositionAt(Seconds t) const {
  auto next = std::upper_bound(m_legs.begin(), m_legs.end(), t,
                               [](Seconds value, const WaypointLeg& leg) { return value < leg.depart; });
  if (next == m_legs.begin()) {
    return m_initial;
  }
  const WaypointLeg& leg = *std::prev(next);
  const double length = Distance(leg.start, leg.end);
  const double travelled = (t - leg.depart) * leg.speed;
  if (length <= 0.0 || travelled >= length) {
    return leg.end;
  }
  const double f = travelled / length;
  return {leg.start.x + (leg.end.x - leg.start.x) * f, leg.start.y + (leg.end.y - leg.start.y) * f};
}

double MobilitySchedule::MaxSpeed() const {
  double v = 0.0;
  for (const auto& leg : m_legs) {
    v = std::max(v, leg.speed);
  }
  return v;
}

MobilitySchedule GenerateSchedule(const MobilityParams& params, Seconds horizon, RngStream& rng) {
  const Vec2 initial{rng.Uniform(0.0, params.width), rng.Uniform(0.0, params.height)};
  std::vector<WaypointLeg> legs;
  Vec2 here = initial;
  Seconds t = params.pauseTime;
  while (t < horizon) {
    WaypointLeg leg;
    leg.start = here;
    leg.end = {rng.Uniform(0.0, params.width), rng.Uniform(0.0, params.height)};
    leg.depart = t;
    leg.speed = params.vMin == params.vMax ? params.vMax : rng.Uniform(params.vMin, params.vMax);
    leg.pauseAfter = params.pauseTime;
    t = leg.Arrival() + leg.pauseAfter;
    here = leg.end;
    legs.push_back(leg);
  }
  return MobilitySchedule(initial, std::move(legs));
}

void WriteSchedule(std::ostream& out, NodeId node, const MobilitySchedule& schedule) {
  out << node << ' ' << 0.0 << ' ' << schedule.Initial().x << ' ' << schedule.Initial().y << " 0 0\n";
  for (const auto& leg : schedule.Legs()) {
    out << node << ' ' << leg.depart << ' ' << leg.end.x << ' ' << leg.end.y << ' ' << leg.speed << ' '
        << leg.pauseAfter << '\n';
  }
}

}  // namespace manet
