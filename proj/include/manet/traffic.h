#pragma once

#include <cstdint>
#include <vector>

#include "manet/engine.h"
#include "manet/types.h"

namespace manet {

struct FlowSpec {
  NodeId src = 0;
  NodeId dest = 1;
  std::uint32_t payload = 512;  // bytes
  Seconds interval = 0.25;
  Seconds start = 1.0;
  Seconds stop = 120.0;

  friend bool operator==(const FlowSpec&, const FlowSpec&) = default;
};

/// Emission times start, start + interval, ... up to and including stop.
/// Empty when stop <= start.
std::vector<Seconds> CbrSchedule(const FlowSpec& flow);

/// Offered load of one flow in kb/s.
inline double OfferedLoadKbps(const FlowSpec& flow) { return flow.payload * 8.0 / flow.interval / 1000.0; }

struct FlowGenerator {
  std::uint32_t flowCount = 5;
  std::uint32_t payload = 512;
  Seconds interval = 0.25;
  Seconds startMin = 1.0;
  Seconds startMax = 2.0;
};

/// Draws flowCount distinct ordered (src, dest) pairs uniformly without
/// replacement, start times uniform in [startMin, startMax), all stopping at
/// stop.
std::vector<FlowSpec> GenerateFlows(std::size_t nodeCount, const FlowGenerator& gen, Seconds stop, RngStream& rng);

}  // namespace manet
