#include "manet/traffic.h"

#include <cmath>
#include <set>
#include <stdexcept>

namespace manet {

std::vector<Seconds> CbrSchedule(const FlowSpec& flow) {
  std::vector<Seconds> times;
  if (!(flow.stop > flow.start) || !(flow.interval > 0.0)) {
    return times;
  }
  const auto count = static_cast<std::size_t>(std::floor((flow.stop - flow.start) / flow.interval + 1e-9)) + 1;
  times.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    times.push_back(flow.start + static_cast<double>(k) * flow.interval);
  }
  return times;
}

std::vector<FlowSpec> GenerateFlows(std::size_t nodeCount, const FlowGenerator& gen, Seconds stop, RngStream& rng) {
  const std::uint64_t pairs = static_cast<std::uint64_t>(nodeCount) * (nodeCount - 1);
  if (gen.flowCount > pairs) {
    throw std::invalid_argument("more flows requested than distinct node pairs");
  }
  std::set<std::pair<NodeId, NodeId>> used;
  std::vector<FlowSpec> flows;
  while (flows.size() < gen.flowCount) {
    const std::uint64_t k = rng.Below(pairs);
    const auto src = static_cast<NodeId>(k / (nodeCount - 1));
    auto dest = static_cast<NodeId>(k % (nodeCount - 1));
    if (dest >= src) {
      ++dest;
    }
    if (!used.insert({src, dest}).second) {
      continue;
    }
    FlowSpec f;
    f.src = src;
    f.dest = dest;
    f.payload = gen.payload;
    f.interval = gen.interval;
    f.start = rng.Uniform(gen.startMin, gen.startMax);
    f.stop = stop;
    flows.push_back(f);
  }
  return flows;
}

}  // namespace manet
