#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "manet/engine.h"
#include "manet/packet.h"
#include "manet/types.h"

namespace manet {

enum class DropCause : std::uint8_t {
  NoRoute,        // no usable route, discovery failed, or repair failed
  QueueOverflow,  // discovery/repair buffer full
  DeadNode,       // origin, holder, or receiver ran out of energy
  LinkLost,       // addressee out of range when the frame went out
  ChannelLoss,    // random per-frame loss on the medium
};
inline constexpr std::size_t kDropCauseCount = 5;
std::string_view DropCauseName(DropCause cause);

struct DataRecord {
  std::uint32_t flow = 0;
  std::uint32_t seq = 0;
  NodeId origin = 0;
  NodeId dest = 0;
  std::uint32_t payload = 0;
  Seconds sentAt = 0.0;
  std::optional<Seconds> deliveredAt;
  std::optional<DropCause> drop;
  Path hops;  // origin, then every node that received the packet

  bool Terminal() const { return deliveredAt.has_value() || drop.has_value(); }
};

struct EnergySample {
  Seconds time = 0.0;
  double networkJoules = 0.0;
  double routingJoules = 0.0;
};

/// Per-run record of every DATA packet and every transmission.
class PacketLedger {
 public:
  std::uint64_t RecordSent(std::uint32_t flow, std::uint32_t seq, NodeId origin, NodeId dest,
                           std::uint32_t payload, Seconds t);
  void RecordHop(std::uint64_t uid, NodeId node);
  /// Hard fault on a second delivery or on delivering a dropped packet.
  void RecordDelivered(std::uint64_t uid, Seconds t);
  void RecordDropped(std::uint64_t uid, DropCause cause);
  void RecordTransmission(PacketType type);
  void RecordEnergySample(EnergySample sample) { m_energySeries.push_back(sample); }

  const DataRecord& Record(std::uint64_t uid) const { return m_records.at(uid - 1); }
  const std::vector<DataRecord>& Records() const { return m_records; }
  std::uint64_t Transmissions(PacketType type) const { return m_tx[static_cast<std::size_t>(type)]; }
  std::uint64_t ControlTransmissions() const;
  std::uint64_t DataTransmissions() const { return Transmissions(PacketType::Data); }
  const std::vector<EnergySample>& EnergySeries() const { return m_energySeries; }

 private:
  DataRecord& Mutable(std::uint64_t uid);

  std::vector<DataRecord> m_records;  // uid = index + 1
  std::array<std::uint64_t, kPacketTypeCount> m_tx{};
  std::vector<EnergySample> m_energySeries;
};

struct MetricsReport {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t inFlight = 0;
  std::array<std::uint64_t, kDropCauseCount> dropBreakdown{};
  std::uint64_t controlTransmissions = 0;
  std::uint64_t dataTransmissions = 0;
  std::array<std::uint64_t, kPacketTypeCount> transmissions{};  // by PacketType
  double throughputKbps = 0.0;
  std::optional<double> avgDelay;  // undefined when nothing was delivered
  double pdr = 0.0;
  double lossRatio = 0.0;
  std::optional<double> nrl;  // undefined when nothing was delivered
  std::vector<EnergySample> energySeries;

  double FinalNetworkJoules() const { return energySeries.empty() ? 0.0 : energySeries.back().networkJoules; }
  double FinalRoutingJoules() const { return energySeries.empty() ? 0.0 : energySeries.back().routingJoules; }
};

MetricsReport Finalize(const PacketLedger& ledger, Seconds duration);

}  // namespace manet
