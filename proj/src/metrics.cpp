#include "manet/metrics.h"

#include <string>

namespace manet {

std::string_view DropCauseName(DropCause cause) {
  switch (cause) {
    case DropCause::NoRoute: return "no_route";
    case DropCause::QueueOverflow: return "queue_overflow";
    case DropCause::DeadNode: return "dead_node";
    case DropCause::LinkLost: return "link_lost";
    case DropCause::ChannelLoss: return "channel_loss";
  }
  return "?";
}

std::uint64_t PacketLedger::RecordSent(std::uint32_t flow, std::uint32_t seq, NodeId origin, NodeId dest,
                                       std::uint32_t payload, Seconds t) {
  DataRecord r;
  r.flow = flow;
  r.seq = seq;
  r.origin = origin;
  r.dest = dest;
  r.payload = payload;
  r.sentAt = t;
  r.hops.push_back(origin);
  m_records.push_back(std::move(r));
  return m_records.size();
}

DataRecord& PacketLedger::Mutable(std::uint64_t uid) {
  if (uid == 0 || uid > m_records.size()) {
    throw SimulationFault("unknown data packet uid " + std::to_string(uid));
  }
  return m_records[uid - 1];
}

void PacketLedger::RecordHop(std::uint64_t uid, NodeId node) { Mutable(uid).hops.push_back(node); }

void PacketLedger::RecordDelivered(std::uint64_t uid, Seconds t) {
  DataRecord& r = Mutable(uid);
  if (r.Terminal()) {
    throw SimulationFault("duplicate delivery of flow " + std::to_string(r.flow) + " seq " +
                          std::to_string(r.seq));
  }
  r.deliveredAt = t;
}

void PacketLedger::RecordDropped(std::uint64_t uid, DropCause cause) {
  DataRecord& r = Mutable(uid);
  if (r.Terminal()) {
    throw SimulationFault("packet uid " + std::to_string(uid) + " terminated twice");
  }
  r.drop = cause;
}

void PacketLedger::RecordTransmission(PacketType type) { ++m_tx[static_cast<std::size_t>(type)]; }

std::uint64_t PacketLedger::ControlTransmissions() const {
  return m_tx[0] + m_tx[1] + m_tx[2] + m_tx[3];
}

MetricsReport Finalize(const PacketLedger& ledger, Seconds duration) {
  MetricsReport m;
  double delaySum = 0.0;
  std::uint64_t deliveredBytes = 0;
  for (const auto& r : ledger.Records()) {
    ++m.sent;
    if (r.deliveredAt) {
      ++m.delivered;
      delaySum += *r.deliveredAt - r.sentAt;
      deliveredBytes += r.payload;
    } else if (r.drop) {
      ++m.dropped;
      ++m.dropBreakdown[static_cast<std::size_t>(*r.drop)];
    } else {
      ++m.inFlight;
    }
  }
  m.controlTransmissions = ledger.ControlTransmissions();
  m.dataTransmissions = ledger.DataTransmissions();
  for (std::size_t t = 0; t < kPacketTypeCount; ++t) {
    m.transmissions[t] = ledger.Transmissions(static_cast<PacketType>(t));
  }
  m.throughputKbps = static_cast<double>(deliveredBytes) * 8.0 / duration / 1000.0;
  if (m.sent > 0) {
    m.pdr = static_cast<double>(m.delivered) / static_cast<double>(m.sent);
    m.lossRatio = static_cast<double>(m.sent - m.delivered - m.inFlight) / static_cast<double>(m.sent);
  }
  if (m.delivered > 0) {
    m.avgDelay = delaySum / static_cast<double>(m.delivered);
    m.nrl = static_cast<double>(m.controlTransmissions) / static_cast<double>(m.delivered);
  }
  m.energySeries = ledger.EnergySeries();
  return m;
}

}  // namespace manet
