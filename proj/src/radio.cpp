#include "manet/radio.h"

namespace manet {

Channel::Channel(Simulator& sim, const std::vector<MobilitySchedule>& mobility, EnergyLedger& energy,
                 PacketLedger& ledger, Tracer& trace, const RadioParams& params, RngStream lossRng)
    : m_sim(sim),
      m_mobility(mobility),
      m_energy(energy),
      m_ledger(ledger),
      m_trace(trace),
      m_params(params),
      m_lossRng(std::move(lossRng)) {}

bool Channel::InRange(NodeId a, NodeId b, Seconds t) const {
  return Distance(PositionOf(a, t), PositionOf(b, t)) <= m_params.range;
}

std::vector<NodeId> Channel::Neighbors(NodeId node, Seconds t) const {
  std::vector<NodeId> out;
  const Vec2 here = PositionOf(node, t);
  for (NodeId n = 0; n < m_mobility.size(); ++n) {
    if (n != node && m_energy.Alive(n) && Distance(here, PositionOf(n, t)) <= m_params.range) {
      out.push_back(n);
    }
  }
  return out;
}

bool Channel::Lost() { return m_params.lossProbability > 0.0 && m_lossRng.Uniform() < m_params.lossProbability; }

std::size_t Channel::Transmit(NodeId sender, const Packet& packet) {
  const Seconds now = m_sim.Now();
  const auto* data = std::get_if<Data>(&packet.body);
  if (!m_energy.Alive(sender)) {
    m_trace.Record(now, sender, "drop", packet.id, "{} dead_node", PacketTypeName(packet.Type()));
    if (data != nullptr) {
      m_ledger.RecordDropped(data->uid, DropCause::DeadNode);
    }
    return 0;
  }

  const std::uint32_t bytes = packet.SizeBytes();
  const Seconds duration = TxDuration(bytes);
  m_ledger.RecordTransmission(packet.Type());
  m_energy.Debit(sender, Direction::Tx, duration, ClassOf(packet));
  if (packet.nextHop == kBroadcast) {
    m_trace.Record(now, sender, "tx", packet.id, "{} {} bcast", PacketTypeName(packet.Type()), bytes);
  } else {
    m_trace.Record(now, sender, "tx", packet.id, "{} {} {}", PacketTypeName(packet.Type()), bytes,
                   packet.nextHop);
  }

  auto shared = std::make_shared<const Packet>(packet);
  const Vec2 origin = PositionOf(sender, now);
  const auto arrival = [&](NodeId n) {
    return now + duration + m_params.propagationDelayPerMeter * Distance(origin, PositionOf(n, now));
  };

  if (packet.nextHop != kBroadcast) {
    const NodeId target = packet.nextHop;
    if (!m_energy.Alive(target) || !InRange(sender, target, now)) {
      const DropCause cause = m_energy.Alive(target) ? DropCause::LinkLost : DropCause::DeadNode;
      m_trace.Record(now, sender, "lost", packet.id, "{} {} {}", PacketTypeName(packet.Type()), target,
                     DropCauseName(cause));
      if (data != nullptr) {
        m_ledger.RecordDropped(data->uid, cause);
      }
      return 0;
    }
    if (Lost()) {
      m_trace.Record(now, sender, "lost", packet.id, "{} {} channel_loss", PacketTypeName(packet.Type()), target);
      if (data != nullptr) {
        m_ledger.RecordDropped(data->uid, DropCause::ChannelLoss);
      }
      return 0;
    }
    ScheduleDelivery(target, std::move(shared), arrival(target));
    return 1;
  }

  std::size_t count = 0;
  for (NodeId n : Neighbors(sender, now)) {
    if (Lost()) {
      m_trace.Record(now, sender, "lost", packet.id, "{} {} channel_loss", PacketTypeName(packet.Type()), n);
      continue;
    }
    ScheduleDelivery(n, shared, arrival(n));
    ++count;
  }
  return count;
}

void Channel::ScheduleDelivery(NodeId receiver, std::shared_ptr<const Packet> packet, Seconds at) {
  if (packet->Type() == PacketType::Data) {
    ++m_dataInTransit;
  }
  m_sim.Schedule(at, EventKind::FrameDelivery,
                 [this, receiver, packet = std::move(packet)] { Deliver(receiver, *packet); });
}

void Channel::Deliver(NodeId receiver, const Packet& packet) {
  const auto* data = std::get_if<Data>(&packet.body);
  if (data != nullptr) {
    --m_dataInTransit;
  }
  const Seconds now = m_sim.Now();
  if (m_energy.Alive(receiver)) {
    m_energy.Debit(receiver, Direction::Rx, TxDuration(packet.SizeBytes()), ClassOf(packet));
  }
  if (!m_energy.Alive(receiver)) {
    m_trace.Record(now, receiver, "drop", packet.id, "{} dead_node", PacketTypeName(packet.Type()));
    if (data != nullptr) {
      m_ledger.RecordDropped(data->uid, DropCause::DeadNode);
    }
    return;
  }
  m_trace.Record(now, receiver, "rx", packet.id, "{} {}", PacketTypeName(packet.Type()), packet.sender);
  if (data != nullptr) {
    m_ledger.RecordHop(data->uid, receiver);
  }
  if (m_receiver) {
    m_receiver(receiver, packet);
  }
}

}  // namespace manet
