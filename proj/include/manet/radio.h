#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "manet/energy.h"
#include "manet/engine.h"
#include "manet/metrics.h"
#include "manet/mobility.h"
#include "manet/packet.h"
#include "manet/trace.h"

namespace manet {

struct RadioParams {
  double range = 250.0;                   // m, inclusive
  double bandwidth = 2e6;                 // bit/s
  double propagationDelayPerMeter = 0.0;  // s/m
  double lossProbability = 0.0;           // per frame and receiver
};

/// Unit-disk shared medium with no contention. Membership is decided from
/// positions at send time; every in-range node gets the frame after the
/// transmission (+ propagation) delay. Unicast frames are only handed to, and
/// only charge, the addressee.
class Channel {
 public:
  using Receiver = std::function<void(NodeId receiver, const Packet& packet)>;

  Channel(Simulator& sim, const std::vector<MobilitySchedule>& mobility, EnergyLedger& energy,
          PacketLedger& ledger, Tracer& trace, const RadioParams& params, RngStream lossRng);

  void SetReceiver(Receiver receiver) { m_receiver = std::move(receiver); }

  /// Sends packet from sender at the current virtual time. Returns the number
  /// of deliveries scheduled.
  std::size_t Transmit(NodeId sender, const Packet& packet);

  /// Alive nodes within range of node at time t, ascending id, node excluded.
  std::vector<NodeId> Neighbors(NodeId node, Seconds t) const;
  bool InRange(NodeId a, NodeId b, Seconds t) const;

  Seconds TxDuration(std::uint32_t bytes) const { return bytes * 8.0 / m_params.bandwidth; }
  Vec2 PositionOf(NodeId node, Seconds t) const { return m_mobility[node].PositionAt(t); }
  std::size_t NodeCount() const { return m_mobility.size(); }
  std::size_t DataInTransit() const { return m_dataInTransit; }
  const RadioParams& Params() const { return m_params; }

 private:
  void ScheduleDelivery(NodeId receiver, std::shared_ptr<const Packet> packet, Seconds at);
  void Deliver(NodeId receiver, const Packet& packet);
  bool Lost();

  Simulator& m_sim;
  const std::vector<MobilitySchedule>& m_mobility;
  EnergyLedger& m_energy;
  PacketLedger& m_ledger;
  Tracer& m_trace;
  RadioParams m_params;
  RngStream m_lossRng;
  Receiver m_receiver;
  std::size_t m_dataInTransit = 0;
};

inline EnergyClass ClassOf(const Packet& p) { return p.IsControl() ? EnergyClass::Control : EnergyClass::Data; }

}  // namespace manet
