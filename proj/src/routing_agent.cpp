#include "manet/routing_agent.h"

namespace manet {

RouteEntry* RoutingTable::Find(NodeId dest) {
  auto it = m_entries.find(dest);
  return it == m_entries.end() ? nullptr : &it->second;
}

const RouteEntry* RoutingTable::Find(NodeId dest) const {
  auto it = m_entries.find(dest);
  return it == m_entries.end() ? nullptr : &it->second;
}

RouteEntry* RoutingTable::Lookup(NodeId dest, Seconds now) {
  RouteEntry* e = Find(dest);
  if (e == nullptr) {
    return nullptr;
  }
  if (e->valid && now >= e->expiresAt) {
    e->valid = false;
  }
  return e->valid ? e : nullptr;
}

RouteEntry* RoutingTable::Offer(NodeId dest, NodeId nextHop, std::uint32_t hopCount, SeqNo seq, bool seqKnown,
                                Seconds expiresAt, Seconds now) {
  auto [it, inserted] = m_entries.try_emplace(dest);
  RouteEntry& e = it->second;
  const bool usable = !inserted && e.Usable(now);
  bool accept = inserted || !usable || !e.seqKnown;
  if (!accept && seqKnown) {
    accept = Fresher(seq, e.destSeq) || (seq == e.destSeq && hopCount < e.hopCount);
  }
  if (!accept) {
    if (e.nextHop == nextHop && e.hopCount == hopCount) {
      e.expiresAt = std::max(e.expiresAt, expiresAt);
    }
    return nullptr;
  }
  e.dest = dest;
  if (e.nextHop != nextHop) {
    e.precursors.clear();
  }
  e.nextHop = nextHop;
  e.hopCount = hopCount;
  if (seqKnown) {
    e.destSeq = seq;
    e.seqKnown = true;
  }
  e.valid = true;
  e.expiresAt = usable ? std::max(e.expiresAt, expiresAt) : expiresAt;
  return &e;
}

RoutingAgent::RoutingAgent(NodeId id, NodeServices& services) : m_svc(services), m_id(id) {}

void RoutingAgent::Start(Seconds helloPhase) {
  m_svc.sim.Schedule(helloPhase, EventKind::Timer, [this] { HelloTick(); });
}

void RoutingAgent::HelloTick() {
  if (!Alive()) {
    return;
  }
  if (OnActiveRoute()) {
    Transmit(kBroadcast, Hello{m_id, m_seq});
  }
  m_svc.sim.ScheduleIn(Params().helloInterval, EventKind::Timer, [this] { HelloTick(); });
}

void RoutingAgent::Receive(const Packet& packet) {
  if (!Alive()) {
    return;
  }
  // Any frame heard from a neighbour proves the link, not only Hellos.
  RefreshNeighbor(packet.sender);
  if (packet.nextHop != kBroadcast && packet.nextHop != m_id) {
    return;
  }
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, Rreq>) {
          HandleRreq(packet, body);
        } else if constexpr (std::is_same_v<T, Rrep>) {
          HandleRrep(packet, body);
        } else if constexpr (std::is_same_v<T, Rerr>) {
          HandleRerr(packet, body);
        } else if constexpr (std::is_same_v<T, Data>) {
          HandleData(packet, body);
        } else if constexpr (std::is_same_v<T, Hello>) {
          HandleHello(packet, body);
        }
      },
      packet.body);
}

void RoutingAgent::RefreshNeighbor(NodeId neighbor) {
  NeighborState& state = m_neighbors[neighbor];
  m_svc.sim.Cancel(state.expiry);
  state.deadline = Now() + Params().LivenessWindow();
  state.expiry = m_svc.sim.Schedule(state.deadline, EventKind::Timer, [this, neighbor] { ExpireNeighbor(neighbor); });
}

void RoutingAgent::ExpireNeighbor(NodeId neighbor) {
  m_neighbors.erase(neighbor);
  if (!Alive()) {
    return;
  }
  const bool nextHop = IsNextHop(neighbor);
  if (nextHop) {
    ++Counters().linkBreaks;
    Trace().Record(Now(), m_id, "link_break", 0, "{}", neighbor);
  }
  NeighborLost(neighbor, nextHop);
}

bool RoutingAgent::NeighborAlive(NodeId neighbor) const {
  auto it = m_neighbors.find(neighbor);
  return it != m_neighbors.end() && Now() < it->second.deadline;
}

std::optional<Seconds> RoutingAgent::NeighborDeadline(NodeId neighbor) const {
  auto it = m_neighbors.find(neighbor);
  if (it == m_neighbors.end()) {
    return std::nullopt;
  }
  return it->second.deadline;
}

void RoutingAgent::DeliverLocal(const Data& data) {
  m_svc.ledger.RecordDelivered(data.uid, Now());
  Trace().Record(Now(), m_id, "deliver", 0, "flow={} seq={} delay={:.9f}", data.flow, data.seq, Now() - data.sentAt);
}

void RoutingAgent::DropData(const Data& data, DropCause cause) {
  m_svc.ledger.RecordDropped(data.uid, cause);
  Trace().Record(Now(), m_id, "drop", 0, "DATA flow={} seq={} {}", data.flow, data.seq, DropCauseName(cause));
}

}  // namespace manet
