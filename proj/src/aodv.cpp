#include "manet/aodv.h"

#include <algorithm>

namespace manet {

bool AodvAgent::IsActiveSource(NodeId dest) const {
  auto it = m_lastSentTo.find(dest);
  return it != m_lastSentTo.end() && Now() - it->second <= Params().routeLifetime;
}

void AodvAgent::RefreshRoute(NodeId dest, bool active) {
  if (RouteEntry* e = m_table.Lookup(dest, Now())) {
    e->expiresAt = std::max(e->expiresAt, Now() + Params().routeLifetime);
    if (active) {
      e->activeUntil = e->expiresAt;
    }
  }
}

bool AodvAgent::OnActiveRoute() const {
  const Seconds now = Now();
  return std::any_of(m_table.Entries().begin(), m_table.Entries().end(), [&](const auto& kv) {
    const RouteEntry& e = kv.second;
    return e.Usable(now) && e.activeUntil > now;
  });
}

bool AodvAgent::IsNextHop(NodeId neighbor) const {
  const Seconds now = Now();
  return std::any_of(m_table.Entries().begin(), m_table.Entries().end(), [&](const auto& kv) {
    const RouteEntry& e = kv.second;
    return e.Usable(now) && e.nextHop == neighbor && e.activeUntil > now;
  });
}

// ---------------------------------------------------------------- data path

void AodvAgent::SendData(Data data) {
  m_lastSentTo[data.dest] = Now();
  if (data.dest == m_id) {
    DeliverLocal(data);
    return;
  }
  ForwardData(data, m_id);
}

void AodvAgent::HandleData(const Packet& packet, const Data& data) {
  RefreshRoute(data.origin, true);
  RefreshRoute(packet.sender, true);
  if (data.dest == m_id) {
    DeliverLocal(data);
    return;
  }
  ForwardData(data, packet.sender);
}

void AodvAgent::ForwardData(const Data& data, NodeId previousHop) {
  const NodeId dest = data.dest;
  if (m_repairs.contains(dest) || (previousHop == m_id && m_discoveries.contains(dest))) {
    Buffer(data, previousHop);
    return;
  }
  RouteEntry* e = m_table.Lookup(dest, Now());
  if (e == nullptr) {
    if (previousHop == m_id) {
      Buffer(data, previousHop);
      StartDiscovery(dest);
      return;
    }
    DropData(data, DropCause::NoRoute);
    const RouteEntry* stale = m_table.Find(dest);
    SendRerr({UnreachableDest{dest, stale != nullptr ? stale->destSeq : 0}}, previousHop);
    return;
  }
  e->expiresAt = std::max(e->expiresAt, Now() + Params().routeLifetime);
  e->activeUntil = e->expiresAt;
  e->lastForward = Now();
  if (previousHop != m_id) {
    e->precursors.insert(previousHop);
  }
  Transmit(e->nextHop, data);
}

void AodvAgent::Buffer(const Data& data, NodeId previousHop) {
  if (m_buffered >= Params().queueCapacity) {
    DropData(data, DropCause::QueueOverflow);
    return;
  }
  m_buffers[data.dest].push_back(Buffered{data, previousHop});
  ++m_buffered;
}

void AodvAgent::FlushBuffer(NodeId dest) {
  auto it = m_buffers.find(dest);
  if (it == m_buffers.end()) {
    return;
  }
  std::deque<Buffered> pending = std::move(it->second);
  m_buffers.erase(it);
  m_buffered -= pending.size();
  for (const auto& b : pending) {
    ForwardData(b.data, b.previousHop);
  }
}

void AodvAgent::DropBuffer(NodeId dest, DropCause cause) {
  auto it = m_buffers.find(dest);
  if (it == m_buffers.end()) {
    return;
  }
  std::deque<Buffered> pending = std::move(it->second);
  m_buffers.erase(it);
  m_buffered -= pending.size();
  for (const auto& b : pending) {
    DropData(b.data, cause);
  }
}

void AodvAgent::OnDeath() {
  for (auto& [dest, d] : m_discoveries) {
    m_svc.sim.Cancel(d.timeout);
  }
  for (auto& [dest, r] : m_repairs) {
    m_svc.sim.Cancel(r.timeout);
  }
  m_discoveries.clear();
  m_repairs.clear();
  std::vector<NodeId> dests;
  for (const auto& [dest, q] : m_buffers) {
    dests.push_back(dest);
  }
  for (NodeId d : dests) {
    DropBuffer(d, DropCause::DeadNode);
  }
}

// ---------------------------------------------------------------- discovery

void AodvAgent::StartDiscovery(NodeId dest) {
  if (m_discoveries.contains(dest)) {
    return;
  }
  ++Counters().discoveryStarts;
  Trace().Record(Now(), m_id, "discovery_start", 0, "dest={}", dest);
  m_discoveries[dest].attemptsLeft = Params().rreqRetries;
  SendRreq(dest, false);
  m_discoveries[dest].timeout =
      m_svc.sim.ScheduleIn(Params().discoveryTimeout, EventKind::Timer, [this, dest] { DiscoveryTimeout(dest); });
}

void AodvAgent::DiscoveryTimeout(NodeId dest) {
  auto it = m_discoveries.find(dest);
  if (it == m_discoveries.end() || !Alive()) {
    return;
  }
  if (it->second.attemptsLeft > 0) {
    --it->second.attemptsLeft;
    ++Counters().discoveryRetries;
    Trace().Record(Now(), m_id, "discovery_retry", 0, "dest={} left={}", dest, it->second.attemptsLeft);
    SendRreq(dest, false);
    it->second.timeout =
        m_svc.sim.ScheduleIn(Params().discoveryTimeout, EventKind::Timer, [this, dest] { DiscoveryTimeout(dest); });
    return;
  }
  m_discoveries.erase(it);
  ++Counters().discoveryFailures;
  Trace().Record(Now(), m_id, "discovery_fail", 0, "dest={}", dest);
  DropBuffer(dest, DropCause::NoRoute);
}

void AodvAgent::SendRreq(NodeId dest, bool repair) {
  Rreq rreq;
  rreq.origin = m_id;
  rreq.dest = dest;
  rreq.rreqId = ++m_rreqId;
  rreq.originSeq = ++m_seq;
  if (const RouteEntry* e = m_table.Find(dest); e != nullptr && e->seqKnown) {
    rreq.destSeq = e->destSeq;
    rreq.destSeqUnknown = false;
  }
  rreq.record = {m_id};
  rreq.repair = repair;
  SeenRreq(m_id, rreq.rreqId);
  Transmit(kBroadcast, std::move(rreq));
}

bool AodvAgent::SeenRreq(NodeId origin, std::uint32_t rreqId) {
  const Seconds now = Now();
  if (m_seenRreqs.size() > 256) {
    std::erase_if(m_seenRreqs, [&](const auto& kv) { return kv.second <= now; });
  }
  auto [it, inserted] = m_seenRreqs.try_emplace({origin, rreqId}, now + Params().rreqIdCacheTtl);
  if (!inserted && it->second <= now) {
    it->second = now + Params().rreqIdCacheTtl;
    return false;
  }
  return !inserted;
}

void AodvAgent::HandleRreq(const Packet& packet, const Rreq& rreq) {
  if (rreq.origin == m_id || SeenRreq(rreq.origin, rreq.rreqId)) {
    return;
  }
  const Seconds now = Now();
  const Seconds lifetime = Params().routeLifetime;
  const std::uint32_t hops = rreq.hopCount + 1;
  m_table.Offer(rreq.origin, packet.sender, hops, rreq.originSeq, true, now + lifetime, now);
  m_table.Offer(packet.sender, packet.sender, 1, 0, false, now + lifetime, now);
  RouteEntry* reverse = m_table.Lookup(rreq.origin, now);

  if (rreq.dest == m_id) {
    if (!rreq.destSeqUnknown && Fresher(rreq.destSeq, m_seq)) {
      m_seq = rreq.destSeq;
    }
    ++m_seq;
    if (reverse != nullptr) {
      reverse->activeUntil = now + lifetime;
    }
    Rrep rrep{rreq.origin, m_id, m_seq, 0, lifetime, 0, {}};
    Trace().Record(now, m_id, "rrep_send", 0, "origin={} dest={} seq={}", rreq.origin, m_id, m_seq);
    Transmit(reverse != nullptr ? reverse->nextHop : packet.sender, std::move(rrep));
    return;
  }

  RouteEntry* fwd = m_table.Lookup(rreq.dest, now);
  const bool fresh = fwd != nullptr && fwd->seqKnown && !m_repairs.contains(rreq.dest) &&
                     (rreq.destSeqUnknown || !Fresher(rreq.destSeq, fwd->destSeq));
  if (fresh && fwd->nextHop != packet.sender && reverse != nullptr) {
    fwd->precursors.insert(reverse->nextHop);
    reverse->precursors.insert(fwd->nextHop);
    reverse->activeUntil = now + lifetime;
    fwd->activeUntil = std::max(fwd->activeUntil, now + lifetime);
    Rrep rrep{rreq.origin, rreq.dest, fwd->destSeq, fwd->hopCount, fwd->expiresAt - now, 0, {}};
    Trace().Record(now, m_id, "rrep_send", 0, "origin={} dest={} seq={} intermediate", rreq.origin, rreq.dest,
                   fwd->destSeq);
    Transmit(reverse->nextHop, std::move(rrep));
    return;
  }

  Rreq next = rreq;
  next.hopCount = hops;
  next.record.push_back(m_id);
  if (const RouteEntry* known = m_table.Find(rreq.dest); known != nullptr && known->seqKnown) {
    if (next.destSeqUnknown || Fresher(known->destSeq, next.destSeq)) {
      next.destSeq = known->destSeq;
      next.destSeqUnknown = false;
    }
  }
  Transmit(kBroadcast, std::move(next));
}

void AodvAgent::HandleRrep(const Packet& packet, const Rrep& rrep) {
  const Seconds now = Now();
  const std::uint32_t hops = rrep.hopCount + 1;
  m_table.Offer(packet.sender, packet.sender, 1, 0, false, now + Params().routeLifetime, now);
  m_table.Offer(rrep.dest, packet.sender, hops, rrep.destSeq, true, now + rrep.lifetime, now);
  RouteEntry* fwd = m_table.Lookup(rrep.dest, now);
  if (fwd != nullptr) {
    fwd->activeUntil = std::max(fwd->activeUntil, now + Params().routeLifetime);
  }

  if (rrep.origin == m_id) {
    if (fwd == nullptr) {
      return;
    }
    if (auto it = m_discoveries.find(rrep.dest); it != m_discoveries.end()) {
      m_svc.sim.Cancel(it->second.timeout);
      m_discoveries.erase(it);
      Trace().Record(now, m_id, "discovery_done", 0, "dest={} hops={}", rrep.dest, fwd->hopCount);
    }
    if (auto it = m_repairs.find(rrep.dest); it != m_repairs.end()) {
      m_svc.sim.Cancel(it->second.timeout);
      m_repairs.erase(it);
      ++Counters().repairSuccesses;
      Trace().Record(now, m_id, "repair_success", 0, "dest={} hops={}", rrep.dest, fwd->hopCount);
    }
    FlushBuffer(rrep.dest);
    return;
  }

  RouteEntry* reverse = m_table.Lookup(rrep.origin, now);
  if (reverse == nullptr || fwd == nullptr) {
    return;
  }
  fwd->precursors.insert(reverse->nextHop);
  reverse->activeUntil = std::max(reverse->activeUntil, now + Params().routeLifetime);
  Rrep next = rrep;
  next.hopCount = hops;
  Transmit(reverse->nextHop, std::move(next));
}

// ---------------------------------------------------------------- maintenance

void AodvAgent::NeighborLost(NodeId neighbor, bool /*wasNextHop*/) {
  const Seconds now = Now();
  std::vector<UnreachableDest> unreachable;
  std::vector<std::pair<NodeId, std::set<NodeId>>> repairs;
  std::vector<NodeId> rediscover;
  for (auto& [dest, e] : m_table.Entries()) {
    if (!e.Usable(now) || e.nextHop != neighbor) {
      continue;
    }
    const bool active = e.activeUntil > now;
    e.valid = false;
    if (e.seqKnown) {
      ++e.destSeq;
    }
    if (!active) {
      continue;
    }
    if (IsActiveSource(dest)) {
      // The break is at this node's own first hop: nothing to repair locally.
      rediscover.push_back(dest);
    } else if (now - e.lastForward <= Params().helloInterval) {
      // Still carrying traffic when the link went.
      repairs.emplace_back(dest, e.precursors);
    } else if (!e.precursors.empty()) {
      unreachable.push_back({dest, e.destSeq});
    }
  }
  for (NodeId dest : rediscover) {
    Trace().Record(now, m_id, "route_break", 0, "dest={} next={}", dest, neighbor);
    StartDiscovery(dest);
  }
  for (auto& [dest, precursors] : repairs) {
    StartLocalRepair(dest, precursors);
  }
  if (!unreachable.empty()) {
    SendRerr(std::move(unreachable), kBroadcast);
  }
}

void AodvAgent::StartLocalRepair(NodeId dest, const std::set<NodeId>& precursors) {
  if (m_repairs.contains(dest)) {
    return;
  }
  ++Counters().repairStarts;
  Trace().Record(Now(), m_id, "repair_start", 0, "dest={}", dest);
  Repair& r = m_repairs[dest];
  r.precursors = precursors;
  SendRreq(dest, true);
  r.timeout = m_svc.sim.ScheduleIn(Params().RepairTimeout(), EventKind::Timer, [this, dest] { RepairTimeout(dest); });
}

void AodvAgent::RepairTimeout(NodeId dest) {
  auto it = m_repairs.find(dest);
  if (it == m_repairs.end() || !Alive()) {
    return;
  }
  const bool upstream = !it->second.precursors.empty();
  m_repairs.erase(it);
  ++Counters().repairFailures;
  Trace().Record(Now(), m_id, "repair_fail", 0, "dest={}", dest);
  DropBuffer(dest, DropCause::NoRoute);
  if (upstream) {
    const RouteEntry* e = m_table.Find(dest);
    SendRerr({UnreachableDest{dest, e != nullptr ? e->destSeq : 0}}, kBroadcast);
  }
}

void AodvAgent::SendRerr(std::vector<UnreachableDest> dests, NodeId nextHop) {
  Rerr rerr;
  rerr.upstream = m_id;
  rerr.unreachable = std::move(dests);
  for (const auto& u : rerr.unreachable) {
    Trace().Record(Now(), m_id, "rerr_send", 0, "dest={} seq={}", u.dest, u.seq);
  }
  Transmit(nextHop, std::move(rerr));
}

void AodvAgent::HandleRerr(const Packet& packet, const Rerr& rerr) {
  const Seconds now = Now();
  std::vector<UnreachableDest> propagate;
  std::vector<NodeId> rediscover;
  for (const auto& u : rerr.unreachable) {
    RouteEntry* e = m_table.Find(u.dest);
    if (e == nullptr || !e->Usable(now) || e->nextHop != packet.sender) {
      continue;
    }
    e->valid = false;
    if (!e->seqKnown || Fresher(u.seq, e->destSeq)) {
      e->destSeq = u.seq;
      e->seqKnown = true;
    }
    if (IsActiveSource(u.dest)) {
      rediscover.push_back(u.dest);
    } else if (!e->precursors.empty()) {
      propagate.push_back({u.dest, e->destSeq});
    }
  }
  for (NodeId dest : rediscover) {
    Trace().Record(now, m_id, "rerr_recv", 0, "dest={} rediscover", dest);
    StartDiscovery(dest);
  }
  if (!propagate.empty()) {
    SendRerr(std::move(propagate), kBroadcast);
  }
}

}  // namespace manet
