#include "manet/maodv.h"

#include <algorithm>

namespace manet {

namespace {

bool ContainsLink(const Path& p, NodeId a, NodeId b) {
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if ((p[i] == a && p[i + 1] == b) || (p[i] == b && p[i + 1] == a)) {
      return true;
    }
  }
  return false;
}

bool IsSubset(const Path& small, const Path& big) {
  return std::all_of(small.begin(), small.end(),
                     [&](NodeId n) { return std::find(big.begin(), big.end(), n) != big.end(); });
}

std::string FormatPath(const Path& p) { return fmt::format("{}", fmt::join(p, ",")); }

}  // namespace

Seconds MaodvAgent::CollectWindow() const {
  const std::uint32_t d = Params().diameterEstimate;
  const std::uint32_t rreqBytes = kIpUdpHeaderBytes + 24 + 4 * d;
  return 2.0 * d * m_svc.channel.TxDuration(rreqBytes);
}

const PathCache* MaodvAgent::Cache(NodeId dest) const {
  auto it = m_caches.find(dest);
  return it == m_caches.end() ? nullptr : &it->second;
}

PathCache& MaodvAgent::CacheFor(NodeId dest) {
  auto it = m_caches.find(dest);
  if (it == m_caches.end()) {
    it = m_caches.emplace(dest, PathCache(dest, Params().n0, Params().s0)).first;
  }
  return it->second;
}

bool MaodvAgent::IsActiveSource(NodeId dest) const {
  auto it = m_lastSentTo.find(dest);
  return it != m_lastSentTo.end() && Now() - it->second <= Params().routeLifetime;
}

bool MaodvAgent::OnActiveRoute() const {
  const Seconds now = Now();
  if (std::any_of(m_segments.begin(), m_segments.end(), [&](const Segment& s) { return s.expiresAt > now; })) {
    return true;
  }
  return std::any_of(m_caches.begin(), m_caches.end(), [&](const auto& kv) {
    return std::any_of(kv.second.Routes().begin(), kv.second.Routes().end(),
                       [&](const CachedRoute& r) { return r.valid && r.expiresAt > now; });
  });
}

bool MaodvAgent::IsNextHop(NodeId neighbor) const {
  const Seconds now = Now();
  for (const auto& s : m_segments) {
    if (s.expiresAt > now && s.index + 1 < s.path.size() && s.path[s.index + 1] == neighbor) {
      return true;
    }
  }
  for (const auto& [dest, cache] : m_caches) {
    for (const auto& r : cache.Routes()) {
      if (r.valid && r.expiresAt > now && r.nodes.size() > 1 && r.nodes[1] == neighbor) {
        return true;
      }
    }
  }
  return false;
}

// ---------------------------------------------------------------- data path

void MaodvAgent::SendData(Data data) {
  m_lastSentTo[data.dest] = Now();
  if (data.dest == m_id) {
    DeliverLocal(data);
    return;
  }
  SendOnPrimary(std::move(data));
}

void MaodvAgent::SendOnPrimary(Data data) {
  const NodeId dest = data.dest;
  PathCache& cache = CacheFor(dest);
  if (cache.Expire(Now()) > 0) {
    Trace().Record(Now(), m_id, "routes_expired", 0, "dest={} valid={}", dest, cache.ValidCount());
    MaybeReplenish(dest);
  }
  while (CachedRoute* primary = cache.Primary()) {
    const NodeId successor = primary->nodes[1];
    if (!NeighborAlive(successor)) {
      RouteBreak(dest, m_id, successor);
      continue;
    }
    // Spares stay usable while the flow is active; only breaks retire them.
    cache.Refresh(Now() + Params().routeLifetime);
    data.sourceRoute = primary->nodes;
    Transmit(successor, std::move(data));
    return;
  }
  Buffer(data);
  if (auto it = m_discoveries.find(dest); it != m_discoveries.end()) {
    it->second.blocking = true;
  } else {
    StartDiscovery(dest, true);
  }
}

void MaodvAgent::HandleData(const Packet& packet, const Data& data) {
  const Seconds now = Now();
  for (auto& s : m_segments) {
    if (s.origin == data.origin && s.dest == data.dest && s.path == data.sourceRoute) {
      s.expiresAt = std::max(s.expiresAt, now + Params().routeLifetime);
    }
  }
  if (data.dest == m_id) {
    if (m_svc.ledger.Record(data.uid).hops != data.sourceRoute) {
      throw SimulationFault(fmt::format("DATA {} left its source route {}", data.uid, FormatPath(data.sourceRoute)));
    }
    DeliverLocal(data);
    return;
  }
  const auto it = std::find(data.sourceRoute.begin(), data.sourceRoute.end(), m_id);
  if (it == data.sourceRoute.end() || it + 1 == data.sourceRoute.end()) {
    throw SimulationFault(fmt::format("node {} received DATA not routed through it: {}", m_id,
                                      FormatPath(data.sourceRoute)));
  }
  const NodeId successor = *(it + 1);
  if (!NeighborAlive(successor)) {
    DropData(data, DropCause::NoRoute);
    const auto index = static_cast<std::size_t>(it - data.sourceRoute.begin());
    SendRerrToSource(Segment{data.origin, data.dest, data.sourceRoute, index, now}, successor);
    return;
  }
  (void)packet;
  Transmit(successor, data);
}

void MaodvAgent::Buffer(const Data& data) {
  if (m_buffered >= Params().queueCapacity) {
    DropData(data, DropCause::QueueOverflow);
    return;
  }
  m_buffers[data.dest].push_back(data);
  ++m_buffered;
}

void MaodvAgent::FlushBuffer(NodeId dest) {
  auto it = m_buffers.find(dest);
  if (it == m_buffers.end()) {
    return;
  }
  std::deque<Data> pending = std::move(it->second);
  m_buffers.erase(it);
  m_buffered -= pending.size();
  for (auto& d : pending) {
    SendOnPrimary(std::move(d));
  }
}

void MaodvAgent::DropBuffer(NodeId dest, DropCause cause) {
  auto it = m_buffers.find(dest);
  if (it == m_buffers.end()) {
    return;
  }
  std::deque<Data> pending = std::move(it->second);
  m_buffers.erase(it);
  m_buffered -= pending.size();
  for (const auto& d : pending) {
    DropData(d, cause);
  }
}

void MaodvAgent::OnDeath() {
  for (auto& [dest, d] : m_discoveries) {
    m_svc.sim.Cancel(d.timeout);
  }
  m_discoveries.clear();
  for (auto& [key, s] : m_sessions) {
    m_svc.sim.Cancel(s.emit);
  }
  m_sessions.clear();
  std::vector<NodeId> dests;
  for (const auto& [dest, q] : m_buffers) {
    dests.push_back(dest);
  }
  for (NodeId d : dests) {
    DropBuffer(d, DropCause::DeadNode);
  }
}

// ---------------------------------------------------------------- discovery

void MaodvAgent::StartDiscovery(NodeId dest, bool blocking) {
  if (m_discoveries.contains(dest)) {
    return;
  }
  ++Counters().discoveryStarts;
  Trace().Record(Now(), m_id, "discovery_start", 0, "dest={} {}", dest, blocking ? "blocking" : "parallel");
  Discovery& d = m_discoveries[dest];
  d.attemptsLeft = Params().rreqRetries;
  d.blocking = blocking;
  SendRreq(dest);
  d.timeout =
      m_svc.sim.ScheduleIn(Params().discoveryTimeout, EventKind::Timer, [this, dest] { DiscoveryTimeout(dest); });
}

void MaodvAgent::DiscoveryTimeout(NodeId dest) {
  auto it = m_discoveries.find(dest);
  if (it == m_discoveries.end() || !Alive()) {
    return;
  }
  PathCache& cache = CacheFor(dest);
  cache.Expire(Now());
  if (cache.ValidCount() > 0 && !it->second.blocking) {
    // Background replenishment found nothing new; the current routes still work.
    m_discoveries.erase(it);
    Trace().Record(Now(), m_id, "discovery_idle", 0, "dest={}", dest);
    return;
  }
  if (it->second.attemptsLeft > 0) {
    --it->second.attemptsLeft;
    ++Counters().discoveryRetries;
    Trace().Record(Now(), m_id, "discovery_retry", 0, "dest={} left={}", dest, it->second.attemptsLeft);
    SendRreq(dest);
    it->second.timeout =
        m_svc.sim.ScheduleIn(Params().discoveryTimeout, EventKind::Timer, [this, dest] { DiscoveryTimeout(dest); });
    return;
  }
  m_discoveries.erase(it);
  ++Counters().discoveryFailures;
  Trace().Record(Now(), m_id, "discovery_fail", 0, "dest={}", dest);
  DropBuffer(dest, DropCause::NoRoute);
}

void MaodvAgent::SendRreq(NodeId dest) {
  Rreq rreq;
  rreq.origin = m_id;
  rreq.dest = dest;
  rreq.rreqId = ++m_rreqId;
  rreq.originSeq = ++m_seq;
  rreq.record = {m_id};
  rreq.recordOnWire = true;
  Transmit(kBroadcast, std::move(rreq));
}

void MaodvAgent::HandleRreq(const Packet& /*packet*/, const Rreq& rreq) {
  if (rreq.origin == m_id || std::find(rreq.record.begin(), rreq.record.end(), m_id) != rreq.record.end()) {
    return;
  }
  const Seconds now = Now();
  const FloodKey key{rreq.origin, rreq.rreqId};
  Path path = rreq.record;
  path.push_back(m_id);

  if (rreq.dest == m_id) {
    auto [it, fresh] = m_sessions.try_emplace(key);
    if (fresh) {
      it->second.emit =
          m_svc.sim.ScheduleIn(CollectWindow(), EventKind::Timer, [this, key] { EmitReply(key); });
    }
    if (std::find(it->second.paths.begin(), it->second.paths.end(), path) == it->second.paths.end()) {
      it->second.paths.push_back(std::move(path));
    }
    return;
  }

  if (m_floods.size() > 256) {
    std::erase_if(m_floods, [&](const auto& kv) { return kv.second.expiresAt <= now; });
  }
  const auto hops = static_cast<std::uint32_t>(path.size() - 1);
  auto [it, fresh] = m_floods.try_emplace(key);
  FloodState& state = it->second;
  if (fresh || state.expiresAt <= now) {
    state = FloodState{hops, 0, {}, now + Params().rreqIdCacheTtl};
  }
  state.bestHops = std::min(state.bestHops, hops);
  if (hops > state.bestHops + Params().rreqSlack) {
    return;
  }
  if (Params().rreqCopyLimit > 0 && state.copies >= Params().rreqCopyLimit) {
    return;
  }
  if (Params().supersetPruning) {
    const bool dominated =
        std::any_of(state.forwarded.begin(), state.forwarded.end(), [&](const Path& f) { return IsSubset(f, path); });
    if (dominated) {
      return;
    }
    state.forwarded.push_back(path);
  }
  ++state.copies;
  Rreq next = rreq;
  next.hopCount = hops;
  next.record = std::move(path);
  Transmit(kBroadcast, std::move(next));
}

void MaodvAgent::EmitReply(FloodKey key) {
  auto it = m_sessions.find(key);
  if (it == m_sessions.end() || !Alive()) {
    return;
  }
  std::vector<Path> paths = std::move(it->second.paths);
  m_sessions.erase(it);
  std::size_t best = paths.front().size();
  for (const auto& p : paths) {
    best = std::min(best, p.size());
  }
  std::erase_if(paths, [&](const Path& p) { return p.size() > best + Params().rreqSlack; });
  std::sort(paths.begin(), paths.end(), [](const Path& a, const Path& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  m_collectedLog[key] = paths;
  Trace().Record(Now(), m_id, "paths_collected", 0, "origin={} count={}", key.first, paths.size());

  ++m_seq;
  Rrep rrep;
  rrep.origin = key.first;
  rrep.dest = m_id;
  rrep.destSeq = m_seq;
  rrep.hopCount = 0;
  rrep.lifetime = Params().routeLifetime;
  rrep.replyId = ++m_replyId;
  rrep.paths = std::move(paths);
  m_seenReplies[{m_id, rrep.replyId}] = Now() + Params().rreqIdCacheTtl;
  InstallSegments(rrep);
  Transmit(kBroadcast, std::move(rrep));
}

void MaodvAgent::InstallSegments(const Rrep& rrep) {
  const Seconds expires = Now() + rrep.lifetime;
  for (const auto& p : rrep.paths) {
    const auto at = std::find(p.begin() + 1, p.end(), m_id);
    if (at == p.end()) {
      continue;
    }
    const auto index = static_cast<std::size_t>(at - p.begin());
    auto existing = std::find_if(m_segments.begin(), m_segments.end(),
                                 [&](const Segment& s) { return s.path == p; });
    if (existing != m_segments.end()) {
      existing->expiresAt = std::max(existing->expiresAt, expires);
    } else {
      m_segments.push_back(Segment{rrep.origin, rrep.dest, p, index, expires});
    }
  }
}

void MaodvAgent::HandleRrep(const Packet& /*packet*/, const Rrep& rrep) {
  const Seconds now = Now();
  if (m_seenReplies.size() > 256) {
    std::erase_if(m_seenReplies, [&](const auto& kv) { return kv.second <= now; });
  }
  auto [seen, fresh] = m_seenReplies.try_emplace({rrep.dest, rrep.replyId}, now + Params().rreqIdCacheTtl);
  if (!fresh) {
    return;
  }
  if (rrep.origin == m_id) {
    AcceptPaths(rrep.dest, rrep.paths);
    return;
  }
  const bool onPath = std::any_of(rrep.paths.begin(), rrep.paths.end(), [&](const Path& p) {
    return std::find(p.begin() + 1, p.end() - 1, m_id) != p.end() - 1;
  });
  if (!onPath) {
    return;
  }
  std::erase_if(m_segments, [&](const Segment& s) { return s.expiresAt <= now; });
  InstallSegments(rrep);
  Rrep next = rrep;
  next.hopCount = rrep.hopCount + 1;
  Transmit(kBroadcast, std::move(next));
}

void MaodvAgent::AcceptPaths(NodeId dest, const std::vector<Path>& paths) {
  const Seconds now = Now();
  PathCache& cache = CacheFor(dest);
  cache.Expire(now);
  Trace().Record(now, m_id, "paths_received", 0, "dest={} count={}", dest, paths.size());
  const std::vector<Path> valid = cache.ValidPaths();
  const std::vector<Path> chosen = SelectDisjoint(paths, cache.N0(), valid, Params().degreeTieBreak);
  const auto degrees = UnionDegrees(paths);
  for (const auto& p : chosen) {
    Trace().Record(now, m_id, "route_selected", 0, "dest={} path={} degree_sum={}", dest, FormatPath(p),
                   IntermediateDegreeSum(p, degrees));
  }
  cache.Add(chosen, now + Params().routeLifetime);
  if (auto it = m_discoveries.find(dest); it != m_discoveries.end() && cache.ValidCount() > 0) {
    m_svc.sim.Cancel(it->second.timeout);
    m_discoveries.erase(it);
    Trace().Record(now, m_id, "discovery_done", 0, "dest={} routes={}", dest, cache.ValidCount());
  }
  FlushBuffer(dest);
}

// ---------------------------------------------------------------- maintenance

void MaodvAgent::RouteBreak(NodeId dest, NodeId a, NodeId b) {
  PathCache& cache = CacheFor(dest);
  const std::size_t invalidated = cache.InvalidateLink(a, b);
  if (invalidated == 0) {
    return;
  }
  const CachedRoute* primary = cache.Primary();
  if (primary != nullptr) {
    ++Counters().failovers;
    Trace().Record(Now(), m_id, "failover", 0, "dest={} link={}-{} primary={} valid={}", dest, a, b,
                   FormatPath(primary->nodes), cache.ValidCount());
  } else {
    Trace().Record(Now(), m_id, "routes_exhausted", 0, "dest={} link={}-{}", dest, a, b);
  }
  MaybeReplenish(dest);
}

void MaodvAgent::MaybeReplenish(NodeId dest) {
  const PathCache& cache = CacheFor(dest);
  const std::size_t valid = cache.ValidCount();
  if (!IsActiveSource(dest) || m_discoveries.contains(dest)) {
    return;
  }
  if (valid == 0) {
    StartDiscovery(dest, true);
  } else if (valid <= cache.S0()) {
    ++Counters().replenishments;
    Trace().Record(Now(), m_id, "replenish", 0, "dest={} valid={}", dest, valid);
    StartDiscovery(dest, false);
  }
}

void MaodvAgent::NeighborLost(NodeId neighbor, bool wasNextHop) {
  if (!wasNextHop) {
    return;
  }
  const Seconds now = Now();
  std::vector<Segment> broken;
  std::erase_if(m_segments, [&](const Segment& s) {
    if (s.expiresAt <= now) {
      return true;
    }
    if (s.index + 1 < s.path.size() && s.path[s.index + 1] == neighbor) {
      broken.push_back(s);
      return true;
    }
    return false;
  });
  std::set<std::pair<NodeId, NodeId>> reported;
  for (const auto& s : broken) {
    if (reported.insert({s.origin, s.dest}).second) {
      SendRerrToSource(s, neighbor);
    }
  }
  std::vector<NodeId> dests;
  for (const auto& [dest, cache] : m_caches) {
    dests.push_back(dest);
  }
  for (NodeId dest : dests) {
    RouteBreak(dest, m_id, neighbor);
  }
}

void MaodvAgent::SendRerrToSource(const Segment& segment, NodeId lost) {
  Rerr rerr;
  rerr.upstream = m_id;
  rerr.downstream = lost;
  rerr.unreachable = {UnreachableDest{segment.dest, 0}};
  for (std::size_t i = segment.index + 1; i-- > 0;) {
    rerr.routeToSource.push_back(segment.path[i]);
  }
  Trace().Record(Now(), m_id, "rerr_send", 0, "origin={} dest={} link={}-{}", segment.origin, segment.dest, m_id,
                 lost);
  if (rerr.routeToSource.size() < 2) {
    return;
  }
  const NodeId next = rerr.routeToSource[1];
  Transmit(next, std::move(rerr));
}

void MaodvAgent::HandleHello(const Packet& packet, const Hello& /*hello*/) {
  // Upstream keep-alive: an idle spare segment lives as long as its predecessor does.
  const Seconds now = Now();
  for (auto& s : m_segments) {
    if (s.expiresAt > now && s.index > 0 && s.path[s.index - 1] == packet.sender) {
      s.expiresAt = std::max(s.expiresAt, now + Params().routeLifetime);
    }
  }
}

void MaodvAgent::DropSegmentsThrough(NodeId a, NodeId b) {
  std::erase_if(m_segments, [&](const Segment& s) { return ContainsLink(s.path, a, b); });
}

void MaodvAgent::HandleRerr(const Packet& /*packet*/, const Rerr& rerr) {
  DropSegmentsThrough(rerr.upstream, rerr.downstream);
  const Path& route = rerr.routeToSource;
  const auto at = std::find(route.begin(), route.end(), m_id);
  if (at == route.end()) {
    return;
  }
  if (at + 1 == route.end()) {
    for (const auto& u : rerr.unreachable) {
      Trace().Record(Now(), m_id, "rerr_recv", 0, "dest={} link={}-{}", u.dest, rerr.upstream, rerr.downstream);
      RouteBreak(u.dest, rerr.upstream, rerr.downstream);
    }
    return;
  }
  const NodeId next = *(at + 1);
  if (NeighborAlive(next)) {
    Transmit(next, rerr);
  }
}

}  // namespace manet
