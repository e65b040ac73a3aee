#pragma once

// Pieces shared by both routing protocols: parameters, the per-run service
// bundle, the routing table, and the agent base class that owns Hello-based
// neighbour liveness and link-break detection.

#include <cstdint>
#include <map>
#include <optional>
#include <set>

#include "manet/engine.h"
#include "manet/energy.h"
#include "manet/metrics.h"
#include "manet/packet.h"
#include "manet/radio.h"
#include "manet/trace.h"

namespace manet {

struct ProtocolParams {
  std::uint32_t rreqRetries = 2;
  Seconds helloInterval = 1.0;
  std::uint32_t allowedHelloLoss = 2;
  Seconds routeLifetime = 10.0;
  Seconds rreqIdCacheTtl = 6.0;
  Seconds discoveryTimeout = 1.0;  // wait for a reply before re-flooding
  std::uint32_t queueCapacity = 50;  // buffered DATA per node

  // Multipath variant.
  std::uint32_t n0 = 3;  // target number of disjoint routes
  std::uint32_t s0 = 1;  // replenish when valid routes drop to this many
  std::uint32_t rreqSlack = 2;
  std::uint32_t rreqCopyLimit = 3;  // copies of one flood a node forwards; 0 = unlimited
  std::uint32_t diameterEstimate = 10;  // hops, sizes the reply collection window
  bool supersetPruning = true;
  bool degreeTieBreak = true;

  Seconds LivenessWindow() const { return allowedHelloLoss * helloInterval; }
  Seconds RepairTimeout() const { return 2.0 * helloInterval; }
};

struct ProtocolCounters {
  std::uint64_t discoveryStarts = 0;
  std::uint64_t discoveryRetries = 0;
  std::uint64_t discoveryFailures = 0;
  std::uint64_t repairStarts = 0;
  std::uint64_t repairSuccesses = 0;
  std::uint64_t repairFailures = 0;
  std::uint64_t linkBreaks = 0;
  std::uint64_t failovers = 0;
  std::uint64_t replenishments = 0;
};

/// Everything an agent needs from the run it lives in.
struct NodeServices {
  Simulator& sim;
  Channel& channel;
  EnergyLedger& energy;
  PacketLedger& ledger;
  Tracer& trace;
  ProtocolParams params;
  ProtocolCounters counters{};
  std::uint64_t nextPacketId = 1;
};

struct RouteEntry {
  NodeId dest = 0;
  NodeId nextHop = 0;
  std::uint32_t hopCount = 0;
  SeqNo destSeq = 0;
  bool seqKnown = false;
  bool valid = false;
  Seconds expiresAt = 0.0;
  std::set<NodeId> precursors;  // active neighbours upstream of this node
  Seconds activeUntil = 0.0;    // carrying traffic, so the node keeps sending Hellos
  Seconds lastForward = -1e9;   // last DATA forwarded toward dest

  bool Usable(Seconds now) const { return valid && now < expiresAt; }
};

class RoutingTable {
 public:
  RouteEntry* Find(NodeId dest);
  const RouteEntry* Find(NodeId dest) const;
  /// Entry usable at now, or null. Expired entries are invalidated on lookup.
  RouteEntry* Lookup(NodeId dest, Seconds now);

  /// Applies the sequence-number update rule: accept when the entry is
  /// missing or invalid, the offered sequence number is fresher, or equal
  /// with fewer hops. Returns the entry when it was (re)written.
  RouteEntry* Offer(NodeId dest, NodeId nextHop, std::uint32_t hopCount, SeqNo seq, bool seqKnown,
                    Seconds expiresAt, Seconds now);

  std::map<NodeId, RouteEntry>& Entries() { return m_entries; }
  const std::map<NodeId, RouteEntry>& Entries() const { return m_entries; }

 private:
  std::map<NodeId, RouteEntry> m_entries;
};

class RoutingAgent {
 public:
  RoutingAgent(NodeId id, NodeServices& services);
  virtual ~RoutingAgent() = default;
  RoutingAgent(const RoutingAgent&) = delete;
  RoutingAgent& operator=(const RoutingAgent&) = delete;

  NodeId Id() const { return m_id; }

  /// Starts the periodic Hello timer with the given phase offset.
  void Start(Seconds helloPhase);

  /// Frame handed up by the channel.
  void Receive(const Packet& packet);

  /// A locally generated DATA packet (this node is the origin).
  virtual void SendData(Data data) = 0;

  virtual std::size_t BufferedData() const = 0;
  virtual bool OnActiveRoute() const = 0;
  /// Drops whatever DATA the node still holds.
  virtual void OnDeath() = 0;

  bool NeighborAlive(NodeId neighbor) const;
  std::optional<Seconds> NeighborDeadline(NodeId neighbor) const;

 protected:
  virtual void HandleRreq(const Packet& packet, const Rreq& rreq) = 0;
  virtual void HandleRrep(const Packet& packet, const Rrep& rrep) = 0;
  virtual void HandleRerr(const Packet& packet, const Rerr& rerr) = 0;
  virtual void HandleData(const Packet& packet, const Data& data) = 0;
  /// Whether some route currently forwards through neighbor.
  virtual bool IsNextHop(NodeId neighbor) const = 0;
  /// Liveness of neighbor expired. wasNextHop tells whether it was a link
  /// break on a route or just a stale neighbour.
  virtual void NeighborLost(NodeId neighbor, bool wasNextHop) = 0;
  /// Called for every Hello heard, after the neighbour is refreshed.
  virtual void HandleHello(const Packet& /*packet*/, const Hello& /*hello*/) {}

  template <typename Body>
  std::uint64_t Transmit(NodeId nextHop, Body body) {
    Packet p;
    p.id = m_svc.nextPacketId++;
    p.sender = m_id;
    p.nextHop = nextHop;
    p.body = std::move(body);
    m_svc.channel.Transmit(m_id, p);
    return p.id;
  }

  Seconds Now() const { return m_svc.sim.Now(); }
  bool Alive() const { return m_svc.energy.Alive(m_id); }
  const ProtocolParams& Params() const { return m_svc.params; }
  ProtocolCounters& Counters() { return m_svc.counters; }
  Tracer& Trace() { return m_svc.trace; }

  void DeliverLocal(const Data& data);
  void DropData(const Data& data, DropCause cause);

  NodeServices& m_svc;
  const NodeId m_id;
  SeqNo m_seq = 0;

 private:
  struct NeighborState {
    Seconds deadline = 0.0;
    EventHandle expiry;
  };

  void HelloTick();
  void RefreshNeighbor(NodeId neighbor);
  void ExpireNeighbor(NodeId neighbor);

  std::map<NodeId, NeighborState> m_neighbors;
};

}  // namespace manet
