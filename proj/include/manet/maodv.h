#pragma once

#include <deque>
#include <map>
#include <set>
#include <utility>

#include "manet/path_select.h"
#include "manet/routing_agent.h"

namespace manet {

/// Multipath AODV variant. RREQ copies carry their route record and are
/// re-flooded along every loop-free prefix within a hop slack of the best
/// seen; the destination collects complete paths for a short window and
/// floods one reply carrying all of them back. The source keeps up to n0
/// node-disjoint routes, source-routes data over the primary, fails over to a
/// spare on RERR, and re-discovers in the background once only s0 remain.
/// There is no local repair.
class MaodvAgent final : public RoutingAgent {
 public:
  MaodvAgent(NodeId id, NodeServices& services) : RoutingAgent(id, services) {}

  void SendData(Data data) override;
  std::size_t BufferedData() const override { return m_buffered; }
  bool OnActiveRoute() const override;
  void OnDeath() override;

  const PathCache* Cache(NodeId dest) const;
  bool DiscoveryPending(NodeId dest) const { return m_discoveries.contains(dest); }
  /// Paths this node collected as destination, per (origin, rreq id).
  const std::map<std::pair<NodeId, std::uint32_t>, std::vector<Path>>& CollectedPaths() const {
    return m_collectedLog;
  }

  /// Reply collection window at the destination.
  Seconds CollectWindow() const;

 protected:
  void HandleRreq(const Packet& packet, const Rreq& rreq) override;
  void HandleRrep(const Packet& packet, const Rrep& rrep) override;
  void HandleRerr(const Packet& packet, const Rerr& rerr) override;
  void HandleData(const Packet& packet, const Data& data) override;
  bool IsNextHop(NodeId neighbor) const override;
  void NeighborLost(NodeId neighbor, bool wasNextHop) override;

 private:
  using FloodKey = std::pair<NodeId, std::uint32_t>;

  /// A carried path through (or ending at) this node, learned from a reply.
  struct Segment {
    NodeId origin;
    NodeId dest;
    Path path;
    std::size_t index;  // position of this node in path
    Seconds expiresAt;
  };
  struct FloodState {
    std::uint32_t bestHops = 0;
    std::uint32_t copies = 0;
    std::vector<Path> forwarded;  // only kept when superset pruning is on
    Seconds expiresAt = 0.0;
  };
  struct Session {
    std::vector<Path> paths;
    EventHandle emit;
  };
  struct Discovery {
    std::uint32_t attemptsLeft = 0;
    bool blocking = false;
    EventHandle timeout;
  };

  PathCache& CacheFor(NodeId dest);
  void SendOnPrimary(Data data);
  void Buffer(const Data& data);
  void FlushBuffer(NodeId dest);
  void DropBuffer(NodeId dest, DropCause cause);

  void StartDiscovery(NodeId dest, bool blocking);
  void DiscoveryTimeout(NodeId dest);
  void SendRreq(NodeId dest);
  void EmitReply(FloodKey key);
  void AcceptPaths(NodeId dest, const std::vector<Path>& paths);
  void RouteBreak(NodeId dest, NodeId a, NodeId b);
  void MaybeReplenish(NodeId dest);
  void SendRerrToSource(const Segment& segment, NodeId lost);
  void InstallSegments(const Rrep& rrep);
  void DropSegmentsThrough(NodeId a, NodeId b);
  void HandleHello(const Packet& packet, const Hello& hello) override;

  bool IsActiveSource(NodeId dest) const;

  std::uint32_t m_rreqId = 0;
  std::uint32_t m_replyId = 0;
  std::map<FloodKey, FloodState> m_floods;
  std::map<FloodKey, Session> m_sessions;
  std::map<FloodKey, std::vector<Path>> m_collectedLog;
  std::map<FloodKey, Seconds> m_seenReplies;  // (dest, reply id) -> expiry
  std::vector<Segment> m_segments;

  std::map<NodeId, PathCache> m_caches;
  std::map<NodeId, Discovery> m_discoveries;
  std::map<NodeId, std::deque<Data>> m_buffers;
  std::size_t m_buffered = 0;
  std::map<NodeId, Seconds> m_lastSentTo;
};

}  // namespace manet
