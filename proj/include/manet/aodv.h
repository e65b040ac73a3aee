#pragma once

#include <deque>
#include <map>
#include <utility>

#include "manet/routing_agent.h"

namespace manet {

/// Classic single-path AODV: flooded RREQ, unicast RREP along the reverse
/// path, hop-by-hop table forwarding, local repair at intermediate nodes and
/// RERR propagation to precursors.
class AodvAgent final : public RoutingAgent {
 public:
  AodvAgent(NodeId id, NodeServices& services) : RoutingAgent(id, services) {}

  void SendData(Data data) override;
  std::size_t BufferedData() const override { return m_buffered; }
  bool OnActiveRoute() const override;
  void OnDeath() override;

  const RoutingTable& Table() const { return m_table; }
  bool DiscoveryPending(NodeId dest) const { return m_discoveries.contains(dest); }
  bool RepairPending(NodeId dest) const { return m_repairs.contains(dest); }

 protected:
  void HandleRreq(const Packet& packet, const Rreq& rreq) override;
  void HandleRrep(const Packet& packet, const Rrep& rrep) override;
  void HandleRerr(const Packet& packet, const Rerr& rerr) override;
  void HandleData(const Packet& packet, const Data& data) override;
  bool IsNextHop(NodeId neighbor) const override;
  void NeighborLost(NodeId neighbor, bool wasNextHop) override;

 private:
  struct Buffered {
    Data data;
    NodeId previousHop;  // == m_id when originated here
  };
  struct Discovery {
    std::uint32_t attemptsLeft = 0;
    EventHandle timeout;
  };
  struct Repair {
    EventHandle timeout;
    std::set<NodeId> precursors;
  };

  void ForwardData(const Data& data, NodeId previousHop);
  void Buffer(const Data& data, NodeId previousHop);
  void FlushBuffer(NodeId dest);
  void DropBuffer(NodeId dest, DropCause cause);

  void StartDiscovery(NodeId dest);
  void DiscoveryTimeout(NodeId dest);
  void SendRreq(NodeId dest, bool repair);
  void StartLocalRepair(NodeId dest, const std::set<NodeId>& precursors);
  void RepairTimeout(NodeId dest);
  void SendRerr(std::vector<UnreachableDest> dests, NodeId nextHop);

  bool IsActiveSource(NodeId dest) const;
  void RefreshRoute(NodeId dest, bool active);
  bool SeenRreq(NodeId origin, std::uint32_t rreqId);

  RoutingTable m_table;
  std::uint32_t m_rreqId = 0;
  std::map<std::pair<NodeId, std::uint32_t>, Seconds> m_seenRreqs;  // -> expiry
  std::map<NodeId, Discovery> m_discoveries;
  std::map<NodeId, Repair> m_repairs;
  std::map<NodeId, std::deque<Buffered>> m_buffers;
  std::size_t m_buffered = 0;
  std::map<NodeId, Seconds> m_lastSentTo;  // flows originated here
};

}  // namespace manet
