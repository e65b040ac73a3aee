#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "manet/types.h"

namespace manet {

using Path = std::vector<NodeId>;
using SeqNo = std::uint32_t;

/// True iff a is strictly newer than b under 32-bit circular comparison.
constexpr bool Fresher(SeqNo a, SeqNo b) { return static_cast<std::int32_t>(a - b) > 0; }

struct Rreq {
  NodeId origin = 0;
  NodeId dest = 0;
  std::uint32_t rreqId = 0;  // per-origin counter; (origin, rreqId) identifies a flood
  SeqNo originSeq = 0;
  SeqNo destSeq = 0;
  bool destSeqUnknown = true;
  std::uint32_t hopCount = 0;
  Path record;              // nodes traversed so far, origin first
  bool recordOnWire = false;  // multipath variant carries the record in the header
  bool repair = false;        // issued by an intermediate node doing local repair
};

struct Rrep {
  NodeId origin = 0;  // node that asked
  NodeId dest = 0;    // node the route leads to
  SeqNo destSeq = 0;
  std::uint32_t hopCount = 0;
  Seconds lifetime = 0.0;
  std::uint32_t replyId = 0;  // flood identifier for the broadcast multipath reply
  std::vector<Path> paths;    // empty for a classic unicast reply
};

struct UnreachableDest {
  NodeId dest = 0;
  SeqNo seq = 0;
};

struct Rerr {
  NodeId upstream = 0;    // node that detected the break
  NodeId downstream = 0;  // neighbour that was lost
  std::vector<UnreachableDest> unreachable;
  Path routeToSource;  // multipath variant: hop-by-hop path back to the origin
};

struct Hello {
  NodeId sender = 0;
  SeqNo seq = 0;
};

struct Data {
  std::uint64_t uid = 0;  // ledger key
  std::uint32_t flow = 0;
  std::uint32_t seq = 0;
  NodeId origin = 0;
  NodeId dest = 0;
  std::uint32_t payload = 0;
  Seconds sentAt = 0.0;
  Path sourceRoute;  // multipath variant only
};

enum class PacketType : std::uint8_t { Rreq, Rrep, Rerr, Hello, Data };
inline constexpr std::size_t kPacketTypeCount = 5;

std::string_view PacketTypeName(PacketType type);

/// One frame on the air. nextHop == kBroadcast for broadcasts.
struct Packet {
  using Body = std::variant<Rreq, Rrep, Rerr, Hello, Data>;

  std::uint64_t id = 0;
  NodeId sender = 0;
  NodeId nextHop = kBroadcast;
  Body body;

  PacketType Type() const { return static_cast<PacketType>(body.index()); }
  bool IsControl() const { return Type() != PacketType::Data; }
  /// On-air size including a 20-byte IP and 8-byte UDP header.
  std::uint32_t SizeBytes() const;
};

inline constexpr std::uint32_t kIpUdpHeaderBytes = 28;

}  // namespace manet
