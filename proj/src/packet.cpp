#include "manet/packet.h"

namespace manet {

std::string_view PacketTypeName(PacketType type) {
  switch (type) {
    case PacketType::Rreq: return "RREQ";
    case PacketType::Rrep: return "RREP";
    case PacketType::Rerr: return "RERR";
    case PacketType::Hello: return "HELLO";
    case PacketType::Data: return "DATA";
  }
  return "?";
}

namespace {

struct SizeOf {
  std::uint32_t operator()(const Rreq& p) const {
    return 24 + (p.recordOnWire ? 4 * static_cast<std::uint32_t>(p.record.size()) : 0);
  }
  std::uint32_t operator()(const Rrep& p) const {
    std::uint32_t bytes = 20;
    for (const auto& path : p.paths) {
      bytes += 1 + 4 * static_cast<std::uint32_t>(path.size());
    }
    return bytes;
  }
  std::uint32_t operator()(const Rerr& p) const {
    return 12 + 8 * static_cast<std::uint32_t>(p.unreachable.size()) +
           4 * static_cast<std::uint32_t>(p.routeToSource.size());
  }
  std::uint32_t operator()(const Hello&) const { return 20; }
  std::uint32_t operator()(const Data& p) const {
    return p.payload + 4 * static_cast<std::uint32_t>(p.sourceRoute.size());
  }
};

}  // namespace

std::uint32_t Packet::SizeBytes() const { return kIpUdpHeaderBytes + std::visit(SizeOf{}, body); }

}  // namespace manet
