#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "manet/packet.h"
#include "manet/types.h"

namespace manet {

/// Node degrees in the undirected graph formed by the union of the paths.
std::map<NodeId, std::uint32_t> UnionDegrees(std::span<const Path> paths);

/// Sum of the degrees of a path's intermediate nodes.
std::uint32_t IntermediateDegreeSum(const Path& path, const std::map<NodeId, std::uint32_t>& degrees);

/// True when a and b share no node other than their endpoints.
bool IntermediatesDisjoint(const Path& a, const Path& b);

/// Greedy node-disjoint route selection. Candidates are ranked by hop count,
/// then (if degreeTieBreak) by the degree sum of their intermediate nodes in
/// the union graph of the candidates, then lexicographically by node ids.
/// Walking that order, a candidate is taken when it is disjoint from every
/// route in `existing` and every route already taken, until `existing` plus
/// the taken routes number n0. Returns only the newly taken routes, in
/// selection order. Duplicate candidates count once; the result does not
/// depend on the order of `candidates`.
std::vector<Path> SelectDisjoint(std::span<const Path> candidates, std::size_t n0,
                                 std::span<const Path> existing = {}, bool degreeTieBreak = true);

struct CachedRoute {
  Path nodes;
  bool valid = true;
  Seconds expiresAt = 0.0;
};

/// Source-side set of node-disjoint routes to one destination.
class PathCache {
 public:
  PathCache(NodeId dest, std::uint32_t n0, std::uint32_t s0);

  NodeId Dest() const { return m_dest; }
  std::uint32_t N0() const { return m_n0; }
  std::uint32_t S0() const { return m_s0; }

  std::size_t ValidCount() const;
  /// The route data should use, or null when none is valid.
  const CachedRoute* Primary() const;
  CachedRoute* Primary();
  std::vector<Path> ValidPaths() const;
  const std::vector<CachedRoute>& Routes() const { return m_routes; }

  /// Marks every valid route that traverses the link (either direction)
  /// invalid and moves the primary to the first valid route. Returns how many
  /// routes were invalidated.
  std::size_t InvalidateLink(NodeId a, NodeId b);
  /// Invalidates routes whose lifetime ran out. Returns how many.
  std::size_t Expire(Seconds now);
  /// Extends every valid route to at least expiresAt.
  void Refresh(Seconds expiresAt);
  /// Appends freshly selected routes. Invalid entries are discarded first.
  /// Throws SimulationFault if the result would break disjointness.
  void Add(const std::vector<Path>& routes, Seconds expiresAt);

  /// All valid routes pairwise disjoint and primary valid if any route is.
  bool InvariantHolds() const;

 private:
  void RepointPrimary();

  NodeId m_dest;
  std::uint32_t m_n0;
  std::uint32_t m_s0;
  std::vector<CachedRoute> m_routes;
  std::size_t m_primary = 0;
};

}  // namespace manet
