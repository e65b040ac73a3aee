#include "manet/path_select.h"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>

#include "manet/engine.h"

namespace manet {

std::map<NodeId, std::uint32_t> UnionDegrees(std::span<const Path> paths) {
  std::set<std::pair<NodeId, NodeId>> edges;
  for (const auto& p : paths) {
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      edges.insert(std::minmax(p[i], p[i + 1]));
    }
  }
  std::map<NodeId, std::uint32_t> degree;
  for (auto [a, b] : edges) {
    ++degree[a];
    ++degree[b];
  }
  return degree;
}

std::uint32_t IntermediateDegreeSum(const Path& path, const std::map<NodeId, std::uint32_t>& degrees) {
  std::uint32_t sum = 0;
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    auto it = degrees.find(path[i]);
    sum += it == degrees.end() ? 0 : it->second;
  }
  return sum;
}

bool IntermediatesDisjoint(const Path& a, const Path& b) {
  for (std::size_t i = 1; i + 1 < a.size(); ++i) {
    for (std::size_t j = 1; j + 1 < b.size(); ++j) {
      if (a[i] == b[j]) {
        return false;
      }
    }
  }
  return true;
}

std::vector<Path> SelectDisjoint(std::span<const Path> candidates, std::size_t n0, std::span<const Path> existing,
                                 bool degreeTieBreak) {
  if (candidates.empty() || existing.size() >= n0) {
    return {};
  }
  const auto degrees = UnionDegrees(candidates);
  struct Ranked {
    std::size_t hops;
    std::uint32_t degreeSum;
    const Path* path;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(candidates.size());
  for (const auto& p : candidates) {
    ranked.push_back({p.size() - 1, degreeTieBreak ? IntermediateDegreeSum(p, degrees) : 0u, &p});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    return std::tie(a.hops, a.degreeSum, *a.path) < std::tie(b.hops, b.degreeSum, *b.path);
  });
  ranked.erase(std::unique(ranked.begin(), ranked.end(),
                           [](const Ranked& a, const Ranked& b) { return *a.path == *b.path; }),
               ranked.end());

  std::set<NodeId> used;
  for (const auto& p : existing) {
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
      used.insert(p[i]);
    }
  }
  std::vector<Path> selected;
  for (const auto& r : ranked) {
    if (existing.size() + selected.size() >= n0) {
      break;
    }
    const Path& p = *r.path;
    const bool clash = std::any_of(p.begin() + 1, p.end() - 1, [&](NodeId n) { return used.contains(n); });
    if (clash || std::find(existing.begin(), existing.end(), p) != existing.end()) {
      continue;
    }
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
      used.insert(p[i]);
    }
    selected.push_back(p);
  }
  return selected;
}

PathCache::PathCache(NodeId dest, std::uint32_t n0, std::uint32_t s0) : m_dest(dest), m_n0(n0), m_s0(s0) {
  if (!(s0 > 0 && s0 < n0)) {
    throw std::invalid_argument("path cache needs 0 < s0 < n0");
  }
}

std::size_t PathCache::ValidCount() const {
  return static_cast<std::size_t>(
      std::count_if(m_routes.begin(), m_routes.end(), [](const CachedRoute& r) { return r.valid; }));
}

const CachedRoute* PathCache::Primary() const {
  return m_primary < m_routes.size() && m_routes[m_primary].valid ? &m_routes[m_primary] : nullptr;
}

CachedRoute* PathCache::Primary() {
  return m_primary < m_routes.size() && m_routes[m_primary].valid ? &m_routes[m_primary] : nullptr;
}

std::vector<Path> PathCache::ValidPaths() const {
  std::vector<Path> out;
  for (const auto& r : m_routes) {
    if (r.valid) {
      out.push_back(r.nodes);
    }
  }
  return out;
}

void PathCache::RepointPrimary() {
  if (Primary() != nullptr) {
    return;
  }
  m_primary = 0;
  while (m_primary < m_routes.size() && !m_routes[m_primary].valid) {
    ++m_primary;
  }
}

std::size_t PathCache::InvalidateLink(NodeId a, NodeId b) {
  std::size_t count = 0;
  for (auto& r : m_routes) {
    if (!r.valid) {
      continue;
    }
    for (std::size_t i = 0; i + 1 < r.nodes.size(); ++i) {
      if ((r.nodes[i] == a && r.nodes[i + 1] == b) || (r.nodes[i] == b && r.nodes[i + 1] == a)) {
        r.valid = false;
        ++count;
        break;
      }
    }
  }
  RepointPrimary();
  return count;
}

std::size_t PathCache::Expire(Seconds now) {
  std::size_t count = 0;
  for (auto& r : m_routes) {
    if (r.valid && now >= r.expiresAt) {
      r.valid = false;
      ++count;
    }
  }
  RepointPrimary();
  return count;
}

void PathCache::Refresh(Seconds expiresAt) {
  for (auto& r : m_routes) {
    if (r.valid) {
      r.expiresAt = std::max(r.expiresAt, expiresAt);
    }
  }
}

void PathCache::Add(const std::vector<Path>& routes, Seconds expiresAt) {
  const Path keepPrimary = Primary() != nullptr ? Primary()->nodes : Path{};
  PathCache next = *this;
  std::erase_if(next.m_routes, [](const CachedRoute& r) { return !r.valid; });
  for (const auto& p : routes) {
    next.m_routes.push_back(CachedRoute{p, true, expiresAt});
  }
  next.m_primary = 0;
  for (std::size_t i = 0; i < next.m_routes.size(); ++i) {
    if (next.m_routes[i].nodes == keepPrimary) {
      next.m_primary = i;
    }
  }
  if (!next.InvariantHolds()) {
    throw SimulationFault("path cache lost node-disjointness");
  }
  *this = std::move(next);
}

bool PathCache::InvariantHolds() const {
  for (std::size_t i = 0; i < m_routes.size(); ++i) {
    for (std::size_t j = i + 1; j < m_routes.size(); ++j) {
      if (m_routes[i].valid && m_routes[j].valid && !IntermediatesDisjoint(m_routes[i].nodes, m_routes[j].nodes)) {
        return false;
      }
    }
  }
  return ValidCount() == 0 || Primary() != nullptr;
}

}  // namespace manet
