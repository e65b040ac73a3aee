#pragma once
// Reference implementations used only by tests. They share no code with the
// library beyond plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "manet/network.h"
#include "manet/scenario.h"
#include "manet/trace.h"

namespace oracle {

using manet::NodeId;
using manet::Path;
using Graph = std::vector<std::set<NodeId>>;

inline Graph MakeGraph(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  Graph g(n);
  for (auto [a, b] : edges) {
    g[a].insert(b);
    g[b].insert(a);
  }
  return g;
}

/// Hop distance from s to every node, -1 when unreachable.
inline std::vector<int> BfsHops(const Graph& g, NodeId s) {
  std::vector<int> dist(g.size(), -1);
  std::queue<NodeId> q;
  dist[s] = 0;
  q.push(s);
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop();
    for (NodeId v : g[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

/// Every simple s-d path with at most maxHops hops.
inline std::vector<Path> AllSimplePaths(const Graph& g, NodeId s, NodeId d, std::size_t maxHops) {
  std::vector<Path> out;
  Path cur{s};
  std::vector<bool> on(g.size(), false);
  on[s] = true;
  std::function<void(NodeId)> dfs = [&](NodeId u) {
    if (u == d) {
      out.push_back(cur);
      return;
    }
    if (cur.size() - 1 == maxHops) {
      return;
    }
    for (NodeId v : g[u]) {
      if (!on[v]) {
        on[v] = true;
        cur.push_back(v);
        dfs(v);
        cur.pop_back();
        on[v] = false;
      }
    }
  };
  dfs(s);
  std::sort(out.begin(), out.end());
  return out;
}

inline bool Disjoint(const Path& a, const Path& b) {
  for (std::size_t i = 1; i + 1 < a.size(); ++i) {
    for (std::size_t j = 1; j + 1 < b.size(); ++j) {
      if (a[i] == b[j]) {
        return false;
      }
    }
  }
  return true;
}

/// All subsets of candidates (by index bitmask) that are pairwise disjoint and
/// to which no further candidate can be added. Only for small candidate sets.
inline std::vector<std::uint32_t> MaximalDisjointSubsets(const std::vector<Path>& c) {
  const std::size_t k = c.size();
  std::vector<std::uint32_t> conflict(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i != j && !Disjoint(c[i], c[j])) {
        conflict[i] |= 1u << j;
      }
    }
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) {
      if ((mask >> i & 1u) && (conflict[i] & mask)) {
        ok = false;
      }
    }
    if (!ok) {
      continue;
    }
    bool maximal = true;
    for (std::size_t i = 0; i < k && maximal; ++i) {
      if (!(mask >> i & 1u) && !(conflict[i] & mask)) {
        maximal = false;
      }
    }
    if (maximal) {
      out.push_back(mask);
    }
  }
  return out;
}

/// Unit-disk adjacency of positions, by brute force over all pairs.
inline Graph UnitDisk(const std::vector<manet::Vec2>& pos, double range) {
  Graph g(pos.size());
  for (NodeId a = 0; a < pos.size(); ++a) {
    for (NodeId b = a + 1; b < pos.size(); ++b) {
      const double dx = pos[a].x - pos[b].x;
      const double dy = pos[a].y - pos[b].y;
      if (dx * dx + dy * dy <= range * range) {
        g[a].insert(b);
        g[b].insert(a);
      }
    }
  }
  return g;
}

// Enumeration graph: S = 0, N1..N7 = 1..7, D = 8.
inline const std::vector<std::pair<NodeId, NodeId>> kEnumerationEdges = {
    {0, 1}, {0, 2}, {1, 3}, {1, 4}, {3, 6}, {6, 8}, {4, 6}, {4, 5}, {5, 7}, {7, 8}, {4, 7}, {2, 5}, {2, 4}};

// The eight S-D paths listed for the enumeration example.
inline const std::vector<Path> kEnumerationListed = {
    {0, 1, 3, 6, 8}, {0, 1, 4, 6, 8}, {0, 1, 4, 7, 8}, {0, 2, 5, 7, 8},
    {0, 2, 5, 4, 7, 8}, {0, 2, 5, 4, 6, 8}, {0, 1, 4, 5, 7, 8}, {0, 2, 4, 6, 8}};

// ---- trace helpers ----

struct TraceLine {
  double time = 0.0;
  std::string node;
  std::string event;
  std::string packet;
  std::vector<std::string> detail;
};

inline TraceLine ParseLine(std::string_view line) {
  auto f = manet::SplitFields(line);
  TraceLine t;
  t.time = std::stod(std::string(f.at(0)));
  t.node = std::string(f.at(1));
  t.event = std::string(f.at(2));
  t.packet = std::string(f.at(3));
  for (std::size_t i = 4; i < f.size(); ++i) {
    t.detail.emplace_back(f[i]);
  }
  return t;
}

inline std::vector<TraceLine> ParseTrace(const std::vector<std::string>& lines) {
  std::vector<TraceLine> out;
  out.reserve(lines.size());
  for (const auto& l : lines) {
    out.push_back(ParseLine(l));
  }
  return out;
}

inline std::size_t Count(const std::vector<TraceLine>& t, std::string_view event) {
  return static_cast<std::size_t>(
      std::count_if(t.begin(), t.end(), [&](const TraceLine& l) { return l.event == event; }));
}

inline bool IsTx(const TraceLine& l, std::string_view type) {
  return l.event == "tx" && !l.detail.empty() && l.detail[0] == type;
}

inline manet::Scenario LoadNamed(const std::string& name) {
  return manet::LoadScenario(std::string(MANET_SOURCE_DIR) + "/scenarios/" + name);
}

/// Baseline scenario used by randomized suites.
inline manet::Scenario Baseline(std::uint64_t seed, manet::ProtocolKind protocol) {
  manet::Scenario s = LoadNamed("baseline.scn");
  s.seed = seed;
  s.protocol = protocol;
  return s;
}

inline Path ParsePath(std::string_view text) {
  Path p;
  std::size_t i = 0;
  while (i <= text.size()) {
    auto j = text.find(',', i);
    if (j == std::string_view::npos) {
      j = text.size();
    }
    p.push_back(static_cast<NodeId>(std::stoul(std::string(text.substr(i, j - i)))));
    i = j + 1;
  }
  return p;
}

/// Value of a `key=value` detail field.
inline std::string Field(const TraceLine& l, std::string_view key) {
  for (const auto& d : l.detail) {
    if (d.size() > key.size() && d.compare(0, key.size(), key) == 0 && d[key.size()] == '=') {
      return d.substr(key.size() + 1);
    }
  }
  return {};
}

}  // namespace oracle
