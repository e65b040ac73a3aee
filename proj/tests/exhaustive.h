#pragma once
// Exhaustive check of SelectDisjoint over every connected labelled graph up to
// a node count. Source is node 0, destination the highest id. Candidates are
// all simple paths within shortest + slack hops.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "manet/path_select.h"
#include "oracles.h"

namespace oracle {

struct ExhaustiveStats {
  std::uint64_t graphs = 0;          // connected graphs examined
  std::uint64_t selections = 0;      // non-trivial candidate sets
  std::uint64_t subsetChecked = 0;   // also matched against the subset oracle
  std::uint64_t failures = 0;
  std::string firstFailure;
};

inline ExhaustiveStats RunExhaustive(int maxNodes, std::size_t slack, std::size_t subsetLimit) {
  ExhaustiveStats st;
  std::mt19937_64 shuffle(1);
  auto fail = [&](const std::string& why) {
    if (st.failures++ == 0) {
      st.firstFailure = why;
    }
  };
  for (int n = 2; n <= maxNodes; ++n) {
    std::vector<std::pair<NodeId, NodeId>> slots;
    for (NodeId a = 0; a < static_cast<NodeId>(n); ++a) {
      for (NodeId b = a + 1; b < static_cast<NodeId>(n); ++b) {
        slots.emplace_back(a, b);
      }
    }
    const std::uint64_t total = 1ull << slots.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      std::vector<std::uint32_t> adj(n, 0);
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (mask >> i & 1u) {
          adj[slots[i].first] |= 1u << slots[i].second;
          adj[slots[i].second] |= 1u << slots[i].first;
        }
      }
      std::uint32_t seen = 1;
      std::uint32_t frontier = 1;
      while (frontier) {
        std::uint32_t next = 0;
        for (int u = 0; u < n; ++u) {
          if (frontier >> u & 1u) {
            next |= adj[u];
          }
        }
        frontier = next & ~seen;
        seen |= next;
      }
      if (seen != (1u << n) - 1) {
        continue;
      }
      ++st.graphs;
      Graph g(n);
      for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
          if (adj[u] >> v & 1u) {
            g[u].insert(static_cast<NodeId>(v));
          }
        }
      }
      const NodeId d = static_cast<NodeId>(n - 1);
      const auto shortest = static_cast<std::size_t>(BfsHops(g, 0)[d]);
      const auto cands = AllSimplePaths(g, 0, d, shortest + slack);
      const auto chosen = manet::SelectDisjoint(cands, cands.size());
      ++st.selections;
      const std::string where = fmt::format("n={} edges={:#x}", n, mask);
      if (cands.empty() != chosen.empty()) {
        fail(where + ": empty selection");
        continue;
      }
      // Pairwise disjoint, all drawn from the candidates.
      for (std::size_t i = 0; i < chosen.size(); ++i) {
        if (!std::binary_search(cands.begin(), cands.end(), chosen[i])) {
          fail(where + ": selected a non-candidate");
        }
        for (std::size_t j = i + 1; j < chosen.size(); ++j) {
          if (!Disjoint(chosen[i], chosen[j]) || chosen[i] == chosen[j]) {
            fail(where + ": selection not disjoint");
          }
        }
      }
      // Maximal: nothing left could be added.
      for (const auto& c : cands) {
        if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) {
          continue;
        }
        const bool addable =
            std::all_of(chosen.begin(), chosen.end(), [&](const Path& s) { return Disjoint(c, s); });
        if (addable) {
          fail(where + ": selection not maximal");
        }
      }
      // The first route is a shortest one.
      if (!chosen.empty() && chosen.front().size() != shortest + 1) {
        fail(where + ": primary is not a shortest path");
      }
      if (cands.size() <= subsetLimit) {
        ++st.subsetChecked;
        std::uint32_t got = 0;
        for (const auto& s : chosen) {
          got |= 1u << (std::find(cands.begin(), cands.end(), s) - cands.begin());
        }
        const auto maximal = MaximalDisjointSubsets(cands);
        if (std::find(maximal.begin(), maximal.end(), got) == maximal.end()) {
          fail(where + ": not among the maximal disjoint subsets");
        }
      }
      // Input order does not matter.
      if (mask % 17 == 0 && cands.size() > 1) {
        auto shuffled = cands;
        std::shuffle(shuffled.begin(), shuffled.end(), shuffle);
        if (manet::SelectDisjoint(shuffled, shuffled.size()) != chosen) {
          fail(where + ": depends on candidate order");
        }
      }
    }
  }
  return st;
}

}  // namespace oracle
