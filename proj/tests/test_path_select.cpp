#include <doctest.h>

#include <chrono>

#include "exhaustive.h"
#include "manet/path_select.h"
#include "oracles.h"

using namespace manet;

TEST_CASE("union degrees and degree sums") {
  const auto deg = UnionDegrees(oracle::kEnumerationListed);
  const auto g = oracle::MakeGraph(9, oracle::kEnumerationEdges);
  for (NodeId n = 0; n < 9; ++n) {
    CHECK(deg.at(n) == g[n].size());
  }
  CHECK(IntermediateDegreeSum({0, 1, 3, 6, 8}, deg) == 8);
  CHECK(IntermediateDegreeSum({0, 2, 5, 7, 8}, deg) == 9);
}

TEST_CASE("listed enumeration selects the main and rescue pair") {
  const auto chosen = SelectDisjoint(oracle::kEnumerationListed, 3);
  REQUIRE(chosen.size() == 2);
  CHECK(chosen[0] == Path{0, 1, 3, 6, 8});
  CHECK(chosen[1] == Path{0, 2, 5, 7, 8});
}

TEST_CASE("single path in, same path out") {
  const std::vector<Path> one{{4, 2, 9}};
  CHECK(SelectDisjoint(one, 3) == one);
  CHECK(SelectDisjoint(std::vector<Path>{}, 3).empty());
}

TEST_CASE("selection respects existing routes and n0") {
  const std::vector<Path> cands{{0, 1, 9}, {0, 2, 9}, {0, 3, 9}, {0, 1, 2, 9}};
  CHECK(SelectDisjoint(cands, 2).size() == 2);
  const std::vector<Path> existing{{0, 2, 9}};
  const auto add = SelectDisjoint(cands, 3, existing);
  // Node 3 has the lower union degree, so its route ranks first.
  CHECK(add == std::vector<Path>{{0, 3, 9}, {0, 1, 9}});
  CHECK(SelectDisjoint(cands, 1, existing).empty());
}

TEST_CASE("tie-break can be switched to pure lexicographic order") {
  // Equal hop counts; node 3 has union degree 4, node 7 degree 2.
  const std::vector<Path> cands{{0, 3, 9}, {0, 7, 9}, {0, 1, 3, 9}, {0, 2, 3, 9}};
  CHECK(SelectDisjoint(cands, 1).front() == Path{0, 7, 9});
  CHECK(SelectDisjoint(cands, 1, {}, false).front() == Path{0, 3, 9});
}

TEST_CASE("exhaustive: all connected graphs up to 5 nodes") {
  const auto st = oracle::RunExhaustive(5, 2, 14);
  CHECK(st.failures == 0);
  CHECK(st.graphs == 1 + 4 + 38 + 728);
  INFO(st.firstFailure);
}

TEST_CASE("path cache keeps its invariants") {
  PathCache c(9, 3, 1);
  CHECK_THROWS(PathCache(9, 2, 2));
  CHECK_THROWS(PathCache(9, 2, 0));
  c.Add({{0, 1, 9}, {0, 2, 9}, {0, 3, 4, 9}}, 100.0);
  CHECK(c.ValidCount() == 3);
  CHECK(c.Primary()->nodes == Path{0, 1, 9});
  CHECK(c.InvalidateLink(5, 6) == 0);
  CHECK(c.InvalidateLink(9, 1) == 1);  // either direction
  CHECK(c.Primary()->nodes == Path{0, 2, 9});
  CHECK(c.InvariantHolds());
  CHECK_THROWS_AS(c.Add({{0, 2, 7, 9}}, 100.0), SimulationFault);
  c.Add({{0, 5, 9}}, 50.0);
  CHECK(c.ValidCount() == 3);
  CHECK(c.Expire(60.0) == 1);
  CHECK(c.ValidCount() == 2);
  CHECK(c.InvalidateLink(0, 2) == 1);
  CHECK(c.InvalidateLink(4, 9) == 1);
  CHECK(c.ValidCount() == 0);
  CHECK(c.Primary() == nullptr);
  CHECK(c.InvariantHolds());
}
