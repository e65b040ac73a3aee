#include <doctest.h>

#include <set>

#include "manet/traffic.h"

using namespace manet;

TEST_CASE("cbr schedule counts") {
  FlowSpec f;
  f.start = 1.0;
  f.stop = 120.0;
  f.interval = 0.25;
  const auto t = CbrSchedule(f);
  CHECK(t.size() == 477);
  CHECK(t.front() == 1.0);
  CHECK(t.back() == doctest::Approx(120.0));
  for (std::size_t i = 1; i < t.size(); ++i) {
    CHECK(t[i] - t[i - 1] == doctest::Approx(0.25));
  }
  f.stop = 1.0;
  CHECK(CbrSchedule(f).empty());
  f.stop = 0.5;
  CHECK(CbrSchedule(f).empty());
}

TEST_CASE("offered load") {
  FlowSpec f;
  f.payload = 512;
  f.interval = 0.25;
  CHECK(OfferedLoadKbps(f) == doctest::Approx(16.384));
}

TEST_CASE("generated flows are distinct ordered pairs") {
  FlowGenerator g;
  g.flowCount = 30;
  RngStream rng(9, "traffic");
  const auto flows = GenerateFlows(6, g, 120.0, rng);
  CHECK(flows.size() == 30);  // all 6 * 5 ordered pairs
  std::set<std::pair<NodeId, NodeId>> pairs;
  for (const auto& f : flows) {
    CHECK(f.src != f.dest);
    CHECK(f.src < 6);
    CHECK(f.dest < 6);
    CHECK(f.start >= g.startMin);
    CHECK(f.start < g.startMax);
    CHECK(f.stop == 120.0);
    pairs.insert({f.src, f.dest});
  }
  CHECK(pairs.size() == 30);
}

TEST_CASE("flow generation is reproducible") {
  FlowGenerator g;
  RngStream a(4, "traffic");
  RngStream b(4, "traffic");
  CHECK(GenerateFlows(20, g, 120.0, a) == GenerateFlows(20, g, 120.0, b));
}
