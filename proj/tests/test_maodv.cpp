#include <doctest.h>

#include <set>

#include "manet/maodv.h"
#include "manet/network.h"
#include "oracles.h"

using namespace manet;
using oracle::Count;

namespace {

struct Traced {
  explicit Traced(const Scenario& s) : net(s, RunOptions{nullptr, true}) {
    net.Finish();
    lines = oracle::ParseTrace(net.Trace().Lines());
  }
  Network net;
  std::vector<oracle::TraceLine> lines;
};

std::vector<Path> Collected(Network& net, NodeId dest) {
  auto& agent = dynamic_cast<MaodvAgent&>(net.Agent(dest));
  REQUIRE(!agent.CollectedPaths().empty());
  return agent.CollectedPaths().begin()->second;
}

double FirstTime(const std::vector<oracle::TraceLine>& lines, std::string_view event, double after = -1.0) {
  for (const auto& l : lines) {
    if (l.event == event && l.time > after) {
      return l.time;
    }
  }
  return -1.0;
}

}  // namespace

TEST_CASE("placed coordinates realise the enumeration graph") {
  const Scenario s = oracle::LoadNamed("enumeration.scn");
  std::vector<Vec2> pos(s.nodeCount);
  for (const auto& p : s.placements) {
    pos[p.node] = p.position;
  }
  const auto g = oracle::UnitDisk(pos, s.radio.range);
  CHECK(g == oracle::MakeGraph(9, oracle::kEnumerationEdges));
  const auto hops = oracle::BfsHops(g, 0);
  CHECK(hops[8] == 4);
}

TEST_CASE("unpruned flood collects every simple path within the slack") {
  Scenario s = oracle::LoadNamed("enumeration.scn");
  REQUIRE_FALSE(s.protocolParams.supersetPruning);
  Traced t(s);
  const auto g = oracle::MakeGraph(9, oracle::kEnumerationEdges);
  const auto expected = oracle::AllSimplePaths(g, 0, 8, 4 + s.protocolParams.rreqSlack);
  auto got = Collected(t.net, 8);
  std::sort(got.begin(), got.end());
  CHECK(got == expected);
  // The listed eight are all among them.
  for (const auto& p : oracle::kEnumerationListed) {
    CHECK(std::binary_search(got.begin(), got.end(), p));
  }
}

TEST_CASE("pruned flood collects valid paths including a shortest one") {
  Scenario s = oracle::LoadNamed("enumeration.scn");
  s.protocolParams.supersetPruning = true;
  Traced t(s);
  const auto g = oracle::MakeGraph(9, oracle::kEnumerationEdges);
  const auto all = oracle::AllSimplePaths(g, 0, 8, 6);
  const auto got = Collected(t.net, 8);
  REQUIRE(!got.empty());
  CHECK(got.front().size() == 5);
  for (const auto& p : got) {
    CHECK(std::binary_search(all.begin(), all.end(), p));
  }
}

TEST_CASE("the source selects the disjoint pair and data follows the primary") {
  Traced t(oracle::LoadNamed("enumeration.scn"));
  std::vector<Path> selected;
  for (const auto& l : t.lines) {
    if (l.event == "route_selected") {
      selected.push_back(oracle::ParsePath(oracle::Field(l, "path")));
    }
  }
  REQUIRE(selected.size() == 2);
  CHECK(selected[0] == Path{0, 1, 3, 6, 8});
  CHECK(selected[1] == Path{0, 2, 5, 7, 8});
  const auto* cache = dynamic_cast<MaodvAgent&>(t.net.Agent(0)).Cache(8);
  REQUIRE(cache != nullptr);
  CHECK(cache->InvariantHolds());
  for (const auto& rec : t.net.Ledger().Records()) {
    REQUIRE(rec.deliveredAt);
    CHECK(rec.hops == Path{0, 1, 3, 6, 8});
  }
}

TEST_CASE("the aggregated reply reaches the source within the longest path") {
  Traced t(oracle::LoadNamed("enumeration.scn"));
  const double emitted = FirstTime(t.lines, "paths_collected");
  const double received = FirstTime(t.lines, "paths_received");
  REQUIRE(emitted > 0.0);
  REQUIRE(received > emitted);
  std::uint32_t bytes = 0;
  for (const auto& l : t.lines) {
    if (oracle::IsTx(l, "RREP")) {
      bytes = static_cast<std::uint32_t>(std::stoul(l.detail.at(1)));
      break;
    }
  }
  const double perHop = t.net.GetChannel().TxDuration(bytes);
  const auto hops = std::lround((received - emitted) / perHop);
  CHECK(hops <= 6);
  CHECK(hops >= 4);
  // Only nodes on a carried path rebroadcast, once each.
  std::set<std::string> senders;
  std::size_t rreps = 0;
  for (const auto& l : t.lines) {
    if (oracle::IsTx(l, "RREP")) {
      senders.insert(l.node);
      ++rreps;
    }
  }
  CHECK(senders.size() == rreps);
}

TEST_CASE("primary break fails over to the spare without a new flood first") {
  Traced t(oracle::LoadNamed("failover_pair.scn"));
  const double failover = FirstTime(t.lines, "failover");
  REQUIRE(failover > 20.0);
  std::size_t rreqBefore = 0;
  for (const auto& l : t.lines) {
    if (oracle::IsTx(l, "RREQ") && l.time > 2.0 && l.time < failover) {
      ++rreqBefore;
    }
  }
  CHECK(rreqBefore == 0);
  // Valid count fell to s0, so a parallel replenishment starts at once.
  bool parallel = false;
  for (const auto& l : t.lines) {
    if (l.event == "discovery_start" && l.time == failover) {
      parallel = l.detail.at(1) == "parallel";
    }
  }
  CHECK(parallel);
  std::size_t onSpare = 0;
  for (const auto& rec : t.net.Ledger().Records()) {
    if (rec.sentAt > failover && rec.sentAt < failover + 1.0) {
      REQUIRE(rec.deliveredAt);
      CHECK(rec.hops == Path{0, 2, 5, 7, 8});
      ++onSpare;
    }
  }
  CHECK(onSpare == 4);
  CHECK(Count(t.lines, "repair_start") == 0);
}

TEST_CASE("three routes: replenishment waits for the s0 threshold") {
  Traced t(oracle::LoadNamed("three_routes.scn"));
  std::vector<oracle::TraceLine> failovers;
  for (const auto& l : t.lines) {
    if (l.event == "failover") {
      failovers.push_back(l);
    }
  }
  REQUIRE(failovers.size() == 2);
  CHECK(oracle::Field(failovers[0], "valid") == "2");
  CHECK(oracle::Field(failovers[1], "valid") == "1");
  std::size_t between = 0;
  std::size_t delivered = 0;
  for (const auto& l : t.lines) {
    if (l.time > failovers[0].time && l.time < failovers[1].time) {
      between += oracle::IsTx(l, "RREQ");
      delivered += l.event == "deliver";
    }
  }
  CHECK(between == 0);
  CHECK(delivered > 40);
  CHECK(Count(t.lines, "replenish") == 1);
  CHECK(FirstTime(t.lines, "replenish") == failovers[1].time);
}

TEST_CASE("multipath runs never repair locally and stay loop-free") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    CAPTURE(seed);
    Network net(oracle::Baseline(seed, ProtocolKind::Maodv), RunOptions{nullptr, true});
    net.Finish();
    CHECK(net.Audit().empty());
    CHECK(net.Counters().repairStarts == 0);
    for (const auto& line : net.Trace().Lines()) {
      CHECK(line.find(" repair_") == std::string::npos);
    }
    for (const auto& rec : net.Ledger().Records()) {
      std::set<NodeId> seen(rec.hops.begin(), rec.hops.end());
      CHECK(seen.size() == rec.hops.size());
    }
  }
}

TEST_CASE("collection window scales with the diameter estimate") {
  Scenario s = oracle::LoadNamed("enumeration.scn");
  Network net(s);
  auto& a = dynamic_cast<MaodvAgent&>(net.Agent(8));
  // 2 x 10 hops x (28 + 24 + 40 bytes at 2 Mb/s)
  CHECK(a.CollectWindow() == doctest::Approx(2 * 10 * 92 * 8 / 2e6));
}
