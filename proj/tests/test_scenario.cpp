#include <doctest.h>

#include <sstream>

#include "manet/scenario.h"
#include "oracles.h"

using namespace manet;

namespace {

Scenario Parse(const std::string& text) {
  std::istringstream in(text);
  return ParseScenario(in);
}

std::string FieldOf(const std::string& text) {
  try {
    Parse(text);
  } catch (const ScenarioError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults describe the baseline") {
  const Scenario s = Parse("");
  CHECK(s.nodeCount == 20);
  CHECK(s.mobility.width == 800.0);
  CHECK(s.mobility.height == 600.0);
  CHECK(s.radio.range == 250.0);
  CHECK(s.mobility.vMax == 5.0);
  CHECK(s.duration == 120.0);
  CHECK(s.energy.initial == 10.0);
  CHECK(s.traffic.payload == 512);
  CHECK(s.protocolParams.n0 == 3);
  CHECK(s.protocolParams.s0 == 1);
}

TEST_CASE("keys, comments and repeated lines parse") {
  const Scenario s = Parse(
      "# comment\n"
      "id = t1\n"
      "nodes = 4   # trailing comment\n"
      "protocol = maodv\n"
      "superset_pruning = false\n"
      "flow = 0 3 256 0.5 1 10\n"
      "place = 0 10 20\n"
      "place = 1 30 40\n"
      "move = 1 5 100 100 2\n"
      "kill = 2 7.5\n");
  CHECK(s.id == "t1");
  CHECK(s.nodeCount == 4);
  CHECK(s.protocol == ProtocolKind::Maodv);
  CHECK_FALSE(s.protocolParams.supersetPruning);
  REQUIRE(s.flows.size() == 1);
  CHECK(s.flows[0] == FlowSpec{0, 3, 256, 0.5, 1.0, 10.0});
  CHECK(s.placements.size() == 2);
  CHECK(s.moves.size() == 1);
  CHECK(s.kills.size() == 1);
}

TEST_CASE("written scenarios parse back identically") {
  const Scenario s = oracle::LoadNamed("failover_pair.scn");
  std::ostringstream out;
  WriteScenario(out, s);
  const Scenario back = Parse(out.str());
  std::ostringstream again;
  WriteScenario(again, back);
  CHECK(out.str() == again.str());
  CHECK(back.flows == s.flows);
}

TEST_CASE("errors name the offending field") {
  CHECK(FieldOf("nodes = 1\n") == "nodes");
  CHECK(FieldOf("nodes = -3\n") == "nodes");
  CHECK(FieldOf("duration = 0\n") == "duration");
  CHECK(FieldOf("bogus = 1\n") == "bogus");
  CHECK(FieldOf("range = abc\n") == "range");
  CHECK(FieldOf("protocol = dsr\n") == "protocol");
  CHECK(FieldOf("s0 = 3\n") == "s0");
  CHECK(FieldOf("flow = 0 0 512 0.25 1 2\n") == "flow");
  CHECK(FieldOf("flow = 0 1 512\n") == "flow");
  CHECK(FieldOf("nodes = 3\nflows = 7\n") == "flows");
  CHECK(FieldOf("place = 0 900 10\n") == "place");
  CHECK(FieldOf("move = 0 1 10 10 1\n") == "move");
  CHECK(FieldOf("loss_probability = 1.5\n") == "loss_probability");
  CHECK(FieldOf("v_max = 0.1\n") == "v_max");
  CHECK(FieldOf("garbage line\n") == "line 1");
}

TEST_CASE("parameter description covers every scalar key") {
  const auto params = DescribeParameters(Scenario{});
  std::set<std::string> keys;
  for (const auto& [k, v] : params) {
    keys.insert(k);
  }
  for (const char* k : {"id", "nodes", "width", "height", "range", "pause_time", "v_max", "initial_energy",
                        "protocol", "n0", "s0", "flows", "payload", "interval", "duration", "seed"}) {
    CHECK(keys.count(k) == 1);
  }
}

TEST_CASE("repository scenario files validate") {
  for (const char* name : {"baseline.scn", "enumeration.scn", "failover_pair.scn", "three_routes.scn",
                           "diamond.scn", "chain.scn", "two_node.scn"}) {
    CAPTURE(name);
    CHECK_NOTHROW(oracle::LoadNamed(name));
  }
}
