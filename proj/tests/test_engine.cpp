#include <doctest.h>

#include <map>
#include <vector>

#include "manet/engine.h"

using namespace manet;

TEST_CASE("events run in time order, FIFO within an instant") {
  Simulator sim;
  std::vector<int> order;
  sim.Schedule(2.0, EventKind::Timer, [&] { order.push_back(3); });
  sim.Schedule(1.0, EventKind::Timer, [&] { order.push_back(1); });
  sim.Schedule(1.0, EventKind::Timer, [&] { order.push_back(2); });
  sim.Schedule(1.0 + 1e-12, EventKind::Timer, [&] { order.push_back(20); });
  sim.RunUntil(10.0);
  CHECK(order == std::vector<int>{1, 2, 20, 3});
  CHECK(sim.Now() == 10.0);
  CHECK(sim.Processed() == 4);
}

TEST_CASE("events scheduled while running keep ordering") {
  Simulator sim;
  std::vector<double> seen;
  sim.Schedule(1.0, EventKind::Timer, [&] {
    seen.push_back(sim.Now());
    sim.ScheduleIn(0.0, EventKind::Timer, [&] { seen.push_back(sim.Now() + 100); });
    sim.ScheduleIn(0.5, EventKind::Timer, [&] { seen.push_back(sim.Now()); });
  });
  sim.RunUntil(5.0);
  CHECK(seen == std::vector<double>{1.0, 101.0, 1.5});
}

TEST_CASE("RunUntil stops at the boundary and includes it") {
  Simulator sim;
  int fired = 0;
  sim.Schedule(3.0, EventKind::Timer, [&] { ++fired; });
  sim.Schedule(3.5, EventKind::Timer, [&] { ++fired; });
  sim.RunUntil(3.0);
  CHECK(fired == 1);
  CHECK(sim.Pending() == 1);
  sim.RunUntil(4.0);
  CHECK(fired == 2);
}

TEST_CASE("cancel removes an event, twice is harmless") {
  Simulator sim;
  int fired = 0;
  auto h = sim.Schedule(1.0, EventKind::Timer, [&] { ++fired; });
  sim.Schedule(2.0, EventKind::Timer, [&] { ++fired; });
  sim.Cancel(h);
  sim.Cancel(h);
  sim.Cancel(EventHandle{});
  CHECK(sim.Pending() == 1);
  sim.RunUntil(5.0);
  CHECK(fired == 1);
  sim.Cancel(h);
}

TEST_CASE("scheduling in the past is a fault") {
  Simulator sim;
  sim.RunUntil(5.0);
  CHECK_THROWS_AS(sim.Schedule(4.0, EventKind::Timer, [] {}), SimulationFault);
  CHECK_NOTHROW(sim.Schedule(5.0, EventKind::Timer, [] {}));
}

TEST_CASE("random streams are reproducible and label-separated") {
  RngStream a(7, "mobility/0");
  RngStream b(7, "mobility/0");
  RngStream c(7, "mobility/1");
  RngStream d(8, "mobility/0");
  int sameC = 0;
  int sameD = 0;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.Uniform();
    CHECK(x == b.Uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    sameC += x == c.Uniform();
    sameD += x == d.Uniform();
  }
  CHECK(sameC == 0);
  CHECK(sameD == 0);
}

TEST_CASE("Below is in range and roughly uniform") {
  RngStream r(1, "below");
  std::map<std::uint64_t, int> counts;
  const int n = 60000;
  for (int i = 0; i < n; ++i) {
    const auto v = r.Below(6);
    REQUIRE(v < 6);
    ++counts[v];
  }
  for (auto [v, c] : counts) {
    CHECK(c == doctest::Approx(n / 6.0).epsilon(0.05));
  }
  CHECK_THROWS(r.Below(0));
}
