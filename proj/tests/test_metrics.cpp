#include <doctest.h>

#include "manet/metrics.h"

using namespace manet;

TEST_CASE("send then deliver gives one record with its delay") {
  PacketLedger l;
  const auto uid = l.RecordSent(0, 0, 1, 2, 512, 1.0);
  l.RecordDelivered(uid, 1.25);
  const auto r = Finalize(l, 10.0);
  CHECK(r.sent == 1);
  CHECK(r.delivered == 1);
  REQUIRE(r.avgDelay);
  CHECK(*r.avgDelay == doctest::Approx(0.25));
}

TEST_CASE("send then drop counts as loss with its cause") {
  PacketLedger l;
  const auto uid = l.RecordSent(0, 0, 1, 2, 512, 1.0);
  l.RecordDropped(uid, DropCause::NoRoute);
  const auto r = Finalize(l, 10.0);
  CHECK(r.lossRatio == 1.0);
  CHECK(r.dropBreakdown[static_cast<std::size_t>(DropCause::NoRoute)] == 1);
  CHECK_FALSE(r.avgDelay);
  CHECK_FALSE(r.nrl);
}

TEST_CASE("each control transmission counts once") {
  PacketLedger l;
  for (int i = 0; i < 3; ++i) {
    l.RecordTransmission(PacketType::Rreq);
  }
  l.RecordTransmission(PacketType::Data);
  CHECK(l.ControlTransmissions() == 3);
  CHECK(l.DataTransmissions() == 1);
}

TEST_CASE("ratio arithmetic") {
  PacketLedger l;
  for (int i = 0; i < 100; ++i) {
    const auto uid = l.RecordSent(0, i, 0, 1, 512, 0.0);
    if (i < 90) {
      l.RecordDelivered(uid, 0.1);
    } else {
      l.RecordDropped(uid, DropCause::LinkLost);
    }
  }
  for (int i = 0; i < 180; ++i) {
    l.RecordTransmission(PacketType::Hello);
  }
  const auto r = Finalize(l, 120.0);
  CHECK(r.pdr == doctest::Approx(0.90));
  CHECK(r.lossRatio == doctest::Approx(0.10));
  CHECK(r.throughputKbps == doctest::Approx(3.072));
  REQUIRE(r.nrl);
  CHECK(*r.nrl == doctest::Approx(2.0));
}

TEST_CASE("nrl example: 300 control transmissions over 150 deliveries") {
  PacketLedger l;
  for (int i = 0; i < 150; ++i) {
    l.RecordDelivered(l.RecordSent(0, i, 0, 1, 64, 0.0), 1.0);
  }
  for (int i = 0; i < 300; ++i) {
    l.RecordTransmission(PacketType::Rrep);
  }
  CHECK(*Finalize(l, 10.0).nrl == doctest::Approx(2.0));
}

TEST_CASE("in-flight packets are neither delivered nor lost") {
  PacketLedger l;
  l.RecordDelivered(l.RecordSent(0, 0, 0, 1, 64, 0.0), 1.0);
  l.RecordSent(0, 1, 0, 1, 64, 0.0);
  const auto r = Finalize(l, 10.0);
  CHECK(r.inFlight == 1);
  CHECK(r.pdr + r.lossRatio + 0.5 == doctest::Approx(1.0));
}

TEST_CASE("a second termination is a hard fault") {
  PacketLedger l;
  const auto uid = l.RecordSent(0, 0, 0, 1, 64, 0.0);
  l.RecordDelivered(uid, 1.0);
  CHECK_THROWS_AS(l.RecordDelivered(uid, 2.0), SimulationFault);
  CHECK_THROWS_AS(l.RecordDropped(uid, DropCause::NoRoute), SimulationFault);
  const auto other = l.RecordSent(0, 1, 0, 1, 64, 0.0);
  l.RecordDropped(other, DropCause::NoRoute);
  CHECK_THROWS_AS(l.RecordDelivered(other, 2.0), SimulationFault);
}
