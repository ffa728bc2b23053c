#include <doctest.h>

#include <algorithm>
#include <random>

#include "support.hpp"
#include "tlc/messaging.hpp"

using namespace tlc;

namespace {

std::vector<RoadStatusReport> full_delivery(double t) {
  std::vector<RoadStatusReport> reports;
  int k = 0;
  for (const auto& [node, state] : testing_support::post_emergency_matrix()) {
    auto s = state;
    s.back_queue = k++;
    reports.push_back({to_direction_index(node), s, t});
  }
  return reports;
}

}  // namespace

TEST_CASE("handshake reports once per vehicle and road") {
  RoadsideUnit rse;
  VehicleRecord amb{42, VehicleKind::Ambulance, 3, true, 12.5};
  const auto first = rse.handshake(amb, 7, 12.5);
  REQUIRE(first.has_value());
  CHECK(first->vehicle_id == 42);
  CHECK(first->on_duty);
  CHECK(first->priority == 3);
  CHECK(first->kind == VehicleKind::Ambulance);
  CHECK(first->timestamp == 12.5);
  CHECK_FALSE(rse.handshake(amb, 7, 13.0).has_value());
  CHECK(rse.dropped() == 1);
  CHECK(rse.handshake(amb, 8, 13.0).has_value());
}

TEST_CASE("matrix delivery needs exactly one report per direction") {
  auto reports = full_delivery(4.0);
  const auto m = deliver_matrix(reports);
  CHECK(m.size() == 8);
  CHECK(m.at(NodeId::C).queued == 100);

  std::vector<RoadStatusReport> seven(reports.begin(), reports.end() - 1);
  CHECK_THROWS_AS(deliver_matrix(seven), DeliveryError);

  auto dup = reports;
  dup[1].direction = dup[0].direction;
  CHECK_THROWS_AS(deliver_matrix(dup), DeliveryError);

  auto slip = reports;
  slip[2].direction = 3;
  CHECK_THROWS_AS(deliver_matrix(slip), DeliveryError);

  auto mixed = reports;
  mixed[5].timestamp = 5.0;
  CHECK_THROWS_AS(deliver_matrix(mixed), DeliveryError);
}

TEST_CASE("property: delivery order does not matter") {
  std::mt19937_64 rng(8);
  const auto reports = full_delivery(1.0);
  const auto expected = deliver_matrix(reports);
  for (int trial = 0; trial < 100; ++trial) {
    auto shuffled = reports;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(deliver_matrix(shuffled) == expected);
  }
}

TEST_CASE("bus drains emergencies first, then reports, belts and status") {
  EventBus bus;
  bus.publish(RoadStatusReport{1, {}, 3.0});
  bus.publish(BeltEvent{BeltKind::LoadAdder, 4, 1, 3.0, 9});
  bus.publish(VehicleReport{9, VehicleKind::Car, 0, false, 4, 3.0});
  bus.publish(VehicleReport{10, VehicleKind::Ambulance, 3, true, 7, 3.0});
  bus.publish(BeltEvent{BeltKind::LoadAdder, 2, 1, 2.0, 8});
  bus.publish(VehicleReport{11, VehicleKind::Car, 0, false, 8, 9.0});  // not yet due
  const auto out = bus.drain(3.0);
  REQUIRE(out.size() == 5);
  CHECK(std::get<VehicleReport>(out[0]).vehicle_id == 10);
  CHECK(std::get<VehicleReport>(out[1]).vehicle_id == 9);
  CHECK(std::get<BeltEvent>(out[2]).timestamp == 2.0);
  CHECK(std::get<BeltEvent>(out[3]).direction == 4);
  CHECK(std::holds_alternative<RoadStatusReport>(out[4]));
  CHECK(bus.pending() == 1);
}

TEST_CASE("property: drain order is independent of publish order") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Message> msgs;
    for (int i = 0; i < 30; ++i) {
      const double t = static_cast<double>(rng() % 4);
      const int dir = to_direction_index(kAllNodes[rng() % 8]);
      switch (rng() % 3) {
        case 0: msgs.emplace_back(VehicleReport{static_cast<std::uint64_t>(i + 1), VehicleKind::Car, 0, false, dir, t}); break;
        case 1: msgs.emplace_back(BeltEvent{BeltKind::LoadSubtractor, dir, i, t, static_cast<std::uint64_t>(i + 1)}); break;
        default: msgs.emplace_back(VehicleReport{static_cast<std::uint64_t>(i + 1), VehicleKind::Fire, 3, true, dir, t}); break;
      }
    }
    EventBus a, b;
    for (const auto& m : msgs) a.publish(m);
    std::shuffle(msgs.begin(), msgs.end(), rng);
    for (const auto& m : msgs) b.publish(m);
    const auto x = a.drain(10.0);
    const auto y = b.drain(10.0);
    CHECK(x == y);
    for (std::size_t i = 1; i < x.size(); ++i) CHECK(dispatch_rank(x[i - 1]) <= dispatch_rank(x[i]));
  }
}

TEST_CASE("message delay holds messages back") {
  EventBus bus(0.5);
  bus.publish(BeltEvent{BeltKind::LoadAdder, 1, 1, 2.0, 1});
  CHECK(bus.drain(2.0).empty());
  CHECK(bus.drain(2.5).size() == 1);
}

TEST_CASE("property: records round-trip through text") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 5000.0);
  for (int trial = 0; trial < 1000; ++trial) {
    Message m;
    const int dir = to_direction_index(kAllNodes[rng() % 8]);
    switch (trial % 3) {
      case 0: {
        const auto kind = static_cast<VehicleKind>(rng() % 4);
        const bool duty = kind != VehicleKind::Car && rng() % 2;
        m = VehicleReport{rng() % 100000, kind, duty ? default_priority(kind) : 0, duty, dir, u(rng)};
        break;
      }
      case 1: m = BeltEvent{static_cast<BeltKind>(rng() % 4), dir, static_cast<long>(rng() % 500), u(rng), rng() % 1000}; break;
      default: m = RoadStatusReport{dir, testing_support::random_state(rng), u(rng)}; break;
    }
    const auto line = to_record(m).to_line();
    const auto back = message_from_record(LogRecord::parse(line));
    REQUIRE(back.has_value());
    CHECK(*back == m);
    CHECK(to_record(*back).to_line() == line);
  }
}

TEST_CASE("log record text form") {
  LogRecord r;
  r.add("t", 1.5).add("ev", std::string("ARRIVE")).add("dir", 7).add("duty", true);
  CHECK(r.to_line() == "t=1.5 ev=ARRIVE dir=7 duty=1");
  const auto p = LogRecord::parse("t=3 ev=CLEARED dir=7");
  CHECK(p.get_double("t") == 3.0);
  CHECK(p.get_int("dir") == 7);
  CHECK(p.find("id") == nullptr);
  CHECK_THROWS_AS(LogRecord::parse("t=3 broken"), ConfigError);
  CHECK(format_number(36.666666666666664) == "36.666666666666664");
  CHECK(format_number(120.0) == "120");
}
