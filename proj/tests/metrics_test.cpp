#include <string>

#include "doctest.h"
#include "tonesim/engine.hpp"
#include "tonesim/metrics.hpp"

using namespace tonesim;

namespace {

Frame urllc(std::int64_t id, std::int64_t arrival, std::int64_t delivered) {
  return Frame{id, 0, microseconds(arrival), microseconds(delivered), FrameKind::kUrllcData};
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("nearest-rank percentiles") {
    std::vector<SimTime> v;
    for (int i = 1; i <= 100; ++i) v.push_back(microseconds(i));
    CHECK(nearest_rank(v, 95) == microseconds(95));
    CHECK(nearest_rank(v, 50) == microseconds(50));
    CHECK(nearest_rank(v, 100) == microseconds(100));
    CHECK(nearest_rank(v, 0.5) == microseconds(1));
    CHECK(nearest_rank({microseconds(7)}, 99) == microseconds(7));
    CHECK_THROWS_AS(nearest_rank({}, 50), ContractViolation);
    CHECK_THROWS_AS(nearest_rank(v, 0), ContractViolation);
  }

  TEST_CASE("delivery 1294 of a frame arriving at 1000 gives a 294 us sample") {
    MetricsCollector m(SimTime{0}, 1);
    const Frame f = urllc(1, 1000, 1294);
    m.on_arrival(f);
    m.record_frame(f, true, 8000);
    const RunSummary s = m.finalize(Scheme::kProposed, 1, 0, 1, seconds(1), SimTime{0}, {});
    REQUIRE(s.urllc_delay_mean_us);
    CHECK(*s.urllc_delay_mean_us == 294.0);
    CHECK(*s.urllc_delay_p99 == microseconds(294));
    CHECK(*s.urllc_delay_max == microseconds(294));
    CHECK(s.urllc_delivered == 1);
    CHECK(s.per_station_delivered[0] == 1);
  }

  TEST_CASE("warm-up filter uses the arrival time") {
    MetricsCollector m(milliseconds(1), 1);
    const Frame early = urllc(1, 900, 1194);
    const Frame late = urllc(2, 1000, 1400);
    m.on_arrival(early);
    m.on_arrival(late);
    m.record_frame(early, true, 8000);
    m.record_frame(late, true, 8000);
    m.on_collision(FrameKind::kUrllcData, microseconds(999));
    m.on_collision(FrameKind::kUrllcData, microseconds(1000));
    m.on_preempt(microseconds(10));
    const RunSummary s = m.finalize(Scheme::kProposed, 1, 0, 1, milliseconds(3), SimTime{0}, {});
    CHECK(s.urllc_arrivals == 1);
    CHECK(s.urllc_delivered == 1);
    CHECK(*s.urllc_delay_mean_us == 400.0);
    CHECK(s.urllc_collided == 1);
    CHECK(s.regular_preempted == 0);
  }

  TEST_CASE("dropped frame: no sample, drop counter") {
    MetricsCollector m(SimTime{0}, 2);
    Frame f{3, 1, microseconds(10), std::nullopt, FrameKind::kUrllcData};
    m.on_arrival(f);
    m.record_frame(f, false, 8000);
    const RunSummary s = m.finalize(Scheme::kLegacy, 1, 1, 1, seconds(1), SimTime{0}, {});
    CHECK(s.urllc_dropped == 1);
    CHECK_FALSE(s.urllc_delay_mean_us);
    CHECK_FALSE(s.urllc_delay_p99);
  }

  TEST_CASE("throughput, busy fraction and in-flight accounting") {
    MetricsCollector m(seconds(1), 2);
    for (int i = 0; i < 10; ++i) {
      const Frame f{i, 0, seconds(1) + microseconds(i), seconds(2), FrameKind::kRegularData};
      m.on_arrival(f);
      m.record_frame(f, true, 100000);
    }
    const Frame pending{99, 1, seconds(2), std::nullopt, FrameKind::kRegularData};
    m.on_arrival(pending);
    const RunSummary s = m.finalize(Scheme::kLegacy, 0, 2, 1, seconds(3), seconds(1), {pending});
    CHECK(s.regular_throughput_bps == doctest::Approx(500000.0));
    CHECK(s.channel_busy_fraction == doctest::Approx(0.5));
    CHECK(s.regular_arrivals == 11);
    CHECK(s.regular_in_flight == 1);
    CHECK(s.regular_arrivals == s.regular_delivered + s.regular_dropped + s.regular_in_flight);
  }

  TEST_CASE("CSV rendering") {
    RunSummary s;
    s.scheme = Scheme::kLegacy;
    s.m = 0;
    s.n = 10;
    s.seed = 3;
    s.sim_duration = seconds(100);
    s.warmup = seconds(1);
    s.regular_throughput_bps = 48612345.6789;
    s.channel_busy_fraction = 0.98765432;
    CHECK(csv_row(s) == "legacy,0,10,3,,,0,0,0,48612345.679,0,0,0.987654,100000000,1000000");
    s.urllc_delay_mean_us = 294.0;
    s.urllc_delay_p99 = microseconds(294);
    CHECK(csv_row(s).rfind("legacy,0,10,3,294.000,294,", 0) == 0);
    CHECK(csv_header().substr(0, 24) == "scheme,M,N,seed,urllc_de");
    CHECK(format_fixed(1e9, 3) == "1000000000.000");
    CHECK(format_fixed(0.0, 6) == "0.000000");
  }
}
