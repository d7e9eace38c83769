#include <cmath>
#include <sstream>

#include "doctest.h"
#include "tonesim/bss.hpp"
#include "tonesim/traffic.hpp"
#include "trace_tools.hpp"

using namespace tonesim;

TEST_SUITE("traffic") {
  TEST_CASE("saturated source regenerates at the completion instant") {
    TrafficSource src(SourceConfig::saturated(), RngStream(1, 0, StreamPurpose::kArrival));
    CHECK(src.first_arrival() == SimTime{0});
    CHECK(src.on_service_complete(ServiceOutcome::kDelivered, microseconds(777)) == microseconds(777));
    CHECK(src.on_service_complete(ServiceOutcome::kDropped, microseconds(900)) == microseconds(900));
  }

  TEST_CASE("exponential gap after service: mean over 1e5 services") {
    TrafficSource src(SourceConfig::exp_after_success(milliseconds(10)),
                      RngStream(42, 11, StreamPurpose::kArrival));
    const SimTime first = src.first_arrival();
    CHECK(first >= SimTime{0});
    CHECK(first < milliseconds(10));
    double sum = 0;
    SimTime at = microseconds(5000);
    for (int i = 0; i < 100000; ++i) {
      const SimTime next = src.on_service_complete(i % 10 == 0 ? ServiceOutcome::kDropped
                                                               : ServiceOutcome::kDelivered,
                                                   at);
      REQUIRE(next > at);
      sum += static_cast<double>((next - at).us);
      at = next + microseconds(294);
    }
    CHECK(std::abs(sum / 100000 - 10000.0) <= 100.0);
  }

  TEST_CASE("saturated regular station always holds a head frame") {
    RunConfig c;
    c.scheme = Scheme::kLegacy;
    c.n_regular = 1;
    c.n_urllc = 0;
    c.sim_duration = seconds(1);
    c.warmup = SimTime{0};
    Bss bss(c);
    for (int ms = 1; ms <= 1000; ms += 7) {
      bss.run_until(milliseconds(ms));
      CHECK(bss.station(0).head_frame);
    }
  }

  TEST_CASE("dropped URLLC frames still regenerate traffic") {
    RunConfig c;
    c.scheme = Scheme::kLegacy;
    c.n_regular = 0;
    c.n_urllc = 2;
    c.urllc.retry_limit = 0;
    c.legacy_urllc.retry_limit = 0;
    c.urllc_mean_interarrival = microseconds(300);
    c.sim_duration = seconds(1);
    c.warmup = SimTime{0};
    std::ostringstream out;
    JsonlTraceWriter writer(out);
    const RunSummary s = simulate(c, &writer);
    CHECK(s.urllc_dropped > 0);
    const auto trace = tracecheck::parse_text(out.str());
    // Every dropped frame is followed by a later arrival at the same station.
    for (const auto& [id, f] : trace.frames) {
      if (!f.dropped_at || *f.dropped_at > 990000) continue;
      bool next = false;
      for (const auto& [id2, g] : trace.frames) next = next || (g.sta == f.sta && g.arrival >= *f.dropped_at && id2 != id);
      CHECK(next);
    }
  }

  TEST_CASE("URLLC load follows the mean interarrival") {
    RunConfig c;
    c.scheme = Scheme::kProposed;
    c.n_regular = 0;
    c.n_urllc = 1;
    c.sim_duration = seconds(20);
    const RunSummary s = simulate(c);
    // One frame per (294 us service + 10 ms gap) on average.
    const double expected = 19e6 / (10000.0 + 294.0);
    CHECK(std::abs(static_cast<double>(s.urllc_arrivals) - expected) / expected < 0.05);
  }
}
