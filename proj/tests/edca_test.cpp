#include <cmath>
#include <sstream>

#include "doctest.h"
#include "tonesim/bss.hpp"
#include "trace_tools.hpp"

using namespace tonesim;

namespace {

RunConfig manual(int n, int m, std::uint64_t seed, Scheme scheme = Scheme::kLegacy) {
  RunConfig c;
  c.scheme = scheme;
  c.n_regular = n;
  c.n_urllc = m;
  c.seed = seed;
  c.sim_duration = milliseconds(20);
  c.warmup = SimTime{0};
  c.autostart_sources = false;
  return c;
}

std::vector<const tracecheck::TxRec*> data_txs(const tracecheck::Trace& t, int sta) {
  std::vector<const tracecheck::TxRec*> out;
  for (const auto& tx : t.txs) {
    if (tx.sta == sta && tx.kind != "ack") out.push_back(&tx);
  }
  return out;
}

}  // namespace

TEST_SUITE("edca") {
  TEST_CASE("aifs arithmetic") {
    PhyConstants phy;
    CHECK(aifs(EdcaParams::urllc(), phy) == microseconds(34));
    CHECK(aifs(EdcaParams::best_effort(), phy) == microseconds(43));
    EdcaParams p;
    p.aifsn = 2;
    phy.slot_time = SimTime{0};
    CHECK(aifs(p, phy) == microseconds(16));
    CHECK_FALSE(validate(phy).empty());
    CHECK(exchange_duration(EdcaParams::urllc(), PhyConstants{}) == microseconds(294));
  }

  TEST_CASE("contention window doubling and cap") {
    const EdcaParams be;
    const int expected[] = {15, 31, 63, 127, 255, 511, 1023, 1023, 1023};
    for (int r = 0; r < 9; ++r) CHECK(contention_window(be, r) == expected[r]);
    CHECK(contention_window(EdcaParams::urllc(), 1) == 7);
    CHECK(contention_window(EdcaParams::urllc(), 5) == 15);
    CHECK(is_window_size(0));
    CHECK(is_window_size(1023));
    CHECK_FALSE(is_window_size(1000));
  }

  TEST_CASE("parameter validation") {
    CHECK(validate(EdcaParams::best_effort()).empty());
    CHECK(validate(EdcaParams::urllc()).empty());
    EdcaParams bad;
    bad.aifsn = 1;
    bad.cw_min = 10;
    bad.cw_max = 7;
    bad.retry_limit = -1;
    CHECK(validate(bad).size() == 4);
  }

  TEST_CASE("first timeout doubles cw; retry limit 7 drops on the 8th failure") {
    StaState s = StaState::make(0, Role::kRegular, EdcaParams::best_effort());
    enqueue_frame(s, Frame{1, 0, SimTime{0}, std::nullopt, FrameKind::kRegularData}, SimTime{0});
    CHECK_THROWS_AS(enqueue_frame(s, Frame{}, SimTime{0}), ContractViolation);
    for (int failure = 1; failure <= 7; ++failure) {
      s.tx_state = TxState::kAwaitAck;
      CHECK(complete_exchange(s, ExchangeResult::kAckTimeout) == NextStep::kRetry);
      CHECK(s.retry_count == failure);
      if (failure == 1) CHECK(s.cw_current == 31);
      CHECK_NOTHROW(check_invariants(s));
    }
    s.tx_state = TxState::kAwaitAck;
    CHECK(complete_exchange(s, ExchangeResult::kAckTimeout) == NextStep::kDropped);
    CHECK_FALSE(s.head_frame);
    CHECK(s.retry_count == 0);
    CHECK(s.cw_current == 15);
  }

  TEST_CASE("ack received resets retry state") {
    StaState s = StaState::make(0, Role::kRegular, EdcaParams::best_effort());
    enqueue_frame(s, Frame{1, 0, SimTime{0}, std::nullopt, FrameKind::kRegularData}, SimTime{0});
    s.tx_state = TxState::kAwaitAck;
    complete_exchange(s, ExchangeResult::kAckTimeout);
    s.tx_state = TxState::kAwaitAck;
    CHECK(complete_exchange(s, ExchangeResult::kAckReceived) == NextStep::kDelivered);
    CHECK(s.retry_count == 0);
    CHECK(s.cw_current == 15);
    CHECK(s.tx_state == TxState::kIdle);
    CHECK_THROWS_AS(complete_exchange(s, ExchangeResult::kAckReceived), ContractViolation);
  }

  TEST_CASE("preemption keeps retry count and window") {
    StaState s = StaState::make(0, Role::kRegular, EdcaParams::best_effort());
    enqueue_frame(s, Frame{1, 0, SimTime{0}, std::nullopt, FrameKind::kRegularData}, SimTime{0});
    s.tx_state = TxState::kAwaitAck;
    complete_exchange(s, ExchangeResult::kAckTimeout);
    s.tx_state = TxState::kTransmitting;
    CHECK(complete_exchange(s, ExchangeResult::kPreempted) == NextStep::kRetry);
    CHECK(s.retry_count == 1);
    CHECK(s.cw_current == 31);
    CHECK(s.head_frame);
    CHECK(s.tx_state == TxState::kDeferring);
  }

  TEST_CASE("slot boundaries") {
    StaState s = StaState::make(0, Role::kRegular, EdcaParams::best_effort());
    s.backoff_counter = 3;
    CHECK(on_idle_slot_boundary(s) == SlotAction::kDecrement);
    CHECK(s.backoff_counter == 2);
    s.backoff_counter = 0;
    CHECK(on_idle_slot_boundary(s) == SlotAction::kTransmit);
    s.suspended = true;
    CHECK_THROWS_AS(on_idle_slot_boundary(s), ContractViolation);
  }

  TEST_CASE("freeze semantics") {
    const SimTime slot = microseconds(9);
    StaState s = StaState::make(0, Role::kUrllc, EdcaParams::urllc());
    enqueue_frame(s, Frame{1, 0, SimTime{0}, std::nullopt, FrameKind::kUrllcData}, SimTime{0});
    s.backoff_counter = 5;

    SUBCASE("busy at the AIFS boundary: still 5") {
      resume_counting(s, SimTime{0}, microseconds(34));
      CHECK(contention_phase(s, microseconds(20)) == TxState::kDeferring);
      freeze_backoff(s, microseconds(34), slot);
      CHECK(s.backoff_counter == 5);
    }
    SUBCASE("idle 20 us < AIFS then busy: no decrement") {
      resume_counting(s, SimTime{0}, microseconds(34));
      freeze_backoff(s, microseconds(20), slot);
      CHECK(s.backoff_counter == 5);
      CHECK_FALSE(s.count_start);
    }
    SUBCASE("two full idle slots then busy mid-slot") {
      resume_counting(s, SimTime{0}, microseconds(34));
      CHECK(contention_phase(s, microseconds(40)) == TxState::kBackoff);
      freeze_backoff(s, microseconds(34 + 2 * 9 + 4), slot);
      CHECK(s.backoff_counter == 3);
      CHECK(s.decrements == 2);
    }
    SUBCASE("back-to-back busy periods resume once") {
      resume_counting(s, SimTime{0}, microseconds(34));
      freeze_backoff(s, microseconds(10), slot);
      resume_counting(s, microseconds(30), microseconds(34));
      freeze_backoff(s, microseconds(40), slot);
      resume_counting(s, microseconds(100), microseconds(34));
      CHECK(backoff_expiry(s, slot) == microseconds(100 + 34 + 5 * 9));
    }
    SUBCASE("eligible_from later than idle start delays the count") {
      s.eligible_from = microseconds(500);
      resume_counting(s, microseconds(100), microseconds(34));
      CHECK(*s.count_start == microseconds(534));
    }
    SUBCASE("missing the expiry is a contract violation") {
      resume_counting(s, SimTime{0}, microseconds(34));
      CHECK_THROWS_AS(freeze_backoff(s, microseconds(34 + 5 * 9 + 1), slot), ContractViolation);
    }
  }

  TEST_CASE("idle network: transmission after AIFS plus the drawn slots") {
    std::ostringstream out;
    JsonlTraceWriter writer(out);
    Bss bss(manual(1, 0, 3), &writer);
    bss.schedule_arrival(0, microseconds(100));
    bss.run_until(microseconds(100));
    const int b = bss.station(0).drawn_backoff;
    CHECK(b >= 0);
    CHECK(b <= 15);
    CHECK(contention_phase(bss.station(0), microseconds(100)) == TxState::kDeferring);
    bss.run();
    const auto trace = tracecheck::parse_text(out.str());
    const auto txs = data_txs(trace, 0);
    REQUIRE(txs.size() == 1);
    const std::int64_t start = 100 + 43 + 9 * b;
    CHECK(txs[0]->start == start);
    CHECK(txs[0]->dur == 2000);
    CHECK(txs[0]->outcome == "clean");
    bool ack_found = false;
    for (const auto& tx : trace.txs) {
      if (tx.kind == "ack") {
        ack_found = true;
        CHECK(tx.start == start + 2016);
        CHECK(tx.dur == 44);
      }
    }
    CHECK(ack_found);
    REQUIRE(trace.frames.size() == 1);
    CHECK(*trace.frames.begin()->second.delivered_at == start + 2060);
    CHECK(bss.station(0).tx_state == TxState::kIdle);
  }

  TEST_CASE("two stations reaching zero on the same boundary collide") {
    bool found = false;
    for (std::uint64_t seed = 1; seed < 400 && !found; ++seed) {
      std::ostringstream out;
      JsonlTraceWriter writer(out);
      Bss bss(manual(2, 0, seed), &writer);
      bss.schedule_arrival(0, SimTime{0});
      bss.schedule_arrival(1, SimTime{0});
      bss.run_until(SimTime{0});
      const int b = bss.station(0).drawn_backoff;
      if (b != bss.station(1).drawn_backoff) continue;
      found = true;
      const std::int64_t start = 43 + 9 * b;
      bss.run_until(microseconds(start + 2000 + 16 + 44 + 9));
      for (StaId s : {0, 1}) {
        CHECK(bss.station(s).retry_count == 1);
        CHECK(bss.station(s).cw_current == 31);
      }
      bss.run();
      const auto trace = tracecheck::parse_text(out.str());
      for (StaId s : {0, 1}) {
        const auto txs = data_txs(trace, s);
        REQUIRE(!txs.empty());
        CHECK(txs[0]->start == start);
        CHECK(txs[0]->outcome == "collided");
      }
      // Collided data is not acknowledged.
      for (const auto& tx : trace.txs) CHECK((tx.kind != "ack" || tx.start > start + 2000 + 69));
      CHECK(tracecheck::scan(trace).ok());
    }
    CHECK(found);
  }

  TEST_CASE("counter frozen by another station's exchange resumes where it stopped") {
    bool found = false;
    for (std::uint64_t seed = 1; seed < 400 && !found; ++seed) {
      std::ostringstream out;
      JsonlTraceWriter writer(out);
      Bss bss(manual(2, 0, seed), &writer);
      bss.schedule_arrival(0, SimTime{0});
      bss.schedule_arrival(1, SimTime{0});
      bss.run_until(SimTime{0});
      const int b0 = bss.station(0).drawn_backoff;
      const int b1 = bss.station(1).drawn_backoff;
      if (b1 - b0 < 3) continue;
      found = true;
      const std::int64_t first = 43 + 9 * b0;
      bss.run_until(microseconds(first));
      CHECK(bss.station(1).backoff_counter == b1 - b0);
      CHECK_FALSE(bss.station(1).count_start);
      CHECK(contention_phase(bss.station(1), microseconds(first)) == TxState::kDeferring);
      bss.run_until(microseconds(first + 1000));
      CHECK(bss.station(1).backoff_counter == b1 - b0);
      bss.run();
      const auto trace = tracecheck::parse_text(out.str());
      const auto txs = data_txs(trace, 1);
      REQUIRE(txs.size() == 1);
      CHECK(txs[0]->start == first + 2060 + 43 + 9 * (b1 - b0));
      CHECK(txs[0]->outcome == "clean");
    }
    CHECK(found);
  }

  TEST_CASE("saturated source: back-to-back cycles with fresh draws") {
    RunConfig c;
    c.scheme = Scheme::kLegacy;
    c.n_regular = 1;
    c.n_urllc = 0;
    c.sim_duration = seconds(1);
    c.warmup = SimTime{0};
    std::ostringstream out;
    JsonlTraceWriter writer(out);
    simulate(c, &writer);
    const auto trace = tracecheck::parse_text(out.str());
    const auto txs = data_txs(trace, 0);
    REQUIRE(txs.size() > 400);
    CHECK(txs[0]->start >= 43);
    CHECK(txs[0]->start <= 43 + 9 * 15);
    // The last frame may still be on air when the run stops.
    for (std::size_t i = 1; i + 1 < txs.size(); ++i) {
      CHECK(txs[i]->outcome == "clean");
      const std::int64_t gap = txs[i]->start - txs[i - 1]->start - 2060 - 43;
      CHECK(gap >= 0);
      CHECK(gap <= 9 * 15);
      CHECK(gap % 9 == 0);
    }
  }

  TEST_CASE("single regular station matches the closed-form throughput") {
    RunConfig c;
    c.scheme = Scheme::kLegacy;
    c.n_regular = 1;
    c.n_urllc = 0;
    c.sim_duration = seconds(10);
    const RunSummary s = simulate(c);
    const double oracle = 129760.0 / ((43 + 7.5 * 9 + 2000 + 16 + 44) * 1e-6);
    CHECK(std::abs(s.regular_throughput_bps - oracle) / oracle < 0.01);
    CHECK(s.regular_collided == 0);
    CHECK_FALSE(s.urllc_delay_mean_us);
  }

  TEST_CASE("two saturated stations share the channel fairly") {
    RunConfig c;
    c.scheme = Scheme::kLegacy;
    c.n_regular = 2;
    c.n_urllc = 0;
    c.seed = 17;
    c.sim_duration = seconds(60);
    const RunSummary s = simulate(c);
    REQUIRE(s.per_station_delivered.size() == 2);
    const double a = static_cast<double>(s.per_station_delivered[0]);
    const double b = static_cast<double>(s.per_station_delivered[1]);
    CHECK(std::abs(a - b) / ((a + b) / 2) < 0.05);
    CHECK(s.regular_collided > 0);
  }
}
