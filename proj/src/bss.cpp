#include "tonesim/bss.hpp"

#include <algorithm>

namespace tonesim {

namespace {

const char* class_name(FrameKind kind) {
  return kind == FrameKind::kUrllcData ? "urllc" : "regular";
}

}  // namespace

Bss::Bss(const RunConfig& config, TraceSink* trace)
    : config_(config),
      trace_(trace),
      main_(config.warmup),
      metrics_(config.warmup, config.n_regular + config.n_urllc) {
  if (config_.n_regular < 0 || config_.n_urllc < 0 || config_.n_regular + config_.n_urllc < 1) {
    throw ContractViolation("a BSS needs at least one station");
  }
  if (config_.warmup > config_.sim_duration) {
    throw ContractViolation("warm-up longer than the simulated duration");
  }
  engine_.set_handler([this](const Event& ev) { handle(ev); });
  main_.set_listener(this);
  main_.set_trace(trace_);
  tone_.set_trace(trace_);

  const int total = config_.n_regular + config_.n_urllc;
  stations_.reserve(static_cast<std::size_t>(total));
  for (StaId id = 0; id < total; ++id) {
    const bool urllc = id >= config_.n_regular;
    const EdcaParams& params = !urllc              ? config_.regular
                               : scheme_enabled() ? config_.urllc
                                                  : config_.legacy_urllc;
    const SourceConfig source = urllc ? SourceConfig::exp_after_success(config_.urllc_mean_interarrival)
                                      : SourceConfig::saturated();
    stations_.push_back(Station{
        StaState::make(id, urllc ? Role::kUrllc : Role::kRegular, params),
        TrafficSource(source, RngStream(config_.seed, id, StreamPurpose::kArrival)),
        RngStream(config_.seed, id, StreamPurpose::kBackoff),
        std::nullopt, {}, {}, std::nullopt});
  }
}

void Bss::trace(StaId sta, std::string_view ev, std::initializer_list<TraceField> fields) {
  if (trace_) trace_->emit(engine_.now(), sta, ev, fields);
}

void Bss::schedule_arrival(StaId sta, SimTime at) {
  engine_.schedule(at, sta, EventKind::kArrival);
}

void Bss::run_until(SimTime t) {
  if (!started_) {
    started_ = true;
    trace(kAccessPoint, "run",
          {{"scheme", std::string_view(to_string(config_.scheme))},
           {"M", static_cast<std::int64_t>(config_.n_urllc)},
           {"N", static_cast<std::int64_t>(config_.n_regular)},
           {"seed", static_cast<std::int64_t>(config_.seed)},
           {"sim_duration_us", config_.sim_duration.us},
           {"warmup_us", config_.warmup.us},
           {"regular_payload_bits", config_.regular.payload_bits},
           {"detection_delay_us", config_.detection_delay.us}});
    if (config_.autostart_sources) {
      for (Station& st : stations_) schedule_arrival(st.mac.id, st.source.first_arrival());
    }
  }
  engine_.run_until(t);
}

RunSummary Bss::run() {
  run_until(config_.sim_duration);
  trace(kAccessPoint, "sim_end", {});
  return summary();
}

RunSummary Bss::summary() const {
  std::vector<Frame> in_flight;
  for (const Station& st : stations_) {
    if (st.mac.head_frame) in_flight.push_back(*st.mac.head_frame);
  }
  const SimTime end = std::min(engine_.now(), config_.sim_duration);
  return metrics_.finalize(config_.scheme, config_.n_urllc, config_.n_regular, config_.seed,
                           config_.sim_duration, main_.busy_time(end), in_flight);
}

void Bss::handle(const Event& ev) {
  switch (ev.kind) {
    case EventKind::kSlotBoundary: on_slot_boundary(); break;
    case EventKind::kTxEnd: on_tx_end(static_cast<TxId>(ev.payload)); break;
    case EventKind::kAckStart: on_ack_start(ev.target); break;
    case EventKind::kAckTimeout: on_ack_timeout(ev.target); break;
    case EventKind::kArrival: on_arrival(ev.target); break;
    case EventKind::kBusyToneOn: on_control_transition(true); break;
    case EventKind::kBusyToneOff: on_control_transition(false); break;
    case EventKind::kSimEnd: break;
  }
}

void Bss::on_arrival(StaId id) {
  Station& st = stations_.at(static_cast<std::size_t>(id));
  const FrameKind kind =
      st.mac.role == Role::kUrllc ? FrameKind::kUrllcData : FrameKind::kRegularData;
  const Frame frame{next_frame_id_++, id, engine_.now(), std::nullopt, kind};
  metrics_.on_arrival(frame);
  trace(id, "arrival", {{"frame", frame.id}, {"class", std::string_view(class_name(kind))}});

  if (st.mac.role == Role::kUrllc && scheme_enabled()) {
    urllc_on_arrival(st, frame);
    return;
  }
  enqueue_frame(st.mac, frame, engine_.now());
  draw_backoff(st.mac, st.backoff_rng);
  start_contention(st);
}

void Bss::start_contention(Station& st) {
  check_invariants(st.mac);
  trace(st.mac.id, "backoff",
        {{"frame", st.mac.head_frame->id},
         {"counter", static_cast<std::int64_t>(st.mac.backoff_counter)},
         {"cw", static_cast<std::int64_t>(st.mac.cw_current)},
         {"retry", static_cast<std::int64_t>(st.mac.retry_count)}});
  if (!st.mac.suspended && !main_.is_busy()) {
    resume_counting(st.mac, main_.idle_since(), aifs_of(st));
  }
  reschedule_wakeup();
}

void Bss::reschedule_wakeup() {
  std::optional<SimTime> earliest;
  for (const Station& st : stations_) {
    if (!st.mac.counting()) continue;
    const SimTime expiry = backoff_expiry(st.mac, config_.phy.slot_time);
    if (!earliest || expiry < *earliest) earliest = expiry;
  }
  if (earliest && engine_.is_pending(wakeup_) && wakeup_.fire_at == *earliest) return;
  engine_.cancel(wakeup_);
  if (earliest) wakeup_ = engine_.schedule(*earliest, kAccessPoint, EventKind::kSlotBoundary);
}

void Bss::on_slot_boundary() {
  const SimTime now = engine_.now();
  std::vector<StaId> ready;
  for (const Station& st : stations_) {
    if (st.mac.counting() && backoff_expiry(st.mac, config_.phy.slot_time) == now) {
      ready.push_back(st.mac.id);
    }
  }
  for (StaId id : ready) {
    Station& st = stations_[static_cast<std::size_t>(id)];
    while (on_idle_slot_boundary(st.mac) != SlotAction::kTransmit) {
    }
    if (st.mac.decrements != st.mac.drawn_backoff) {
      throw ContractViolation("backoff decrements differ from the drawn value");
    }
    begin_data(st);
  }
  reschedule_wakeup();
}

void Bss::begin_data(Station& st) {
  st.mac.count_start.reset();
  st.mac.tx_state = TxState::kTransmitting;
  const FrameKind kind = st.mac.head_frame->kind;
  const TxId id = main_.begin_transmission(st.mac.id, kind, st.mac.params.data_airtime,
                                           engine_.now(), st.mac.head_frame->id);
  st.tx = id;
  st.tx_end = engine_.schedule(engine_.now() + st.mac.params.data_airtime, st.mac.id,
                               EventKind::kTxEnd, static_cast<std::int64_t>(id));
}

void Bss::on_main_busy(SimTime t) {
  for (Station& st : stations_) {
    if (!st.mac.counting()) continue;
    // A station whose counter expires at this very instant still transmits:
    // it cannot have sensed the medium yet.
    if (backoff_expiry(st.mac, config_.phy.slot_time) == t) continue;
    freeze_backoff(st.mac, t, config_.phy.slot_time);
  }
  reschedule_wakeup();
}

void Bss::on_main_idle(SimTime t) {
  for (Station& st : stations_) {
    if (st.mac.contending() && !st.mac.suspended) resume_counting(st.mac, t, aifs_of(st));
  }
  reschedule_wakeup();
}

void Bss::on_tx_end(TxId id) {
  const SimTime now = engine_.now();
  const Transmission& rec = main_.get(id);
  const StaId sta = rec.sta;
  const FrameKind kind = rec.kind;
  const TxOutcome outcome = main_.end_transmission(id, now);

  if (kind == FrameKind::kAck) {
    const auto it = ack_owner_.find(id);
    if (it == ack_owner_.end()) throw ContractViolation("ACK without a pending exchange");
    const StaId sender = it->second;
    ack_owner_.erase(it);
    if (outcome == TxOutcome::kClean) deliver(stations_[static_cast<std::size_t>(sender)]);
    return;
  }

  Station& st = stations_.at(static_cast<std::size_t>(sta));
  st.tx.reset();
  st.mac.tx_state = TxState::kAwaitAck;
  const EdcaParams& p = st.mac.params;
  st.ack_timeout = engine_.schedule(now + config_.phy.sifs + p.ack_airtime + config_.phy.ack_timeout_guard,
                                    sta, EventKind::kAckTimeout);
  if (outcome == TxOutcome::kClean) {
    engine_.schedule(now + config_.phy.sifs, sta, EventKind::kAckStart);
  } else {
    metrics_.on_collision(kind, now);
  }
}

void Bss::on_ack_start(StaId sender) {
  Station& st = stations_.at(static_cast<std::size_t>(sender));
  if (main_.is_transmitting(kAccessPoint)) {
    trace(kAccessPoint, "ack_skipped", {{"frame", st.mac.head_frame->id}});
    return;
  }
  const TxId id = main_.begin_transmission(kAccessPoint, FrameKind::kAck, st.mac.params.ack_airtime,
                                           engine_.now(), st.mac.head_frame->id);
  ack_owner_[id] = sender;
  engine_.schedule(engine_.now() + st.mac.params.ack_airtime, kAccessPoint, EventKind::kTxEnd,
                   static_cast<std::int64_t>(id));
}

void Bss::deliver(Station& st) {
  const SimTime now = engine_.now();
  engine_.cancel(st.ack_timeout);
  Frame frame = *st.mac.head_frame;
  frame.delivery_time = now;
  complete_exchange(st.mac, ExchangeResult::kAckReceived);
  metrics_.record_frame(frame, true, st.mac.params.payload_bits);
  trace(st.mac.id, "delivered",
        {{"frame", frame.id},
         {"class", std::string_view(class_name(frame.kind))},
         {"arrival", frame.arrival_time.us},
         {"delay", (now - frame.arrival_time).us},
         {"bits", st.mac.params.payload_bits}});
  if (st.tone) tone_release(st, ServiceOutcome::kDelivered);
  regenerate(st, ServiceOutcome::kDelivered);
}

void Bss::on_ack_timeout(StaId id) {
  Station& st = stations_.at(static_cast<std::size_t>(id));
  const Frame frame = *st.mac.head_frame;
  const NextStep next = complete_exchange(st.mac, ExchangeResult::kAckTimeout);
  trace(id, "ack_timeout",
        {{"frame", frame.id}, {"retry", static_cast<std::int64_t>(st.mac.retry_count)}});
  if (next == NextStep::kRetry) {
    if (st.tone) urllc_collision_retry(st);
    st.mac.eligible_from = engine_.now();
    draw_backoff(st.mac, st.backoff_rng);
    start_contention(st);
    return;
  }
  metrics_.record_frame(frame, false, st.mac.params.payload_bits);
  trace(id, "dropped",
        {{"frame", frame.id},
         {"class", std::string_view(class_name(frame.kind))},
         {"arrival", frame.arrival_time.us}});
  if (st.tone) tone_release(st, ServiceOutcome::kDropped);
  regenerate(st, ServiceOutcome::kDropped);
}

void Bss::regenerate(Station& st, ServiceOutcome outcome) {
  if (!config_.autostart_sources) return;
  const SimTime next = st.source.on_service_complete(outcome, engine_.now());
  if (next == engine_.now()) {
    on_arrival(st.mac.id);
  } else {
    schedule_arrival(st.mac.id, next);
  }
}

RunSummary simulate(const RunConfig& config, TraceSink* trace) {
  Bss bss(config, trace);
  return bss.run();
}

}  // namespace tonesim
