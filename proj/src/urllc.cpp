#include "tonesim/urllc.hpp"

#include "tonesim/bss.hpp"

namespace tonesim {

const char* to_string(ArrivalMode mode) {
  return mode == ArrivalMode::kFastPath ? "fast_path" : "contend";
}

ToneReaction regular_tone_reaction(const StaState& sta, std::optional<SimTime> tx_end, SimTime now) {
  if (sta.role != Role::kRegular) return ToneReaction::kNone;
  if (sta.tx_state == TxState::kTransmitting) {
    return tx_end && *tx_end > now ? ToneReaction::kAbort : ToneReaction::kNone;
  }
  if (sta.counting()) return ToneReaction::kFreeze;
  return ToneReaction::kNone;
}

void Bss::urllc_on_arrival(Station& st, const Frame& frame) {
  const SimTime now = engine_.now();
  // The fast-path test looks at the control channel before our own tone. A
  // tone raised in the same microsecond (or within the detection delay) has
  // not been sensed yet.
  const bool sensed = tone_.is_busy() && tone_.since() + config_.detection_delay < now;
  const ArrivalMode mode = arrival_mode(sensed);
  const ToneTransition transition = tone_.set(st.mac.id, true, now);
  st.tone = ToneSession{st.mac.id, now, mode == ArrivalMode::kFastPath, std::nullopt};
  trace(st.mac.id, "urllc_mode",
        {{"frame", frame.id}, {"mode", std::string_view(to_string(mode))}});
  signal_control_transition(transition);

  enqueue_frame(st.mac, frame, now);
  if (mode == ArrivalMode::kFastPath) {
    zero_backoff(st.mac);
  } else {
    draw_backoff(st.mac, st.backoff_rng);
  }
  start_contention(st);
}

void Bss::urllc_collision_retry(Station& st) {
  // The tone stays up across retries; EDCA handles the rest.
  if (!st.tone || !tone_.is_asserting(st.mac.id)) {
    throw ContractViolation("URLLC retry without an asserted busy tone");
  }
}

void Bss::tone_release(Station& st, ServiceOutcome reason) {
  if (!st.tone) throw ContractViolation("busy tone released without an active session");
  const SimTime now = engine_.now();
  st.tone->ends_at = now;
  trace(st.mac.id, "tone_session",
        {{"start", st.tone->started_at.us},
         {"end", now.us},
         {"fast_path", st.tone->fast_path},
         {"reason", std::string_view(reason == ServiceOutcome::kDelivered ? "delivered" : "dropped")}});
  st.tone.reset();
  signal_control_transition(tone_.set(st.mac.id, false, now));
}

void Bss::signal_control_transition(ToneTransition transition) {
  if (transition == ToneTransition::kNone) return;
  const bool busy = transition == ToneTransition::kIdleToBusy;
  if (config_.detection_delay.us == 0) {
    on_control_transition(busy);
  } else {
    engine_.schedule(engine_.now() + config_.detection_delay, kAccessPoint,
                     busy ? EventKind::kBusyToneOn : EventKind::kBusyToneOff);
  }
}

void Bss::on_control_transition(bool busy) {
  const SimTime now = engine_.now();
  if (!busy) {
    for (Station& st : stations_) {
      if (st.mac.role != Role::kRegular) continue;
      st.mac.suspended = false;
      st.mac.eligible_from = now;
      if (st.mac.contending() && !main_.is_busy()) {
        resume_counting(st.mac, main_.idle_since(), aifs_of(st));
      }
    }
    trace(kAccessPoint, "resume", {});
    reschedule_wakeup();
    return;
  }

  // Freeze everyone first so that the channel going idle after an abort does
  // not restart the counting of stations that are about to be suspended.
  std::vector<StaId> to_abort;
  for (Station& st : stations_) {
    if (st.mac.role != Role::kRegular) continue;
    std::optional<SimTime> tx_end;
    if (st.tx) tx_end = main_.get(*st.tx).planned_end();
    switch (regular_tone_reaction(st.mac, tx_end, now)) {
      case ToneReaction::kAbort: to_abort.push_back(st.mac.id); break;
      case ToneReaction::kFreeze: freeze_backoff(st.mac, now, config_.phy.slot_time); break;
      case ToneReaction::kNone: break;
    }
    st.mac.suspended = true;
  }
  trace(kAccessPoint, "suspend", {});
  for (StaId id : to_abort) {
    Station& st = stations_[static_cast<std::size_t>(id)];
    const TxId tx = *st.tx;
    const Frame frame = *st.mac.head_frame;
    engine_.cancel(st.tx_end);
    st.tx.reset();
    main_.abort_transmission(tx, now);
    complete_exchange(st.mac, ExchangeResult::kPreempted);
    metrics_.on_preempt(now);
    trace(id, "preempt", {{"frame", frame.id}, {"tx", static_cast<std::int64_t>(tx)}});
    st.mac.eligible_from = now;
    draw_backoff(st.mac, st.backoff_rng);
    trace(id, "backoff",
          {{"frame", frame.id},
           {"counter", static_cast<std::int64_t>(st.mac.backoff_counter)},
           {"cw", static_cast<std::int64_t>(st.mac.cw_current)},
           {"retry", static_cast<std::int64_t>(st.mac.retry_count)}});
  }
  reschedule_wakeup();
}

}  // namespace tonesim
