#include "tonesim/medium.hpp"

#include <algorithm>
#include <string>

#include "tonesim/engine.hpp"

namespace tonesim {

const char* to_string(FrameKind kind) {
  switch (kind) {
    case FrameKind::kRegularData: return "regular-data";
    case FrameKind::kUrllcData: return "urllc-data";
    case FrameKind::kAck: return "ack";
  }
  return "unknown";
}

const char* to_string(TxOutcome outcome) {
  switch (outcome) {
    case TxOutcome::kClean: return "clean";
    case TxOutcome::kCollided: return "collided";
    case TxOutcome::kAborted: return "aborted";
  }
  return "unknown";
}

const char* to_string(ToneTransition transition) {
  switch (transition) {
    case ToneTransition::kNone: return "none";
    case ToneTransition::kIdleToBusy: return "idle-to-busy";
    case ToneTransition::kBusyToIdle: return "busy-to-idle";
  }
  return "unknown";
}

Transmission& MainChannel::record(TxId id) {
  if (id < first_record_ || id >= next_id_) {
    throw ContractViolation("unknown or expired transmission id " + std::to_string(id));
  }
  return records_[id - first_record_];
}

const Transmission& MainChannel::get(TxId id) const {
  return const_cast<MainChannel*>(this)->record(id);
}

bool MainChannel::is_transmitting(StaId sta) const {
  return std::any_of(active_.begin(), active_.end(), [&](TxId id) {
    return records_[id - first_record_].sta == sta;
  });
}

TxId MainChannel::begin_transmission(StaId sta, FrameKind kind, SimTime duration, SimTime now,
                                     std::int64_t frame) {
  if (duration.us <= 0) throw ContractViolation("transmission duration must be positive");
  if (is_transmitting(sta)) {
    throw ContractViolation("station " + std::to_string(sta) +
                            " started a transmission while already transmitting");
  }
  prune();
  const TxId id = next_id_++;
  records_.push_back(Transmission{id, sta, kind, now, duration, std::nullopt, false, {}});
  Transmission& tx = records_.back();
  for (TxId other_id : active_) {
    Transmission& other = record(other_id);
    // A frame ending exactly now does not overlap one starting now.
    if (other.planned_end() > now) {
      other.concurrent.push_back(id);
      tx.concurrent.push_back(other_id);
    }
  }
  const bool was_idle = active_.empty();
  active_.insert(id);
  if (trace_) {
    trace_->emit(now, sta, "tx_start",
                 {{"tx", static_cast<std::int64_t>(id)},
                  {"kind", std::string_view(to_string(kind))},
                  {"dur", duration.us},
                  {"frame", frame}});
  }
  if (was_idle) {
    busy_since_ = now;
    if (listener_) listener_->on_main_busy(now);
  }
  return id;
}

void MainChannel::abort_transmission(TxId id, SimTime at) {
  if (!active_.count(id)) {
    throw ContractViolation("abort of non-active transmission " + std::to_string(id));
  }
  Transmission& tx = record(id);
  if (at < tx.start || at > tx.planned_end()) {
    throw ContractViolation("abort time outside transmission interval");
  }
  tx.aborted_at = at;
  if (trace_) {
    trace_->emit(at, tx.sta, "tx_abort",
                 {{"tx", static_cast<std::int64_t>(id)},
                  {"kind", std::string_view(to_string(tx.kind))},
                  {"aired", (at - tx.start).us}});
  }
  remove_active(id, at);
}

TxOutcome MainChannel::end_transmission(TxId id, SimTime now) {
  Transmission& tx = record(id);
  if (tx.aborted_at) return TxOutcome::kAborted;
  if (!active_.count(id)) {
    throw ContractViolation("end of non-active transmission " + std::to_string(id));
  }
  if (now != tx.planned_end()) {
    throw ContractViolation("transmission " + std::to_string(id) + " ended off schedule");
  }
  const TxOutcome outcome = resolve(tx);
  if (trace_) {
    trace_->emit(now, tx.sta, "tx_end",
                 {{"tx", static_cast<std::int64_t>(id)},
                  {"kind", std::string_view(to_string(tx.kind))},
                  {"outcome", std::string_view(to_string(outcome))}});
  }
  remove_active(id, now);
  return outcome;
}

bool MainChannel::overlaps(const Transmission& a, const Transmission& b) const {
  return std::max(a.start, b.start) < std::min(a.actual_end(), b.actual_end());
}

TxOutcome MainChannel::resolve(const Transmission& tx) const {
  if (tx.aborted_at) return TxOutcome::kAborted;
  for (TxId other_id : tx.concurrent) {
    if (overlaps(tx, get(other_id))) return TxOutcome::kCollided;
  }
  return TxOutcome::kClean;
}

void MainChannel::remove_active(TxId id, SimTime at) {
  active_.erase(id);
  record(id).finished = true;
  if (active_.empty()) {
    const SimTime from = std::max(busy_since_, measure_from_);
    if (at > from) busy_accum_ += at - from;
    idle_since_ = at;
    if (listener_) listener_->on_main_idle(at);
  }
}

SimTime MainChannel::busy_time(SimTime until) const {
  SimTime total = busy_accum_;
  if (!active_.empty()) {
    const SimTime from = std::max(busy_since_, measure_from_);
    if (until > from) total += until - from;
  }
  return total;
}

void MainChannel::prune() {
  SimTime horizon = SimTime{INT64_MAX};
  for (TxId id : active_) horizon = std::min(horizon, records_[id - first_record_].start);
  while (records_.size() > 64 && records_.front().finished &&
         records_.front().actual_end() < horizon) {
    records_.pop_front();
    ++first_record_;
  }
}

ToneTransition BusyToneRegister::set(StaId sta, bool on, SimTime now) {
  ToneTransition transition = ToneTransition::kNone;
  if (on) {
    if (!asserting_.insert(sta).second) {
      throw ContractViolation("station " + std::to_string(sta) + " already asserts the busy tone");
    }
    if (asserting_.size() == 1) {
      transition = ToneTransition::kIdleToBusy;
      since_ = now;
    }
  } else {
    if (asserting_.erase(sta) == 0) {
      throw ContractViolation("station " + std::to_string(sta) +
                              " released a busy tone it does not assert");
    }
    if (asserting_.empty()) transition = ToneTransition::kBusyToIdle;
  }
  if (trace_) {
    trace_->emit(now, sta, on ? "tone_on" : "tone_off",
                 {{"transition", std::string_view(to_string(transition))}});
  }
  return transition;
}

}  // namespace tonesim
