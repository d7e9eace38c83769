#include "tonesim/edca.hpp"

#include <algorithm>

#include "tonesim/engine.hpp"

namespace tonesim {

SimTime aifs(const EdcaParams& params, const PhyConstants& phy) {
  return phy.sifs + params.aifsn * phy.slot_time;
}

SimTime exchange_duration(const EdcaParams& params, const PhyConstants& phy) {
  return aifs(params, phy) + params.data_airtime + phy.sifs + params.ack_airtime;
}

int contention_window(const EdcaParams& params, int retry_count) {
  std::int64_t cw = params.cw_min + 1;
  for (int i = 0; i < retry_count && cw <= params.cw_max; ++i) cw *= 2;
  return static_cast<int>(std::min<std::int64_t>(cw - 1, params.cw_max));
}

bool is_window_size(int cw) {
  if (cw < 0) return false;
  const auto v = static_cast<unsigned>(cw) + 1;
  return (v & (v - 1)) == 0;
}

std::vector<std::string> validate(const EdcaParams& p) {
  std::vector<std::string> problems;
  if (p.aifsn < 2) problems.push_back("aifsn must be >= 2");
  if (!is_window_size(p.cw_min)) problems.push_back("cw_min must be of the form 2^k-1");
  if (!is_window_size(p.cw_max)) problems.push_back("cw_max must be of the form 2^k-1");
  if (p.cw_min > p.cw_max) problems.push_back("cw_min must not exceed cw_max");
  if (p.retry_limit < 0) problems.push_back("retry_limit must be >= 0");
  if (p.data_airtime.us <= 0) problems.push_back("data_airtime_us must be positive");
  if (p.ack_airtime.us <= 0) problems.push_back("ack_airtime_us must be positive");
  if (p.payload_bits < 0) problems.push_back("payload_bits must be >= 0");
  return problems;
}

std::vector<std::string> validate(const PhyConstants& phy) {
  std::vector<std::string> problems;
  if (phy.slot_time.us <= 0) problems.push_back("slot_us must be positive");
  if (phy.sifs.us <= 0) problems.push_back("sifs_us must be positive");
  if (phy.ack_timeout_guard.us <= 0) problems.push_back("ack_timeout_guard_us must be positive");
  return problems;
}

const char* to_string(Role role) {
  return role == Role::kRegular ? "regular" : "urllc";
}

const char* to_string(TxState state) {
  switch (state) {
    case TxState::kIdle: return "idle";
    case TxState::kDeferring: return "deferring";
    case TxState::kBackoff: return "backoff";
    case TxState::kTransmitting: return "transmitting";
    case TxState::kAwaitAck: return "await_ack";
  }
  return "unknown";
}

StaState StaState::make(StaId id, Role role, const EdcaParams& params) {
  StaState s;
  s.id = id;
  s.role = role;
  s.params = params;
  s.cw_current = params.cw_min;
  return s;
}

void enqueue_frame(StaState& sta, const Frame& frame, SimTime now) {
  if (sta.head_frame) {
    throw ContractViolation("station " + std::to_string(sta.id) +
                            " received a frame while its buffer is full");
  }
  sta.head_frame = frame;
  sta.tx_state = TxState::kDeferring;
  sta.eligible_from = now;
  sta.count_start.reset();
}

void draw_backoff(StaState& sta, RngStream& rng) {
  sta.backoff_counter = static_cast<int>(rng.uniform_int(0, sta.cw_current));
  sta.drawn_backoff = sta.backoff_counter;
  sta.decrements = 0;
}

void zero_backoff(StaState& sta) {
  sta.backoff_counter = 0;
  sta.drawn_backoff = 0;
  sta.decrements = 0;
}

SlotAction on_idle_slot_boundary(StaState& sta) {
  if (sta.suspended) throw ContractViolation("slot boundary processed for a suspended station");
  if (sta.backoff_counter == 0) return SlotAction::kTransmit;
  --sta.backoff_counter;
  ++sta.decrements;
  return sta.backoff_counter == 0 ? SlotAction::kTransmit : SlotAction::kDecrement;
}

void resume_counting(StaState& sta, SimTime idle_since, SimTime aifs_time) {
  sta.count_start = std::max(idle_since, sta.eligible_from) + aifs_time;
}

SimTime backoff_expiry(const StaState& sta, SimTime slot_time) {
  return *sta.count_start + sta.backoff_counter * slot_time;
}

void freeze_backoff(StaState& sta, SimTime now, SimTime slot_time) {
  if (!sta.count_start) return;
  if (backoff_expiry(sta, slot_time) < now) {
    throw ContractViolation("station " + std::to_string(sta.id) + " missed its backoff expiry");
  }
  if (now > *sta.count_start) {
    const std::int64_t elapsed = (now - *sta.count_start).us / slot_time.us;
    for (std::int64_t i = 0; i < elapsed; ++i) on_idle_slot_boundary(sta);
  }
  sta.count_start.reset();
}

TxState contention_phase(const StaState& sta, SimTime now) {
  if (!sta.contending()) return sta.tx_state;
  if (sta.count_start && now >= *sta.count_start) return TxState::kBackoff;
  return TxState::kDeferring;
}

NextStep complete_exchange(StaState& sta, ExchangeResult result) {
  switch (result) {
    case ExchangeResult::kAckReceived:
      if (sta.tx_state != TxState::kAwaitAck) {
        throw ContractViolation("ACK received by a station not awaiting one");
      }
      sta.head_frame.reset();
      sta.retry_count = 0;
      sta.cw_current = sta.params.cw_min;
      sta.tx_state = TxState::kIdle;
      return NextStep::kDelivered;
    case ExchangeResult::kAckTimeout:
      if (sta.tx_state != TxState::kAwaitAck) {
        throw ContractViolation("ACK timeout for a station not awaiting an ACK");
      }
      ++sta.retry_count;
      if (sta.retry_count > sta.params.retry_limit) {
        sta.head_frame.reset();
        sta.retry_count = 0;
        sta.cw_current = sta.params.cw_min;
        sta.tx_state = TxState::kIdle;
        return NextStep::kDropped;
      }
      sta.cw_current = contention_window(sta.params, sta.retry_count);
      sta.tx_state = TxState::kDeferring;
      sta.count_start.reset();
      return NextStep::kRetry;
    case ExchangeResult::kPreempted:
      if (sta.tx_state != TxState::kTransmitting || sta.role != Role::kRegular) {
        throw ContractViolation("preemption of a station that is not sending regular data");
      }
      sta.tx_state = TxState::kDeferring;
      sta.count_start.reset();
      return NextStep::kRetry;
  }
  return NextStep::kRetry;
}

void check_invariants(const StaState& sta) {
  if (sta.backoff_counter < 0) throw ContractViolation("negative backoff counter");
  if (sta.cw_current != contention_window(sta.params, sta.retry_count)) {
    throw ContractViolation("station " + std::to_string(sta.id) + " has cw " +
                            std::to_string(sta.cw_current) + " at retry " +
                            std::to_string(sta.retry_count));
  }
  if (sta.suspended && sta.role != Role::kRegular) {
    throw ContractViolation("only regular stations can be suspended");
  }
}

}  // namespace tonesim
