#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tonesim/medium.hpp"
#include "tonesim/rng.hpp"
#include "tonesim/time.hpp"

namespace tonesim {

struct PhyConstants {
  SimTime slot_time = microseconds(9);
  SimTime sifs = microseconds(16);
  SimTime ack_timeout_guard = microseconds(9);
};

/// Contention parameters and frame airtimes of one access category.
struct EdcaParams {
  int aifsn = 3;
  int cw_min = 15;
  int cw_max = 1023;
  int retry_limit = 7;
  SimTime data_airtime = microseconds(2000);
  SimTime ack_airtime = microseconds(44);
  std::int64_t payload_bits = 129760;

  static EdcaParams best_effort() { return EdcaParams{}; }
  static EdcaParams urllc() {
    return EdcaParams{2, 3, 15, 7, microseconds(200), microseconds(44), 8000};
  }
};

/// Longest regular frame airtime accepted by configuration.
inline constexpr SimTime kMaxRegularAirtime = microseconds(5484);

SimTime aifs(const EdcaParams& params, const PhyConstants& phy);

// Length of a successful exchange: AIFS + data + SIFS + ACK, no backoff.
SimTime exchange_duration(const EdcaParams& params, const PhyConstants& phy);

// min((cw_min+1) * 2^retry - 1, cw_max)
int contention_window(const EdcaParams& params, int retry_count);

bool is_window_size(int cw);  // of the form 2^k - 1

// Problems with the parameter set, empty when valid.
std::vector<std::string> validate(const EdcaParams& params);
std::vector<std::string> validate(const PhyConstants& phy);

enum class Role : std::uint8_t { kRegular, kUrllc };
enum class TxState : std::uint8_t { kIdle, kDeferring, kBackoff, kTransmitting, kAwaitAck };

const char* to_string(Role role);
const char* to_string(TxState state);

struct Frame {
  std::int64_t id = 0;
  StaId source = 0;
  SimTime arrival_time;
  std::optional<SimTime> delivery_time;
  FrameKind kind = FrameKind::kRegularData;
};

/// Transmit-side EDCA state of one station carrying a single access category.
struct StaState {
  StaId id = 0;
  Role role = Role::kRegular;
  EdcaParams params;
  TxState tx_state = TxState::kIdle;
  int backoff_counter = 0;
  int retry_count = 0;
  int cw_current = 0;
  std::optional<Frame> head_frame;
  bool suspended = false;

  // Earliest instant from which the station may start sensing AIFS, e.g. the
  // moment the frame arrived or a suspension ended.
  SimTime eligible_from;
  // Set while the main channel is idle and the station is counting: the
  // instant AIFS completes and slot counting starts.
  std::optional<SimTime> count_start;
  int drawn_backoff = 0;
  int decrements = 0;

  static StaState make(StaId id, Role role, const EdcaParams& params);

  bool contending() const {
    return tx_state == TxState::kDeferring || tx_state == TxState::kBackoff;
  }
  bool counting() const { return contending() && count_start.has_value() && !suspended; }
};

enum class SlotAction : std::uint8_t { kDecrement, kTransmit };
enum class ExchangeResult : std::uint8_t { kAckReceived, kAckTimeout, kPreempted };
enum class NextStep : std::uint8_t { kDelivered, kRetry, kDropped };

// Places a frame at the head of the (single-frame) buffer and moves the
// station into deferral. Throws if a head frame is already pending.
void enqueue_frame(StaState& sta, const Frame& frame, SimTime now);

// Draws a fresh backoff from [0, cw_current].
void draw_backoff(StaState& sta, RngStream& rng);

// Skips the draw: the station transmits as soon as AIFS completes.
void zero_backoff(StaState& sta);

// One idle slot boundary during backoff.
SlotAction on_idle_slot_boundary(StaState& sta);

// Starts (or restarts) counting once the main channel is idle.
void resume_counting(StaState& sta, SimTime idle_since, SimTime aifs_time);

// Instant the counter reaches zero if the main channel stays idle.
SimTime backoff_expiry(const StaState& sta, SimTime slot_time);

// The main channel turned busy at `now`: apply the idle slot boundaries that
// elapsed since counting started, then stop counting.
void freeze_backoff(StaState& sta, SimTime now, SimTime slot_time);

// Tx state refinement for a contending station: deferring until AIFS has
// elapsed, backoff afterwards.
TxState contention_phase(const StaState& sta, SimTime now);

NextStep complete_exchange(StaState& sta, ExchangeResult result);

// Throws ContractViolation if cw_current disagrees with retry_count.
void check_invariants(const StaState& sta);

}  // namespace tonesim
