#pragma once

#include <cstdint>
#include <optional>

#include "tonesim/edca.hpp"
#include "tonesim/time.hpp"

namespace tonesim {

/// Busy tone held by one URLLC station from frame arrival until the frame is
/// delivered or dropped.
struct ToneSession {
  StaId sta = 0;
  SimTime started_at;
  bool fast_path = false;
  std::optional<SimTime> ends_at;
};

enum class ArrivalMode : std::uint8_t { kFastPath, kContend };

const char* to_string(ArrivalMode mode);

// A station that raises its tone on an idle control channel is the only one
// with URLLC traffic and skips the backoff draw.
inline ArrivalMode arrival_mode(bool control_busy_before_assert) {
  return control_busy_before_assert ? ArrivalMode::kContend : ArrivalMode::kFastPath;
}

enum class ToneReaction : std::uint8_t { kNone, kAbort, kFreeze };

// What a regular station does when it detects a control idle->busy
// transition at `now`. `tx_end` is the planned end of its data frame when it
// is transmitting; a frame that ends exactly now finishes normally.
ToneReaction regular_tone_reaction(const StaState& sta, std::optional<SimTime> tx_end, SimTime now);

}  // namespace tonesim
