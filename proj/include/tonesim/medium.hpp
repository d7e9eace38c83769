#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <vector>

#include "tonesim/time.hpp"
#include "tonesim/trace.hpp"

namespace tonesim {

enum class FrameKind : std::uint8_t { kRegularData, kUrllcData, kAck };
enum class TxOutcome : std::uint8_t { kClean, kCollided, kAborted };
enum class ToneTransition : std::uint8_t { kNone, kIdleToBusy, kBusyToIdle };

const char* to_string(FrameKind kind);
const char* to_string(TxOutcome outcome);
const char* to_string(ToneTransition transition);

using TxId = std::uint64_t;

struct Transmission {
  TxId id = 0;
  StaId sta = kAccessPoint;
  FrameKind kind = FrameKind::kRegularData;
  SimTime start;
  SimTime duration;
  std::optional<SimTime> aborted_at;
  bool finished = false;
  // Transmissions that were on air together with this one at some instant.
  std::vector<TxId> concurrent;

  SimTime planned_end() const { return start + duration; }
  SimTime actual_end() const { return aborted_at ? *aborted_at : planned_end(); }
};

/// Receives main-channel busy/idle transitions at the instant they happen.
class ChannelListener {
 public:
  virtual ~ChannelListener() = default;
  virtual void on_main_busy(SimTime t) = 0;
  virtual void on_main_idle(SimTime t) = 0;
};

/// Main data channel. Airtime intervals are half-open [start, end). A
/// transmission is delivered iff no other transmission's actual interval
/// intersects its own; aborted transmissions keep their truncated interval.
class MainChannel {
 public:
  explicit MainChannel(SimTime measure_from = SimTime{0}) : measure_from_(measure_from) {}

  void set_listener(ChannelListener* listener) { listener_ = listener; }
  void set_trace(TraceSink* trace) { trace_ = trace; }

  TxId begin_transmission(StaId sta, FrameKind kind, SimTime duration, SimTime now,
                          std::int64_t frame = -1);
  void abort_transmission(TxId id, SimTime at);
  TxOutcome end_transmission(TxId id, SimTime now);

  bool is_busy() const { return !active_.empty(); }
  bool is_transmitting(StaId sta) const;
  const Transmission& get(TxId id) const;
  // Start of the current idle period. Meaningless while busy.
  SimTime idle_since() const { return idle_since_; }

  // Measure of the union of airtime intervals inside [measure_from, until].
  SimTime busy_time(SimTime until) const;

 private:
  Transmission& record(TxId id);
  bool overlaps(const Transmission& a, const Transmission& b) const;
  TxOutcome resolve(const Transmission& tx) const;
  void remove_active(TxId id, SimTime at);
  void prune();

  ChannelListener* listener_ = nullptr;
  TraceSink* trace_ = nullptr;
  std::deque<Transmission> records_;
  TxId first_record_ = 0;
  TxId next_id_ = 0;
  std::set<TxId> active_;
  SimTime idle_since_{0};
  SimTime busy_since_{0};
  SimTime busy_accum_{0};
  SimTime measure_from_;
};

/// Narrowband control channel carrying the busy tone.
class BusyToneRegister {
 public:
  void set_trace(TraceSink* trace) { trace_ = trace; }

  ToneTransition set(StaId sta, bool on, SimTime now);
  bool is_busy() const { return !asserting_.empty(); }
  bool is_asserting(StaId sta) const { return asserting_.count(sta) > 0; }
  SimTime since() const { return since_; }
  std::size_t asserting_count() const { return asserting_.size(); }

 private:
  TraceSink* trace_ = nullptr;
  std::set<StaId> asserting_;
  SimTime since_{0};
};

}  // namespace tonesim
