#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>

#include "tonesim/time.hpp"

namespace tonesim {

/// Raised when a caller breaks a documented precondition. A run that hits one
/// is aborted; the sweep reports which grid point failed.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class EventKind : std::uint8_t {
  kSlotBoundary,  // backoff of one or more stations reaches zero
  kTxEnd,
  kAckStart,
  kAckTimeout,
  kArrival,
  kBusyToneOn,   // detection of a control-channel idle->busy transition
  kBusyToneOff,  // detection of a control-channel busy->idle transition
  kSimEnd,
};

const char* to_string(EventKind kind);

struct Event {
  SimTime fire_at;
  std::uint64_t seq = 0;
  StaId target = kAccessPoint;
  EventKind kind = EventKind::kSimEnd;
  std::int64_t payload = 0;
};

struct EventHandle {
  SimTime fire_at;
  std::uint64_t seq = 0;
  bool valid = false;
};

/// Single-threaded discrete-event core. Events are dispatched in
/// (fire_at, insertion sequence) order.
class Engine {
 public:
  using Handler = std::function<void(const Event&)>;

  Engine() = default;
  explicit Engine(Handler handler) : handler_(std::move(handler)) {}

  void set_handler(Handler handler) { handler_ = std::move(handler); }

  SimTime now() const { return now_; }

  EventHandle schedule(SimTime fire_at, StaId target, EventKind kind, std::int64_t payload = 0);

  // Returns true if the event was still pending and has now been suppressed.
  bool cancel(EventHandle& handle);

  bool is_pending(const EventHandle& handle) const;

  // Dispatches every event with fire_at <= t_end; the clock finishes at t_end.
  std::uint64_t run_until(SimTime t_end);

  std::size_t pending() const { return queue_.size(); }
  std::uint64_t dispatched() const { return dispatched_; }

 private:
  struct Order {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at < b.fire_at;
      return a.seq < b.seq;
    }
  };

  Handler handler_;
  std::set<Event, Order> queue_;
  SimTime now_{};
  std::uint64_t next_seq_ = 0;
  std::uint64_t dispatched_ = 0;
};

}  // namespace tonesim
