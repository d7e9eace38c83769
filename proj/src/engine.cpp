#include "tonesim/engine.hpp"

namespace tonesim {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kSlotBoundary: return "slot-boundary";
    case EventKind::kTxEnd: return "tx-end";
    case EventKind::kAckStart: return "ack-start";
    case EventKind::kAckTimeout: return "ack-timeout";
    case EventKind::kArrival: return "arrival";
    case EventKind::kBusyToneOn: return "busy-tone-on";
    case EventKind::kBusyToneOff: return "busy-tone-off";
    case EventKind::kSimEnd: return "sim-end";
  }
  return "unknown";
}

EventHandle Engine::schedule(SimTime fire_at, StaId target, EventKind kind, std::int64_t payload) {
  if (fire_at < now_) {
    throw ContractViolation("event " + std::string(to_string(kind)) + " scheduled at " +
                            std::to_string(fire_at.us) + " us, before now (" +
                            std::to_string(now_.us) + " us)");
  }
  Event ev{fire_at, next_seq_++, target, kind, payload};
  queue_.insert(ev);
  return EventHandle{ev.fire_at, ev.seq, true};
}

bool Engine::cancel(EventHandle& handle) {
  if (!handle.valid) return false;
  handle.valid = false;
  Event key{handle.fire_at, handle.seq};
  return queue_.erase(key) > 0;
}

bool Engine::is_pending(const EventHandle& handle) const {
  if (!handle.valid) return false;
  return queue_.count(Event{handle.fire_at, handle.seq}) > 0;
}

std::uint64_t Engine::run_until(SimTime t_end) {
  if (t_end < now_) {
    throw ContractViolation("run_until target " + std::to_string(t_end.us) + " us is in the past");
  }
  std::uint64_t count = 0;
  while (!queue_.empty()) {
    auto it = queue_.begin();
    if (it->fire_at > t_end) break;
    Event ev = *it;
    queue_.erase(it);
    now_ = ev.fire_at;
    ++count;
    ++dispatched_;
    if (handler_) handler_(ev);
  }
  now_ = t_end;
  return count;
}

}  // namespace tonesim
