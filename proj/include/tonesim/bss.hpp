#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "tonesim/edca.hpp"
#include "tonesim/engine.hpp"
#include "tonesim/medium.hpp"
#include "tonesim/metrics.hpp"
#include "tonesim/rng.hpp"
#include "tonesim/trace.hpp"
#include "tonesim/traffic.hpp"
#include "tonesim/urllc.hpp"

namespace tonesim {

/// Everything one simulation run needs.
struct RunConfig {
  Scheme scheme = Scheme::kProposed;
  int n_regular = 10;
  int n_urllc = 1;
  std::uint64_t seed = 1;
  SimTime sim_duration = seconds(100);
  SimTime warmup = seconds(1);
  PhyConstants phy;
  EdcaParams regular = EdcaParams::best_effort();
  EdcaParams urllc = EdcaParams::urllc();
  // Parameters of URLLC stations when the scheme is disabled.
  EdcaParams legacy_urllc = EdcaParams::urllc();
  SimTime detection_delay{0};
  SimTime urllc_mean_interarrival = milliseconds(10);
  // When false no arrivals are generated; tests inject them with
  // Bss::schedule_arrival and sources do not regenerate frames.
  bool autostart_sources = true;
};

/// One basic service set: N saturated regular stations, M URLLC stations and
/// an access point that acknowledges data frames. Every station hears every
/// other station and both channels.
class Bss final : private ChannelListener {
 public:
  explicit Bss(const RunConfig& config, TraceSink* trace = nullptr);
  Bss(const Bss&) = delete;
  Bss& operator=(const Bss&) = delete;

  // Runs to config.sim_duration and returns the summary.
  RunSummary run();

  // Incremental stepping, used by timeline tests.
  void run_until(SimTime t);
  RunSummary summary() const;
  void schedule_arrival(StaId sta, SimTime at);

  const RunConfig& config() const { return config_; }
  SimTime now() const { return engine_.now(); }
  const StaState& station(StaId id) const { return stations_.at(static_cast<std::size_t>(id)).mac; }
  const std::optional<ToneSession>& tone_session(StaId id) const {
    return stations_.at(static_cast<std::size_t>(id)).tone;
  }
  int station_count() const { return static_cast<int>(stations_.size()); }
  const MainChannel& main_channel() const { return main_; }
  const BusyToneRegister& control_channel() const { return tone_; }
  const Engine& engine() const { return engine_; }
  bool scheme_enabled() const { return config_.scheme == Scheme::kProposed; }

 private:
  struct Station {
    StaState mac;
    TrafficSource source;
    RngStream backoff_rng;
    std::optional<TxId> tx;
    EventHandle tx_end;
    EventHandle ack_timeout;
    std::optional<ToneSession> tone;
  };

  // Event dispatch.
  void handle(const Event& ev);
  void on_arrival(StaId id);
  void on_slot_boundary();
  void on_tx_end(TxId id);
  void on_ack_start(StaId sender);
  void on_ack_timeout(StaId id);

  // ChannelListener.
  void on_main_busy(SimTime t) override;
  void on_main_idle(SimTime t) override;

  // EDCA flow.
  void start_contention(Station& st);
  void begin_data(Station& st);
  void deliver(Station& st);
  void regenerate(Station& st, ServiceOutcome outcome);
  void reschedule_wakeup();
  SimTime aifs_of(const Station& st) const { return aifs(st.mac.params, config_.phy); }

  // Busy-tone scheme (urllc.cpp).
  void urllc_on_arrival(Station& st, const Frame& frame);
  void urllc_collision_retry(Station& st);
  void tone_release(Station& st, ServiceOutcome reason);
  void signal_control_transition(ToneTransition transition);
  void on_control_transition(bool busy);

  void trace(StaId sta, std::string_view ev, std::initializer_list<TraceField> fields);

  RunConfig config_;
  TraceSink* trace_;
  Engine engine_;
  MainChannel main_;
  BusyToneRegister tone_;
  std::vector<Station> stations_;
  MetricsCollector metrics_;
  std::map<TxId, StaId> ack_owner_;
  EventHandle wakeup_;
  std::int64_t next_frame_id_ = 0;
  bool started_ = false;
};

// Convenience wrapper: builds a Bss, runs it, returns the summary.
RunSummary simulate(const RunConfig& config, TraceSink* trace = nullptr);

}  // namespace tonesim
