#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tonesim/edca.hpp"
#include "tonesim/time.hpp"

namespace tonesim {

enum class Scheme : std::uint8_t { kLegacy, kProposed };

const char* to_string(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view text);

struct RunSummary {
  Scheme scheme = Scheme::kLegacy;
  int m = 0;
  int n = 0;
  std::uint64_t seed = 0;
  SimTime sim_duration;
  SimTime warmup;

  // Absent when no URLLC frame that arrived after warm-up was delivered.
  std::optional<double> urllc_delay_mean_us;
  std::optional<SimTime> urllc_delay_median;
  std::optional<SimTime> urllc_delay_p95;
  std::optional<SimTime> urllc_delay_p99;
  std::optional<SimTime> urllc_delay_max;

  // Frame counters cover frames whose arrival is at or after warm-up.
  std::int64_t urllc_arrivals = 0;
  std::int64_t urllc_delivered = 0;
  std::int64_t urllc_dropped = 0;
  std::int64_t urllc_in_flight = 0;
  std::int64_t regular_arrivals = 0;
  std::int64_t regular_delivered = 0;
  std::int64_t regular_dropped = 0;
  std::int64_t regular_in_flight = 0;

  // Event counters cover events at or after warm-up.
  std::int64_t urllc_collided = 0;
  std::int64_t regular_collided = 0;
  std::int64_t regular_preempted = 0;

  double regular_throughput_bps = 0.0;
  double channel_busy_fraction = 0.0;

  std::vector<std::int64_t> per_station_delivered;
};

// Nearest-rank percentile of an ascending sample, p in (0, 100].
SimTime nearest_rank(const std::vector<SimTime>& sorted, double p);

/// Accumulates per-frame and per-event records during one run.
class MetricsCollector {
 public:
  MetricsCollector(SimTime warmup, int stations);

  void on_arrival(const Frame& frame);
  // Terminal record of a frame that was delivered or dropped.
  void record_frame(const Frame& frame, bool delivered, std::int64_t payload_bits);
  void on_collision(FrameKind kind, SimTime t);
  void on_preempt(SimTime t);

  // `in_flight` are the head frames still buffered when the run stops.
  RunSummary finalize(Scheme scheme, int m, int n, std::uint64_t seed, SimTime sim_duration,
                      SimTime busy_time, const std::vector<Frame>& in_flight) const;

 private:
  bool counts(SimTime t) const { return t >= warmup_; }

  SimTime warmup_;
  std::vector<SimTime> urllc_delays_;
  std::int64_t urllc_arrivals_ = 0, urllc_delivered_ = 0, urllc_dropped_ = 0;
  std::int64_t regular_arrivals_ = 0, regular_delivered_ = 0, regular_dropped_ = 0;
  std::int64_t urllc_collided_ = 0, regular_collided_ = 0, regular_preempted_ = 0;
  std::int64_t regular_bits_ = 0;
  std::vector<std::int64_t> per_station_delivered_;
};

// CSV contract of the summary file.
std::string csv_header();
std::string csv_row(const RunSummary& s);

// Fixed-point decimal rendering, independent of the locale.
std::string format_fixed(double value, int decimals);

}  // namespace tonesim
