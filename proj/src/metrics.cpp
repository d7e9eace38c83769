#include "tonesim/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "tonesim/engine.hpp"

namespace tonesim {

const char* to_string(Scheme scheme) {
  return scheme == Scheme::kLegacy ? "legacy" : "proposed";
}

std::optional<Scheme> parse_scheme(std::string_view text) {
  if (text == "legacy") return Scheme::kLegacy;
  if (text == "proposed") return Scheme::kProposed;
  return std::nullopt;
}

SimTime nearest_rank(const std::vector<SimTime>& sorted, double p) {
  if (sorted.empty()) throw ContractViolation("percentile of an empty sample");
  if (!(p > 0.0 && p <= 100.0)) throw ContractViolation("percentile outside (0, 100]");
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(sorted.size())));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

MetricsCollector::MetricsCollector(SimTime warmup, int stations)
    : warmup_(warmup), per_station_delivered_(static_cast<std::size_t>(stations), 0) {}

void MetricsCollector::on_arrival(const Frame& frame) {
  if (!counts(frame.arrival_time)) return;
  if (frame.kind == FrameKind::kUrllcData) {
    ++urllc_arrivals_;
  } else {
    ++regular_arrivals_;
  }
}

void MetricsCollector::record_frame(const Frame& frame, bool delivered, std::int64_t payload_bits) {
  if (!counts(frame.arrival_time)) return;
  const bool urllc = frame.kind == FrameKind::kUrllcData;
  if (!delivered) {
    ++(urllc ? urllc_dropped_ : regular_dropped_);
    return;
  }
  if (!frame.delivery_time || *frame.delivery_time < frame.arrival_time) {
    throw ContractViolation("delivered frame without a valid delivery time");
  }
  ++per_station_delivered_.at(static_cast<std::size_t>(frame.source));
  if (urllc) {
    ++urllc_delivered_;
    urllc_delays_.push_back(*frame.delivery_time - frame.arrival_time);
  } else {
    ++regular_delivered_;
    regular_bits_ += payload_bits;
  }
}

void MetricsCollector::on_collision(FrameKind kind, SimTime t) {
  if (!counts(t)) return;
  if (kind == FrameKind::kUrllcData) ++urllc_collided_;
  if (kind == FrameKind::kRegularData) ++regular_collided_;
}

void MetricsCollector::on_preempt(SimTime t) {
  if (counts(t)) ++regular_preempted_;
}

RunSummary MetricsCollector::finalize(Scheme scheme, int m, int n, std::uint64_t seed,
                                      SimTime sim_duration, SimTime busy_time,
                                      const std::vector<Frame>& in_flight) const {
  RunSummary s;
  s.scheme = scheme;
  s.m = m;
  s.n = n;
  s.seed = seed;
  s.sim_duration = sim_duration;
  s.warmup = warmup_;
  s.urllc_arrivals = urllc_arrivals_;
  s.urllc_delivered = urllc_delivered_;
  s.urllc_dropped = urllc_dropped_;
  s.regular_arrivals = regular_arrivals_;
  s.regular_delivered = regular_delivered_;
  s.regular_dropped = regular_dropped_;
  s.urllc_collided = urllc_collided_;
  s.regular_collided = regular_collided_;
  s.regular_preempted = regular_preempted_;
  s.per_station_delivered = per_station_delivered_;
  for (const Frame& f : in_flight) {
    if (!counts(f.arrival_time)) continue;
    ++(f.kind == FrameKind::kUrllcData ? s.urllc_in_flight : s.regular_in_flight);
  }

  if (!urllc_delays_.empty()) {
    std::vector<SimTime> sorted = urllc_delays_;
    std::sort(sorted.begin(), sorted.end());
    std::int64_t total = 0;
    for (SimTime d : sorted) total += d.us;
    s.urllc_delay_mean_us = static_cast<double>(total) / static_cast<double>(sorted.size());
    s.urllc_delay_median = nearest_rank(sorted, 50.0);
    s.urllc_delay_p95 = nearest_rank(sorted, 95.0);
    s.urllc_delay_p99 = nearest_rank(sorted, 99.0);
    s.urllc_delay_max = sorted.back();
  }

  const double interval_s = static_cast<double>((sim_duration - warmup_).us) / 1e6;
  if (interval_s > 0) {
    s.regular_throughput_bps = static_cast<double>(regular_bits_) / interval_s;
    s.channel_busy_fraction =
        static_cast<double>(busy_time.us) / static_cast<double>((sim_duration - warmup_).us);
  }
  return s;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, decimals);
  return std::string(buf, res.ptr);
}

std::string csv_header() {
  return "scheme,M,N,seed,urllc_delay_mean_us,urllc_delay_p99_us,urllc_delivered,urllc_dropped,"
         "urllc_collided,regular_throughput_bps,regular_delivered,regular_preempted,"
         "channel_busy_fraction,sim_duration_us,warmup_us";
}

std::string csv_row(const RunSummary& s) {
  std::string row;
  row += to_string(s.scheme);
  row += ',' + std::to_string(s.m);
  row += ',' + std::to_string(s.n);
  row += ',' + std::to_string(s.seed);
  row += ',';
  if (s.urllc_delay_mean_us) row += format_fixed(*s.urllc_delay_mean_us, 3);
  row += ',';
  if (s.urllc_delay_p99) row += std::to_string(s.urllc_delay_p99->us);
  row += ',' + std::to_string(s.urllc_delivered);
  row += ',' + std::to_string(s.urllc_dropped);
  row += ',' + std::to_string(s.urllc_collided);
  row += ',' + format_fixed(s.regular_throughput_bps, 3);
  row += ',' + std::to_string(s.regular_delivered);
  row += ',' + std::to_string(s.regular_preempted);
  row += ',' + format_fixed(s.channel_busy_fraction, 6);
  row += ',' + std::to_string(s.sim_duration.us);
  row += ',' + std::to_string(s.warmup.us);
  return row;
}

}  // namespace tonesim
