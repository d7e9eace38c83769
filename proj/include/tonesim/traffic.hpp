#pragma once

#include <cstdint>

#include "tonesim/rng.hpp"
#include "tonesim/time.hpp"

namespace tonesim {

enum class SourceKind : std::uint8_t { kSaturated, kExpAfterSuccess };
enum class ServiceOutcome : std::uint8_t { kDelivered, kDropped };

struct SourceConfig {
  SourceKind kind = SourceKind::kSaturated;
  SimTime mean_interarrival = milliseconds(10);

  static SourceConfig saturated() { return {SourceKind::kSaturated, milliseconds(10)}; }
  static SourceConfig exp_after_success(SimTime mean) { return {SourceKind::kExpAfterSuccess, mean}; }
};

/// Closed-loop frame source: the next frame is generated only once the
/// previous one has left the station, so a station never buffers more than
/// one frame.
class TrafficSource {
 public:
  TrafficSource(SourceConfig config, RngStream rng);

  // Arrival time of the very first frame. Saturated sources start at 0;
  // exponential sources at a uniform offset in [0, mean).
  SimTime first_arrival();

  // Arrival time of the next frame after the head frame left at `at`.
  // Drops regenerate exactly like deliveries.
  SimTime on_service_complete(ServiceOutcome outcome, SimTime at);

  const SourceConfig& config() const { return config_; }

 private:
  SourceConfig config_;
  RngStream rng_;
};

}  // namespace tonesim
