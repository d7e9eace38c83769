#include "tonesim/traffic.hpp"

#include "tonesim/engine.hpp"

namespace tonesim {

TrafficSource::TrafficSource(SourceConfig config, RngStream rng)
    : config_(config), rng_(std::move(rng)) {
  if (config_.kind == SourceKind::kExpAfterSuccess && config_.mean_interarrival.us <= 0) {
    throw ContractViolation("exponential source needs a positive mean interarrival time");
  }
}

SimTime TrafficSource::first_arrival() {
  if (config_.kind == SourceKind::kSaturated) return SimTime{0};
  return SimTime{rng_.uniform_int(0, config_.mean_interarrival.us - 1)};
}

SimTime TrafficSource::on_service_complete(ServiceOutcome /*outcome*/, SimTime at) {
  if (config_.kind == SourceKind::kSaturated) return at;
  return at + rng_.exponential(config_.mean_interarrival);
}

}  // namespace tonesim
