#pragma once

#include <cstdint>
#include <random>

#include "tonesim/time.hpp"

namespace tonesim {

enum class StreamPurpose : std::uint32_t {
  kBackoff = 0,
  kArrival = 1,
};

/// Deterministic pseudo-random stream keyed by (master seed, station, purpose).
/// Draw transforms are written out by hand so the sequences do not depend on
/// the standard library's distribution implementations.
class RngStream {
 public:
  RngStream(std::uint64_t seed, StaId sta, StreamPurpose purpose);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform01();

  // Exponential with the given mean, rounded to the microsecond, at least 1 us.
  SimTime exponential(SimTime mean);

 private:
  std::mt19937_64 engine_;
};

}  // namespace tonesim
