#include "tonesim/rng.hpp"

#include <cmath>

#include "tonesim/engine.hpp"

namespace tonesim {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, StaId sta, StreamPurpose purpose) {
  // seed_seq's mixing algorithm is fixed by the standard.
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(sta + 2),
                    static_cast<std::uint32_t>(purpose)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, StaId sta, StreamPurpose purpose)
    : engine_(make_engine(seed, sta, purpose)) {}

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) {
    throw ContractViolation("uniform_int: lo " + std::to_string(lo) + " > hi " + std::to_string(hi));
  }
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next_u64());  // full 64-bit range
  // Rejection sampling removes modulo bias.
  const std::uint64_t threshold = (0 - span) % span;  // 2^64 mod span
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x < threshold);
  return lo + static_cast<std::int64_t>(x % span);
}

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

SimTime RngStream::exponential(SimTime mean) {
  if (mean.us <= 0) throw ContractViolation("exponential: mean must be positive");
  const double u = uniform01();
  const double x = -static_cast<double>(mean.us) * std::log1p(-u);
  const auto rounded = static_cast<std::int64_t>(std::llround(x));
  return SimTime{rounded < 1 ? 1 : rounded};
}

}  // namespace tonesim
