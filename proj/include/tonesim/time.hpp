#pragma once

#include <compare>
#include <cstdint>

namespace tonesim {

/// Simulated time in integer microseconds.
struct SimTime {
  std::int64_t us = 0;

  constexpr SimTime() = default;
  constexpr explicit SimTime(std::int64_t micros) : us(micros) {}

  friend constexpr auto operator<=>(SimTime, SimTime) = default;

  constexpr SimTime& operator+=(SimTime o) {
    us += o.us;
    return *this;
  }
  constexpr SimTime& operator-=(SimTime o) {
    us -= o.us;
    return *this;
  }
  friend constexpr SimTime operator+(SimTime a, SimTime b) { return SimTime{a.us + b.us}; }
  friend constexpr SimTime operator-(SimTime a, SimTime b) { return SimTime{a.us - b.us}; }
  friend constexpr SimTime operator*(std::int64_t k, SimTime t) { return SimTime{k * t.us}; }
  friend constexpr SimTime operator*(SimTime t, std::int64_t k) { return SimTime{k * t.us}; }
};

constexpr SimTime microseconds(std::int64_t n) { return SimTime{n}; }
constexpr SimTime milliseconds(std::int64_t n) { return SimTime{n * 1000}; }
constexpr SimTime seconds(std::int64_t n) { return SimTime{n * 1000000}; }

/// Station identifier. Stations are numbered 0..n-1; the access point that
/// answers with ACKs uses kAccessPoint.
using StaId = std::int32_t;
inline constexpr StaId kAccessPoint = -1;

}  // namespace tonesim
