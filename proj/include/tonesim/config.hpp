#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tonesim/bss.hpp"

namespace tonesim {

/// Configuration error carrying every problem found, one message each
/// ("line 7: ..." when the problem is tied to a line).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct ScenarioConfig {
  int n = 10;
  std::vector<int> m_list{1, 5, 10, 15, 20, 25, 30, 35, 40};
  std::vector<Scheme> schemes{Scheme::kLegacy, Scheme::kProposed};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  SimTime sim_duration = seconds(100);
  SimTime warmup = seconds(1);
  PhyConstants phy;
  EdcaParams regular = EdcaParams::best_effort();
  EdcaParams urllc = EdcaParams::urllc();
  EdcaParams legacy_urllc = EdcaParams::urllc();
  SimTime detection_delay{0};
  SimTime urllc_mean_interarrival = milliseconds(10);
  bool trace_enabled = false;

  RunConfig run_config(Scheme scheme, int m, std::uint64_t seed) const;
  std::size_t grid_size() const { return schemes.size() * m_list.size() * seeds.size(); }
};

// Parses the line-oriented `key = value` format (see README). Throws
// ConfigError listing all problems at once.
ScenarioConfig parse_config(std::string_view text);

// Checks every invariant; returns the problems found.
std::vector<std::string> validate(const ScenarioConfig& config);

}  // namespace tonesim
