#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tonesim/config.hpp"
#include "tonesim/metrics.hpp"

namespace tonesim {

struct GridPoint {
  Scheme scheme = Scheme::kLegacy;
  int m = 0;
  std::uint64_t seed = 0;
};

// Grid points in (scheme, M, seed) order.
std::vector<GridPoint> sweep_grid(const ScenarioConfig& config);

/// A run aborted on a contract violation.
class SweepError : public std::runtime_error {
 public:
  SweepError(GridPoint point, const std::string& what);
  const GridPoint& point() const { return point_; }

 private:
  GridPoint point_;
};

struct SweepOptions {
  int jobs = 0;  // <= 0: OpenMP default
  std::optional<std::filesystem::path> trace_dir;
};

// One run; writes its JSONL trace when a trace directory is given.
RunSummary run_point(const ScenarioConfig& config, const GridPoint& point,
                     const std::optional<std::filesystem::path>& trace_dir = std::nullopt);

// Runs every grid point across an OpenMP worker pool. Each run keeps its own
// single-threaded engine, so results do not depend on the schedule.
std::vector<RunSummary> run_sweep(const ScenarioConfig& config, const SweepOptions& options = {});

// Reference implementation: the same grid, one point after another.
std::vector<RunSummary> run_sweep_serial(const ScenarioConfig& config,
                                         const std::optional<std::filesystem::path>& trace_dir = std::nullopt);

std::filesystem::path trace_file_name(const GridPoint& point);

void write_csv(std::ostream& out, const std::vector<RunSummary>& summaries);

// Two-column "M value" files, averaged over seeds, one per (scheme, metric):
// <scheme>_urllc_delay_mean_us.dat, <scheme>_regular_throughput_bps.dat, ...
void write_plot_data(const std::filesystem::path& dir, const std::vector<RunSummary>& summaries);

}  // namespace tonesim
