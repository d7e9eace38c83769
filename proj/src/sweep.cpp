#include "tonesim/sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <fstream>
#include <map>
#include <utility>

#include "tonesim/bss.hpp"
#include "tonesim/trace.hpp"

namespace tonesim {

SweepError::SweepError(GridPoint point, const std::string& what)
    : std::runtime_error("run scheme=" + std::string(to_string(point.scheme)) +
                         " M=" + std::to_string(point.m) + " seed=" + std::to_string(point.seed) +
                         " failed: " + what),
      point_(point) {}

std::vector<GridPoint> sweep_grid(const ScenarioConfig& config) {
  std::vector<GridPoint> grid;
  grid.reserve(config.grid_size());
  for (Scheme scheme : {Scheme::kLegacy, Scheme::kProposed}) {
    bool wanted = false;
    for (Scheme s : config.schemes) wanted = wanted || s == scheme;
    if (!wanted) continue;
    std::vector<int> ms = config.m_list;
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    std::vector<std::uint64_t> seeds = config.seeds;
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    for (int m : ms) {
      for (std::uint64_t seed : seeds) grid.push_back(GridPoint{scheme, m, seed});
    }
  }
  return grid;
}

std::filesystem::path trace_file_name(const GridPoint& point) {
  return std::string(to_string(point.scheme)) + "_M" + std::to_string(point.m) + "_seed" +
         std::to_string(point.seed) + ".jsonl";
}

RunSummary run_point(const ScenarioConfig& config, const GridPoint& point,
                     const std::optional<std::filesystem::path>& trace_dir) {
  const RunConfig rc = config.run_config(point.scheme, point.m, point.seed);
  try {
    if (!trace_dir) return simulate(rc);
    const auto path = *trace_dir / trace_file_name(point);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write trace file " + path.string());
    JsonlTraceWriter writer(out);
    return simulate(rc, &writer);
  } catch (const ContractViolation& e) {
    throw SweepError(point, e.what());
  }
}

std::vector<RunSummary> run_sweep(const ScenarioConfig& config, const SweepOptions& options) {
  const std::vector<GridPoint> grid = sweep_grid(config);
  std::vector<std::optional<RunSummary>> results(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  const int threads = options.jobs > 0 ? options.jobs : omp_get_max_threads();
  const auto count = static_cast<std::int64_t>(grid.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      results[idx] = run_point(config, grid[idx], options.trace_dir);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }

  std::vector<RunSummary> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*results[i]));
  }
  return out;
}

std::vector<RunSummary> run_sweep_serial(const ScenarioConfig& config,
                                         const std::optional<std::filesystem::path>& trace_dir) {
  std::vector<RunSummary> out;
  for (const GridPoint& point : sweep_grid(config)) out.push_back(run_point(config, point, trace_dir));
  return out;
}

void write_csv(std::ostream& out, const std::vector<RunSummary>& summaries) {
  out << csv_header() << '\n';
  for (const RunSummary& s : summaries) out << csv_row(s) << '\n';
}

void write_plot_data(const std::filesystem::path& dir, const std::vector<RunSummary>& summaries) {
  struct Acc {
    double sum = 0;
    int n = 0;
  };
  using Key = std::pair<Scheme, int>;
  std::map<Key, Acc> delay, throughput, busy;
  for (const RunSummary& s : summaries) {
    const Key key{s.scheme, s.m};
    if (s.urllc_delay_mean_us) {
      delay[key].sum += *s.urllc_delay_mean_us;
      ++delay[key].n;
    }
    throughput[key].sum += s.regular_throughput_bps;
    ++throughput[key].n;
    busy[key].sum += s.channel_busy_fraction;
    ++busy[key].n;
  }
  auto dump = [&](const std::map<Key, Acc>& data, const std::string& metric) {
    for (Scheme scheme : {Scheme::kLegacy, Scheme::kProposed}) {
      std::string body;
      for (const auto& [key, acc] : data) {
        if (key.first != scheme || acc.n == 0) continue;
        body += std::to_string(key.second) + ' ' + format_fixed(acc.sum / acc.n, 6) + '\n';
      }
      if (body.empty()) continue;
      const auto path = dir / (std::string(to_string(scheme)) + "_" + metric + ".dat");
      std::ofstream out(path);
      if (!out) throw std::runtime_error("cannot write " + path.string());
      out << "# M " << metric << " (mean over seeds)\n" << body;
    }
  };
  dump(delay, "urllc_delay_mean_us");
  dump(throughput, "regular_throughput_bps");
  dump(busy, "channel_busy_fraction");
}

}  // namespace tonesim
