// Command-line front end: runs a (scheme x M x seed) sweep from a scenario
// file and writes the summary CSV, optional traces and plot data.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tonesim/config.hpp"
#include "tonesim/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-BSS EDCA simulator with busy-tone URLLC preemption"};
  std::string config_path;
  std::string out_path;
  std::string trace_dir;
  std::string plot_dir;
  std::string scheme;
  int m = -1;
  std::int64_t seed = -1;
  int jobs = 0;
  app.add_option("--config", config_path, "scenario file (key = value)")->required();
  app.add_option("--out", out_path, "summary CSV (default: stdout)");
  app.add_option("--trace-dir", trace_dir, "write one JSONL trace per run into this directory");
  app.add_option("--plot-dir", plot_dir, "write gnuplot two-column files into this directory");
  app.add_option("--scheme", scheme, "run only this scheme")->check(CLI::IsMember({"legacy", "proposed"}));
  app.add_option("--m", m, "run only this URLLC station count")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "run only this seed")->check(CLI::NonNegativeNumber);
  app.add_option("--jobs", jobs, "parallel runs (default: all cores)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  tonesim::ScenarioConfig config;
  try {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot read config file " << config_path << '\n';
      return kExitConfig;
    }
    std::ostringstream text;
    text << in.rdbuf();
    config = tonesim::parse_config(text.str());
    if (!scheme.empty()) config.schemes = {*tonesim::parse_scheme(scheme)};
    if (m >= 0) config.m_list = {m};
    if (seed >= 0) config.seeds = {static_cast<std::uint64_t>(seed)};
    if (const auto problems = tonesim::validate(config); !problems.empty()) {
      throw tonesim::ConfigError(problems);
    }
  } catch (const tonesim::ConfigError& e) {
    std::cerr << config_path << ": invalid configuration\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << '\n';
    return kExitConfig;
  }

  tonesim::SweepOptions options;
  options.jobs = jobs;
  if (trace_dir.empty() && config.trace_enabled) trace_dir = "traces";
  try {
    if (!trace_dir.empty()) {
      std::filesystem::create_directories(trace_dir);
      options.trace_dir = trace_dir;
    }
    if (!plot_dir.empty()) std::filesystem::create_directories(plot_dir);
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  std::vector<tonesim::RunSummary> summaries;
  try {
    summaries = tonesim::run_sweep(config, options);
  } catch (const tonesim::SweepError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }

  if (out_path.empty()) {
    tonesim::write_csv(std::cout, summaries);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << '\n';
      return kExitConfig;
    }
    tonesim::write_csv(out, summaries);
    if (!out.flush()) {
      std::cerr << "error: failed writing " << out_path << '\n';
      return kExitConfig;
    }
  }
  if (!plot_dir.empty()) {
    try {
      tonesim::write_plot_data(plot_dir, summaries);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitConfig;
    }
  }
  return kExitOk;
}
