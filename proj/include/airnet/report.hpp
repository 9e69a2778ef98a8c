#pragma once

#include <span>
#include <string>
#include <vector>

#include "airnet/scenario.hpp"

namespace airnet {

struct ComparisonReport {
  std::vector<Strategy> strategies;
  /// runs[i] holds the timestep records of strategies[i].
  std::vector<std::vector<TimestepRecord>> runs;
  std::vector<Summary> summaries;
  SolverConfig config;
  bool warm_start = true;
};

/// Runs every strategy over the whole series, one OpenMP task per strategy.
/// Throws std::invalid_argument for fewer than two strategies.
ComparisonReport run_comparison(const Network& net, std::span<const WeatherRecord> weather,
                                std::span<const Strategy> strategies, const SolverConfig& cfg,
                                bool warm_start = true);

/// Single-threaded reference for run_comparison; results are identical.
ComparisonReport run_comparison_serial(const Network& net, std::span<const WeatherRecord> weather,
                                       std::span<const Strategy> strategies, const SolverConfig& cfg,
                                       bool warm_start = true);

/// Long format: one row per timestep and strategy.
std::string timestep_csv(const Network& net, std::span<const TimestepRecord> records);
std::string timestep_csv(const Network& net, const ComparisonReport& report);
/// Wide format: one row per timestep, Newton iterations per strategy.
std::string wide_iterations_csv(const ComparisonReport& report);
std::string summary_json(const ComparisonReport& report);

std::string config_json(const SolverConfig& cfg);
/// Reads the "config" object of a summary JSON (or a bare config object).
/// Missing fields keep their defaults.
SolverConfig parse_config_json(const std::string& text);

/// Writes to a temporary sibling and renames it over the target.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace airnet
