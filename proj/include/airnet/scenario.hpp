#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "airnet/solvers.hpp"

namespace airnet {

struct WeatherRecord {
  std::string timestamp;  // ISO-8601, e.g. 1998-01-01T00:30:00
  double wind_speed_m_s = 0.0;
  double wind_direction_deg = 0.0;
  double temperature_c = 20.0;

  BoundaryState boundary() const;
};

class WeatherError : public std::runtime_error {
 public:
  WeatherError(const std::string& what, std::size_t line) : std::runtime_error(what), line_(line) {}
  /// 1-based line in the CSV, header included.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline constexpr std::string_view kWeatherHeader = "timestamp,wind_speed_m_s,wind_dir_deg,temp_out_c";

/// Parses the weather CSV. Timestamps must increase strictly; a
/// non-uniform step only logs a warning.
std::vector<WeatherRecord> parse_weather(std::string_view csv);
std::vector<WeatherRecord> load_weather(const std::string& path);
std::string format_weather(std::span<const WeatherRecord> records);

/// Seconds since 1970-01-01T00:00:00 for "YYYY-MM-DDTHH:MM[:SS]".
std::optional<std::int64_t> parse_timestamp(std::string_view ts);

struct SyntheticWeatherOptions {
  int days = 10;
  int step_min = 30;
  std::uint64_t seed = 1998;
  std::string start = "1998-01-01T00:00:00";
  double mean_temp_c = 26.0;
  double diurnal_amplitude_c = 3.5;
  double mean_wind_m_s = 3.5;
  double prevailing_dir_deg = 110.0;
};

/// Diurnal sinusoidal temperature, seeded gusty wind around a prevailing
/// direction. Same options give the same series.
std::vector<WeatherRecord> synthetic_weather(const SyntheticWeatherOptions& opts);

struct TimestepRecord {
  std::string timestamp;
  Strategy strategy = Strategy::NR;
  int picard_iters_used = 0;
  int newton_iters = 0;
  bool converged_in_picard = false;
  std::optional<PicardAbort> picard_aborted;
  double max_residual = 0.0;
  PressureVector pressures;
  bool converged = false;
  /// Empty on success, otherwise the failure reason.
  std::string failure;
};

/// One solve per weather record. With warm_start each step starts from the
/// previous converged pressures; the first step and any step after a
/// failure start from zero.
std::vector<TimestepRecord> run_simulation(const Network& net, std::span<const WeatherRecord> weather,
                                           Strategy strategy, const SolverConfig& cfg, bool warm_start = true);

struct Summary {
  Strategy strategy = Strategy::NR;
  std::size_t steps = 0;
  double mean_newton = 0.0;
  double median_newton = 0.0;
  int max_newton = 0;
  /// newton_iters plus picard_iters_used on steps where Picard ran and did
  /// not finish the solve.
  double mean_with_picard = 0.0;
  double mean_picard = 0.0;
  double percent_converged_in_picard = 0.0;
  std::size_t converged_in_picard = 0;
  std::size_t picard_aborts = 0;
  std::size_t failures = 0;
};

/// Throws std::invalid_argument for an empty record list.
Summary summarize(std::span<const TimestepRecord> records);

}  // namespace airnet
