#include "airnet/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "airnet/log.hpp"

namespace airnet {

BoundaryState WeatherRecord::boundary() const {
  return BoundaryState::make(wind_speed_m_s, wind_direction_deg, temperature_c + 273.15);
}

std::optional<std::int64_t> parse_timestamp(std::string_view ts) {
  int y = 0;
  unsigned mo = 0, d = 0, h = 0, mi = 0, s = 0;
  std::string buf(ts);
  char tail = 0;
  const int got = std::sscanf(buf.c_str(), "%4d-%2u-%2uT%2u:%2u:%2u%c", &y, &mo, &d, &h, &mi, &s, &tail);
  if (got == 5) s = 0;
  else if (got != 6) return std::nullopt;
  const std::size_t expected = got == 5 ? 16 : 19;
  if (buf.size() != expected || h > 23 || mi > 59 || s > 59) return std::nullopt;
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd}.time_since_epoch().count() * 86400LL + h * 3600LL + mi * 60LL + s;
}

namespace {

std::string format_timestamp(std::int64_t secs) {
  using namespace std::chrono;
  const auto days = static_cast<int>(std::floor(static_cast<double>(secs) / 86400.0));
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  const auto rem = secs - static_cast<std::int64_t>(days) * 86400;
  char out[32];
  std::snprintf(out, sizeof out, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), static_cast<int>(rem / 3600),
                static_cast<int>(rem / 60 % 60), static_cast<int>(rem % 60));
  return out;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

double round_to(double v, double unit) { return std::round(v / unit) * unit; }

}  // namespace

std::vector<WeatherRecord> parse_weather(std::string_view csv) {
  std::vector<WeatherRecord> out;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::optional<std::int64_t> prev_time;
  std::optional<std::int64_t> step;
  bool warned = false;

  std::size_t start = 0;
  while (start <= csv.size()) {
    auto end = csv.find('\n', start);
    if (end == std::string_view::npos) end = csv.size();
    auto line = trim(csv.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) {
      if (end == csv.size()) break;
      continue;
    }
    if (!header_seen) {
      if (line != kWeatherHeader)
        throw WeatherError("line 1: expected header '" + std::string(kWeatherHeader) + "'", line_no);
      header_seen = true;
      continue;
    }
    auto where = "line " + std::to_string(line_no) + ": ";
    auto cols = split(line, ',');
    if (cols.size() != 4) throw WeatherError(where + "expected 4 columns", line_no);
    WeatherRecord rec;
    rec.timestamp = std::string(trim(cols[0]));
    auto t = parse_timestamp(rec.timestamp);
    if (!t) throw WeatherError(where + "bad timestamp '" + rec.timestamp + "'", line_no);
    auto speed = to_double(cols[1]);
    auto dir = to_double(cols[2]);
    auto temp = to_double(cols[3]);
    if (!speed || !dir || !temp) throw WeatherError(where + "malformed number", line_no);
    if (*speed < 0.0) throw WeatherError(where + "negative wind speed", line_no);
    if (*temp <= -273.15) throw WeatherError(where + "temperature below absolute zero", line_no);
    rec.wind_speed_m_s = *speed;
    rec.wind_direction_deg = *dir;
    rec.temperature_c = *temp;
    if (prev_time) {
      if (*t <= *prev_time) throw WeatherError(where + "timestamps must increase strictly", line_no);
      const auto dt = *t - *prev_time;
      if (!step) step = dt;
      else if (dt != *step && !warned) {
        log::warn(where + "non-uniform time step");
        warned = true;
      }
    }
    prev_time = t;
    out.push_back(std::move(rec));
    if (end == csv.size()) break;
  }
  if (!header_seen) throw WeatherError("empty weather file", 1);
  return out;
}

std::vector<WeatherRecord> load_weather(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open weather file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_weather(ss.str());
}

std::string format_weather(std::span<const WeatherRecord> records) {
  std::string out(kWeatherHeader);
  out += '\n';
  char buf[128];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%s,%.2f,%.1f,%.2f\n", r.timestamp.c_str(), r.wind_speed_m_s,
                  r.wind_direction_deg, r.temperature_c);
    out += buf;
  }
  return out;
}

std::vector<WeatherRecord> synthetic_weather(const SyntheticWeatherOptions& o) {
  if (o.days <= 0 || o.step_min <= 0) throw std::invalid_argument("days and step_min must be positive");
  auto t0 = parse_timestamp(o.start);
  if (!t0) throw std::invalid_argument("bad start timestamp '" + o.start + "'");

  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  const int steps = o.days * 24 * 60 / o.step_min;
  const double dt_h = o.step_min / 60.0;
  constexpr double two_pi = 2.0 * std::numbers::pi;

  // AR(1) deviations for temperature, gusts and direction wander.
  double temp_dev = 0.0, gust = 0.0, wander = 0.0;
  std::vector<WeatherRecord> out;
  out.reserve(steps);
  for (int k = 0; k < steps; ++k) {
    const double hour = std::fmod(k * dt_h + static_cast<double>(*t0 % 86400) / 3600.0, 24.0);
    temp_dev = 0.9 * temp_dev + 0.15 * unit(rng);
    gust = 0.7 * gust + 0.5 * unit(rng);
    wander = 0.85 * wander + 6.0 * unit(rng);

    const double diurnal = std::sin(two_pi * (hour - 9.0) / 24.0);
    WeatherRecord r;
    r.timestamp = format_timestamp(*t0 + static_cast<std::int64_t>(k) * o.step_min * 60);
    r.temperature_c = round_to(o.mean_temp_c + o.diurnal_amplitude_c * diurnal + temp_dev, 0.01);
    r.wind_speed_m_s = round_to(std::max(0.0, o.mean_wind_m_s * (1.0 + 0.5 * diurnal) + gust), 0.01);
    double dir = std::fmod(o.prevailing_dir_deg + 25.0 * diurnal + wander, 360.0);
    if (dir < 0.0) dir += 360.0;
    r.wind_direction_deg = round_to(dir, 0.1);
    if (r.wind_direction_deg >= 360.0) r.wind_direction_deg -= 360.0;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TimestepRecord> run_simulation(const Network& net, std::span<const WeatherRecord> weather,
                                           Strategy strategy, const SolverConfig& cfg, bool warm_start) {
  cfg.validate();
  if (weather.empty()) throw std::invalid_argument("weather series is empty");
  std::vector<TimestepRecord> out;
  out.reserve(weather.size());
  const PressureVector zeros(net.zone_count(), 0.0);
  PressureVector start = zeros;

  for (const auto& w : weather) {
    TimestepRecord rec;
    rec.timestamp = w.timestamp;
    rec.strategy = strategy;
    const Assembly as(net, w.boundary(), cfg.dp_lin);
    auto fill = [&](const SolveOutcome& o) {
      rec.picard_iters_used = o.picard_iters_used;
      rec.newton_iters = o.newton_iters;
      rec.converged_in_picard = o.converged_in_picard;
      rec.picard_aborted = o.picard_aborted;
      rec.max_residual = o.max_residual;
      rec.pressures = o.pressures;
    };
    try {
      const SolveOutcome o = solve(as, start, strategy, cfg);
      fill(o);
      rec.converged = true;
      log::debug(rec.timestamp + " " + std::string(to_string(strategy)) + ": picard " +
                 std::to_string(o.picard_iters_used) + ", newton " + std::to_string(o.newton_iters));
      start = warm_start ? o.pressures : zeros;
    } catch (const NonConvergence& e) {
      fill(e.outcome());
      rec.failure = e.what();
      start = zeros;
    } catch (const SingularJacobian& e) {
      fill(e.outcome());
      rec.failure = e.what();
      start = zeros;
    }
    if (!rec.failure.empty())
      log::warn(std::string(to_string(strategy)) + " failed at " + rec.timestamp + ": " + rec.failure);
    out.push_back(std::move(rec));
  }
  return out;
}

Summary summarize(std::span<const TimestepRecord> records) {
  if (records.empty()) throw std::invalid_argument("summarize needs at least one record");
  Summary s;
  s.strategy = records.front().strategy;
  s.steps = records.size();
  std::vector<int> newton;
  newton.reserve(records.size());
  double total = 0.0, with_picard = 0.0, picard = 0.0;
  for (const auto& r : records) {
    newton.push_back(r.newton_iters);
    total += r.newton_iters;
    picard += r.picard_iters_used;
    with_picard += r.newton_iters + (r.converged_in_picard ? 0 : r.picard_iters_used);
    if (r.converged_in_picard) ++s.converged_in_picard;
    if (r.picard_aborted) ++s.picard_aborts;
    if (!r.converged) ++s.failures;
  }
  const double n = static_cast<double>(records.size());
  s.mean_newton = total / n;
  s.mean_with_picard = with_picard / n;
  s.mean_picard = picard / n;
  s.percent_converged_in_picard = 100.0 * static_cast<double>(s.converged_in_picard) / n;
  std::sort(newton.begin(), newton.end());
  const std::size_t mid = newton.size() / 2;
  s.median_newton = newton.size() % 2 ? newton[mid] : 0.5 * (newton[mid - 1] + newton[mid]);
  s.max_newton = newton.back();
  return s;
}

}  // namespace airnet
