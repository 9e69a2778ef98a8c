#include "airnet/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace airnet {

using nlohmann::json;

namespace {

void check_strategies(std::span<const Strategy> strategies) {
  if (strategies.size() < 2) throw std::invalid_argument("comparison needs at least two strategies");
}

ComparisonReport prepare(std::span<const Strategy> strategies, const SolverConfig& cfg, bool warm_start) {
  check_strategies(strategies);
  cfg.validate();
  ComparisonReport report;
  report.strategies.assign(strategies.begin(), strategies.end());
  report.runs.resize(strategies.size());
  report.config = cfg;
  report.warm_start = warm_start;
  return report;
}

void finish(ComparisonReport& report) {
  for (const auto& run : report.runs) report.summaries.push_back(summarize(run));
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

ComparisonReport run_comparison(const Network& net, std::span<const WeatherRecord> weather,
                                std::span<const Strategy> strategies, const SolverConfig& cfg, bool warm_start) {
  ComparisonReport report = prepare(strategies, cfg, warm_start);
  if (weather.empty()) throw std::invalid_argument("weather series is empty");
  const auto count = static_cast<long>(strategies.size());
  std::vector<std::string> errors(strategies.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    try {
      report.runs[i] = run_simulation(net, weather, strategies[i], cfg, warm_start);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
  finish(report);
  return report;
}

ComparisonReport run_comparison_serial(const Network& net, std::span<const WeatherRecord> weather,
                                       std::span<const Strategy> strategies, const SolverConfig& cfg,
                                       bool warm_start) {
  ComparisonReport report = prepare(strategies, cfg, warm_start);
  for (std::size_t i = 0; i < strategies.size(); ++i)
    report.runs[i] = run_simulation(net, weather, strategies[i], cfg, warm_start);
  finish(report);
  return report;
}

namespace {

void append_rows(std::string& out, std::span<const TimestepRecord> records) {
  for (const auto& r : records) {
    out += r.timestamp;
    out += ',';
    out += to_string(r.strategy);
    out += ',' + std::to_string(r.picard_iters_used);
    out += ',' + std::to_string(r.newton_iters);
    out += r.converged_in_picard ? ",true" : ",false";
    out += ',';
    if (r.picard_aborted) out += to_string(*r.picard_aborted);
    out += ',' + fmt_double(r.max_residual);
    for (double p : r.pressures) out += ',' + fmt_double(p);
    out += '\n';
  }
}

std::string csv_header(const Network& net) {
  std::string h = "timestamp,strategy,picard_iters,newton_iters,converged_in_picard,picard_aborted,max_residual_kg_s";
  for (const auto& z : net.zones()) h += ",p_" + z.id;
  return h + '\n';
}

}  // namespace

std::string timestep_csv(const Network& net, std::span<const TimestepRecord> records) {
  std::string out = csv_header(net);
  append_rows(out, records);
  return out;
}

std::string timestep_csv(const Network& net, const ComparisonReport& report) {
  std::string out = csv_header(net);
  for (const auto& run : report.runs) append_rows(out, run);
  return out;
}

std::string wide_iterations_csv(const ComparisonReport& report) {
  std::string out = "step,timestamp";
  for (auto s : report.strategies) out += "," + std::string(to_string(s));
  out += '\n';
  const std::size_t steps = report.runs.empty() ? 0 : report.runs.front().size();
  for (std::size_t k = 0; k < steps; ++k) {
    out += std::to_string(k + 1) + ',' + report.runs.front()[k].timestamp;
    for (const auto& run : report.runs) out += ',' + std::to_string(run[k].newton_iters);
    out += '\n';
  }
  return out;
}

std::string config_json(const SolverConfig& cfg) {
  json j = {{"tolerance", cfg.tolerance},
            {"max_newton_iters", cfg.max_newton_iters},
            {"fixed_relax", cfg.fixed_relax},
            {"picard_iters", cfg.picard_iters},
            {"accel", cfg.accel},
            {"trunc_pa", cfg.trunc_pa},
            {"dp_lin", cfg.dp_lin},
            {"relax_min", cfg.relax_min},
            {"relax_max", cfg.relax_max},
            {"picard_pivot_floor", cfg.picard_pivot_floor}};
  return j.dump();
}

SolverConfig parse_config_json(const std::string& text) {
  json doc = json::parse(text);
  const json& c = doc.contains("config") ? doc["config"] : doc;
  SolverConfig cfg;
  auto take = [&](const char* key, auto& field) {
    if (c.contains(key)) field = c[key].get<std::decay_t<decltype(field)>>();
  };
  take("tolerance", cfg.tolerance);
  take("max_newton_iters", cfg.max_newton_iters);
  take("fixed_relax", cfg.fixed_relax);
  take("picard_iters", cfg.picard_iters);
  take("accel", cfg.accel);
  take("trunc_pa", cfg.trunc_pa);
  take("dp_lin", cfg.dp_lin);
  take("relax_min", cfg.relax_min);
  take("relax_max", cfg.relax_max);
  take("picard_pivot_floor", cfg.picard_pivot_floor);
  cfg.validate();
  return cfg;
}

std::string summary_json(const ComparisonReport& report) {
  json doc;
  doc["config"] = json::parse(config_json(report.config));
  doc["warm_start"] = report.warm_start;
  doc["strategies"] = json::array();
  json table_raw = json::object();
  json table_picard = json::object();
  for (const auto& s : report.summaries) {
    const std::string name(to_string(s.strategy));
    doc["strategies"].push_back({{"strategy", name},
                                 {"steps", s.steps},
                                 {"mean_newton_iters", s.mean_newton},
                                 {"median_newton_iters", s.median_newton},
                                 {"max_newton_iters", s.max_newton},
                                 {"mean_iters_with_picard", s.mean_with_picard},
                                 {"mean_picard_iters", s.mean_picard},
                                 {"converged_in_picard", s.converged_in_picard},
                                 {"percent_converged_in_picard", s.percent_converged_in_picard},
                                 {"picard_aborts", s.picard_aborts},
                                 {"failures", s.failures}});
    table_raw[name] = std::lround(s.mean_newton);
    table_picard[name] = std::lround(s.mean_with_picard);
  }
  // Rounded means, the same shape as an "n per method" table.
  doc["mean_iterations_table"] = {{"newton_only", table_raw}, {"newton_plus_unfinished_picard", table_picard}};
  return doc.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::ios_base::failure("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::ios_base::failure("cannot rename onto '" + path + "': " + ec.message());
  }
}

}  // namespace airnet
