// airnet: command-line front end for the airflow network solvers.
//
// Exit codes: 0 ok, 1 domain failure (invalid network, no convergence),
// 2 I/O or usage error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "airnet/log.hpp"
#include "airnet/report.hpp"
#include "airnet/scenario.hpp"
#include "airnet/solvers.hpp"

namespace {

using namespace airnet;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kUsage = 2;

struct ConfigFlags {
  std::string config_path;
  std::optional<double> tol, accel, trunc_pa, relax;
  std::optional<int> picard_iters, max_iter;

  void add_to(CLI::App* app) {
    app->add_option("--config", config_path, "Load solver settings from a summary JSON")->check(CLI::ExistingFile);
    app->add_option("--tol", tol, "Per-zone mass balance tolerance, kg/s");
    app->add_option("--picard-iters", picard_iters, "Picard iteration budget");
    app->add_option("--accel", accel, "Picard acceleration factor a");
    app->add_option("--trunc-pa", trunc_pa, "Per-update Picard pressure cap, Pa");
    app->add_option("--relax", relax, "Fixed NR under-relaxation");
    app->add_option("--max-iter", max_iter, "Newton iteration cap");
  }

  SolverConfig resolve() const {
    SolverConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      std::stringstream ss;
      ss << in.rdbuf();
      cfg = parse_config_json(ss.str());
    }
    if (tol) cfg.tolerance = *tol;
    if (accel) cfg.accel = *accel;
    if (trunc_pa) cfg.trunc_pa = *trunc_pa;
    if (relax) cfg.fixed_relax = *relax;
    if (picard_iters) cfg.picard_iters = *picard_iters;
    if (max_iter) cfg.max_newton_iters = *max_iter;
    cfg.validate();
    return cfg;
  }
};

const std::vector<std::string> kStrategyNames = {"nr", "wm", "pnr", "pwm"};

json outcome_json(const Network& net, const SolveOutcome& o) {
  json j;
  j["strategy"] = std::string(to_string(o.strategy));
  j["pressures_pa"] = json::object();
  for (std::size_t i = 0; i < net.zone_count() && i < o.pressures.size(); ++i)
    j["pressures_pa"][net.zones()[i].id] = o.pressures[i];
  j["link_flows"] = json::array();
  for (std::size_t i = 0; i < o.link_flows.size(); ++i) {
    const auto& f = o.link_flows[i];
    j["link_flows"].push_back({{"id", net.links()[i].id},
                               {"net_kg_s", f.net},
                               {"forward_kg_s", f.forward},
                               {"reverse_kg_s", f.reverse},
                               {"bidirectional", f.forward > 0.0 && f.reverse > 0.0}});
  }
  j["newton_iters"] = o.newton_iters;
  j["picard_iters"] = o.picard_iters_used;
  j["converged_in_picard"] = o.converged_in_picard;
  j["picard_aborted"] = o.picard_aborted ? json(std::string(to_string(*o.picard_aborted))) : json(nullptr);
  j["max_residual_kg_s"] = o.max_residual;
  return j;
}

int cmd_check(const std::string& path) {
  const Network net = load_network(path);
  std::cout << "OK: " << net.zone_count() << " zones, " << net.external_nodes().size() << " external nodes, "
            << net.links().size() << " links\n";
  return kOk;
}

int cmd_solve(const std::string& path, Strategy strategy, const BoundaryState& bc, const SolverConfig& cfg) {
  const Network net = load_network(path);
  const PressureVector p0(net.zone_count(), 0.0);
  try {
    const SolveOutcome o = solve(net, bc, p0, strategy, cfg);
    std::cout << outcome_json(net, o).dump(2) << "\n";
    return kOk;
  } catch (const NonConvergence& e) {
    json d = outcome_json(net, e.outcome());
    d["error"] = e.what();
    std::cerr << d.dump(2) << "\n";
    return kDomainFailure;
  } catch (const SingularJacobian& e) {
    json d = outcome_json(net, e.outcome());
    d["error"] = e.what();
    std::cerr << d.dump(2) << "\n";
    return kDomainFailure;
  }
}

int cmd_simulate(const std::string& net_path, const std::string& weather_path, Strategy strategy,
                 const SolverConfig& cfg, bool warm, const std::string& out) {
  const Network net = load_network(net_path);
  const auto weather = load_weather(weather_path);
  airnet::log::info("loaded " + std::to_string(net.zone_count()) + " zones and " +
                    std::to_string(weather.size()) + " weather records");
  const auto records = run_simulation(net, weather, strategy, cfg, warm);
  const auto csv = timestep_csv(net, records);
  if (out.empty()) std::cout << csv;
  else write_file_atomic(out, csv);
  const auto s = summarize(records);
  std::cerr << to_string(strategy) << ": " << records.size() << " steps, mean Newton iterations "
            << s.mean_newton << ", failures " << s.failures << "\n";
  return kOk;
}

int cmd_compare(const std::string& net_path, const std::string& weather_path,
                const std::vector<Strategy>& strategies, const SolverConfig& cfg, bool warm,
                const std::string& prefix) {
  const Network net = load_network(net_path);
  const auto weather = load_weather(weather_path);
  airnet::log::info("loaded " + std::to_string(net.zone_count()) + " zones and " +
                    std::to_string(weather.size()) + " weather records");
  const auto report = run_comparison(net, weather, strategies, cfg, warm);
  const auto summary = summary_json(report);
  write_file_atomic(prefix + "_iterations.csv", timestep_csv(net, report));
  write_file_atomic(prefix + "_wide.csv", wide_iterations_csv(report));
  write_file_atomic(prefix + "_summary.json", summary);
  std::cout << summary;
  return kOk;
}

int cmd_gen_weather(const SyntheticWeatherOptions& opts, const std::string& out) {
  const auto csv = format_weather(synthetic_weather(opts));
  if (out.empty()) std::cout << csv;
  else write_file_atomic(out, csv);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multizone airflow network solver"};
  app.require_subcommand(1);

  std::string network, weather, out;
  std::string strategy_name = "pwm";
  std::vector<std::string> strategy_list;
  bool no_warm = false;
  double wind_speed = 0.0, wind_dir = 0.0, temp_out_c = 20.0;
  SyntheticWeatherOptions gen;

  auto* check = app.add_subcommand("check", "Validate a network file");
  check->add_option("--network", network, "Network JSON")->required();

  auto* solve_cmd = app.add_subcommand("solve", "Solve one steady state");
  ConfigFlags solve_cfg;
  solve_cmd->add_option("--network", network, "Network JSON")->required();
  solve_cmd->add_option("--strategy", strategy_name, "nr, wm, pnr or pwm")
      ->check(CLI::IsMember(kStrategyNames, CLI::ignore_case));
  solve_cmd->add_option("--wind-speed", wind_speed, "m/s")->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--wind-dir", wind_dir, "degrees from north");
  solve_cmd->add_option("--temp-out-c", temp_out_c, "outdoor temperature, C");
  solve_cfg.add_to(solve_cmd);

  auto* sim = app.add_subcommand("simulate", "Run one strategy over a weather series");
  ConfigFlags sim_cfg;
  sim->add_option("--network", network, "Network JSON")->required();
  sim->add_option("--weather", weather, "Weather CSV")->required();
  sim->add_option("--strategy", strategy_name, "nr, wm, pnr or pwm")
      ->check(CLI::IsMember(kStrategyNames, CLI::ignore_case));
  sim->add_flag("--no-warm-start", no_warm, "Start every step from zero pressures");
  sim->add_option("--out", out, "Timestep CSV (stdout if omitted)");
  sim_cfg.add_to(sim);

  auto* cmp = app.add_subcommand("compare", "Compare strategies over a weather series");
  ConfigFlags cmp_cfg;
  cmp->add_option("--network", network, "Network JSON")->required();
  cmp->add_option("--weather", weather, "Weather CSV")->required();
  cmp->add_option("--strategy", strategy_list, "Strategies, comma separated or repeated")
      ->delimiter(',')
      ->default_str("nr,wm,pnr,pwm");
  cmp->add_flag("--no-warm-start", no_warm, "Start every step from zero pressures");
  cmp->add_option("--out", out, "Output prefix")->required();
  cmp_cfg.add_to(cmp);

  auto* genw = app.add_subcommand("gen-weather", "Write a synthetic weather CSV");
  genw->add_option("--days", gen.days, "Number of days")->check(CLI::PositiveNumber);
  genw->add_option("--step-min", gen.step_min, "Time step in minutes")->check(CLI::PositiveNumber);
  genw->add_option("--seed", gen.seed, "Random seed");
  genw->add_option("--start", gen.start, "First timestamp");
  genw->add_option("--out", out, "Output CSV (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const Strategy strategy = parse_strategy(strategy_name).value_or(Strategy::PWM);
  try {
    if (*check) return cmd_check(network);
    if (*solve_cmd) {
      const auto bc = BoundaryState::make(wind_speed, wind_dir, temp_out_c + 273.15);
      return cmd_solve(network, strategy, bc, solve_cfg.resolve());
    }
    if (*sim) return cmd_simulate(network, weather, strategy, sim_cfg.resolve(), !no_warm, out);
    if (*cmp) {
      if (strategy_list.empty()) strategy_list = {"nr", "wm", "pnr", "pwm"};
      std::vector<Strategy> list;
      for (const auto& name : strategy_list) {
        auto s = parse_strategy(name);
        if (!s) {
          std::cerr << "error: unknown strategy '" << name << "'\n";
          return kUsage;
        }
        list.push_back(*s);
      }
      if (list.size() < 2) {
        std::cerr << "error: compare needs at least two strategies\n";
        return kUsage;
      }
      return cmd_compare(network, weather, list, cmp_cfg.resolve(), !no_warm, out);
    }
    if (*genw) return cmd_gen_weather(gen, out);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainFailure;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainFailure;
  } catch (const WeatherError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainFailure;
  }
  return kUsage;
}
