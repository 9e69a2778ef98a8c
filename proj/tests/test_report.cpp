#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "airnet/report.hpp"
#include "oracles.hpp"

using namespace airnet;

namespace {

const std::vector<Strategy> kAll{Strategy::NR, Strategy::WM, Strategy::PNR, Strategy::PWM};

std::vector<WeatherRecord> first_day() {
  auto w = synthetic_weather({});
  w.resize(48);
  return w;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(RunComparison, ParallelMatchesSerial) {
  const Network net = load_network(oracle::data_path("dwelling.json"));
  const auto w = first_day();
  const auto par = run_comparison(net, w, kAll, SolverConfig{});
  const auto ser = run_comparison_serial(net, w, kAll, SolverConfig{});
  EXPECT_EQ(timestep_csv(net, par), timestep_csv(net, ser));
  EXPECT_EQ(summary_json(par), summary_json(ser));
  ASSERT_EQ(par.summaries.size(), 4u);
  for (std::size_t i = 0; i < kAll.size(); ++i) EXPECT_EQ(par.summaries[i].strategy, kAll[i]);
}

TEST(RunComparison, NeedsTwoStrategies) {
  const Network net = load_network(oracle::data_path("two_crack.json"));
  const auto w = first_day();
  const std::vector<Strategy> one{Strategy::NR};
  EXPECT_THROW(run_comparison(net, w, one, SolverConfig{}), std::invalid_argument);
  EXPECT_THROW(run_comparison_serial(net, w, one, SolverConfig{}), std::invalid_argument);
}

TEST(RunComparison, CrackOnlyPnrFinishesInPicardOnSomeSteps) {
  const Network net = load_network(oracle::data_path("dwelling_cracks.json"));
  const auto w = first_day();
  const std::vector<Strategy> two{Strategy::NR, Strategy::PNR};
  const auto r = run_comparison(net, w, two, SolverConfig{});
  EXPECT_GT(r.summaries[1].converged_in_picard, 0u);
}

TEST(TimestepCsv, HeaderAndRows) {
  const Network net = load_network(oracle::data_path("linear.json"));
  const auto w = first_day();
  const auto recs = run_simulation(net, w, Strategy::PNR, SolverConfig{});
  const std::string csv = timestep_csv(net, recs);
  const std::string header = csv.substr(0, csv.find('\n'));
  EXPECT_EQ(header,
            "timestamp,strategy,picard_iters,newton_iters,converged_in_picard,picard_aborted,max_residual_kg_s,p_A,p_B");
  EXPECT_EQ(count_lines(csv), w.size() + 1);
  const std::string first = csv.substr(header.size() + 1, csv.find('\n', header.size() + 1) - header.size() - 1);
  EXPECT_EQ(first.rfind("1998-01-01T00:00:00,PNR,", 0), 0u) << first;
  EXPECT_NE(first.find(",true,"), std::string::npos);
}

TEST(WideCsv, OneColumnPerStrategy) {
  const Network net = load_network(oracle::data_path("linear.json"));
  const auto w = first_day();
  const auto r = run_comparison(net, w, kAll, SolverConfig{});
  const std::string csv = wide_iterations_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "step,timestamp,NR,WM,PNR,PWM");
  EXPECT_EQ(count_lines(csv), w.size() + 1);
  EXPECT_EQ(count_lines(timestep_csv(net, r)), 4 * w.size() + 1);
}

TEST(SummaryJson, EchoesConfigAndBothTables) {
  const Network net = load_network(oracle::data_path("linear.json"));
  SolverConfig cfg;
  cfg.tolerance = 2.5e-4;
  cfg.picard_iters = 7;
  cfg.accel = 0.3;
  cfg.trunc_pa = 45.0;
  cfg.fixed_relax = 0.2;
  cfg.max_newton_iters = 321;
  const auto w = first_day();
  const auto r = run_comparison(net, w, kAll, cfg, false);
  const auto doc = nlohmann::json::parse(summary_json(r));
  EXPECT_EQ(doc["warm_start"], false);
  EXPECT_EQ(doc["config"]["picard_iters"], 7);
  EXPECT_EQ(doc["config"]["max_newton_iters"], 321);
  EXPECT_EQ(doc["strategies"].size(), 4u);
  EXPECT_TRUE(doc["mean_iterations_table"].contains("newton_only"));
  EXPECT_TRUE(doc["mean_iterations_table"].contains("newton_plus_unfinished_picard"));
  EXPECT_EQ(doc["mean_iterations_table"]["newton_only"].size(), 4u);

  const SolverConfig back = parse_config_json(summary_json(r));
  EXPECT_EQ(config_json(back), config_json(cfg));
  const auto rerun = run_comparison(net, w, kAll, back, false);
  EXPECT_EQ(summary_json(rerun), summary_json(r));
  EXPECT_EQ(timestep_csv(net, rerun), timestep_csv(net, r));
}

TEST(ConfigJson, BareObjectAndDefaults) {
  const SolverConfig c = parse_config_json(R"({"accel": 0.0})");
  EXPECT_EQ(c.accel, 0.0);
  EXPECT_EQ(c.picard_iters, 10);
  EXPECT_THROW(parse_config_json(R"({"accel": 1.5})"), std::invalid_argument);
}

TEST(WriteFileAtomic, ReplacesContentWithoutLeftovers) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "airnet_report_test";
  fs::create_directories(dir);
  const fs::path target = dir / "out.csv";
  write_file_atomic(target.string(), "first\n");
  write_file_atomic(target.string(), "second\n");
  std::ifstream in(target);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "second\n");
  EXPECT_FALSE(fs::exists(dir / "out.csv.tmp"));
  fs::remove_all(dir);
  EXPECT_THROW(write_file_atomic("/nonexistent/dir/x.csv", "x"), std::ios_base::failure);
}
