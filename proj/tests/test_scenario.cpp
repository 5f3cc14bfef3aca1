#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "landauer/scenario.hpp"

using namespace landauer;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("landauer_test_" + name);
  fs::remove_all(dir);
  return dir;
}

ScenarioConfig short_fig1(double temperature, int steps) {
  auto c = preset(temperature == 1.0 ? "fig1-te1" : "fig1-te100");
  c.time.steps = steps;
  return c;
}

}  // namespace

TEST(TimeGrid, PointsExcludeStart) {
  const TimeGrid g{0.0, 1.0, 4};
  EXPECT_EQ(g.points(), (std::vector<double>{0.25, 0.5, 0.75, 1.0}));
  EXPECT_TRUE((TimeGrid{0.0, 1.0, 0}).points().empty());
}

TEST(CaseNames, ParseAndPrint) {
  EXPECT_EQ(case_from_string("sigma_x"), Case::dissipative);
  EXPECT_EQ(case_from_string("z"), Case::dephasing);
  EXPECT_EQ(case_from_string("both"), Case::both);
  for (Case c : {Case::dissipative, Case::dephasing, Case::both}) EXPECT_EQ(case_from_string(to_string(c)), c);
  EXPECT_THROW(case_from_string("sigma_y"), std::domain_error);
}

TEST(Config, RoundTripsThroughJson) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    ScenarioConfig c;
    c.name = "case" + std::to_string(k);
    c.interaction = static_cast<Case>(k % 3);
    c.length = 0.1 + 5 * unit(rng);
    c.position = c.length * (0.01 + 0.98 * unit(rng));
    c.modes = 1 + k % 50;
    c.p = unit(rng);
    c.temperature = 0.01 + 100 * unit(rng);
    c.coupling = unit(rng);
    if (k % 2) {
      c.gap_mode = 1 + k % 7;
    } else {
      c.gap_mode.reset();
      c.gap_value = 40 * unit(rng);
    }
    c.single_mode = k % 4 == 0 && c.gap_mode.has_value();
    if (c.single_mode && c.gap_mode) c.modes = std::max(c.modes, *c.gap_mode);
    c.time = {unit(rng), 2 + 10 * unit(rng), k % 13};
    c.oracle = {k % 5 == 0, k % 20};
    c.output_directory = "dir/" + std::to_string(k);
    EXPECT_EQ(parse_config(serialize_config(c)), c) << serialize_config(c);
  }
}

TEST(Config, MissingKeysTakeDefaults) {
  EXPECT_EQ(parse_config("{}"), ScenarioConfig{});
}

TEST(Config, ValidationErrors) {
  const std::vector<std::string> bad{
      R"({"p": 1.5})",
      R"({"temperature": 0})",
      R"({"cavity": {"length": -1}})",
      R"({"cavity": {"length": 1, "qubit_position": 2}})",
      R"({"cavity": {"modes": 0}})",
      R"({"gap": {"mode": 0}})",
      R"({"gap": {"value": -3}})",
      R"({"time": {"start": 2, "stop": 1, "steps": 3}})",
      R"({"time": {"steps": -1}})",
      R"({"case": "sideways"})",
  };
  for (const auto& text : bad) EXPECT_THROW(parse_config(text), std::domain_error) << text;
}

TEST(Overrides, NestedKeysAndTypes) {
  nlohmann::ordered_json j = preset("fig1-te1");
  apply_override(j, "time.steps=7");
  apply_override(j, "temperature=2.5");
  apply_override(j, "name=custom");
  apply_override(j, "oracle.enabled=true");
  apply_override(j, "gap.value=12.5");
  apply_override(j, "single_mode=false");
  const auto c = config_from_json(j);
  EXPECT_EQ(c.time.steps, 7);
  EXPECT_EQ(c.temperature, 2.5);
  EXPECT_EQ(c.name, "custom");
  EXPECT_TRUE(c.oracle.enabled);
  EXPECT_FALSE(c.gap_mode.has_value());
  EXPECT_EQ(c.gap_value, 12.5);
  EXPECT_THROW(apply_override(j, "no_equals_sign"), std::domain_error);
  EXPECT_THROW(apply_override(j, "=3"), std::domain_error);
}

TEST(Presets, FilesMatchBuiltIns) {
  for (const auto& [name, config] : presets()) {
    const fs::path file = fs::path(LANDAUER_PRESET_DIR) / (name + ".json");
    ASSERT_TRUE(fs::exists(file)) << file;
    EXPECT_EQ(parse_config(slurp(file)), config) << name;
  }
  EXPECT_THROW(preset("fig9"), std::domain_error);
}

TEST(RunScenario, EmptyGridGivesHeaderOnlyCsv) {
  auto c = preset("fig1-te1");
  c.time.steps = 0;
  const auto tables = run_scenario(c);
  ASSERT_EQ(tables.size(), 1u);
  EXPECT_EQ(to_csv(tables[0]), "T,delta_p,delta_d,heat,heat_over_te,dS_coherent,dS_mixed,gap,bound_holds\n");
}

TEST(RunScenario, ColdPresetOrdering) {
  const auto table = run_scenario(short_fig1(1.0, 100)).front();
  ASSERT_EQ(table.rows.size(), 100u);
  for (const auto& r : table.rows) {
    EXPECT_GE(r.heat_over_temperature, r.entropy_mixed);
    EXPECT_GE(r.entropy_mixed, 0.0);
    EXPECT_LE(r.entropy_coherent, 0.0);
    EXPECT_TRUE(r.bound_holds);
  }
  EXPECT_TRUE(table.all_bounds_hold());
}

TEST(RunScenario, HotPresetOrdering) {
  const auto table = run_scenario(short_fig1(100.0, 100)).front();
  for (const auto& r : table.rows) {
    EXPECT_LE(r.heat_over_temperature, 0.0);
    EXPECT_GE(r.heat_over_temperature, r.entropy_mixed);
    EXPECT_GE(r.entropy_mixed, r.entropy_coherent);
    EXPECT_TRUE(r.bound_holds);
  }
}

TEST(RunScenario, DephasingColumnIsPeriodic) {
  const auto table = run_scenario(preset("fig2")).front();
  ASSERT_EQ(table.rows.size(), 400u);
  EXPECT_EQ(table.columns()[2], "chi");
  for (std::size_t k = 0; k + 200 < table.rows.size(); ++k) {
    EXPECT_NEAR(table.rows[k].coherence, table.rows[k + 200].coherence, 1e-9);
    EXPECT_NEAR(table.rows[k].heat, table.rows[k + 200].heat, 1e-9);
    EXPECT_EQ(table.rows[k].delta_p, 0.0);
  }
  EXPECT_NEAR(table.rows[199].coherence, 1.0, 1e-9);
  EXPECT_TRUE(table.all_bounds_hold());
}

TEST(RunScenario, BothCasesGiveTwoTables) {
  auto c = preset("fig1-te1");
  c.interaction = Case::both;
  c.time.steps = 5;
  const auto tables = run_scenario(c);
  ASSERT_EQ(tables.size(), 2u);
  EXPECT_EQ(tables[0].interaction, Case::dissipative);
  EXPECT_EQ(tables[1].interaction, Case::dephasing);
}

TEST(RunScenario, OracleColumnsTrackPerturbativeValues) {
  auto c = short_fig1(1.0, 4);
  c.coupling = 0.005;
  c.time.stop = 4.0;
  c.oracle = {true, 8};
  const auto table = run_scenario(c).front();
  ASSERT_TRUE(table.has_oracle);
  EXPECT_EQ(table.columns().back(), "oracle_heat");
  for (const auto& r : table.rows) {
    EXPECT_NEAR(r.oracle_delta_p, r.delta_p, 0.05 * std::abs(r.delta_p));
    EXPECT_NEAR(r.oracle_heat, r.heat, 0.05 * std::abs(r.heat));
  }
  const auto csv = to_csv(table);
  EXPECT_EQ(std::count(csv.begin(), csv.begin() + csv.find('\n'), ','), 11);
}

TEST(RunScenario, BreakdownNamesTheDuration) {
  auto c = short_fig1(1.0, 10);
  c.coupling = 5.0;
  try {
    (void)run_scenario(c);
    FAIL() << "expected PerturbationBreakdown";
  } catch (const PerturbationBreakdown& e) {
    EXPECT_EQ(std::string(e.what()).rfind("at T=", 0), 0u) << e.what();
  }
}

TEST(EmitOutputs, RerunsAreByteIdentical) {
  auto c = short_fig1(100.0, 40);
  c.interaction = Case::both;
  const auto a = emit_outputs(run_scenario(c), c, scratch("a"));
  const auto b = emit_outputs(run_scenario(c), c, scratch("b"));
  ASSERT_EQ(a.data.size(), 2u);
  for (std::size_t i = 0; i < a.data.size(); ++i) EXPECT_EQ(slurp(a.data[i]), slurp(b.data[i]));
  EXPECT_EQ(slurp(a.manifest), slurp(b.manifest));
  EXPECT_EQ(slurp(a.summary), slurp(b.summary));
  EXPECT_EQ(a.data[0].filename(), c.name + "_dissipative.csv");
  const auto manifest = nlohmann::ordered_json::parse(slurp(a.manifest));
  EXPECT_EQ(config_from_json(manifest.at("config")), c);
  EXPECT_EQ(manifest.at("version"), version);
}

TEST(EmitOutputs, UnwritableDirectory) {
  const fs::path base = scratch("file");
  fs::create_directories(base);
  const fs::path blocker = base / "plain_file";
  std::ofstream(blocker) << "x";
  const auto c = short_fig1(1.0, 1);
  EXPECT_THROW(emit_outputs(run_scenario(c), c, blocker / "sub"), std::runtime_error);
}

TEST(FormatNumber, SeventeenSignificantDigits) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(-2.5e-20), "-2.4999999999999999e-20");
  for (double x : {M_PI, 1.0 / 3.0, 6.02214076e23}) EXPECT_EQ(std::stod(format_number(x)), x);
}
