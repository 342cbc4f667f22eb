#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rmstperm/simulation.hpp"

using rmstperm::CensoringScenario;
using rmstperm::Estimand;
using rmstperm::Method;
using rmstperm::ScenarioSpec;
using rmstperm::SimConfig;
using rmstperm::SurvivalScenario;

namespace {

SimConfig small_config() {
  SimConfig config;
  ScenarioSpec cell;
  cell.survival = SurvivalScenario::S1;
  cell.censoring = CensoringScenario::C2;
  cell.delta = 0.0;
  cell.n1 = 10;
  cell.n2 = 10;
  config.cells = {cell};
  config.n_sim = 40;
  config.n_perm = 99;
  config.root_seed = 91;
  config.estimands = {Estimand::difference, Estimand::ratio};
  return config;
}

}  // namespace

TEST_CASE("binomial band values") {
  const auto [lo1, hi1] = rmstperm::binomial_band(0.05, 5000);
  CHECK(lo1 == doctest::Approx(4.40).epsilon(2e-3));
  CHECK(hi1 == doctest::Approx(5.60).epsilon(2e-3));

  const auto [lo2, hi2] = rmstperm::binomial_band(0.05, 2000);
  CHECK(lo2 == doctest::Approx(4.04).epsilon(2e-3));
  CHECK(hi2 == doctest::Approx(5.96).epsilon(2e-3));

  const auto [lo3, hi3] = rmstperm::binomial_band(0.95, 5000);
  CHECK(lo3 == doctest::Approx(94.4).epsilon(2e-4));
  CHECK(hi3 == doctest::Approx(95.6).epsilon(2e-4));
}

TEST_CASE("coverage and rejection are dual at delta 0 for CI-backed methods") {
  const auto result = rmstperm::run_study(small_config());
  REQUIRE(result.rows.size() == 5);  // 3 methods x 2 estimands minus unstud/ratio
  for (const auto& row : result.rows) {
    REQUIRE_FALSE(row.error.has_value());
    if (row.coverage && row.estimand == Estimand::difference)
      CHECK(row.rejection_rate + *row.coverage == 1.0);
    if (row.method == Method::unstudentized_perm)
      CHECK_FALSE(row.coverage.has_value());
  }
}

TEST_CASE("identical configs give identical results regardless of workers") {
  auto config = small_config();
  config.workers = 1;
  const auto a = rmstperm::run_study(config);
  config.workers = 3;
  const auto b = rmstperm::run_study(config);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].rejection_rate == b.rows[i].rejection_rate);
    CHECK(a.rows[i].coverage == b.rows[i].coverage);
    CHECK(a.rows[i].mean_ci_width == b.rows[i].mean_ci_width);
    CHECK(a.rows[i].regenerations == b.rows[i].regenerations);
  }

  std::ostringstream tsv_a, tsv_b;
  rmstperm::write_tsv(a, tsv_a);
  rmstperm::write_tsv(b, tsv_b);
  CHECK(tsv_a.str() == tsv_b.str());

  std::ostringstream json_a, json_b;
  rmstperm::write_json(a, json_a);
  rmstperm::write_json(b, json_b);
  CHECK(json_a.str() == json_b.str());
}

TEST_CASE("empty method set yields an empty result") {
  auto config = small_config();
  config.methods = {};
  const auto result = rmstperm::run_study(config);
  CHECK(result.rows.empty());
}

TEST_CASE("a failing cell is recorded and the rest of the grid continues") {
  auto config = small_config();
  ScenarioSpec bad = config.cells[0];
  bad.survival = SurvivalScenario::S5;
  bad.delta = 50.0;  // unattainable
  config.cells.insert(config.cells.begin(), bad);
  config.estimands = {Estimand::difference};

  const auto result = rmstperm::run_study(config);
  REQUIRE(result.rows.size() == 6);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(result.rows[i].error.has_value());
    CHECK(result.rows[i].n_sim == 0);
  }
  for (std::size_t i = 3; i < 6; ++i) CHECK_FALSE(result.rows[i].error.has_value());
}

TEST_CASE("mc standard error matches the binomial formula") {
  const auto result = rmstperm::run_study(small_config());
  for (const auto& row : result.rows) {
    const double p = row.rejection_rate;
    CHECK(row.mc_se == doctest::Approx(std::sqrt(p * (1 - p) / row.n_sim)).epsilon(1e-12));
  }
}

TEST_CASE("power at a large RMST difference, S1/C3 delta=2") {
  SimConfig config;
  ScenarioSpec cell;
  cell.survival = SurvivalScenario::S1;
  cell.censoring = CensoringScenario::C3;
  cell.delta = 2.0;
  cell.n1 = cell.n2 = 20;
  config.cells = {cell};
  config.n_sim = 2000;
  config.n_perm = 500;
  config.root_seed = 321;
  config.methods = {Method::asymptotic, Method::studentized_perm};
  config.estimands = {Estimand::difference};
  const auto result = rmstperm::run_study(config);
  const double power_asym = result.rows[0].rejection_rate;
  const double power_stud = result.rows[1].rejection_rate;
  // studentized power sits near 40% here; the liberal asymptotic test is
  // a few points higher
  CHECK(power_stud > 0.36);
  CHECK(power_stud < 0.45);
  CHECK(power_asym > power_stud);
}

TEST_CASE("summary output carries the band and flags") {
  const auto result = rmstperm::run_study(small_config());
  std::ostringstream out;
  rmstperm::write_summary(result, out);
  const auto text = out.str();
  CHECK(text.find("type-I band") != std::string::npos);
  CHECK(text.find("S1") != std::string::npos);
  CHECK(text.find("studentized-perm") != std::string::npos);
}
