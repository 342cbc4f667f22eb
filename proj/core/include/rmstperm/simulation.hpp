#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rmstperm/inference.hpp"
#include "rmstperm/scenarios.hpp"

namespace rmstperm {

struct SimConfig {
  std::vector<ScenarioSpec> cells;
  int n_sim = 5000;
  int n_perm = 2000;
  double alpha = 0.05;
  std::vector<Method> methods = {Method::asymptotic, Method::studentized_perm,
                                 Method::unstudentized_perm};
  std::vector<Estimand> estimands = {Estimand::difference};
  std::uint64_t root_seed = 1;
  int workers = 0;
  int regeneration_cap = 10000;
};

/// One (cell, method, estimand) aggregate.
struct CellResult {
  ScenarioSpec scenario;
  Method method;
  Estimand estimand;
  int n_sim = 0;
  double rejection_rate = 0.0;
  double mc_se = 0.0;
  std::optional<double> coverage;       // CIs containing the true estimand
  std::optional<double> mean_ci_width;  // absent for the unstudentized test
  long regenerations = 0;
  double censor_rate1 = 0.0;  // observed censoring fraction per group
  double censor_rate2 = 0.0;
  double true_mu1 = 0.0;
  double true_mu2 = 0.0;
  double seconds = 0.0;  // wall clock; excluded from file output
  std::optional<std::string> error;  // cell aborted (calibration/pathology)
};

struct SimResult {
  SimConfig config;
  std::vector<CellResult> rows;
};

/// Monte Carlo study over the scenario grid. Deterministic in root_seed
/// regardless of worker count: every replication owns a substream keyed by
/// (cell index, replication index).
SimResult run_study(const SimConfig& config);

/// 95% binomial band around a nominal rate, in percent:
/// 100 * (nominal +/- 1.96 sqrt(nominal (1-nominal)/n_sim)).
std::pair<double, double> binomial_band(double nominal, int n_sim);

/// Parses a declarative study config (JSON). The grid object's cross product
/// becomes the cell list. Throws config_error naming the offending path.
SimConfig sim_config_from_json_string(const std::string& text);

void write_tsv(const SimResult& result, std::ostream& out);
void write_json(const SimResult& result, std::ostream& out);

/// Human summary with the binomial band and a within-band marker column.
void write_summary(const SimResult& result, std::ostream& out);

}  // namespace rmstperm
