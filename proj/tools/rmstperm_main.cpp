// rmstperm command-line interface: two-sample RMST tests on CSV data,
// Kaplan-Meier curve export, and the Monte Carlo study runner.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rmstperm/csv.hpp"
#include "rmstperm/errors.hpp"
#include "rmstperm/inference.hpp"
#include "rmstperm/report.hpp"
#include "rmstperm/simulation.hpp"
#include "rmstperm/survival.hpp"
#include "rmstperm/version.hpp"

namespace {

// Exit codes, also documented in the README.
constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitParse = 2;
constexpr int kExitEstimability = 3;
constexpr int kExitDegenerate = 4;
constexpr int kExitConfig = 5;
constexpr int kExitModel = 6;

struct TestArgs {
  std::string dataset_path;
  double tau = 0.0;
  double alpha = 0.05;
  std::string method = "all";
  std::string estimand = "difference";
  int n_perm = 2000;
  std::uint64_t seed = 0;
  int workers = 0;
  std::optional<int> round_decimals;
  std::string out_path;
};

int run_test(const TestArgs& args) {
  rmstperm::CsvOptions csv_opts;
  csv_opts.round_decimals = args.round_decimals;
  const auto dataset = rmstperm::read_dataset_file(args.dataset_path, csv_opts);

  std::vector<rmstperm::Method> methods;
  if (args.method == "all") {
    methods = {rmstperm::Method::asymptotic, rmstperm::Method::studentized_perm,
               rmstperm::Method::unstudentized_perm};
  } else {
    methods = {rmstperm::method_from_string(args.method)};
  }
  std::vector<rmstperm::Estimand> estimands;
  if (args.estimand == "both") {
    estimands = {rmstperm::Estimand::difference, rmstperm::Estimand::ratio};
  } else {
    estimands = {rmstperm::estimand_from_string(args.estimand)};
  }

  rmstperm::TestConfig config;
  config.alpha = args.alpha;
  config.n_perm = args.n_perm;
  config.seed = args.seed;
  config.workers = args.workers;
  const rmstperm::TimeWindow window(args.tau);

  const auto results = rmstperm::run_inference(dataset.group1, dataset.group2,
                                               window, config, methods, estimands);
  const auto report = rmstperm::make_report(dataset, results, window, config);
  rmstperm::print_report(report, std::cout);
  if (!args.out_path.empty()) {
    std::ofstream out(args.out_path);
    if (!out) throw rmstperm::parse_error("cannot open output file: " + args.out_path);
    out << rmstperm::to_json_string(report);
    std::cerr << "report written to " << args.out_path << "\n";
  }
  return kExitOk;
}

struct KmArgs {
  std::string dataset_path;
  std::optional<double> tau;
  std::string out_path;
};

void write_km_table(const rmstperm::Dataset& dataset, std::optional<double> tau,
                    std::ostream& out) {
  out << "group\tt\tS\tG\tY\tN\n";
  char buf[160];
  auto emit = [&](const rmstperm::Sample& sample, const std::string& label) {
    const auto km = rmstperm::kaplan_meier(sample);
    const auto g = rmstperm::censoring_km(sample);
    const auto counts = rmstperm::counting_processes(sample);
    // one row per distinct observed time, plus the t = 0 baseline
    std::snprintf(buf, sizeof(buf), "%s\t0\t1\t1\t%zu\t0\n", label.c_str(),
                  sample.size());
    out << buf;
    for (double t : counts.at_risk.jump_times()) {
      if (tau && t > *tau) break;
      std::snprintf(buf, sizeof(buf), "%s\t%.10g\t%.10g\t%.10g\t%.10g\t%.10g\n",
                    label.c_str(), t, km(t), g(t),
                    counts.at_risk.left_limit(t), counts.events(t));
      out << buf;
    }
  };
  emit(dataset.group1, dataset.group_labels[0]);
  emit(dataset.group2, dataset.group_labels[1]);
}

int run_km(const KmArgs& args) {
  const auto dataset = rmstperm::read_dataset_file(args.dataset_path);
  if (args.out_path.empty()) {
    write_km_table(dataset, args.tau, std::cout);
  } else {
    std::ofstream out(args.out_path);
    if (!out) throw rmstperm::parse_error("cannot open output file: " + args.out_path);
    write_km_table(dataset, args.tau, out);
  }
  return kExitOk;
}

struct SimArgs {
  std::string config_path;
  std::string out_prefix = "simulation";
  int workers = 0;
};

rmstperm::SimConfig parse_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rmstperm::config_error("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return rmstperm::sim_config_from_json_string(text.str());
}

int run_sim(const SimArgs& args) {
  auto config = parse_sim_config(args.config_path);
  config.workers = args.workers;
  const auto result = rmstperm::run_study(config);

  const std::string tsv_path = args.out_prefix + ".tsv";
  const std::string json_path = args.out_prefix + ".json";
  {
    std::ofstream tsv(tsv_path);
    if (!tsv) throw rmstperm::config_error("cannot open output file: " + tsv_path);
    rmstperm::write_tsv(result, tsv);
  }
  {
    std::ofstream js(json_path);
    if (!js) throw rmstperm::config_error("cannot open output file: " + json_path);
    rmstperm::write_json(result, js);
  }
  rmstperm::write_summary(result, std::cout);
  std::cerr << "results written to " << tsv_path << " and " << json_path << "\n";

  double total_seconds = 0.0;
  for (const auto& row : result.rows) total_seconds += row.seconds;
  std::fprintf(stderr, "total cell time %.1f s\n", total_seconds);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sample restricted mean survival time comparison: "
               "asymptotic and permutation tests, confidence intervals, and a "
               "Monte Carlo study harness"};
  app.set_version_flag("--version", std::string("rmstperm ") + RMSTPERM_VERSION);
  app.require_subcommand(1);

  TestArgs test_args;
  auto* test_cmd = app.add_subcommand("test", "Run RMST tests on a CSV dataset");
  test_cmd->add_option("dataset", test_args.dataset_path, "CSV file (time,status,group)")
      ->required();
  test_cmd->add_option("--tau", test_args.tau, "End of the time window [0, tau]")
      ->required();
  test_cmd->add_option("--alpha", test_args.alpha, "Nominal level")->capture_default_str();
  test_cmd->add_option("--method", test_args.method,
                       "asymptotic | studentized-perm | unstudentized-perm | all")->capture_default_str();
  test_cmd->add_option("--estimand", test_args.estimand,
                       "difference | ratio | both")->capture_default_str();
  test_cmd->add_option("--B,--n-perm", test_args.n_perm,
                       "Permutation replicates")->capture_default_str();
  test_cmd->add_option("--seed", test_args.seed, "Root RNG seed")->capture_default_str()
      ->envname("RMST_SEED");
  test_cmd->add_option("--workers", test_args.workers,
                       "Worker threads (0 = hardware)")->capture_default_str();
  test_cmd->add_option("--round-decimals", test_args.round_decimals,
                       "Round input times to this many decimals");
  test_cmd->add_option("--out", test_args.out_path, "Write the JSON report here");

  KmArgs km_args;
  auto* km_cmd = app.add_subcommand("km", "Export per-group KM curve tables (TSV)");
  km_cmd->add_option("dataset", km_args.dataset_path, "CSV file (time,status,group)")
      ->required();
  km_cmd->add_option("--tau", km_args.tau, "Truncate the table at tau");
  km_cmd->add_option("--out", km_args.out_path, "Output TSV path (default stdout)");

  SimArgs sim_args;
  auto* sim_cmd = app.add_subcommand("sim", "Run a Monte Carlo study from a JSON config");
  sim_cmd->add_option("config", sim_args.config_path, "JSON study configuration")
      ->required();
  sim_cmd->add_option("--out", sim_args.out_prefix,
                      "Output path prefix (.tsv/.json appended)")->capture_default_str();
  sim_cmd->add_option("--workers", sim_args.workers,
                      "Worker threads (0 = hardware)")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*test_cmd) return run_test(test_args);
    if (*km_cmd) return run_km(km_args);
    if (*sim_cmd) return run_sim(sim_args);
  } catch (const rmstperm::parse_error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitParse;
  } catch (const rmstperm::estimability_error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitEstimability;
  } catch (const rmstperm::degenerate_estimate_error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitDegenerate;
  } catch (const rmstperm::config_error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const rmstperm::calibration_error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitModel;
  } catch (const rmstperm::model_error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitModel;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitOther;
  }
  return kExitOther;
}
