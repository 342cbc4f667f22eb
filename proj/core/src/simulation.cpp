#include "rmstperm/simulation.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "rmstperm/errors.hpp"

#include "rmstperm/detail/parallel.hpp"
#include "rmstperm/theory.hpp"

namespace rmstperm {

namespace {

constexpr std::uint64_t kDataDomain = 0xDA7Aull;
constexpr std::uint64_t kTestDomain = 0x7E57ull;

struct Combo {
  Method method;
  Estimand estimand;
};

std::vector<Combo> enumerate_combos(const SimConfig& config) {
  std::vector<Combo> combos;
  for (Method m : config.methods)
    for (Estimand e : config.estimands) {
      if (m == Method::unstudentized_perm && e == Estimand::ratio) continue;
      combos.push_back({m, e});
    }
  return combos;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::pair<double, double> binomial_band(double nominal, int n_sim) {
  if (n_sim < 1) throw invalid_input_error("binomial_band: n_sim must be >= 1");
  const double se = std::sqrt(nominal * (1.0 - nominal) / n_sim);
  return {100.0 * (nominal - 1.96 * se), 100.0 * (nominal + 1.96 * se)};
}

SimConfig sim_config_from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& ex) {
    throw config_error(std::string("config: invalid JSON: ") + ex.what());
  }

  SimConfig config;
  try {
    config.n_sim = j.at("n_sim").get<int>();
    if (config.n_sim < 1) throw config_error("config /n_sim: must be >= 1");
    config.n_perm = j.value("n_perm", 2000);
    if (config.n_perm < 1) throw config_error("config /n_perm: must be >= 1");
    config.alpha = j.value("alpha", 0.05);
    if (!(config.alpha > 0.0 && config.alpha < 1.0))
      throw config_error("config /alpha: must lie in (0, 1)");
    config.root_seed = j.value("seed", std::uint64_t{1});

    config.methods.clear();
    for (const auto& m : j.at("methods"))
      config.methods.push_back(method_from_string(m.get<std::string>()));
    config.estimands.clear();
    for (const auto& e : j.at("estimands"))
      config.estimands.push_back(estimand_from_string(e.get<std::string>()));

    const auto& grid = j.at("grid");
    const double tau = j.value("tau", 10.0);
    for (const auto& s : grid.at("survival")) {
      const auto surv = survival_scenario_from_string(s.get<std::string>());
      for (const auto& c : grid.at("censoring")) {
        const auto cens = censoring_scenario_from_string(c.get<std::string>());
        for (const auto& d : grid.at("delta")) {
          for (const auto& size : grid.at("sizes")) {
            if (!size.is_array() || size.size() != 2)
              throw config_error("config /grid/sizes: entries must be [n1, n2]");
            for (const auto& k : grid.value("k", nlohmann::json::array({1}))) {
              ScenarioSpec cell;
              cell.survival = surv;
              cell.censoring = cens;
              cell.delta = d.get<double>();
              cell.k = k.get<int>();
              cell.n1 = size[0].get<int>() * cell.k;
              cell.n2 = size[1].get<int>() * cell.k;
              cell.tau = tau;
              if (cell.delta < 0.0)
                throw config_error("config /grid/delta: must be >= 0");
              if (cell.n1 < 2 || cell.n2 < 2 || cell.k < 1)
                throw config_error("config /grid/sizes: group sizes must be >= 2");
              config.cells.push_back(cell);
            }
          }
        }
      }
    }
  } catch (const nlohmann::json::exception& ex) {
    throw config_error(std::string("config schema: ") + ex.what());
  }
  if (config.cells.empty())
    throw config_error("config /grid: empty scenario grid");
  return config;
}

SimResult run_study(const SimConfig& config) {
  if (config.n_sim < 1) throw config_error("run_study: n_sim must be >= 1");
  const auto combos = enumerate_combos(config);

  SimResult result;
  result.config = config;

  for (std::size_t ci = 0; ci < config.cells.size(); ++ci) {
    const auto t0 = std::chrono::steady_clock::now();
    ScenarioSpec cell = config.cells[ci];
    const long n_sim = config.n_sim;
    const std::size_t n_combos = combos.size();

    try {
      cell = calibrate(cell);
      const TimeWindow window(cell.tau);
      const double mu1 = true_rmst(theoretical_model(cell, 1), window);
      const double mu2 = true_rmst(theoretical_model(cell, 2), window);
      // estimand direction is group1 minus (or over) group2, so the true
      // difference is mu1 - mu2 = -delta
      const double true_diff = mu1 - mu2;
      const double true_ratio = mu1 / mu2;

      std::vector<std::uint8_t> reject(n_sim * n_combos, 0);
      std::vector<std::uint8_t> covered(n_sim * n_combos, 0);
      std::vector<std::uint8_t> has_ci(n_sim * n_combos, 0);
      std::vector<double> width(n_sim * n_combos, 0.0);
      std::vector<int> regen(n_sim, 0);
      std::vector<int> cens1(n_sim, 0), cens2(n_sim, 0);

      std::vector<Method> methods = config.methods;
      std::vector<Estimand> estimands = config.estimands;

      detail::parallel_for(n_sim, config.workers, [&](long r) {
        Rng data_rng(substream_key(config.root_seed, kDataDomain, ci, r));
        const auto data = generate_dataset(cell, data_rng, config.regeneration_cap);
        regen[r] = data.regenerations;
        for (const auto& o : data.group1.observations()) cens1[r] += o.event ? 0 : 1;
        for (const auto& o : data.group2.observations()) cens2[r] += o.event ? 0 : 1;

        TestConfig tc;
        tc.alpha = config.alpha;
        tc.n_perm = config.n_perm;
        tc.seed = substream_key(config.root_seed, kTestDomain, ci, r);
        tc.workers = 1;  // parallelism lives at the replication level
        const auto results = run_inference(data.group1, data.group2, window, tc,
                                           methods, estimands);
        for (std::size_t k = 0; k < results.size(); ++k) {
          const auto& res = results[k];
          const std::size_t slot = static_cast<std::size_t>(r) * n_combos + k;
          reject[slot] = res.reject ? 1 : 0;
          if (res.ci_lower && res.ci_upper) {
            has_ci[slot] = 1;
            const double truth =
                res.estimand == Estimand::difference ? true_diff : true_ratio;
            covered[slot] =
                (*res.ci_lower <= truth && truth <= *res.ci_upper) ? 1 : 0;
            width[slot] = *res.ci_upper - *res.ci_lower;
          }
        }
      });

      long total_regen = 0, total_cens1 = 0, total_cens2 = 0;
      for (long r = 0; r < n_sim; ++r) {
        total_regen += regen[r];
        total_cens1 += cens1[r];
        total_cens2 += cens2[r];
      }

      for (std::size_t k = 0; k < n_combos; ++k) {
        CellResult row;
        row.scenario = cell;
        row.method = combos[k].method;
        row.estimand = combos[k].estimand;
        row.n_sim = static_cast<int>(n_sim);
        long rejects = 0, covers = 0, cis = 0;
        double width_sum = 0.0;
        for (long r = 0; r < n_sim; ++r) {
          const std::size_t slot = static_cast<std::size_t>(r) * n_combos + k;
          rejects += reject[slot];
          if (has_ci[slot]) {
            ++cis;
            covers += covered[slot];
            width_sum += width[slot];
          }
        }
        row.rejection_rate = static_cast<double>(rejects) / n_sim;
        row.mc_se = std::sqrt(row.rejection_rate * (1.0 - row.rejection_rate) / n_sim);
        if (cis > 0) {
          row.coverage = static_cast<double>(covers) / cis;
          row.mean_ci_width = width_sum / cis;
        }
        row.regenerations = total_regen;
        row.censor_rate1 = static_cast<double>(total_cens1) / (n_sim * cell.n1);
        row.censor_rate2 = static_cast<double>(total_cens2) / (n_sim * cell.n2);
        row.true_mu1 = mu1;
        row.true_mu2 = mu2;
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.rows.push_back(std::move(row));
      }
    } catch (const std::exception& ex) {
      for (const auto& combo : combos) {
        CellResult row;
        row.scenario = config.cells[ci];
        row.method = combo.method;
        row.estimand = combo.estimand;
        row.n_sim = 0;
        row.error = ex.what();
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.rows.push_back(std::move(row));
      }
    }
  }
  return result;
}

void write_tsv(const SimResult& result, std::ostream& out) {
  out << "survival\tcensoring\tn1\tn2\tk\tdelta\tmethod\testimand\tn_sim\t"
         "rejection_rate\tmc_se\tcoverage\tmean_ci_width\tregenerations\t"
         "censor_rate1\tcensor_rate2\ttrue_mu1\ttrue_mu2\terror\n";
  for (const auto& row : result.rows) {
    out << to_string(row.scenario.survival) << '\t'
        << to_string(row.scenario.censoring) << '\t' << row.scenario.n1 << '\t'
        << row.scenario.n2 << '\t' << row.scenario.k << '\t'
        << format_double(row.scenario.delta) << '\t' << to_string(row.method)
        << '\t' << to_string(row.estimand) << '\t' << row.n_sim << '\t'
        << format_double(row.rejection_rate) << '\t' << format_double(row.mc_se)
        << '\t' << (row.coverage ? format_double(*row.coverage) : "") << '\t'
        << (row.mean_ci_width ? format_double(*row.mean_ci_width) : "") << '\t'
        << row.regenerations << '\t' << format_double(row.censor_rate1) << '\t'
        << format_double(row.censor_rate2) << '\t' << format_double(row.true_mu1)
        << '\t' << format_double(row.true_mu2) << '\t'
        << (row.error ? *row.error : "") << '\n';
  }
}

void write_json(const SimResult& result, std::ostream& out) {
  nlohmann::json j;
  j["config"] = {
      {"n_sim", result.config.n_sim},
      {"n_perm", result.config.n_perm},
      {"alpha", result.config.alpha},
      {"seed", result.config.root_seed},
  };
  auto& rows = j["rows"];
  rows = nlohmann::json::array();
  for (const auto& row : result.rows) {
    nlohmann::json r = {
        {"survival", to_string(row.scenario.survival)},
        {"censoring", to_string(row.scenario.censoring)},
        {"n1", row.scenario.n1},
        {"n2", row.scenario.n2},
        {"k", row.scenario.k},
        {"delta", row.scenario.delta},
        {"method", to_string(row.method)},
        {"estimand", to_string(row.estimand)},
        {"n_sim", row.n_sim},
        {"rejection_rate", row.rejection_rate},
        {"mc_se", row.mc_se},
        {"regenerations", row.regenerations},
        {"censor_rate1", row.censor_rate1},
        {"censor_rate2", row.censor_rate2},
        {"true_mu1", row.true_mu1},
        {"true_mu2", row.true_mu2},
    };
    if (row.coverage) r["coverage"] = *row.coverage;
    if (row.mean_ci_width) r["mean_ci_width"] = *row.mean_ci_width;
    if (row.error) r["error"] = *row.error;
    rows.push_back(std::move(r));
  }
  out << j.dump(2) << '\n';
}

void write_summary(const SimResult& result, std::ostream& out) {
  const auto [rej_lo, rej_hi] = binomial_band(result.config.alpha, result.config.n_sim);
  const auto [cov_lo, cov_hi] = binomial_band(1.0 - result.config.alpha, result.config.n_sim);
  char line[256];
  std::snprintf(line, sizeof(line),
                "type-I band [%.2f%%, %.2f%%], coverage band [%.2f%%, %.2f%%] "
                "(n_sim = %d); * marks within-band values at delta = 0\n",
                rej_lo, rej_hi, cov_lo, cov_hi, result.config.n_sim);
  out << line;
  out << "scenario cens  n1  n2 delta method             estimand    reject%  "
         "  cover%   width\n";
  for (const auto& row : result.rows) {
    if (row.error) {
      std::snprintf(line, sizeof(line), "%-8s %-4s %3d %3d %5.2f %-18s %-10s ERROR: %s\n",
                    to_string(row.scenario.survival), to_string(row.scenario.censoring),
                    row.scenario.n1, row.scenario.n2, row.scenario.delta,
                    to_string(row.method), to_string(row.estimand),
                    row.error->c_str());
      out << line;
      continue;
    }
    const double rej_pct = 100.0 * row.rejection_rate;
    const bool null_cell = row.scenario.delta == 0.0;
    const char rej_flag =
        null_cell && rej_pct >= rej_lo && rej_pct <= rej_hi ? '*' : ' ';
    std::string cover = "      -";
    char cov_flag = ' ';
    if (row.coverage) {
      const double cov_pct = 100.0 * *row.coverage;
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%6.2f%%", cov_pct);
      cover = buf;
      cov_flag = cov_pct >= cov_lo && cov_pct <= cov_hi ? '*' : ' ';
    }
    std::string width = "      -";
    if (row.mean_ci_width) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%7.3f", *row.mean_ci_width);
      width = buf;
    }
    std::snprintf(line, sizeof(line),
                  "%-8s %-4s %3d %3d %5.2f %-18s %-10s %6.2f%%%c %s%c %s\n",
                  to_string(row.scenario.survival), to_string(row.scenario.censoring),
                  row.scenario.n1, row.scenario.n2, row.scenario.delta,
                  to_string(row.method), to_string(row.estimand), rej_pct,
                  rej_flag, cover.c_str(), cov_flag, width.c_str());
    out << line;
  }
}

}  // namespace rmstperm
