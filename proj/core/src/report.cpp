#include "rmstperm/report.hpp"

#include <cmath>
#include <limits>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "rmstperm/errors.hpp"
#include "rmstperm/version.hpp"

namespace rmstperm {

namespace {

// JSON has no infinities; non-finite values round-trip as tagged strings.
nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw parse_error("report JSON: unexpected numeric string '" + s + "'");
  }
  return j.get<double>();
}

GroupSummary summarize_group(const Sample& sample, const std::string& label,
                             int index, const RmstEstimate& est) {
  GroupSummary g;
  g.label = label;
  g.index = index;
  g.n = static_cast<int>(sample.size());
  for (const auto& o : sample.observations()) (o.event ? g.events : g.censored)++;
  g.censor_rate = g.n > 0 ? static_cast<double>(g.censored) / g.n : 0.0;
  g.mu_hat = est.mu_hat;
  g.sigma2_hat = est.sigma2_hat;
  g.se_mu = est.total_size > 0 ? std::sqrt(est.sigma2_hat / est.total_size) : 0.0;
  return g;
}

nlohmann::json result_to_json(const InferenceResult& r) {
  nlohmann::json j = {
      {"method", to_string(r.method)},
      {"estimand", to_string(r.estimand)},
      {"statistic", json_number(r.statistic)},
      {"p_value", json_number(r.p_value)},
      {"reject", r.reject},
      {"point_estimate", json_number(r.point_estimate)},
      {"alpha", r.alpha},
      {"tau", r.tau},
      {"seed", r.seed},
      {"extension_replicates", r.extension_replicates},
  };
  if (r.ci_lower) j["ci_lower"] = json_number(*r.ci_lower);
  if (r.ci_upper) j["ci_upper"] = json_number(*r.ci_upper);
  return j;
}

InferenceResult result_from_json(const nlohmann::json& j) {
  InferenceResult r;
  r.method = method_from_string(j.at("method").get<std::string>());
  r.estimand = estimand_from_string(j.at("estimand").get<std::string>());
  r.statistic = number_from_json(j.at("statistic"));
  r.p_value = number_from_json(j.at("p_value"));
  r.reject = j.at("reject").get<bool>();
  r.point_estimate = number_from_json(j.at("point_estimate"));
  r.alpha = j.at("alpha").get<double>();
  r.tau = j.at("tau").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.extension_replicates = j.at("extension_replicates").get<int>();
  if (j.contains("ci_lower")) r.ci_lower = number_from_json(j.at("ci_lower"));
  if (j.contains("ci_upper")) r.ci_upper = number_from_json(j.at("ci_upper"));
  return r;
}

}  // namespace

ReportDocument make_report(const Dataset& dataset,
                           const std::vector<InferenceResult>& results,
                           TimeWindow window, const TestConfig& config) {
  ReportDocument doc;
  doc.version = RMSTPERM_VERSION;
  doc.tau = window.tau;
  doc.alpha = config.alpha;
  doc.seed = config.seed;
  doc.n_perm = config.n_perm;
  if (!results.empty()) {
    doc.groups.push_back(summarize_group(dataset.group1, dataset.group_labels[0],
                                         1, results.front().group1));
    doc.groups.push_back(summarize_group(dataset.group2, dataset.group_labels[1],
                                         2, results.front().group2));
  }
  doc.results = results;
  return doc;
}

std::string to_json_string(const ReportDocument& report, int indent) {
  nlohmann::json j;
  j["version"] = report.version;
  j["tau"] = report.tau;
  j["alpha"] = report.alpha;
  j["seed"] = report.seed;
  j["n_perm"] = report.n_perm;
  j["groups"] = nlohmann::json::array();
  for (const auto& g : report.groups) {
    j["groups"].push_back({
        {"label", g.label},
        {"index", g.index},
        {"n", g.n},
        {"events", g.events},
        {"censored", g.censored},
        {"censor_rate", g.censor_rate},
        {"rmst", g.mu_hat},
        {"sigma2", g.sigma2_hat},
        {"se_rmst", g.se_mu},
    });
  }
  j["results"] = nlohmann::json::array();
  for (const auto& r : report.results) j["results"].push_back(result_to_json(r));
  return j.dump(indent) + "\n";
}

ReportDocument report_from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& ex) {
    throw parse_error(std::string("report JSON: ") + ex.what());
  }
  ReportDocument doc;
  doc.version = j.at("version").get<std::string>();
  doc.tau = j.at("tau").get<double>();
  doc.alpha = j.at("alpha").get<double>();
  doc.seed = j.at("seed").get<std::uint64_t>();
  doc.n_perm = j.at("n_perm").get<int>();
  for (const auto& gj : j.at("groups")) {
    GroupSummary g;
    g.label = gj.at("label").get<std::string>();
    g.index = gj.at("index").get<int>();
    g.n = gj.at("n").get<int>();
    g.events = gj.at("events").get<int>();
    g.censored = gj.at("censored").get<int>();
    g.censor_rate = gj.at("censor_rate").get<double>();
    g.mu_hat = gj.at("rmst").get<double>();
    g.sigma2_hat = gj.at("sigma2").get<double>();
    g.se_mu = gj.at("se_rmst").get<double>();
    doc.groups.push_back(std::move(g));
  }
  for (const auto& rj : j.at("results")) doc.results.push_back(result_from_json(rj));
  return doc;
}

void print_report(const ReportDocument& report, std::ostream& out) {
  char line[256];
  std::snprintf(line, sizeof(line),
                "RMST two-sample comparison (tau = %g, alpha = %g, B = %d, "
                "seed = %llu, rmstperm %s)\n",
                report.tau, report.alpha, report.n_perm,
                static_cast<unsigned long long>(report.seed),
                report.version.c_str());
  out << line;
  out << "group 1 is '" << (report.groups.empty() ? "?" : report.groups[0].label)
      << "', group 2 is '" << (report.groups.size() > 1 ? report.groups[1].label : "?")
      << "'; differences are group1 - group2, ratios group1 / group2\n\n";

  out << "group            n  events  cens   cens%      rmst   se(rmst)\n";
  for (const auto& g : report.groups) {
    std::snprintf(line, sizeof(line), "%-14s %3d %7d %5d %6.1f%% %9.4f %10.4f\n",
                  g.label.c_str(), g.n, g.events, g.censored,
                  100.0 * g.censor_rate, g.mu_hat, g.se_mu);
    out << line;
  }
  out << "\nmethod             estimand    estimate     statistic   p-value  "
         "95% CI                 reject\n";
  for (const auto& r : report.results) {
    std::string ci = "[-, -]";
    if (r.ci_lower && r.ci_upper) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "[%.4f, %.4f]", *r.ci_lower, *r.ci_upper);
      ci = buf;
    }
    std::snprintf(line, sizeof(line), "%-18s %-10s %9.4f %13.4f %9.4f  %-22s %s\n",
                  to_string(r.method), to_string(r.estimand), r.point_estimate,
                  r.statistic, r.p_value, ci.c_str(), r.reject ? "yes" : "no");
    out << line;
  }
  for (const auto& r : report.results) {
    if (r.method != Method::asymptotic && r.extension_replicates > 0) {
      std::snprintf(line, sizeof(line),
                    "\n%d of %d permutation replicates used the horizontal "
                    "KM extension\n",
                    r.extension_replicates, report.n_perm);
      out << line;
      break;
    }
  }
}

}  // namespace rmstperm
