#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rmstperm/csv.hpp"
#include "rmstperm/inference.hpp"

namespace rmstperm {

/// Per-group descriptive block of a test report.
struct GroupSummary {
  std::string label;
  int index = 0;  // 1 or 2; direction of mu1 - mu2 is group[0] minus group[1]
  int n = 0;
  int events = 0;
  int censored = 0;
  double censor_rate = 0.0;
  double mu_hat = 0.0;
  double sigma2_hat = 0.0;
  double se_mu = 0.0;  // sqrt(sigma2_hat / n_total)
};

/// Machine-readable result document for the `test` command. Round-trips
/// losslessly through JSON.
struct ReportDocument {
  std::string version;
  double tau = 0.0;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  int n_perm = 0;
  std::vector<GroupSummary> groups;
  std::vector<InferenceResult> results;
};

ReportDocument make_report(const Dataset& dataset,
                           const std::vector<InferenceResult>& results,
                           TimeWindow window, const TestConfig& config);

std::string to_json_string(const ReportDocument& report, int indent = 2);
ReportDocument report_from_json_string(const std::string& text);

void print_report(const ReportDocument& report, std::ostream& out);

}  // namespace rmstperm
