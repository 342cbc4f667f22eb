#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rmstperm/observation.hpp"
#include "rmstperm/rmst.hpp"
#include "rmstperm/rng.hpp"
#include "rmstperm/step_function.hpp"

namespace rmstperm {

enum class Method { asymptotic, studentized_perm, unstudentized_perm };
enum class Estimand { difference, ratio };

const char* to_string(Method m);
const char* to_string(Estimand e);
Method method_from_string(const std::string& s);
Estimand estimand_from_string(const std::string& s);

struct TestConfig {
  double alpha = 0.05;
  int n_perm = 2000;  // B, permutation replicates
  std::uint64_t seed = 0;
  Method method = Method::studentized_perm;
  Estimand estimand = Estimand::difference;
  int workers = 0;  // 0 = hardware concurrency
  bool keep_replicates = false;
  /// Re-check the pair-preservation invariant on every replicate.
  bool check_pair_preservation = false;
};

struct PermutationDistribution {
  std::vector<double> replicate_stats;  // indexed by replicate
  int quantile_order = 0;               // k = ceil((1-alpha)(B+1))
  double q_pi = 0.0;                    // k-th order statistic; +inf if k > B
};

struct InferenceResult {
  Method method;
  Estimand estimand;
  double statistic = 0.0;   // asymptotic: signed z; permutation: |T_obs|
  double p_value = 1.0;
  bool reject = false;
  double point_estimate = 0.0;  // mu1-mu2, or mu1/mu2 for the ratio
  std::optional<double> ci_lower;  // absent for the unstudentized test
  std::optional<double> ci_upper;
  RmstEstimate group1;
  RmstEstimate group2;
  /// Permutation replicates whose KM curve needed the horizontal extension.
  int extension_replicates = 0;
  std::optional<PermutationDistribution> permutation;
  double alpha = 0.05;
  double tau = 0.0;
  std::uint64_t seed = 0;
};

/// Uniformly random pair-preserving partition of the pooled (time, status)
/// observations into groups of sizes n1 and pooled.size()-n1. The subset of
/// size min(n1, n2) is drawn; a swap of group sizes therefore mirrors the
/// partition exactly under the same generator state.
std::pair<Sample, Sample> permute_pairs(const std::vector<Observation>& pooled,
                                        int n1, Rng& rng);

/// Carries the last KM value forward to tau. The step representation already
/// evaluates that way, so this is the identity; it exists as the explicit
/// policy marker and for symmetry with implementations that store bounded
/// curves.
StepFunction horizontal_extension(StepFunction km, double tau);

/// z-test on the RMST difference (or log-ratio) of Eq.-(1) type, with the
/// plug-in variance. Requires both groups estimable on [0, tau] and n_i >= 2.
InferenceResult asymptotic_test(const Sample& sample1, const Sample& sample2,
                                TimeWindow window, const TestConfig& config);

/// Assembles the asymptotic result from precomputed group estimates.
InferenceResult asymptotic_from_estimates(const RmstEstimate& est1,
                                          const RmstEstimate& est2,
                                          TimeWindow window,
                                          const TestConfig& config);

/// Studentized permutation test and CI: replicate statistic
/// sqrt(n)|mu1_pi - mu2_pi| / sigma_pi, threshold the ceil((1-a)(B+1))-th
/// order statistic, rejection by strict exceedance, CI by inversion.
InferenceResult studentized_perm_test(const Sample& sample1,
                                      const Sample& sample2, TimeWindow window,
                                      const TestConfig& config);

/// Unstudentized permutation test: replicate statistic |mu1_pi - mu2_pi|,
/// no confidence interval. Difference estimand only.
InferenceResult unstudentized_perm_test(const Sample& sample1,
                                        const Sample& sample2,
                                        TimeWindow window,
                                        const TestConfig& config);

/// Runs any subset of methods x estimands over a single permutation sweep
/// (shared partitions). Equals running each test separately with the same
/// seed. Unsupported combinations (unstudentized x ratio) are skipped.
std::vector<InferenceResult> run_inference(const Sample& sample1,
                                           const Sample& sample2,
                                           TimeWindow window,
                                           const TestConfig& base,
                                           const std::vector<Method>& methods,
                                           const std::vector<Estimand>& estimands);

}  // namespace rmstperm
