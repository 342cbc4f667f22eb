#pragma once

#include "rmstperm/observation.hpp"
#include "rmstperm/step_function.hpp"
#include "rmstperm/survival.hpp"

namespace rmstperm {

struct TimeWindow {
  double tau;
  explicit TimeWindow(double tau_);
};

/// Restricted mean and plug-in variance for one group.
/// sigma2_hat estimates the asymptotic variance of sqrt(n) * (mu_hat - mu),
/// n being the total (pooled) sample size.
struct RmstEstimate {
  double mu_hat = 0.0;
  double sigma2_hat = 0.0;
  int group_size = 0;
  int total_size = 0;
};

/// Area under the survival curve over [0, tau]. The step representation
/// carries its last value forward, so integrating past the last jump is the
/// horizontal extension; callers that must not extend check estimability
/// first (see estimate_group).
double rmst(const StepFunction& survival_curve, TimeWindow window);

/// Plug-in variance estimate: for every event time x <= tau,
///   n * w(x)^2 * dN(x) / (Y(x) * (Y(x) - dN(x)))
/// with w(x) the remaining area under the curve from x to tau. The at-risk
/// denominator uses Y/n_i directly (equal to S- * G- under the events-first
/// tie convention). A term with w(x) = 0 contributes 0, which also covers
/// the dA(x) = 1 case where the whole risk set fails.
double rmst_variance(const Sample& sample, TimeWindow window, int total_size);

/// Variance of the log RMST ratio: s1^2/m1^2 + s2^2/m2^2.
/// Throws degenerate_estimate_error when either mu_hat is zero.
double ratio_variance(const RmstEstimate& est1, const RmstEstimate& est2);

enum class Extension { forbid, horizontal };

/// Full per-group estimation: estimability check, KM fit, RMST, variance.
/// Extension::forbid raises estimability_error when the KM curve is not
/// determined on all of [0, tau].
RmstEstimate estimate_group(const Sample& sample, TimeWindow window,
                            int total_size, Extension extension);

}  // namespace rmstperm
