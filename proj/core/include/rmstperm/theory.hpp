#pragma once

#include "rmstperm/distributions.hpp"
#include "rmstperm/rmst.hpp"

namespace rmstperm {

/// A group's data-generating pair: survival law and censoring law.
struct TheoreticalModel {
  Distribution survival;
  Distribution censoring;
};

/// mu = int_0^tau S(t) dt by adaptive quadrature (abs tol 1e-10). Families
/// with elementary antiderivatives take a closed-form fast path; the two
/// routes agree to 1e-8 (tested).
double true_rmst(const Distribution& survival, TimeWindow window);
double true_rmst(const TheoreticalModel& model, TimeWindow window);

/// Forces the quadrature route; the fast path is validated against this.
double true_rmst_quadrature(const Distribution& survival, TimeWindow window);

/// Asymptotic variance of sqrt(n) (mu_hat_i - mu_i):
///   kappa^-1 int_0^tau w(x)^2 / (G(x) S(x)) dA(x),
/// for continuous laws (dA = hazard dx, left limits coincide).
/// Throws model_error when S*G vanishes inside the window with hazard mass.
double true_sigma2(const TheoreticalModel& model, double kappa,
                   TimeWindow window);

/// Limit variance of the permuted unstudentized statistic
/// sqrt(n)(mu1_pi - mu2_pi): builds the pooled y, nu, A, S and evaluates
///   (kappa1 kappa2)^-1 int_0^tau w(x)^2 / y(x) dA(x).
/// Coincides with sigma1^2 + sigma2^2 exactly when the two models are equal.
double true_sigma2_perm(const TheoreticalModel& model1,
                        const TheoreticalModel& model2, double kappa1,
                        TimeWindow window);

}  // namespace rmstperm
