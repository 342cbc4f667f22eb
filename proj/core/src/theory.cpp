#include "rmstperm/theory.hpp"

#include <cmath>

#include "rmstperm/errors.hpp"
#include "rmstperm/quadrature.hpp"

namespace rmstperm {

namespace {

std::vector<double> merged_breakpoints(
    std::initializer_list<const Distribution*> dists) {
  std::vector<double> pts;
  for (const auto* d : dists)
    for (double p : d->breakpoints()) pts.push_back(p);
  return pts;
}

void check_window_support(double surv_at_tau, double tau) {
  if (!(surv_at_tau > 0.0))
    throw model_error(
        "theoretical model: P(X >= tau) = 0 at tau = " + std::to_string(tau) +
        "; the window exceeds the model support");
}

}  // namespace

double true_rmst_quadrature(const Distribution& survival, TimeWindow window) {
  return integrate_adaptive_split(
      [&](double t) { return survival.survival(t); }, 0.0, window.tau,
      survival.breakpoints(), 1e-10);
}

double true_rmst(const Distribution& survival, TimeWindow window) {
  const double tau = window.tau;
  switch (survival.kind()) {
    case DistKind::none:
      return tau;
    case DistKind::exponential: {
      const double rate = survival.param(0);
      return -std::expm1(-rate * tau) / rate;
    }
    case DistKind::piecewise_exponential: {
      const double c = survival.param(0);
      const double r1 = survival.param(1);
      const double r2 = survival.param(2);
      const double m = std::min(c, tau);
      double mu = -std::expm1(-r1 * m) / r1;
      if (tau > c)
        mu += std::exp(-r1 * c) * (-std::expm1(-r2 * (tau - c))) / r2;
      return mu;
    }
    case DistKind::uniform: {
      const double b = survival.param(0);
      const double m = std::min(tau, b);
      return m - m * m / (2.0 * b);
    }
    default:
      return true_rmst_quadrature(survival, window);
  }
}

double true_rmst(const TheoreticalModel& model, TimeWindow window) {
  return true_rmst(model.survival, window);
}

double true_sigma2(const TheoreticalModel& model, double kappa,
                   TimeWindow window) {
  if (!(kappa > 0.0 && kappa < 1.0))
    throw invalid_input_error("true_sigma2: kappa must lie in (0, 1)");
  const double tau = window.tau;
  const auto& surv = model.survival;
  const auto& cens = model.censoring;
  check_window_support(surv.survival(tau) * cens.survival(tau), tau);

  const auto bps = merged_breakpoints({&surv, &cens});
  CumulativeIntegral area([&](double t) { return surv.survival(t); }, 0.0, tau,
                          bps, 1e-12);
  const double mu_total = area.total();

  auto integrand = [&](double x) {
    const double w = mu_total - area.prefix(x);
    const double h = surv.hazard(x);
    if (h == 0.0 || w == 0.0) return 0.0;
    return w * w * h / (cens.survival(x) * surv.survival(x));
  };
  return integrate_adaptive_split(integrand, 0.0, tau, bps, 1e-9) / kappa;
}

double true_sigma2_perm(const TheoreticalModel& model1,
                        const TheoreticalModel& model2, double kappa1,
                        TimeWindow window) {
  if (!(kappa1 > 0.0 && kappa1 < 1.0))
    throw invalid_input_error("true_sigma2_perm: kappa1 must lie in (0, 1)");
  const double tau = window.tau;
  const double kappa2 = 1.0 - kappa1;

  auto y = [&](double x) {
    return kappa1 * model1.survival.survival(x) * model1.censoring.survival(x) +
           kappa2 * model2.survival.survival(x) * model2.censoring.survival(x);
  };
  auto nu_prime = [&](double x) {
    return kappa1 * model1.censoring.survival(x) * model1.survival.density(x) +
           kappa2 * model2.censoring.survival(x) * model2.survival.density(x);
  };
  check_window_support(y(tau), tau);

  const auto bps =
      merged_breakpoints({&model1.survival, &model1.censoring,
                          &model2.survival, &model2.censoring});

  // pooled cumulative hazard A, pooled survival exp(-A), remaining area w
  CumulativeIntegral hazard_cum([&](double x) { return nu_prime(x) / y(x); },
                                0.0, tau, bps, 1e-12);
  CumulativeIntegral area([&](double t) { return std::exp(-hazard_cum.prefix(t)); },
                          0.0, tau, bps, 1e-12);
  const double mu_total = area.total();

  auto integrand = [&](double x) {
    const double w = mu_total - area.prefix(x);
    const double np = nu_prime(x);
    if (np == 0.0 || w == 0.0) return 0.0;
    const double yx = y(x);
    return w * w * np / (yx * yx);
  };
  const double integral = integrate_adaptive_split(integrand, 0.0, tau, bps, 1e-9);
  return integral / (kappa1 * kappa2);
}

}  // namespace rmstperm
