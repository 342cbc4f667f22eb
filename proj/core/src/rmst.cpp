#include "rmstperm/rmst.hpp"

#include <cmath>

#include "rmstperm/errors.hpp"

namespace rmstperm {

TimeWindow::TimeWindow(double tau_) : tau(tau_) {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw invalid_input_error("TimeWindow: tau must be finite and > 0");
}

double rmst(const StepFunction& survival_curve, TimeWindow window) {
  return survival_curve.integrate(0.0, window.tau);
}

double rmst_variance(const Sample& sample, TimeWindow window, int total_size) {
  if (sample.empty()) throw invalid_input_error("rmst_variance: empty sample");
  const double tau = window.tau;
  const auto km = kaplan_meier(sample);
  const auto counts = counting_processes(sample);

  const auto& event_times = counts.events.jump_times();
  const auto& event_cum = counts.events.values();
  double sigma2 = 0.0;
  double prev_cum = 0.0;
  for (std::size_t k = 0; k < event_times.size(); ++k) {
    const double x = event_times[k];
    const double d = event_cum[k] - prev_cum;
    prev_cum = event_cum[k];
    if (x > tau) break;
    const double w = km.integrate(x, tau);
    if (w == 0.0) continue;  // covers dA(x) = 1, where the curve vanishes
    const double y = counts.at_risk.left_limit(x);
    sigma2 += total_size * w * w * d / (y * (y - d));
  }
  return sigma2;
}

double ratio_variance(const RmstEstimate& est1, const RmstEstimate& est2) {
  if (!(est1.mu_hat > 0.0) || !(est2.mu_hat > 0.0))
    throw degenerate_estimate_error(
        "ratio_variance: zero RMST estimate, log ratio undefined");
  return est1.sigma2_hat / (est1.mu_hat * est1.mu_hat) +
         est2.sigma2_hat / (est2.mu_hat * est2.mu_hat);
}

RmstEstimate estimate_group(const Sample& sample, TimeWindow window,
                            int total_size, Extension extension) {
  if (sample.empty()) throw invalid_input_error("estimate_group: empty sample");
  const auto report = estimability(sample, window.tau);
  if (!report.fully_estimable_on_window && extension == Extension::forbid)
    throw estimability_error(
        "Kaplan-Meier curve is not estimable up to tau; lower tau below the "
        "largest (censored) observation or allow horizontal extension");
  RmstEstimate est;
  est.mu_hat = rmst(kaplan_meier(sample), window);
  est.sigma2_hat = rmst_variance(sample, window, total_size);
  est.group_size = static_cast<int>(sample.size());
  est.total_size = total_size;
  return est;
}

}  // namespace rmstperm
