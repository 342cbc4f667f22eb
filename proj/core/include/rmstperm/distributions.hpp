#pragma once

#include <vector>

#include "rmstperm/rng.hpp"

namespace rmstperm {

enum class DistKind {
  none,  // survival identically 1; sampling yields +infinity (no censoring)
  exponential,
  weibull,
  lognormal,
  piecewise_exponential,
  uniform,
};

/// Parametric time-to-event law with survival/density/hazard evaluation and
/// inverse-transform sampling.
///
/// Conventions follow R: weibull(shape, scale) has S(t) = exp(-(t/scale)^shape);
/// lognormal(meanlog, sdlog) is exp of N(meanlog, sdlog^2). Note the study
/// scenarios quote lognormal spread as a variance, so sdlog = sqrt of it there.
class Distribution {
 public:
  static Distribution none();
  static Distribution exponential(double rate);
  static Distribution weibull(double shape, double scale);
  static Distribution lognormal(double meanlog, double sdlog);
  static Distribution piecewise_exponential(double breakpoint,
                                            double rate_before,
                                            double rate_after);
  static Distribution uniform(double upper);  // Unif[0, upper]

  DistKind kind() const { return kind_; }
  double param(int i) const { return p_[i]; }

  double survival(double t) const;
  double density(double t) const;
  double hazard(double t) const;
  double cumulative_hazard(double t) const;

  /// One inverse-transform draw.
  double sample(Rng& rng) const;

  /// Interior points where the law is not smooth; quadrature splits here.
  std::vector<double> breakpoints() const;

 private:
  Distribution(DistKind kind, double a, double b, double c);

  DistKind kind_;
  double p_[3];
};

/// count i.i.d. draws.
std::vector<double> sample_survival(const Distribution& dist, Rng& rng,
                                    int count);

}  // namespace rmstperm
