#pragma once

#include <vector>

namespace rmstperm {

/// Right-continuous piecewise-constant function on [0, inf).
///
/// value(t) is the value attached to the largest jump time <= t, or
/// initial_value when t lies before the first jump. left_limit(t) gives the
/// value just before t, as a first-class query rather than a shifted copy.
/// The last value carries forward indefinitely, which is exactly the
/// horizontal-extension semantics used for inestimable survival curves.
class StepFunction {
 public:
  /// Constant function.
  explicit StepFunction(double constant_value);

  /// jump_times must be strictly increasing and non-negative.
  StepFunction(double initial_value, std::vector<double> jump_times,
               std::vector<double> values);

  double operator()(double t) const;
  double left_limit(double t) const;

  /// Exact integral over [a, b] as a finite sum of value * length terms.
  double integrate(double a, double b) const;

  double initial_value() const { return initial_; }
  const std::vector<double>& jump_times() const { return times_; }
  const std::vector<double>& values() const { return values_; }
  double last_value() const { return values_.empty() ? initial_ : values_.back(); }

 private:
  double initial_;
  std::vector<double> times_;
  std::vector<double> values_;
};

/// Free-function spelling of StepFunction::integrate.
double integrate_step(const StepFunction& f, double a, double b);

}  // namespace rmstperm
