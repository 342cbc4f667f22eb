#include "rmstperm/step_function.hpp"

#include <algorithm>
#include <cmath>

#include "rmstperm/errors.hpp"

namespace rmstperm {

StepFunction::StepFunction(double constant_value) : initial_(constant_value) {}

StepFunction::StepFunction(double initial_value, std::vector<double> jump_times,
                           std::vector<double> values)
    : initial_(initial_value),
      times_(std::move(jump_times)),
      values_(std::move(values)) {
  if (times_.size() != values_.size())
    throw invalid_input_error("StepFunction: jump_times/values size mismatch");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || times_[i] < 0.0)
      throw invalid_input_error("StepFunction: jump times must be finite and >= 0");
    if (i > 0 && !(times_[i] > times_[i - 1]))
      throw invalid_input_error("StepFunction: jump times must be strictly increasing");
  }
}

double StepFunction::operator()(double t) const {
  // index of the largest jump time <= t
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return initial_;
  return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

double StepFunction::left_limit(double t) const {
  // index of the largest jump time < t
  auto it = std::lower_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return initial_;
  return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

double StepFunction::integrate(double a, double b) const {
  if (!(a <= b)) throw invalid_input_error("integrate_step: requires a <= b");
  if (a == b) return 0.0;

  double total = 0.0;
  double cursor = a;
  double value = (*this)(a);
  auto it = std::upper_bound(times_.begin(), times_.end(), a);
  for (; it != times_.end() && *it < b; ++it) {
    total += value * (*it - cursor);
    cursor = *it;
    value = values_[static_cast<std::size_t>(it - times_.begin())];
  }
  total += value * (b - cursor);
  return total;
}

double integrate_step(const StepFunction& f, double a, double b) {
  return f.integrate(a, b);
}

}  // namespace rmstperm
