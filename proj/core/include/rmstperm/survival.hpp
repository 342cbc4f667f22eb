#pragma once

#include "rmstperm/observation.hpp"
#include "rmstperm/step_function.hpp"

namespace rmstperm {

/// N(t) and Y(t) for one sample.
///
/// `events` is N(t), the number of observed events up to and including t
/// (right-continuous). `at_risk` stores the right-continuous modification of
/// the at-risk process, i.e. its value on [t_k, t_{k+1}) is #{X > t_k}; the
/// usual left-continuous at-risk count Y(t) = #{X >= t} is obtained as
/// at_risk.left_limit(t).
struct CountingProcesses {
  StepFunction events;
  StepFunction at_risk;
};

CountingProcesses counting_processes(const Sample& sample);

/// Product-limit estimator of the survival function. Ties between events and
/// censorings are resolved events-first: at a tied time both enter the risk
/// set, events generate the factor, censorings leave afterwards.
StepFunction kaplan_meier(const Sample& sample);

/// Nelson-Aalen estimator of the cumulative hazard.
StepFunction nelson_aalen(const Sample& sample);

/// Product-limit estimator of the censoring survival function G, with the
/// roles of events and censorings swapped. Under the events-first tie
/// convention, S-(t) * G-(t) == Y(t)/n at every observed time.
StepFunction censoring_km(const Sample& sample);

struct EstimabilityReport {
  /// Largest time up to which the KM curve is determined by the data;
  /// +infinity when the largest observation is an event.
  double estimable_to = 0.0;
  bool fully_estimable_on_window = false;
};

/// A window [0, tau] is fully estimable unless the maximum observed time is
/// censored and lies strictly below tau (a tied maximum counts as an event
/// when any of the tied observations is one).
EstimabilityReport estimability(const Sample& sample, double tau);

}  // namespace rmstperm
