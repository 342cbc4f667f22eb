#include "rmstperm/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "rmstperm/errors.hpp"
#include "rmstperm/survival.hpp"

namespace rmstperm {

namespace {

struct ParamFamily {
  std::function<Distribution(double)> make;
  double lo, hi;          // initial bracket
  bool expand_lo, expand_hi;  // geometric expansion allowed past the bracket
};

double family_rmst(const ParamFamily& family, double p, double tau) {
  return true_rmst(family.make(p), TimeWindow(tau));
}

// Bracketing bisection on a family whose RMST is monotone in the parameter.
double solve_monotone(const ParamFamily& family, double target, double tau,
                      const char* what) {
  double lo = family.lo, hi = family.hi;
  double f_lo = family_rmst(family, lo, tau) - target;
  double f_hi = family_rmst(family, hi, tau) - target;

  for (int round = 0; round < 200 && f_lo * f_hi > 0.0; ++round) {
    bool grew = false;
    if (family.expand_lo && lo > 1e-12) {
      lo *= 0.5;
      f_lo = family_rmst(family, lo, tau) - target;
      grew = true;
    }
    if (f_lo * f_hi <= 0.0) break;
    if (family.expand_hi && hi < 1e12) {
      hi *= 2.0;
      f_hi = family_rmst(family, hi, tau) - target;
      grew = true;
    }
    if (!grew) break;
  }
  if (f_lo * f_hi > 0.0) {
    std::ostringstream msg;
    msg << what << ": target RMST " << target
        << " is not attainable; the family reaches ["
        << std::min(f_lo, f_hi) + target << ", "
        << std::max(f_lo, f_hi) + target << "] over the parameter range ["
        << lo << ", " << hi << "]";
    throw calibration_error(msg.str());
  }

  // light monotonicity check across the bracket
  const double f_mid = family_rmst(family, 0.5 * (lo + hi), tau) - target;
  const bool increasing = f_hi > f_lo;
  if ((increasing && (f_mid < f_lo - 1e-9 || f_mid > f_hi + 1e-9)) ||
      (!increasing && (f_mid > f_lo + 1e-9 || f_mid < f_hi - 1e-9)))
    throw calibration_error(std::string(what) +
                            ": RMST is not monotone over the bracket");

  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double f_mid_it = family_rmst(family, mid, tau) - target;
    if (std::abs(f_mid_it) < 1e-10) return mid;
    if ((f_mid_it > 0.0) == (f_hi > 0.0)) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo < 1e-15 * std::max(1.0, std::abs(mid))) break;
  }
  if (std::abs(family_rmst(family, mid, tau) - target) > 1e-9)
    throw calibration_error(std::string(what) + ": bisection failed to converge");
  return mid;
}

ParamFamily group2_family(SurvivalScenario scenario) {
  switch (scenario) {
    case SurvivalScenario::S1:
      return {[](double p) { return Distribution::exponential(p); },
              0.01, 2.0, true, true};
    case SurvivalScenario::S2:
      return {[](double p) { return Distribution::piecewise_exponential(2.0, 0.2, p); },
              0.01, 2.0, true, true};
    case SurvivalScenario::S3:
      return {[](double p) { return Distribution::piecewise_exponential(p, 0.5, 0.05); },
              1e-9, 10.0 - 1e-9, false, false};
    case SurvivalScenario::S4:
      return {[](double p) { return Distribution::lognormal(p, 0.5); },
              0.5, 4.0, true, true};
    case SurvivalScenario::S5:
      return {[](double p) { return Distribution::weibull(p, 14.0); },
              0.01, 3.0, false, false};
    case SurvivalScenario::S6:
      return {[](double p) { return Distribution::weibull(1.5, p); },
              1.0, 64.0, true, true};
    case SurvivalScenario::S7:
      return {[](double p) { return Distribution::piecewise_exponential(p, 0.15, 0.02); },
              1e-9, 10.0 - 1e-9, false, false};
  }
  throw invalid_input_error("unknown survival scenario");
}

}  // namespace

const char* to_string(SurvivalScenario s) {
  switch (s) {
    case SurvivalScenario::S1: return "S1";
    case SurvivalScenario::S2: return "S2";
    case SurvivalScenario::S3: return "S3";
    case SurvivalScenario::S4: return "S4";
    case SurvivalScenario::S5: return "S5";
    case SurvivalScenario::S6: return "S6";
    case SurvivalScenario::S7: return "S7";
  }
  return "?";
}

const char* to_string(CensoringScenario c) {
  switch (c) {
    case CensoringScenario::C1: return "C1";
    case CensoringScenario::C2: return "C2";
    case CensoringScenario::C3: return "C3";
  }
  return "?";
}

SurvivalScenario survival_scenario_from_string(const std::string& s) {
  for (auto v : {SurvivalScenario::S1, SurvivalScenario::S2, SurvivalScenario::S3,
                 SurvivalScenario::S4, SurvivalScenario::S5, SurvivalScenario::S6,
                 SurvivalScenario::S7})
    if (s == to_string(v)) return v;
  throw invalid_input_error("unknown survival scenario: " + s);
}

CensoringScenario censoring_scenario_from_string(const std::string& s) {
  for (auto v : {CensoringScenario::C1, CensoringScenario::C2, CensoringScenario::C3})
    if (s == to_string(v)) return v;
  throw invalid_input_error("unknown censoring scenario: " + s);
}

Distribution survival_model(SurvivalScenario scenario, int group,
                            double solved_param) {
  if (group == 1) {
    switch (scenario) {
      case SurvivalScenario::S1:
      case SurvivalScenario::S2:
      case SurvivalScenario::S3:
        return Distribution::exponential(0.2);
      case SurvivalScenario::S4:
        return Distribution::lognormal(2.0, 0.5);  // log-variance 0.25
      case SurvivalScenario::S5:
      case SurvivalScenario::S6:
        return Distribution::weibull(3.0, 8.0);
      case SurvivalScenario::S7:
        return Distribution::weibull(2.0, 7.0);
    }
    throw invalid_input_error("unknown survival scenario");
  }
  if (group != 2) throw invalid_input_error("group must be 1 or 2");
  return group2_family(scenario).make(solved_param);
}

Distribution censoring_model(CensoringScenario scenario, int group) {
  if (group != 1 && group != 2)
    throw invalid_input_error("group must be 1 or 2");
  switch (scenario) {
    case CensoringScenario::C1:
      return group == 1 ? Distribution::weibull(3.0, 18.0)
                        : Distribution::weibull(0.5, 40.0);
    case CensoringScenario::C2:
      return Distribution::uniform(25.0);
    case CensoringScenario::C3:
      return Distribution::weibull(3.0, 15.0);
  }
  throw invalid_input_error("unknown censoring scenario");
}

double solve_param(const ScenarioSpec& spec) {
  if (spec.delta < 0.0)
    throw invalid_input_error("ScenarioSpec: delta must be >= 0");
  const double mu1 =
      true_rmst(survival_model(spec.survival, 1, 0.0), TimeWindow(spec.tau));
  const double target = mu1 + spec.delta;
  if (target > spec.tau)
    throw calibration_error("target RMST exceeds tau; no survival curve can reach it");
  return solve_monotone(group2_family(spec.survival), target, spec.tau,
                        to_string(spec.survival));
}

ScenarioSpec calibrate(ScenarioSpec spec) {
  spec.solved_param = solve_param(spec);
  return spec;
}

TheoreticalModel theoretical_model(const ScenarioSpec& spec, int group) {
  if (group == 2 && !spec.solved_param)
    throw invalid_input_error("theoretical_model: scenario not calibrated");
  return {survival_model(spec.survival, group,
                         group == 2 ? *spec.solved_param : 0.0),
          censoring_model(spec.censoring, group)};
}

GeneratedData generate_dataset(const ScenarioSpec& spec, Rng& rng,
                               int regen_cap) {
  if (!spec.solved_param)
    throw invalid_input_error("generate_dataset: scenario not calibrated");
  if (spec.n1 < 2 || spec.n2 < 2)
    throw invalid_input_error("generate_dataset: group sizes must be >= 2");

  const Distribution surv[2] = {survival_model(spec.survival, 1, 0.0),
                                survival_model(spec.survival, 2, *spec.solved_param)};
  const Distribution cens[2] = {censoring_model(spec.censoring, 1),
                                censoring_model(spec.censoring, 2)};
  const int sizes[2] = {spec.n1, spec.n2};

  GeneratedData out;
  for (int attempt = 0; attempt <= regen_cap; ++attempt) {
    Sample groups[2];
    bool estimable = true;
    for (int g = 0; g < 2; ++g) {
      std::vector<Observation> obs(static_cast<std::size_t>(sizes[g]));
      double max_time = -1.0;
      bool max_event = false;
      for (auto& o : obs) {
        const double t = surv[g].sample(rng);
        const double c = cens[g].sample(rng);
        o.time = std::min(t, c);
        o.event = t <= c;
        o.group = g + 1;
        if (o.time > max_time) {
          max_time = o.time;
          max_event = o.event;
        } else if (o.time == max_time && o.event) {
          max_event = true;
        }
      }
      if (!max_event && max_time < spec.tau) estimable = false;
      groups[g] = Sample(std::move(obs));
    }
    if (estimable) {
      out.group1 = std::move(groups[0]);
      out.group2 = std::move(groups[1]);
      return out;
    }
    ++out.regenerations;
  }
  throw calibration_error(
      "generate_dataset: regeneration cap exceeded; the configuration almost "
      "never yields an estimable dataset at tau");
}

}  // namespace rmstperm
