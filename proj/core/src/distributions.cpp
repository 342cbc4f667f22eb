#include "rmstperm/distributions.hpp"

#include <cmath>
#include <limits>

#include "rmstperm/errors.hpp"
#include "rmstperm/stats.hpp"

namespace rmstperm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw invalid_input_error(std::string("Distribution: ") + what +
                              " must be finite and > 0");
}
}  // namespace

Distribution::Distribution(DistKind kind, double a, double b, double c)
    : kind_(kind), p_{a, b, c} {}

Distribution Distribution::none() { return {DistKind::none, 0, 0, 0}; }

Distribution Distribution::exponential(double rate) {
  require_positive(rate, "rate");
  return {DistKind::exponential, rate, 0, 0};
}

Distribution Distribution::weibull(double shape, double scale) {
  require_positive(shape, "shape");
  require_positive(scale, "scale");
  return {DistKind::weibull, shape, scale, 0};
}

Distribution Distribution::lognormal(double meanlog, double sdlog) {
  require_positive(sdlog, "sdlog");
  if (!std::isfinite(meanlog))
    throw invalid_input_error("Distribution: meanlog must be finite");
  return {DistKind::lognormal, meanlog, sdlog, 0};
}

Distribution Distribution::piecewise_exponential(double breakpoint,
                                                 double rate_before,
                                                 double rate_after) {
  require_positive(breakpoint, "breakpoint");
  require_positive(rate_before, "rate_before");
  require_positive(rate_after, "rate_after");
  return {DistKind::piecewise_exponential, breakpoint, rate_before, rate_after};
}

Distribution Distribution::uniform(double upper) {
  require_positive(upper, "upper");
  return {DistKind::uniform, upper, 0, 0};
}

double Distribution::cumulative_hazard(double t) const {
  if (t <= 0.0) return 0.0;
  switch (kind_) {
    case DistKind::none:
      return 0.0;
    case DistKind::exponential:
      return p_[0] * t;
    case DistKind::weibull:
      return std::pow(t / p_[1], p_[0]);
    case DistKind::lognormal:
      return -std::log(survival(t));
    case DistKind::piecewise_exponential:
      return t <= p_[0] ? p_[1] * t : p_[1] * p_[0] + p_[2] * (t - p_[0]);
    case DistKind::uniform:
      return t >= p_[0] ? kInf : -std::log1p(-t / p_[0]);
  }
  return 0.0;
}

double Distribution::survival(double t) const {
  if (t <= 0.0) return 1.0;
  switch (kind_) {
    case DistKind::none:
      return 1.0;
    case DistKind::lognormal:
      return normal_cdf(-(std::log(t) - p_[0]) / p_[1]);
    case DistKind::uniform:
      return t >= p_[0] ? 0.0 : 1.0 - t / p_[0];
    default:
      return std::exp(-cumulative_hazard(t));
  }
}

double Distribution::hazard(double t) const {
  switch (kind_) {
    case DistKind::none:
      return 0.0;
    case DistKind::exponential:
      return p_[0];
    case DistKind::weibull: {
      if (t <= 0.0) return p_[0] > 1.0 ? 0.0 : (p_[0] == 1.0 ? 1.0 / p_[1] : kInf);
      return (p_[0] / p_[1]) * std::pow(t / p_[1], p_[0] - 1.0);
    }
    case DistKind::lognormal: {
      const double s = survival(t);
      return s > 0.0 ? density(t) / s : kInf;
    }
    case DistKind::piecewise_exponential:
      return t <= p_[0] ? p_[1] : p_[2];
    case DistKind::uniform:
      return t >= p_[0] ? kInf : 1.0 / (p_[0] - t);
  }
  return 0.0;
}

double Distribution::density(double t) const {
  switch (kind_) {
    case DistKind::none:
      return 0.0;
    case DistKind::lognormal: {
      if (t <= 0.0) return 0.0;
      const double z = (std::log(t) - p_[0]) / p_[1];
      return std::exp(-0.5 * z * z) / (t * p_[1] * std::sqrt(2.0 * M_PI));
    }
    case DistKind::uniform:
      return (t >= 0.0 && t < p_[0]) ? 1.0 / p_[0] : 0.0;
    default:
      return hazard(t) * survival(t);
  }
}

double Distribution::sample(Rng& rng) const {
  switch (kind_) {
    case DistKind::none:
      return kInf;
    case DistKind::exponential:
      return -std::log(rng.uniform_pos()) / p_[0];
    case DistKind::weibull:
      return p_[1] * std::pow(-std::log(rng.uniform_pos()), 1.0 / p_[0]);
    case DistKind::lognormal:
      return std::exp(p_[0] + p_[1] * normal_quantile(rng.uniform_pos()));
    case DistKind::piecewise_exponential: {
      // invert the piecewise-linear cumulative hazard
      const double e = -std::log(rng.uniform_pos());
      const double h_break = p_[1] * p_[0];
      return e <= h_break ? e / p_[1] : p_[0] + (e - h_break) / p_[2];
    }
    case DistKind::uniform:
      return p_[0] * rng.uniform01();
  }
  return kInf;
}

std::vector<double> Distribution::breakpoints() const {
  switch (kind_) {
    case DistKind::piecewise_exponential:
      return {p_[0]};
    case DistKind::uniform:
      return {p_[0]};
    default:
      return {};
  }
}

std::vector<double> sample_survival(const Distribution& dist, Rng& rng,
                                    int count) {
  if (count < 0) throw invalid_input_error("sample_survival: negative count");
  std::vector<double> draws(static_cast<std::size_t>(count));
  for (auto& d : draws) d = dist.sample(rng);
  return draws;
}

}  // namespace rmstperm
