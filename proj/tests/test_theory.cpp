#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "rmstperm/detail/group_stats.hpp"
#include "rmstperm/errors.hpp"
#include "rmstperm/quadrature.hpp"
#include "rmstperm/rng.hpp"
#include "rmstperm/stats.hpp"
#include "rmstperm/theory.hpp"

using rmstperm::Distribution;
using rmstperm::TheoreticalModel;
using rmstperm::TimeWindow;

TEST_CASE("normal quantile and cdf") {
  CHECK(rmstperm::normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(rmstperm::normal_quantile(0.975) ==
        doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(rmstperm::normal_quantile(0.95) ==
        doctest::Approx(1.6448536269514722).epsilon(1e-12));
  for (double p : {0.001, 0.01, 0.2, 0.5, 0.77, 0.99, 0.9999}) {
    CHECK(rmstperm::normal_cdf(rmstperm::normal_quantile(p)) ==
          doctest::Approx(p).epsilon(1e-10));
  }
  CHECK_THROWS_AS(rmstperm::normal_quantile(0.0), rmstperm::invalid_input_error);
  CHECK_THROWS_AS(rmstperm::normal_quantile(1.0), rmstperm::invalid_input_error);
}

TEST_CASE("gauss-kronrod integrates smooth functions to machine precision") {
  const double v = rmstperm::integrate_adaptive(
      [](double x) { return std::exp(-0.2 * x); }, 0.0, 10.0, 1e-12);
  CHECK(v == doctest::Approx((1.0 - std::exp(-2.0)) / 0.2).epsilon(1e-13));
}

TEST_CASE("true_rmst closed forms and quadrature agree") {
  const TimeWindow w10(10.0);

  const auto exp02 = Distribution::exponential(0.2);
  CHECK(rmstperm::true_rmst(exp02, w10) == doctest::Approx(4.3233236).epsilon(1e-7));
  CHECK(rmstperm::true_rmst(exp02, w10) ==
        doctest::Approx(rmstperm::true_rmst_quadrature(exp02, w10)).epsilon(1e-8));

  CHECK(rmstperm::true_rmst(Distribution::none(), w10) == 10.0);

  for (double c : {2.0, 5.0, 9.5}) {
    const auto pw = Distribution::piecewise_exponential(c, 0.5, 0.05);
    const double closed = 2.0 * (1.0 - std::exp(-0.5 * c)) +
                          20.0 * std::exp(-0.5 * c) *
                              (1.0 - std::exp(-0.05 * (10.0 - c)));
    CHECK(rmstperm::true_rmst(pw, w10) == doctest::Approx(closed).epsilon(1e-10));
    CHECK(rmstperm::true_rmst_quadrature(pw, w10) ==
          doctest::Approx(closed).epsilon(1e-8));
  }

  // quadrature families against a fine Simpson oracle
  for (const auto& dist : {Distribution::weibull(3.0, 8.0),
                           Distribution::lognormal(2.0, 0.5)}) {
    const int m = 20000;
    const double h = 10.0 / m;
    double simpson = dist.survival(0.0) + dist.survival(10.0);
    for (int i = 1; i < m; ++i)
      simpson += dist.survival(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    simpson *= h / 3.0;
    CHECK(rmstperm::true_rmst(dist, w10) == doctest::Approx(simpson).epsilon(1e-9));
  }
}

TEST_CASE("true_sigma2: degenerate and closed-form exponential case") {
  const TimeWindow w10(10.0);
  const TheoreticalModel flat{Distribution::none(), Distribution::none()};
  CHECK(rmstperm::true_sigma2(flat, 0.5, w10) == 0.0);

  // Exp(rate) with no censoring: sigma2 = kappa^-1 [(1 - E^2)/rate^2 - 2 tau E / rate],
  // E = exp(-rate tau); derived by expanding the integrand in closed form.
  const TheoreticalModel exp_model{Distribution::exponential(0.2),
                                   Distribution::none()};
  const double E = std::exp(-2.0);
  const double closed = 2.0 * ((1.0 - E * E) / 0.04 - 2.0 * 10.0 * E / 0.2);
  CHECK(rmstperm::true_sigma2(exp_model, 0.5, w10) ==
        doctest::Approx(closed).epsilon(1e-9));
  CHECK(closed == doctest::Approx(22.01716142).epsilon(1e-7));

  // kappa is a pure scale factor
  CHECK(rmstperm::true_sigma2(exp_model, 0.25, w10) ==
        doctest::Approx(2.0 * rmstperm::true_sigma2(exp_model, 0.5, w10)).epsilon(1e-10));
}

TEST_CASE("true_sigma2 matches a Monte Carlo oracle") {
  // empirical variance of sqrt(n)(mu_hat - mu) at n1 = 2000, kappa = 1/2
  rmstperm::Rng rng(88001);
  const auto surv = Distribution::exponential(0.2);
  const TimeWindow w10(10.0);
  const double mu = rmstperm::true_rmst(surv, w10);
  const int n1 = 2000, n_datasets = 8000;

  std::vector<double> score;
  score.reserve(n_datasets);
  rmstperm::detail::GroupWorkspace ws;
  std::vector<double> t(n1);
  std::vector<std::uint8_t> e(n1, 1);
  for (int d = 0; d < n_datasets; ++d) {
    for (int i = 0; i < n1; ++i) t[i] = surv.sample(rng);
    std::sort(t.begin(), t.end());
    const auto gs = rmstperm::detail::group_statistics(t, e, 10.0, 2 * n1, ws);
    score.push_back(std::sqrt(2.0 * n1) * (gs.mu - mu));
  }
  const double emp = rmstperm::mean_variance(score).variance;
  const TheoreticalModel model{surv, Distribution::none()};
  CHECK(rmstperm::true_sigma2(model, 0.5, w10) ==
        doctest::Approx(emp).epsilon(0.03));
}

TEST_CASE("true_sigma2: window beyond the censoring support is an error") {
  const TheoreticalModel model{Distribution::exponential(0.2),
                               Distribution::uniform(8.0)};
  CHECK_THROWS_AS(rmstperm::true_sigma2(model, 0.5, TimeWindow(10.0)),
                  rmstperm::model_error);
}

TEST_CASE("true_sigma2_perm reduces to sigma1^2 + sigma2^2 under exchangeability") {
  const TimeWindow w10(10.0);
  const std::vector<TheoreticalModel> models = {
      {Distribution::exponential(0.2), Distribution::uniform(25.0)},
      {Distribution::weibull(3.0, 8.0), Distribution::weibull(3.0, 15.0)},
      {Distribution::lognormal(2.0, 0.5), Distribution::weibull(3.0, 18.0)},
  };
  for (const auto& m : models) {
    for (double kappa1 : {0.4, 0.5, 0.6}) {
      const double perm = rmstperm::true_sigma2_perm(m, m, kappa1, w10);
      const double sum = rmstperm::true_sigma2(m, kappa1, w10) +
                         rmstperm::true_sigma2(m, 1.0 - kappa1, w10);
      CHECK(perm == doctest::Approx(sum).epsilon(1e-6));
    }
  }
}

TEST_CASE("true_sigma2_perm is invariant under group relabeling") {
  const TimeWindow w10(10.0);
  const TheoreticalModel m1{Distribution::weibull(3.0, 8.0),
                            Distribution::weibull(3.0, 18.0)};
  const TheoreticalModel m2{Distribution::weibull(0.9, 14.0),
                            Distribution::weibull(0.5, 40.0)};
  const double a = rmstperm::true_sigma2_perm(m1, m2, 0.6, w10);
  const double b = rmstperm::true_sigma2_perm(m2, m1, 0.4, w10);
  CHECK(a == doctest::Approx(b).epsilon(1e-9));
}
