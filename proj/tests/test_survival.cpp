#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rmstperm/errors.hpp"
#include "rmstperm/rng.hpp"
#include "rmstperm/survival.hpp"

using rmstperm::Sample;
using rmstperm::counting_processes;
using rmstperm::kaplan_meier;
using rmstperm::nelson_aalen;
using rmstperm::censoring_km;

namespace {

Sample make_sample(std::vector<double> times, std::vector<int> statuses,
                   int group = 1) {
  std::vector<rmstperm::Observation> obs;
  for (std::size_t i = 0; i < times.size(); ++i)
    obs.push_back({times[i], statuses[i] != 0, group});
  return Sample(std::move(obs));
}

// Brute-force oracle: recomputes every quantity from scratch at each query
// by direct counting over the raw observations.
namespace oracle {

using Data = std::vector<std::pair<double, int>>;  // (time, status)

std::vector<double> distinct_times(const Data& data) {
  std::vector<double> t;
  for (const auto& d : data) t.push_back(d.first);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

int at_risk(const Data& data, double t) {
  int y = 0;
  for (const auto& d : data) y += d.first >= t ? 1 : 0;
  return y;
}

int events_at(const Data& data, double t) {
  int n = 0;
  for (const auto& d : data) n += (d.first == t && d.second == 1) ? 1 : 0;
  return n;
}

int censored_at(const Data& data, double t) {
  int n = 0;
  for (const auto& d : data) n += (d.first == t && d.second == 0) ? 1 : 0;
  return n;
}

double km_at(const Data& data, double t) {
  double s = 1.0;
  for (double u : distinct_times(data)) {
    if (u > t) break;
    const int d = events_at(data, u);
    if (d > 0) s *= 1.0 - static_cast<double>(d) / at_risk(data, u);
  }
  return s;
}

double na_at(const Data& data, double t) {
  double a = 0.0;
  for (double u : distinct_times(data)) {
    if (u > t) break;
    const int d = events_at(data, u);
    if (d > 0) a += static_cast<double>(d) / at_risk(data, u);
  }
  return a;
}

double censor_km_at(const Data& data, double t) {
  double g = 1.0;
  for (double u : distinct_times(data)) {
    if (u > t) break;
    const int c = censored_at(data, u);
    if (c > 0)
      g *= 1.0 - static_cast<double>(c) / (at_risk(data, u) - events_at(data, u));
  }
  return g;
}

}  // namespace oracle

oracle::Data to_data(const Sample& s) {
  oracle::Data data;
  for (const auto& o : s.observations()) data.push_back({o.time, o.event ? 1 : 0});
  return data;
}

}  // namespace

TEST_CASE("counting processes: two observations") {
  const auto cp = counting_processes(make_sample({2, 5}, {1, 0}));
  CHECK(cp.events(1.99) == 0.0);
  CHECK(cp.events(2.0) == 1.0);
  CHECK(cp.events(100.0) == 1.0);
  // at-risk via the left-limit query: 2 on [0,2], 1 on (2,5], 0 after
  CHECK(cp.at_risk.left_limit(0.0) == 2.0);
  CHECK(cp.at_risk.left_limit(2.0) == 2.0);
  CHECK(cp.at_risk.left_limit(2.5) == 1.0);
  CHECK(cp.at_risk.left_limit(5.0) == 1.0);
  CHECK(cp.at_risk.left_limit(5.5) == 0.0);
}

TEST_CASE("counting processes: no events, tied events") {
  const auto cp0 = counting_processes(make_sample({1, 4, 9}, {0, 0, 0}));
  CHECK(cp0.events(100.0) == 0.0);
  CHECK(cp0.events.jump_times().empty());

  const auto cp = counting_processes(make_sample({3, 3, 3}, {1, 1, 0}));
  const double delta_n = cp.events(3.0) - cp.events.left_limit(3.0);
  CHECK(delta_n == 2.0);
  CHECK(cp.at_risk.left_limit(3.0) == 3.0);
}

TEST_CASE("counting processes: empty sample") {
  CHECK_THROWS_AS(counting_processes(Sample{}), rmstperm::invalid_input_error);
}

TEST_CASE("kaplan-meier examples") {
  const auto single = kaplan_meier(make_sample({5}, {1}));
  CHECK(single(4.99) == 1.0);
  CHECK(single(5.0) == 0.0);

  const auto censored = kaplan_meier(make_sample({1, 2, 8}, {0, 0, 0}));
  CHECK(censored(100.0) == 1.0);

  const auto km = kaplan_meier(make_sample({1, 2, 3}, {1, 0, 1}));
  CHECK(km(0.5) == 1.0);
  CHECK(km(1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(km(2.9) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(km(3.0) == 0.0);
}

TEST_CASE("nelson-aalen examples") {
  const auto na = nelson_aalen(make_sample({1, 2, 3}, {1, 0, 1}));
  CHECK(na(0.5) == 0.0);
  CHECK(na(1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(na(3.0) == doctest::Approx(1.0 / 3.0 + 1.0).epsilon(1e-15));

  CHECK(nelson_aalen(make_sample({2, 4}, {0, 0}))(100.0) == 0.0);

  const auto tied = nelson_aalen(make_sample({4, 4}, {1, 1}));
  CHECK(tied(3.9) == 0.0);
  CHECK(tied(4.0) == 1.0);
}

TEST_CASE("censoring km examples and identity") {
  CHECK(censoring_km(make_sample({1, 5, 9}, {1, 1, 1}))(100.0) == 1.0);

  const auto g = censoring_km(make_sample({1, 2, 3}, {1, 0, 1}));
  CHECK(g(1.9) == 1.0);
  CHECK(g(2.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g(9.0) == doctest::Approx(0.5).epsilon(1e-15));

  // S-(t) G-(t) = Y(t)/n at every distinct time
  const auto sample = make_sample({1, 2, 3}, {1, 0, 1});
  const auto km = kaplan_meier(sample);
  const auto cp = counting_processes(sample);
  for (double t : {1.0, 2.0, 3.0}) {
    CHECK(km.left_limit(t) * g.left_limit(t) ==
          doctest::Approx(cp.at_risk.left_limit(t) / 3.0).epsilon(1e-14));
  }
}

TEST_CASE("identity S- G- = Y/n over random tied samples") {
  rmstperm::Rng rng(55001);
  for (int rep = 0; rep < 300; ++rep) {
    const int n = 2 + static_cast<int>(rng.below(12));
    std::vector<double> times;
    std::vector<int> statuses;
    for (int i = 0; i < n; ++i) {
      // coarse grid forces heavy ties
      times.push_back(1.0 + static_cast<double>(rng.below(4)));
      statuses.push_back(static_cast<int>(rng.below(2)));
    }
    const auto sample = make_sample(times, statuses);
    const auto km = kaplan_meier(sample);
    const auto g = censoring_km(sample);
    const auto cp = counting_processes(sample);
    for (double t : cp.at_risk.jump_times()) {
      CHECK(km.left_limit(t) * g.left_limit(t) ==
            doctest::Approx(cp.at_risk.left_limit(t) / n).epsilon(1e-12));
    }
  }
}

TEST_CASE("no censoring: KM equals one minus the empirical cdf") {
  rmstperm::Rng rng(55002);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 1 + static_cast<int>(rng.below(10));
    std::vector<double> times;
    std::vector<int> statuses(n, 1);
    for (int i = 0; i < n; ++i) times.push_back(rng.uniform01() * 5.0);
    const auto km = kaplan_meier(make_sample(times, statuses));
    for (double q : {0.5, 1.0, 2.0, 3.5, 6.0}) {
      int below = 0;
      for (double t : times) below += t <= q ? 1 : 0;
      CHECK(km(q) == doctest::Approx(1.0 - static_cast<double>(below) / n).epsilon(1e-12));
    }
  }
}

TEST_CASE("estimators match the brute-force oracle on an exhaustive family") {
  // all multisets of (time, status) pairs with times in {1,2,3}, n <= 5
  const std::pair<double, int> kinds[6] = {{1, 0}, {1, 1}, {2, 0},
                                           {2, 1}, {3, 0}, {3, 1}};
  std::vector<std::vector<int>> combos;
  std::vector<int> counts(6, 0);
  auto recurse = [&](auto&& self, int kind, int left) -> void {
    if (kind == 5) {
      counts[5] = left;
      combos.push_back(counts);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[kind] = c;
      self(self, kind + 1, left - c);
    }
  };
  for (int n = 1; n <= 5; ++n) recurse(recurse, 0, n);

  for (const auto& combo : combos) {
    oracle::Data data;
    std::vector<double> times;
    std::vector<int> statuses;
    for (int kind = 0; kind < 6; ++kind)
      for (int c = 0; c < combo[kind]; ++c) {
        data.push_back(kinds[kind]);
        times.push_back(kinds[kind].first);
        statuses.push_back(kinds[kind].second);
      }
    const auto sample = make_sample(times, statuses);
    const auto km = kaplan_meier(sample);
    const auto na = nelson_aalen(sample);
    const auto g = censoring_km(sample);
    for (double q : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0}) {
      CHECK(km(q) == doctest::Approx(oracle::km_at(data, q)).epsilon(1e-12));
      CHECK(na(q) == doctest::Approx(oracle::na_at(data, q)).epsilon(1e-12));
      CHECK(g(q) == doctest::Approx(oracle::censor_km_at(data, q)).epsilon(1e-12));
    }
  }
}

TEST_CASE("km curves are monotone with range [0,1]; na non-decreasing") {
  rmstperm::Rng rng(55003);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 1 + static_cast<int>(rng.below(15));
    std::vector<double> times;
    std::vector<int> statuses;
    for (int i = 0; i < n; ++i) {
      times.push_back(std::round(rng.uniform01() * 8.0));
      statuses.push_back(static_cast<int>(rng.below(2)));
    }
    const auto sample = make_sample(times, statuses);
    const auto km = kaplan_meier(sample);
    double prev = 1.0;
    for (double v : km.values()) {
      CHECK(v <= prev + 1e-15);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      prev = v;
    }
    const auto na = nelson_aalen(sample);
    prev = 0.0;
    for (double v : na.values()) {
      CHECK(v >= prev - 1e-15);
      prev = v;
    }
    // jumps only at event times
    const auto data = to_data(sample);
    for (double t : km.jump_times()) CHECK(oracle::events_at(data, t) > 0);
    for (double t : na.jump_times()) CHECK(oracle::events_at(data, t) > 0);
  }
}

TEST_CASE("estimability rule") {
  using rmstperm::estimability;
  CHECK_FALSE(estimability(make_sample({1, 8}, {1, 0}), 10.0).fully_estimable_on_window);
  CHECK(estimability(make_sample({1, 8}, {1, 1}), 10.0).fully_estimable_on_window);
  CHECK(estimability(make_sample({1, 12}, {1, 0}), 10.0).fully_estimable_on_window);

  CHECK(estimability(make_sample({1, 8}, {1, 0}), 10.0).estimable_to == 8.0);
  CHECK(std::isinf(estimability(make_sample({1, 8}, {1, 1}), 10.0).estimable_to));

  // tied maximum: estimable when any tied observation is an event
  CHECK(estimability(make_sample({1, 8, 8}, {1, 0, 1}), 10.0).fully_estimable_on_window);
  CHECK_FALSE(estimability(make_sample({1, 8, 8}, {1, 0, 0}), 10.0).fully_estimable_on_window);

  CHECK_THROWS_AS(estimability(Sample{}, 10.0), rmstperm::invalid_input_error);
}
