#include "rmstperm/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rmstperm/detail/group_stats.hpp"
#include "rmstperm/detail/parallel.hpp"
#include "rmstperm/errors.hpp"
#include "rmstperm/stats.hpp"

namespace rmstperm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kPermDomain = 0x7065726Dull;  // replicate substreams

struct SortedGroup {
  std::vector<double> t;
  std::vector<std::uint8_t> e;
};

// time ascending, events before censorings at ties
void sort_group(std::vector<std::pair<double, std::uint8_t>>& rows,
                SortedGroup& out) {
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first < b.first;
              return a.second > b.second;
            });
  out.t.resize(rows.size());
  out.e.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.t[i] = rows[i].first;
    out.e[i] = rows[i].second;
  }
}

SortedGroup sorted_from_sample(const Sample& s) {
  std::vector<std::pair<double, std::uint8_t>> rows;
  rows.reserve(s.size());
  for (const auto& o : s.observations())
    rows.push_back({o.time, static_cast<std::uint8_t>(o.event ? 1 : 0)});
  SortedGroup g;
  sort_group(rows, g);
  return g;
}

struct PooledData {
  SortedGroup all;  // canonical order of the pooled pairs
  int n1 = 0;
  int n2 = 0;
  int n() const { return n1 + n2; }
};

PooledData pool_samples(const Sample& s1, const Sample& s2) {
  std::vector<std::pair<double, std::uint8_t>> rows;
  rows.reserve(s1.size() + s2.size());
  for (const auto& o : s1.observations())
    rows.push_back({o.time, static_cast<std::uint8_t>(o.event ? 1 : 0)});
  for (const auto& o : s2.observations())
    rows.push_back({o.time, static_cast<std::uint8_t>(o.event ? 1 : 0)});
  PooledData pooled;
  pooled.n1 = static_cast<int>(s1.size());
  pooled.n2 = static_cast<int>(s2.size());
  sort_group(rows, pooled.all);
  return pooled;
}

struct ReplicateScratch {
  std::vector<std::uint32_t> index;
  std::vector<std::uint8_t> mask;
  SortedGroup g1, g2;
  detail::GroupWorkspace ws;
};

// Draws the canonical uniform partition: a subset of size min(n1, n2) is
// selected by partial Fisher-Yates and assigned to the smaller group
// (group 1 on ties). Swapping the group sizes therefore mirrors the
// partition exactly for the same generator state.
void draw_partition(const PooledData& pooled, Rng& rng, ReplicateScratch& sc) {
  const int n = pooled.n();
  const int m = std::min(pooled.n1, pooled.n2);
  const bool subset_is_group1 = pooled.n1 <= pooled.n2;

  sc.index.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) sc.index[static_cast<std::size_t>(i)] = i;
  sc.mask.assign(static_cast<std::size_t>(n), 0);
  for (int j = 0; j < m; ++j) {
    const auto pick = j + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - j)));
    std::swap(sc.index[j], sc.index[pick]);
    sc.mask[sc.index[j]] = 1;
  }

  sc.g1.t.clear(); sc.g1.e.clear();
  sc.g2.t.clear(); sc.g2.e.clear();
  for (int i = 0; i < n; ++i) {
    const bool to_group1 = (sc.mask[i] != 0) == subset_is_group1;
    auto& g = to_group1 ? sc.g1 : sc.g2;
    g.t.push_back(pooled.all.t[i]);
    g.e.push_back(pooled.all.e[i]);
  }
}

struct ReplicateNeeds {
  bool unstudentized = false;
  bool studentized_diff = false;
  bool studentized_ratio = false;
  bool any() const { return unstudentized || studentized_diff || studentized_ratio; }
};

struct ReplicateStats {
  double unstud = 0.0;
  double stud = 0.0;
  double ratio = 0.0;
  std::uint8_t extended = 0;
};

void check_pairs_preserved(const PooledData& pooled, const ReplicateScratch& sc) {
  std::vector<std::pair<double, std::uint8_t>> rows;
  rows.reserve(pooled.all.t.size());
  for (std::size_t i = 0; i < sc.g1.t.size(); ++i) rows.push_back({sc.g1.t[i], sc.g1.e[i]});
  for (std::size_t i = 0; i < sc.g2.t.size(); ++i) rows.push_back({sc.g2.t[i], sc.g2.e[i]});
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].first != pooled.all.t[i] || rows[i].second != pooled.all.e[i])
      throw std::logic_error("permutation replicate altered the pooled multiset");
  }
}

ReplicateStats compute_replicate(const PooledData& pooled, double tau,
                                 std::uint64_t seed, long b,
                                 const ReplicateNeeds& needs, bool check_pairs,
                                 ReplicateScratch& sc) {
  Rng rng(substream_key(seed, kPermDomain, static_cast<std::uint64_t>(b)));
  draw_partition(pooled, rng, sc);
  if (check_pairs) check_pairs_preserved(pooled, sc);

  const int n = pooled.n();
  const auto gs1 = detail::group_statistics(sc.g1.t, sc.g1.e, tau, n, sc.ws);
  const auto gs2 = detail::group_statistics(sc.g2.t, sc.g2.e, tau, n, sc.ws);

  ReplicateStats out;
  out.extended = (gs1.extended || gs2.extended) ? 1 : 0;
  const double diff = gs1.mu - gs2.mu;
  if (needs.unstudentized) out.unstud = std::abs(diff);
  if (needs.studentized_diff) {
    const double var = gs1.sigma2 + gs2.sigma2;
    if (var > 0.0)
      out.stud = std::sqrt(static_cast<double>(n)) * std::abs(diff) / std::sqrt(var);
    else
      out.stud = diff == 0.0 ? 0.0 : kInf;
  }
  if (needs.studentized_ratio) {
    if (gs1.mu > 0.0 && gs2.mu > 0.0) {
      const double var = gs1.sigma2 / (gs1.mu * gs1.mu) + gs2.sigma2 / (gs2.mu * gs2.mu);
      const double log_ratio = std::log(gs1.mu) - std::log(gs2.mu);
      if (var > 0.0)
        out.ratio = std::sqrt(static_cast<double>(n)) * std::abs(log_ratio) / std::sqrt(var);
      else
        out.ratio = log_ratio == 0.0 ? 0.0 : kInf;
    } else {
      out.ratio = kInf;
    }
  }
  return out;
}

int quantile_order(double alpha, int n_perm) {
  const double v = (1.0 - alpha) * (n_perm + 1);
  return static_cast<int>(std::ceil(v - 1e-9 * (n_perm + 1)));
}

double order_statistic(const std::vector<double>& stats, int k) {
  if (k > static_cast<int>(stats.size())) return kInf;
  std::vector<double> copy(stats);
  std::nth_element(copy.begin(), copy.begin() + (k - 1), copy.end());
  return copy[static_cast<std::size_t>(k - 1)];
}

double perm_p_value(const std::vector<double>& stats, double observed) {
  // Atoms of the conditional distribution are well separated, but values that
  // are equal in exact arithmetic can differ by an ulp across summation
  // orders; a relative tolerance keeps such ties counted as ties.
  const double threshold = observed * (1.0 - 1e-9);
  long count = 0;
  for (double s : stats)
    if (s >= threshold) ++count;
  return static_cast<double>(1 + count) / static_cast<double>(stats.size() + 1);
}

double clamp_p(double p) { return std::max(p, 1e-300); }

struct ObservedData {
  PooledData pooled;
  RmstEstimate est1, est2;
};

ObservedData observe(const Sample& sample1, const Sample& sample2,
                     TimeWindow window) {
  if (sample1.size() < 2 || sample2.size() < 2)
    throw invalid_input_error("inference requires at least 2 observations per group");

  ObservedData obs;
  obs.pooled = pool_samples(sample1, sample2);
  const int n = obs.pooled.n();
  const auto g1 = sorted_from_sample(sample1);
  const auto g2 = sorted_from_sample(sample2);
  const auto gs1 = detail::group_statistics(g1.t, g1.e, window.tau, n);
  const auto gs2 = detail::group_statistics(g2.t, g2.e, window.tau, n);
  if (gs1.extended || gs2.extended)
    throw estimability_error(
        "Kaplan-Meier curve of the original data is not estimable up to tau; "
        "choose a smaller tau (largest observation censored inside the window)");
  obs.est1 = {gs1.mu, gs1.sigma2, static_cast<int>(sample1.size()), n};
  obs.est2 = {gs2.mu, gs2.sigma2, static_cast<int>(sample2.size()), n};
  return obs;
}

InferenceResult base_result(const ObservedData& obs, TimeWindow window,
                            const TestConfig& config, Method method,
                            Estimand estimand) {
  InferenceResult r;
  r.method = method;
  r.estimand = estimand;
  r.group1 = obs.est1;
  r.group2 = obs.est2;
  r.alpha = config.alpha;
  r.tau = window.tau;
  r.seed = config.seed;
  return r;
}

InferenceResult assemble_asymptotic(const ObservedData& obs, TimeWindow window,
                                    const TestConfig& config, Estimand estimand) {
  InferenceResult r = base_result(obs, window, config, Method::asymptotic, estimand);
  const double n = obs.pooled.n();
  const double z = normal_quantile(1.0 - config.alpha / 2.0);

  if (estimand == Estimand::difference) {
    const double diff = obs.est1.mu_hat - obs.est2.mu_hat;
    const double var = obs.est1.sigma2_hat + obs.est2.sigma2_hat;
    if (!(var > 0.0))
      throw degenerate_estimate_error("asymptotic test: zero variance estimate");
    const double sigma = std::sqrt(var);
    r.statistic = std::sqrt(n) * diff / sigma;
    r.point_estimate = diff;
    const double half_width = z * sigma / std::sqrt(n);
    r.ci_lower = diff - half_width;
    r.ci_upper = diff + half_width;
    r.reject = std::abs(r.statistic) > z;
  } else {
    const double var_rat = ratio_variance(obs.est1, obs.est2);
    if (!(var_rat > 0.0))
      throw degenerate_estimate_error("asymptotic ratio test: zero variance estimate");
    const double sigma_rat = std::sqrt(var_rat);
    const double log_ratio = std::log(obs.est1.mu_hat) - std::log(obs.est2.mu_hat);
    r.statistic = std::sqrt(n) * log_ratio / sigma_rat;
    r.point_estimate = obs.est1.mu_hat / obs.est2.mu_hat;
    const double half_width = z * sigma_rat / std::sqrt(n);
    r.ci_lower = std::exp(log_ratio - half_width);
    r.ci_upper = std::exp(log_ratio + half_width);
    r.reject = std::abs(r.statistic) > z;
  }
  r.p_value = clamp_p(2.0 * (1.0 - normal_cdf(std::abs(r.statistic))));
  return r;
}

InferenceResult assemble_permutation(const ObservedData& obs, TimeWindow window,
                                     const TestConfig& config, Method method,
                                     Estimand estimand,
                                     const std::vector<double>& stats,
                                     int extension_replicates) {
  InferenceResult r = base_result(obs, window, config, method, estimand);
  r.extension_replicates = extension_replicates;
  const double n = obs.pooled.n();
  const int k = quantile_order(config.alpha, config.n_perm);
  const double q = order_statistic(stats, k);

  if (method == Method::unstudentized_perm) {
    const double diff = obs.est1.mu_hat - obs.est2.mu_hat;
    r.statistic = std::abs(diff);
    r.point_estimate = diff;
    r.reject = r.statistic > q;
  } else if (estimand == Estimand::difference) {
    const double diff = obs.est1.mu_hat - obs.est2.mu_hat;
    const double var = obs.est1.sigma2_hat + obs.est2.sigma2_hat;
    if (!(var > 0.0))
      throw degenerate_estimate_error("studentized permutation test: zero variance estimate");
    const double sigma = std::sqrt(var);
    r.statistic = std::sqrt(n) * std::abs(diff) / sigma;
    r.point_estimate = diff;
    const double half_width = q * sigma / std::sqrt(n);
    r.ci_lower = diff - half_width;
    r.ci_upper = diff + half_width;
    r.reject = r.statistic > q;
  } else {
    const double var_rat = ratio_variance(obs.est1, obs.est2);
    if (!(var_rat > 0.0))
      throw degenerate_estimate_error("studentized permutation ratio: zero variance estimate");
    const double sigma_rat = std::sqrt(var_rat);
    const double log_ratio = std::log(obs.est1.mu_hat) - std::log(obs.est2.mu_hat);
    r.statistic = std::sqrt(n) * std::abs(log_ratio) / sigma_rat;
    r.point_estimate = obs.est1.mu_hat / obs.est2.mu_hat;
    const double half_width = q * sigma_rat / std::sqrt(n);
    r.ci_lower = std::exp(log_ratio - half_width);
    r.ci_upper = std::exp(log_ratio + half_width);
    r.reject = r.statistic > q;
  }
  r.p_value = perm_p_value(stats, r.statistic);
  if (config.keep_replicates) {
    PermutationDistribution dist;
    dist.replicate_stats = stats;
    dist.quantile_order = k;
    dist.q_pi = q;
    r.permutation = dist;
  }
  return r;
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::asymptotic: return "asymptotic";
    case Method::studentized_perm: return "studentized-perm";
    case Method::unstudentized_perm: return "unstudentized-perm";
  }
  return "?";
}

const char* to_string(Estimand e) {
  return e == Estimand::difference ? "difference" : "ratio";
}

Method method_from_string(const std::string& s) {
  if (s == "asymptotic") return Method::asymptotic;
  if (s == "studentized-perm") return Method::studentized_perm;
  if (s == "unstudentized-perm") return Method::unstudentized_perm;
  throw invalid_input_error("unknown method: " + s);
}

Estimand estimand_from_string(const std::string& s) {
  if (s == "difference") return Estimand::difference;
  if (s == "ratio") return Estimand::ratio;
  throw invalid_input_error("unknown estimand: " + s);
}

std::pair<Sample, Sample> permute_pairs(const std::vector<Observation>& pooled,
                                        int n1, Rng& rng) {
  const int n = static_cast<int>(pooled.size());
  if (n1 <= 0 || n1 >= n)
    throw invalid_input_error("permute_pairs: need 0 < n1 < pooled size");

  PooledData data;
  data.n1 = n1;
  data.n2 = n - n1;
  std::vector<std::pair<double, std::uint8_t>> rows;
  rows.reserve(pooled.size());
  for (const auto& o : pooled)
    rows.push_back({o.time, static_cast<std::uint8_t>(o.event ? 1 : 0)});
  sort_group(rows, data.all);

  ReplicateScratch sc;
  draw_partition(data, rng, sc);

  auto to_sample = [](const SortedGroup& g, int group) {
    std::vector<Observation> obs(g.t.size());
    for (std::size_t i = 0; i < g.t.size(); ++i)
      obs[i] = {g.t[i], g.e[i] != 0, group};
    return Sample(std::move(obs));
  };
  return {to_sample(sc.g1, 1), to_sample(sc.g2, 2)};
}

StepFunction horizontal_extension(StepFunction km, double tau) {
  (void)tau;  // the step representation already carries its last value forward
  return km;
}

InferenceResult asymptotic_from_estimates(const RmstEstimate& est1,
                                          const RmstEstimate& est2,
                                          TimeWindow window,
                                          const TestConfig& config) {
  ObservedData obs;
  obs.pooled.n1 = est1.group_size;
  obs.pooled.n2 = est2.group_size;
  obs.est1 = est1;
  obs.est2 = est2;
  return assemble_asymptotic(obs, window, config, config.estimand);
}

std::vector<InferenceResult> run_inference(const Sample& sample1,
                                           const Sample& sample2,
                                           TimeWindow window,
                                           const TestConfig& base,
                                           const std::vector<Method>& methods,
                                           const std::vector<Estimand>& estimands) {
  if (!(base.alpha > 0.0 && base.alpha < 1.0))
    throw invalid_input_error("TestConfig: alpha must lie in (0, 1)");
  if (base.n_perm < 1)
    throw invalid_input_error("TestConfig: n_perm must be >= 1");

  const ObservedData obs = observe(sample1, sample2, window);

  auto requested = [&](Method m, Estimand e) {
    if (m == Method::unstudentized_perm && e == Estimand::ratio) return false;
    return std::find(methods.begin(), methods.end(), m) != methods.end() &&
           std::find(estimands.begin(), estimands.end(), e) != estimands.end();
  };

  ReplicateNeeds needs;
  needs.unstudentized = requested(Method::unstudentized_perm, Estimand::difference);
  needs.studentized_diff = requested(Method::studentized_perm, Estimand::difference);
  needs.studentized_ratio = requested(Method::studentized_perm, Estimand::ratio);

  std::vector<double> stud_stats, unstud_stats, ratio_stats;
  std::vector<std::uint8_t> extended;
  int extension_replicates = 0;
  if (needs.any()) {
    const long B = base.n_perm;
    if (needs.unstudentized) unstud_stats.resize(B);
    if (needs.studentized_diff) stud_stats.resize(B);
    if (needs.studentized_ratio) ratio_stats.resize(B);
    extended.resize(B);

    detail::parallel_for(B, base.workers, [&](long b) {
      thread_local ReplicateScratch scratch;
      const auto rep = compute_replicate(obs.pooled, window.tau, base.seed, b,
                                         needs, base.check_pair_preservation,
                                         scratch);
      if (needs.unstudentized) unstud_stats[b] = rep.unstud;
      if (needs.studentized_diff) stud_stats[b] = rep.stud;
      if (needs.studentized_ratio) ratio_stats[b] = rep.ratio;
      extended[b] = rep.extended;
    });
    for (std::uint8_t f : extended) extension_replicates += f;
  }

  std::vector<InferenceResult> results;
  for (Method m : methods) {
    for (Estimand e : estimands) {
      if (!requested(m, e)) continue;
      TestConfig config = base;
      config.method = m;
      config.estimand = e;
      if (m == Method::asymptotic) {
        results.push_back(assemble_asymptotic(obs, window, config, e));
      } else if (m == Method::studentized_perm) {
        const auto& stats = e == Estimand::difference ? stud_stats : ratio_stats;
        results.push_back(assemble_permutation(obs, window, config, m, e, stats,
                                               extension_replicates));
      } else {
        results.push_back(assemble_permutation(obs, window, config, m, e,
                                               unstud_stats, extension_replicates));
      }
    }
  }
  return results;
}

InferenceResult asymptotic_test(const Sample& sample1, const Sample& sample2,
                                TimeWindow window, const TestConfig& config) {
  auto results = run_inference(sample1, sample2, window, config,
                               {Method::asymptotic}, {config.estimand});
  return results.at(0);
}

InferenceResult studentized_perm_test(const Sample& sample1,
                                      const Sample& sample2, TimeWindow window,
                                      const TestConfig& config) {
  auto results = run_inference(sample1, sample2, window, config,
                               {Method::studentized_perm}, {config.estimand});
  return results.at(0);
}

InferenceResult unstudentized_perm_test(const Sample& sample1,
                                        const Sample& sample2,
                                        TimeWindow window,
                                        const TestConfig& config) {
  if (config.estimand == Estimand::ratio)
    throw invalid_input_error(
        "the unstudentized permutation test is defined for the RMST "
        "difference only");
  auto results = run_inference(sample1, sample2, window, config,
                               {Method::unstudentized_perm}, {config.estimand});
  return results.at(0);
}

}  // namespace rmstperm
