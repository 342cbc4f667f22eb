#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rmstperm::detail {

/// Scratch buffers for group_statistics; reuse across calls to keep the
/// permutation loop allocation-free.
struct GroupWorkspace {
  std::vector<double> time;
  std::vector<double> surv;
  std::vector<int> events;
  std::vector<int> at_risk;

  void reserve(std::size_t n) {
    time.reserve(n);
    surv.reserve(n);
    events.reserve(n);
    at_risk.reserve(n);
  }
};

struct GroupStats {
  double mu = 0.0;      // RMST over [0, tau], last value carried to tau
  double sigma2 = 0.0;  // plug-in variance (scaled by n_total)
  double estimable_to = 0.0;
  bool extended = false;  // KM not determined through tau; carry-forward used
  int n = 0;
};

/// Single-pass KM + RMST + variance over one group.
/// `times` must be sorted ascending; `events[i]` marks an observed event.
/// Ties are aggregated by exact time equality with the events-first
/// convention baked into the formulas (all tied subjects count as at risk).
GroupStats group_statistics(std::span<const double> times,
                            std::span<const std::uint8_t> events, double tau,
                            int n_total, GroupWorkspace& ws);

/// Convenience overload with its own workspace (tests, one-off calls).
GroupStats group_statistics(std::span<const double> times,
                            std::span<const std::uint8_t> events, double tau,
                            int n_total);

}  // namespace rmstperm::detail
