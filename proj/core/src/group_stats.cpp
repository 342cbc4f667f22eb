#include "rmstperm/detail/group_stats.hpp"

#include <algorithm>
#include <limits>

#include "rmstperm/errors.hpp"

namespace rmstperm::detail {

GroupStats group_statistics(std::span<const double> times,
                            std::span<const std::uint8_t> events, double tau,
                            int n_total, GroupWorkspace& ws) {
  const std::size_t n = times.size();
  if (n == 0) throw invalid_input_error("group_statistics: empty group");

  ws.time.clear();
  ws.surv.clear();
  ws.events.clear();
  ws.at_risk.clear();

  // forward pass: tie-aggregated KM values at each distinct time
  double s = 1.0;
  int remaining = static_cast<int>(n);
  std::size_t i = 0;
  bool last_tie_has_event = false;
  while (i < n) {
    const double t = times[i];
    int d = 0, c = 0;
    for (; i < n && times[i] == t; ++i) {
      if (events[i]) ++d; else ++c;
    }
    if (d > 0) s *= 1.0 - static_cast<double>(d) / remaining;
    ws.time.push_back(t);
    ws.surv.push_back(s);
    ws.events.push_back(d);
    ws.at_risk.push_back(remaining);
    remaining -= d + c;
    last_tie_has_event = d > 0;
  }

  GroupStats out;
  out.n = static_cast<int>(n);
  const double max_time = ws.time.back();
  out.estimable_to =
      last_tie_has_event ? std::numeric_limits<double>::infinity() : max_time;
  out.extended = out.estimable_to < tau;

  const std::size_t m = ws.time.size();

  // RMST: sum of value * length over [0, tau], last value carried forward
  double mu = std::min(ws.time.front(), tau);  // value 1 before the first time
  for (std::size_t k = 0; k < m; ++k) {
    const double lo = std::min(ws.time[k], tau);
    const double hi = k + 1 < m ? std::min(ws.time[k + 1], tau) : tau;
    if (hi > lo) mu += ws.surv[k] * (hi - lo);
  }
  out.mu = mu;

  // backward pass: w(x) = remaining area from x to tau at each distinct time
  double w_next = 0.0;
  double sigma2 = 0.0;
  for (std::size_t k = m; k-- > 0;) {
    const double lo = std::min(ws.time[k], tau);
    const double hi = k + 1 < m ? std::min(ws.time[k + 1], tau) : tau;
    const double w = w_next + (hi > lo ? ws.surv[k] * (hi - lo) : 0.0);
    if (ws.events[k] > 0 && ws.time[k] <= tau && w > 0.0) {
      const double y = ws.at_risk[k];
      const double d = ws.events[k];
      sigma2 += n_total * w * w * d / (y * (y - d));
    }
    w_next = w;
  }
  out.sigma2 = sigma2;
  return out;
}

GroupStats group_statistics(std::span<const double> times,
                            std::span<const std::uint8_t> events, double tau,
                            int n_total) {
  GroupWorkspace ws;
  ws.reserve(times.size());
  return group_statistics(times, events, tau, n_total, ws);
}

}  // namespace rmstperm::detail
