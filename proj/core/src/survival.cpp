#include "rmstperm/survival.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rmstperm/errors.hpp"

namespace rmstperm {

namespace {

struct TieRow {
  double time;
  int events;
  int censored;
  int at_risk;  // #{X >= time}
};

// Distinct observed times with per-time event/censoring counts and the
// at-risk count just before each time.
std::vector<TieRow> tie_table(const Sample& sample, const char* op) {
  if (sample.empty())
    throw invalid_input_error(std::string(op) + ": empty sample");
  std::vector<std::pair<double, bool>> rows;
  rows.reserve(sample.size());
  for (const auto& obs : sample.observations()) rows.push_back({obs.time, obs.event});
  std::sort(rows.begin(), rows.end());

  std::vector<TieRow> table;
  int remaining = static_cast<int>(rows.size());
  std::size_t i = 0;
  while (i < rows.size()) {
    const double t = rows[i].first;
    int d = 0, c = 0;
    for (; i < rows.size() && rows[i].first == t; ++i) {
      if (rows[i].second) ++d; else ++c;
    }
    table.push_back({t, d, c, remaining});
    remaining -= d + c;
  }
  return table;
}

}  // namespace

Sample::Sample(std::vector<Observation> observations) : obs_(std::move(observations)) {
  for (const auto& o : obs_) {
    if (!std::isfinite(o.time) || o.time < 0.0)
      throw invalid_input_error("Sample: times must be finite and >= 0");
    if (!obs_.empty() && o.group != obs_.front().group)
      throw invalid_input_error("Sample: mixed group identifiers");
  }
}

Sample Sample::from_arrays(const std::vector<double>& times,
                           const std::vector<std::uint8_t>& events, int group) {
  if (times.size() != events.size())
    throw invalid_input_error("Sample::from_arrays: size mismatch");
  std::vector<Observation> obs(times.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    obs[i] = {times[i], events[i] != 0, group};
  return Sample(std::move(obs));
}

CountingProcesses counting_processes(const Sample& sample) {
  const auto table = tie_table(sample, "counting_processes");

  std::vector<double> n_times, n_values;
  std::vector<double> y_times, y_values;
  y_times.reserve(table.size());
  y_values.reserve(table.size());

  int cum_events = 0;
  for (const auto& row : table) {
    if (row.events > 0) {
      cum_events += row.events;
      n_times.push_back(row.time);
      n_values.push_back(static_cast<double>(cum_events));
    }
    // value on [t, next): subjects with X strictly greater than t
    y_times.push_back(row.time);
    y_values.push_back(static_cast<double>(row.at_risk - row.events - row.censored));
  }
  const double n = static_cast<double>(sample.size());
  return {StepFunction(0.0, std::move(n_times), std::move(n_values)),
          StepFunction(n, std::move(y_times), std::move(y_values))};
}

StepFunction kaplan_meier(const Sample& sample) {
  const auto table = tie_table(sample, "kaplan_meier");
  std::vector<double> times, values;
  double s = 1.0;
  for (const auto& row : table) {
    if (row.events == 0) continue;
    s *= 1.0 - static_cast<double>(row.events) / row.at_risk;
    times.push_back(row.time);
    values.push_back(s);
  }
  return StepFunction(1.0, std::move(times), std::move(values));
}

StepFunction nelson_aalen(const Sample& sample) {
  const auto table = tie_table(sample, "nelson_aalen");
  std::vector<double> times, values;
  double a = 0.0;
  for (const auto& row : table) {
    if (row.events == 0) continue;
    a += static_cast<double>(row.events) / row.at_risk;
    times.push_back(row.time);
    values.push_back(a);
  }
  return StepFunction(0.0, std::move(times), std::move(values));
}

StepFunction censoring_km(const Sample& sample) {
  const auto table = tie_table(sample, "censoring_km");
  std::vector<double> times, values;
  double g = 1.0;
  for (const auto& row : table) {
    if (row.censored == 0) continue;
    // events precede censorings at a tied time, so the censoring risk set
    // is the remainder after the events; it is never empty here.
    const int denom = row.at_risk - row.events;
    g *= 1.0 - static_cast<double>(row.censored) / denom;
    times.push_back(row.time);
    values.push_back(g);
  }
  return StepFunction(1.0, std::move(times), std::move(values));
}

EstimabilityReport estimability(const Sample& sample, double tau) {
  if (sample.empty()) throw invalid_input_error("estimability: empty sample");
  if (!(tau > 0.0)) throw invalid_input_error("estimability: tau must be > 0");

  double max_time = -1.0;
  bool max_has_event = false;
  for (const auto& obs : sample.observations()) {
    if (obs.time > max_time) {
      max_time = obs.time;
      max_has_event = obs.event;
    } else if (obs.time == max_time && obs.event) {
      max_has_event = true;
    }
  }
  EstimabilityReport report;
  report.estimable_to =
      max_has_event ? std::numeric_limits<double>::infinity() : max_time;
  report.fully_estimable_on_window = report.estimable_to >= tau;
  return report;
}

}  // namespace rmstperm
