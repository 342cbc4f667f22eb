#pragma once

#include <cstdint>
#include <vector>

#include "rmstperm/errors.hpp"

namespace rmstperm {

/// One subject: observed time, event indicator (true = event, false =
/// censored) and group membership (1 or 2).
struct Observation {
  double time = 0.0;
  bool event = false;
  int group = 1;
};

/// The observations of a single group. May be empty right after
/// construction; estimator operations reject empty samples, inference
/// operations additionally require size >= 2.
class Sample {
 public:
  Sample() = default;
  explicit Sample(std::vector<Observation> observations);

  /// Builds a sample from parallel arrays, assigning the given group id.
  static Sample from_arrays(const std::vector<double>& times,
                            const std::vector<std::uint8_t>& events, int group);

  std::size_t size() const { return obs_.size(); }
  bool empty() const { return obs_.empty(); }
  int group() const { return obs_.empty() ? 0 : obs_.front().group; }
  const std::vector<Observation>& observations() const { return obs_; }

 private:
  std::vector<Observation> obs_;
};

}  // namespace rmstperm
