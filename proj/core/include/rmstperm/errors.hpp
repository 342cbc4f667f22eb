#pragma once

#include <stdexcept>
#include <string>

namespace rmstperm {

struct invalid_input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Kaplan-Meier curve not defined on the full [0, tau] window.
struct estimability_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Zero variance estimate or zero RMST where the method needs a positive one.
struct degenerate_estimate_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Theoretical model violates a support requirement or returns non-finite values.
struct model_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scenario parameter cannot reach the requested target RMST.
struct calibration_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rmstperm
