#pragma once

#include <functional>
#include <vector>

namespace rmstperm {

/// 15-point Gauss-Kronrod rule on [a, b]; *abs_err receives the embedded
/// error estimate against the 7-point Gauss result.
double gauss_kronrod_15(const std::function<double(double)>& f, double a,
                        double b, double* abs_err);

/// Adaptive bisection to absolute tolerance. Interior singularities of
/// integrable type are handled by depth-limited refinement; endpoints are
/// never evaluated (all Kronrod nodes are interior).
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, int max_depth = 52);

/// Same, splitting first at the given interior breakpoints.
double integrate_adaptive_split(const std::function<double(double)>& f,
                                double a, double b,
                                const std::vector<double>& breakpoints,
                                double abs_tol);

/// Prefix integral F(t) = int_a^t f for repeated point queries.
/// Panels are refined adaptively at build time; a query adds one GK15
/// evaluation over the partial panel to the stored prefix sum.
class CumulativeIntegral {
 public:
  CumulativeIntegral(std::function<double(double)> f, double a, double b,
                     const std::vector<double>& breakpoints, double abs_tol);

  double prefix(double t) const;
  double total() const { return prefix_.back(); }

 private:
  std::function<double(double)> f_;
  std::vector<double> edges_;
  std::vector<double> prefix_;
};

}  // namespace rmstperm
