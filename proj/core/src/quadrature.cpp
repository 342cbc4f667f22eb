#include "rmstperm/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "rmstperm/errors.hpp"

namespace rmstperm {

namespace {

// QUADPACK dqk15 abscissae/weights on [-1, 1].
constexpr double kKronrodX[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kKronrodW[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kGaussW[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Gk15Result {
  double kronrod;
  double err;
};

Gk15Result gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(center);
  double kronrod = kKronrodW[7] * fc;
  double gauss = kGaussW[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodX[j];
    const double fsum = f(center - dx) + f(center + dx);
    kronrod += kKronrodW[j] * fsum;
    if (j % 2 == 1) gauss += kGaussW[j / 2] * fsum;
  }
  kronrod *= half;
  gauss *= half;
  const double diff = std::abs(kronrod - gauss);
  // QUADPACK-style sharpened error estimate
  const double err = diff == 0.0 ? 0.0 : diff * std::min(1.0, std::pow(200.0 * diff, 1.5));
  return {kronrod, std::max(err, diff * 1e-6)};
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                double tol, int depth, int max_depth) {
  const auto r = gk15(f, a, b);
  if (!std::isfinite(r.kronrod))
    throw model_error("quadrature: non-finite integrand");
  if (r.err <= tol || depth >= max_depth) return r.kronrod;
  const double mid = 0.5 * (a + b);
  return adaptive(f, a, mid, 0.5 * tol, depth + 1, max_depth) +
         adaptive(f, mid, b, 0.5 * tol, depth + 1, max_depth);
}

std::vector<double> interior_points(const std::vector<double>& breakpoints,
                                    double a, double b) {
  std::vector<double> pts;
  for (double p : breakpoints)
    if (p > a && p < b) pts.push_back(p);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

double gauss_kronrod_15(const std::function<double(double)>& f, double a,
                        double b, double* abs_err) {
  const auto r = gk15(f, a, b);
  if (abs_err) *abs_err = r.err;
  return r.kronrod;
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, int max_depth) {
  if (!(a <= b)) throw invalid_input_error("integrate_adaptive: a > b");
  if (a == b) return 0.0;
  return adaptive(f, a, b, abs_tol, 0, max_depth);
}

double integrate_adaptive_split(const std::function<double(double)>& f,
                                double a, double b,
                                const std::vector<double>& breakpoints,
                                double abs_tol) {
  if (!(a <= b)) throw invalid_input_error("integrate_adaptive_split: a > b");
  if (a == b) return 0.0;
  auto pts = interior_points(breakpoints, a, b);
  pts.insert(pts.begin(), a);
  pts.push_back(b);
  double total = 0.0;
  const double piece_tol = abs_tol / static_cast<double>(pts.size() - 1);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    total += adaptive(f, pts[i], pts[i + 1], piece_tol, 0, 52);
  return total;
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f,
                                       double a, double b,
                                       const std::vector<double>& breakpoints,
                                       double abs_tol)
    : f_(std::move(f)) {
  if (!(a < b)) throw invalid_input_error("CumulativeIntegral: requires a < b");
  auto pts = interior_points(breakpoints, a, b);
  pts.insert(pts.begin(), a);
  pts.push_back(b);

  edges_.push_back(a);
  prefix_.push_back(0.0);
  const double panel_tol = abs_tol / static_cast<double>(pts.size() - 1);

  // Depth-first refinement emits panels left to right, so edges stay sorted.
  struct Frame {
    double lo, hi, tol;
    int depth;
  };
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    std::vector<Frame> stack{{pts[i], pts[i + 1], panel_tol, 0}};
    while (!stack.empty()) {
      Frame fr = stack.back();
      stack.pop_back();
      const auto r = gk15(f_, fr.lo, fr.hi);
      if (!std::isfinite(r.kronrod))
        throw model_error("CumulativeIntegral: non-finite integrand");
      if (r.err <= fr.tol || fr.depth >= 52) {
        edges_.push_back(fr.hi);
        prefix_.push_back(prefix_.back() + r.kronrod);
      } else {
        const double mid = 0.5 * (fr.lo + fr.hi);
        // right half pushed first so the left half is processed first
        stack.push_back({mid, fr.hi, 0.5 * fr.tol, fr.depth + 1});
        stack.push_back({fr.lo, mid, 0.5 * fr.tol, fr.depth + 1});
      }
    }
  }
}

double CumulativeIntegral::prefix(double t) const {
  if (t <= edges_.front()) return 0.0;
  if (t >= edges_.back()) return prefix_.back();
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), t);
  const auto j = static_cast<std::size_t>(it - edges_.begin()) - 1;
  if (edges_[j] == t) return prefix_[j];
  return prefix_[j] + gk15(f_, edges_[j], t).kronrod;
}

}  // namespace rmstperm
