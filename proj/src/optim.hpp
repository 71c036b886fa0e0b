#pragma once

#include <functional>

#include <Eigen/Dense>

namespace conclab {

struct SimplexOptions {
  int max_evals = 10000;       // objective-evaluation budget
  double initial_step = 0.25;  // per-coordinate simplex extent around x0
  double ftol = 1e-13;         // stop when the simplex value spread drops below this
};

struct SimplexResult {
  Eigen::VectorXd x;
  double fx;
  int evals;
};

// Nelder-Mead downhill simplex. Derivative-free on purpose: the gap objective
// is non-smooth where a radicand hits zero, so gradient methods are
// unreliable exactly where the minima sit. Deterministic for fixed inputs.
SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& x0, const SimplexOptions& options);

}  // namespace conclab
