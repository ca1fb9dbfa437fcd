#pragma once

#include <Eigen/Dense>
#include <functional>

namespace qavmc {

struct LanczosResult {
  double min = 0.0;
  double max = 0.0;
  Eigen::VectorXd vec_min;
  Eigen::VectorXd vec_max;
  bool converged = false;
  int iterations = 0;
};

/// Extreme eigenvalues (and Ritz vectors) of a symmetric operator given
/// through its matvec, via Lanczos with full reorthogonalization.
/// Deterministic; accepts a warm-start vector (e.g. from a nearby problem).
LanczosResult lanczos_extremes(
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& matvec, Eigen::Index n,
    const Eigen::VectorXd* warm_start = nullptr, double residual_tol = 1e-8, int max_iter = 500);

}  // namespace qavmc
