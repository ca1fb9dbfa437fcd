#include "qavmc/lanczos.hpp"

#include <cmath>

#include "qavmc/rng.hpp"
#include "qavmc/spectral.hpp"

namespace qavmc {

LanczosResult lanczos_extremes(
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& matvec, Eigen::Index n,
    const Eigen::VectorXd* warm_start, double residual_tol, int max_iter) {
  LanczosResult out;
  if (n == 0) return out;
  if (n == 1) {
    Eigen::VectorXd x = Eigen::VectorXd::Ones(1), y(1);
    matvec(x, y);
    out.min = out.max = y(0);
    out.vec_min = out.vec_max = x;
    out.converged = true;
    return out;
  }

  max_iter = std::min<int>(max_iter, static_cast<int>(n));
  Eigen::VectorXd v(n);
  RandomStream rng(0x5eed1a2b3c4d5e6full);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
  v.normalize();
  if (warm_start && warm_start->size() == n && warm_start->norm() > 0.0)
    v = (*warm_start / warm_start->norm() + 0.01 * v).normalized();

  Eigen::MatrixXd basis(n, max_iter);
  Eigen::VectorXd alpha(max_iter), beta(max_iter);
  Eigen::VectorXd w(n);

  double prev_min = 0.0, prev_max = 0.0;
  int k = 0;
  for (; k < max_iter; ++k) {
    basis.col(k) = v;
    matvec(v, w);
    alpha(k) = v.dot(w);
    w -= alpha(k) * v;
    if (k > 0) w -= beta(k - 1) * basis.col(k - 1);
    // full reorthogonalization, two passes
    for (int pass = 0; pass < 2; ++pass)
      w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).transpose() * w);
    beta(k) = w.norm();

    const bool breakdown = beta(k) < 1e-13;
    if ((k + 1) % 10 == 0 || k + 1 == max_iter || breakdown) {
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k + 1, k + 1);
      for (int i = 0; i <= k; ++i) {
        t(i, i) = alpha(i);
        if (i > 0) t(i, i - 1) = t(i - 1, i) = beta(i - 1);
      }
      Eigen::VectorXd evals;
      Eigen::MatrixXd evecs;
      symmetric_eigen(t, evals, evecs);
      const double cur_min = evals(0), cur_max = evals(k);
      // Ritz residuals: beta_k * |last tridiag eigenvector component|
      const double res_min = breakdown ? 0.0 : beta(k) * std::abs(evecs(k, 0));
      const double res_max = breakdown ? 0.0 : beta(k) * std::abs(evecs(k, k));
      const double drift = std::max(std::abs(cur_min - prev_min), std::abs(cur_max - prev_max));
      prev_min = cur_min;
      prev_max = cur_max;
      if ((std::max(res_min, res_max) < residual_tol && drift < 10.0 * residual_tol) ||
          breakdown || k + 1 == max_iter) {
        out.min = cur_min;
        out.max = cur_max;
        out.vec_min = basis.leftCols(k + 1) * evecs.col(0);
        out.vec_max = basis.leftCols(k + 1) * evecs.col(k);
        out.converged = breakdown || std::max(res_min, res_max) < residual_tol;
        out.iterations = k + 1;
        return out;
      }
    }
    v = w / beta(k);
  }

  out.min = prev_min;
  out.max = prev_max;
  out.converged = false;
  out.iterations = k;
  return out;
}

}  // namespace qavmc
