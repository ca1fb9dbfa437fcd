#pragma once

// Test-side oracles, independent of the library implementation paths they
// check: a slow operator-application engine over occupied-index lists, a
// Taylor/scaling-and-squaring matrix exponential, brute-force RBM hidden
// sums, finite differences and small statistics helpers.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "qavmc/basis.hpp"
#include "qavmc/fermion.hpp"
#include "qavmc/rbm.hpp"

namespace oracles {

/// Analytic 2-site Hubbard ground energy in the (1,1) sector.
inline double two_site_hubbard_ground(double t, double u) {
  return 0.5 * (u - std::sqrt(u * u + 16.0 * t * t));
}

/// Slow second-quantized matrix: states as sorted occupied-orbital lists,
/// signs from explicit transposition counting.
Eigen::MatrixXd slow_sector_matrix(const qavmc::FermionOps& terms,
                                   const qavmc::SectorBasis& basis);

/// e^{-i H tau} by scaling-and-squaring with a Taylor core.
Eigen::MatrixXcd expm_minus_i_h_tau(const Eigen::MatrixXd& h, double tau);

/// psi(S) for one traced RBM block by explicit summation over all 2^M hidden
/// configurations.
double rbm_block_bruteforce(const qavmc::RbmBlock& block, const Eigen::VectorXd& spins);

/// Central finite difference of a scalar function of a flat parameter vector.
Eigen::VectorXd finite_difference_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& at,
    double step = 1e-5);

/// Upper tail probability of a chi-square distribution (regularized
/// incomplete gamma Q(k/2, x/2)).
double chi_square_sf(double statistic, int dof);

/// Worst-row total variation of P^t from pi by direct repeated multiplication.
double tv_after_steps(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi, int steps);

}  // namespace oracles
