#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

#include "qavmc/configuration.hpp"

namespace qavmc {

/// One real-parameter RBM block with the hidden layer traced out:
///   f(S) = sum_i a_i s_i + sum_mu ln(2 cosh(b_mu + sum_i W_mu,i s_i)),  s_i = +/-1.
struct RbmBlock {
  Eigen::VectorXd a;  // visible biases (N)
  Eigen::VectorXd b;  // hidden biases (M)
  Eigen::MatrixXd w;  // M x N couplings
};

/// RBMmodPhase ansatz: psi(S) = A(S) e^{i ln B(S)} with two real RBM blocks,
/// so ln psi = f_amp(S) + i f_phase(S).
struct RbmParams {
  RbmBlock amplitude;
  RbmBlock phase;

  int n_visible() const { return static_cast<int>(amplitude.a.size()); }
  int n_hidden() const { return static_cast<int>(amplitude.b.size()); }
  double alpha_density() const { return static_cast<double>(n_hidden()) / n_visible(); }

  /// Flat layout: [amp.a, amp.b, amp.W (row-major), phase.a, phase.b, phase.W].
  Eigen::Index n_params() const;
  Eigen::VectorXd flatten() const;
  static RbmParams unflatten(const Eigen::VectorXd& flat, int n_visible, int n_hidden);
};

/// Zero biases, Gaussian couplings with the given sigma; seeded.
RbmParams init_rbm(int n_visible, int n_hidden, double sigma_w, std::uint64_t seed);

/// Numerically stable ln(2 cosh x).
double ln2cosh(double x);

/// Traced-block value at a configuration.
double rbm_block_log(const RbmBlock& block, const Eigen::VectorXd& spins);

/// ln psi(S) = f_amp + i f_phase.
std::complex<double> log_psi(const RbmParams& params, std::uint64_t word);

/// d ln psi / d theta over the flat layout (amplitude part real, phase part
/// purely imaginary).
Eigen::VectorXcd grad_log_psi(const RbmParams& params, std::uint64_t word);

/// +/-1 spin vector of a packed configuration.
Eigen::VectorXd spin_vector(std::uint64_t word, int n_qubits);

}  // namespace qavmc
