#include "qavmc/rbm.hpp"

#include <cmath>
#include <stdexcept>

#include "qavmc/rng.hpp"

namespace qavmc {

Eigen::Index RbmParams::n_params() const {
  const Eigen::Index n = amplitude.a.size(), m = amplitude.b.size();
  return 2 * (n + m + m * n);
}

Eigen::VectorXd RbmParams::flatten() const {
  const Eigen::Index n = amplitude.a.size(), m = amplitude.b.size();
  Eigen::VectorXd flat(n_params());
  Eigen::Index at = 0;
  for (const RbmBlock* blk : {&amplitude, &phase}) {
    flat.segment(at, n) = blk->a;
    at += n;
    flat.segment(at, m) = blk->b;
    at += m;
    for (Eigen::Index mu = 0; mu < m; ++mu, at += n) flat.segment(at, n) = blk->w.row(mu);
  }
  return flat;
}

RbmParams RbmParams::unflatten(const Eigen::VectorXd& flat, int n_visible, int n_hidden) {
  const Eigen::Index n = n_visible, m = n_hidden;
  if (flat.size() != 2 * (n + m + m * n))
    throw std::invalid_argument("RbmParams::unflatten: size mismatch");
  RbmParams p;
  Eigen::Index at = 0;
  for (RbmBlock* blk : {&p.amplitude, &p.phase}) {
    blk->a = flat.segment(at, n);
    at += n;
    blk->b = flat.segment(at, m);
    at += m;
    blk->w.resize(m, n);
    for (Eigen::Index mu = 0; mu < m; ++mu, at += n) blk->w.row(mu) = flat.segment(at, n);
  }
  return p;
}

RbmParams init_rbm(int n_visible, int n_hidden, double sigma_w, std::uint64_t seed) {
  if (n_visible < 1 || n_hidden < 1) throw std::invalid_argument("init_rbm: bad shape");
  RandomStream rng(seed);
  RbmParams p;
  for (RbmBlock* blk : {&p.amplitude, &p.phase}) {
    blk->a = Eigen::VectorXd::Zero(n_visible);
    blk->b = Eigen::VectorXd::Zero(n_hidden);
    blk->w.resize(n_hidden, n_visible);
    for (Eigen::Index mu = 0; mu < n_hidden; ++mu)
      for (Eigen::Index i = 0; i < n_visible; ++i) blk->w(mu, i) = sigma_w * rng.normal();
  }
  return p;
}

double ln2cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax));
}

double rbm_block_log(const RbmBlock& block, const Eigen::VectorXd& spins) {
  const Eigen::VectorXd theta = block.b + block.w * spins;
  double f = block.a.dot(spins);
  for (Eigen::Index mu = 0; mu < theta.size(); ++mu) f += ln2cosh(theta(mu));
  return f;
}

Eigen::VectorXd spin_vector(std::uint64_t word, int n_qubits) {
  Eigen::VectorXd s(n_qubits);
  for (int i = 0; i < n_qubits; ++i) s(i) = ((word >> i) & 1ull) ? 1.0 : -1.0;
  return s;
}

std::complex<double> log_psi(const RbmParams& params, std::uint64_t word) {
  const Eigen::VectorXd s = spin_vector(word, params.n_visible());
  const double re = rbm_block_log(params.amplitude, s);
  const double im = rbm_block_log(params.phase, s);
  if (!std::isfinite(re) || !std::isfinite(im))
    throw std::runtime_error("log_psi: non-finite parameters");
  return {re, im};
}

Eigen::VectorXcd grad_log_psi(const RbmParams& params, std::uint64_t word) {
  const int n = params.n_visible(), m = params.n_hidden();
  const Eigen::VectorXd s = spin_vector(word, n);
  Eigen::VectorXcd grad(params.n_params());

  Eigen::Index at = 0;
  bool imaginary = false;
  for (const RbmBlock* blk : {&params.amplitude, &params.phase}) {
    const std::complex<double> unit = imaginary ? std::complex<double>(0, 1)
                                                : std::complex<double>(1, 0);
    const Eigen::VectorXd tanh_theta = (blk->b + blk->w * s).array().tanh();
    for (Eigen::Index i = 0; i < n; ++i) grad(at++) = unit * s(i);
    for (Eigen::Index mu = 0; mu < m; ++mu) grad(at++) = unit * tanh_theta(mu);
    for (Eigen::Index mu = 0; mu < m; ++mu)
      for (Eigen::Index i = 0; i < n; ++i) grad(at++) = unit * tanh_theta(mu) * s(i);
    imaginary = true;
  }
  return grad;
}

}  // namespace qavmc
