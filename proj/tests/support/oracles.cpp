#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracles {

namespace {

// State as a sorted list of occupied spin-orbitals. Ladder operators insert
// or remove an index; the sign is (-1)^(position of the insertion/removal).
struct SlowState {
  std::vector<int> occ;
  int sign = 1;
  bool dead = false;

  void create(int orbital) {
    if (dead) return;
    auto it = std::lower_bound(occ.begin(), occ.end(), orbital);
    if (it != occ.end() && *it == orbital) {
      dead = true;
      return;
    }
    if ((it - occ.begin()) % 2 == 1) sign = -sign;
    occ.insert(it, orbital);
  }

  void annihilate(int orbital) {
    if (dead) return;
    auto it = std::lower_bound(occ.begin(), occ.end(), orbital);
    if (it == occ.end() || *it != orbital) {
      dead = true;
      return;
    }
    if ((it - occ.begin()) % 2 == 1) sign = -sign;
    occ.erase(it);
  }
};

std::vector<int> occupied_list(std::uint64_t word, int n_qubits) {
  std::vector<int> occ;
  for (int i = 0; i < n_qubits; ++i)
    if ((word >> i) & 1ull) occ.push_back(i);
  return occ;
}

}  // namespace

Eigen::MatrixXd slow_sector_matrix(const qavmc::FermionOps& terms,
                                   const qavmc::SectorBasis& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    const auto occ0 = occupied_list(basis.word(static_cast<std::size_t>(col)), basis.n_qubits());
    for (const auto& term : terms) {
      SlowState st{occ0, 1, false};
      for (auto it = term.ops.rbegin(); it != term.ops.rend(); ++it) {
        if (it->dagger)
          st.create(it->orbital);
        else
          st.annihilate(it->orbital);
      }
      if (st.dead) continue;
      std::uint64_t w = 0;
      for (int o : st.occ) w |= 1ull << o;
      if (!basis.contains(w)) continue;  // sector-violating term
      m(static_cast<Eigen::Index>(basis.index_of(w)), col) += term.coeff * st.sign;
    }
  }
  return m;
}

Eigen::MatrixXcd expm_minus_i_h_tau(const Eigen::MatrixXd& h, double tau) {
  const auto n = h.rows();
  Eigen::MatrixXcd a = std::complex<double>(0.0, -tau) * h.cast<std::complex<double>>();
  // scale so the Taylor series converges fast, then square back
  int squarings = 0;
  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.25) {
    a *= 0.5;
    norm *= 0.5;
    ++squarings;
  }
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
  for (int k = 1; k <= 24; ++k) {
    term = (term * a / static_cast<double>(k)).eval();
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) result = (result * result).eval();
  return result;
}

double rbm_block_bruteforce(const qavmc::RbmBlock& block, const Eigen::VectorXd& spins) {
  const auto m = block.b.size();
  if (m > 20) throw std::invalid_argument("bruteforce RBM limited to small hidden layers");
  double psi = 0.0;
  for (std::uint64_t hbits = 0; hbits < (1ull << m); ++hbits) {
    double e = block.a.dot(spins);
    for (Eigen::Index mu = 0; mu < m; ++mu) {
      const double hmu = ((hbits >> mu) & 1ull) ? 1.0 : -1.0;
      e += block.b(mu) * hmu + hmu * block.w.row(mu).dot(spins);
    }
    psi += std::exp(e);
  }
  return psi;
}

Eigen::VectorXd finite_difference_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& at,
    double step) {
  Eigen::VectorXd g(at.size());
  Eigen::VectorXd x = at;
  for (Eigen::Index i = 0; i < at.size(); ++i) {
    x(i) = at(i) + step;
    const double up = f(x);
    x(i) = at(i) - step;
    const double down = f(x);
    x(i) = at(i);
    g(i) = (up - down) / (2.0 * step);
  }
  return g;
}

namespace {

// Regularized incomplete gamma Q(a, x) via series / continued fraction.
double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q domain");
  if (x == 0.0) return 1.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    // P(a,x) series
    double sum = 1.0 / a, term = sum, ap = a;
    for (int k = 0; k < 500; ++k) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return 1.0 - sum * std::exp(-x + a * std::log(x) - lg);
  }
  // Q(a,x) Lentz continued fraction
  double b = x + 1.0 - a, c = 1e308, d = 1.0 / b, h = d;
  for (int k = 1; k < 500; ++k) {
    const double an = -k * (k - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - lg) * h;
}

}  // namespace

double chi_square_sf(double statistic, int dof) {
  return gamma_q(0.5 * dof, 0.5 * statistic);
}

double tv_after_steps(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi, int steps) {
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(p.rows(), p.cols());
  for (int s = 0; s < steps; ++s) acc = (acc * p).eval();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < acc.rows(); ++i)
    worst = std::max(worst, 0.5 * (acc.row(i).transpose() - pi).cwiseAbs().sum());
  return worst;
}

}  // namespace oracles
