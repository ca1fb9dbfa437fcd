#include "qavmc/spectral.hpp"

#include <cmath>
#include <stdexcept>

#ifdef QAVMC_HAVE_LAPACKE
#include <lapacke.h>
#endif

namespace qavmc {

void symmetric_eigen(const Eigen::MatrixXd& m, Eigen::VectorXd& eigenvalues,
                     Eigen::MatrixXd& eigenvectors) {
  const auto n = static_cast<int>(m.rows());
  if (m.cols() != n) throw std::invalid_argument("symmetric_eigen: matrix not square");
#ifdef QAVMC_HAVE_LAPACKE
  eigenvectors = m;
  eigenvalues.resize(n);
  const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, eigenvectors.data(), n,
                                  eigenvalues.data());
  if (info != 0)
    throw std::runtime_error("symmetric_eigen: dsyevd failed to converge (info=" +
                             std::to_string(info) + ")");
#else
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("symmetric_eigen: eigensolver failed to converge");
  eigenvalues = es.eigenvalues();
  eigenvectors = es.eigenvectors();
#endif
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  const auto n = static_cast<int>(m.rows());
  if (m.cols() != n) throw std::invalid_argument("symmetric_eigenvalues: matrix not square");
#ifdef QAVMC_HAVE_LAPACKE
  Eigen::MatrixXd work = m;
  Eigen::VectorXd evals(n);
  const int info = LAPACKE_dsyev(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n, evals.data());
  if (info != 0)
    throw std::runtime_error("symmetric_eigenvalues: dsyev failed (info=" + std::to_string(info) +
                             ")");
  return evals;
#else
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("symmetric_eigenvalues: eigensolver failed to converge");
  return es.eigenvalues();
#endif
}

Eigen::MatrixXd phase_conjugation(const Eigen::MatrixXd& v, const Eigen::ArrayXd& f) {
  const auto n = v.rows();
  if (v.cols() != f.size()) throw std::invalid_argument("phase_conjugation: shape mismatch");
  Eigen::MatrixXd plus(n, f.size()), minus(n, f.size());
  Eigen::Index np = 0, nm = 0;
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    if (f(k) >= 0.0)
      plus.col(np++) = std::sqrt(f(k)) * v.col(k);
    else
      minus.col(nm++) = std::sqrt(-f(k)) * v.col(k);
  }
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n);
  if (np) u.selfadjointView<Eigen::Lower>().rankUpdate(plus.leftCols(np), 1.0);
  if (nm) u.selfadjointView<Eigen::Lower>().rankUpdate(minus.leftCols(nm), -1.0);
  u.triangularView<Eigen::StrictlyUpper>() = u.transpose();
  return u;
}

Spectrum eigendecompose(const SectorHamiltonian& h) {
  if (!h.matrix.allFinite()) throw std::invalid_argument("eigendecompose: non-finite matrix");
  Spectrum spec;
  spec.basis = h.basis;
  symmetric_eigen(h.matrix, spec.eigenvalues, spec.eigenvectors);
  return spec;
}

SpectrumPtr eigendecompose_shared(const SectorHamiltonian& h) {
  return std::make_shared<const Spectrum>(eigendecompose(h));
}

std::vector<std::pair<std::size_t, std::size_t>> Spectrum::levels() const {
  const auto n = static_cast<std::size_t>(eigenvalues.size());
  const double tol =
      1e-9 * std::max(1.0, std::abs(eigenvalues(static_cast<Eigen::Index>(n) - 1)));
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i == n || eigenvalues(i) - eigenvalues(i - 1) > tol) {
      out.emplace_back(begin, i);
      begin = i;
    }
  }
  return out;
}

Eigen::VectorXcd evolve_row(const Spectrum& spec, std::size_t i, double tau) {
  if (i >= spec.size()) throw std::out_of_range("evolve_row: index outside sector");
  const Eigen::VectorXd overlaps = spec.eigenvectors.row(static_cast<Eigen::Index>(i));
  const Eigen::ArrayXd phase = -tau * spec.eigenvalues.array();
  Eigen::VectorXcd weighted(spec.eigenvalues.size());
  weighted.real() = (phase.cos() * overlaps.array()).matrix();
  weighted.imag() = (phase.sin() * overlaps.array()).matrix();
  return spec.eigenvectors * weighted;
}

GroundStateDistribution ground_distribution(const Spectrum& spec) {
  const auto n = static_cast<Eigen::Index>(spec.size());
  if (n == 0) throw std::invalid_argument("ground_distribution: empty spectrum");
  GroundStateDistribution g;
  g.basis = spec.basis;
  g.amplitudes = spec.eigenvectors.col(0);
  g.probabilities = g.amplitudes.array().square();
  g.energy = spec.eigenvalues(0);
  if (n > 1) {
    const double scale = std::max(1.0, std::abs(spec.eigenvalues(n - 1)));
    g.degenerate = (spec.eigenvalues(1) - spec.eigenvalues(0)) < 1e-10 * scale;
  }
  return g;
}

double config_energy(double probability) {
  return -std::log10(std::max(probability, kProbabilityFloor));
}

double delta_epsilon(double p_i, double p_j) {
  return config_energy(p_j) - config_energy(p_i);
}

}  // namespace qavmc
