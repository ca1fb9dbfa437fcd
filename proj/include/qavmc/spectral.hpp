#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <vector>

#include "qavmc/hamiltonian.hpp"

namespace qavmc {

/// Full eigendecomposition of a sector Hamiltonian. Eigenvalues ascending,
/// eigenvector columns orthonormal. Immutable after construction.
struct Spectrum {
  BasisPtr basis;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // column n = |Psi_n> amplitudes over the basis

  std::size_t size() const { return basis->size(); }

  /// Contiguous [begin, end) index ranges of (near-)degenerate levels,
  /// grouped at 1e-9 * max(1, |E_max|).
  std::vector<std::pair<std::size_t, std::size_t>> levels() const;
};

using SpectrumPtr = std::shared_ptr<const Spectrum>;

/// Dense symmetric eigensolve (LAPACK divide-and-conquer when available).
Spectrum eigendecompose(const SectorHamiltonian& h);
SpectrumPtr eigendecompose_shared(const SectorHamiltonian& h);

/// Plain symmetric eigensolve on a raw matrix (ascending eigenvalues).
void symmetric_eigen(const Eigen::MatrixXd& m, Eigen::VectorXd& eigenvalues,
                     Eigen::MatrixXd& eigenvectors);

/// Eigenvalues only (destroys its workspace copy internally).
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m);

/// V diag(f) V^T as two sign-split symmetric rank-k updates (half the GEMM
/// flops); used by the dense evolution kernels.
Eigen::MatrixXd phase_conjugation(const Eigen::MatrixXd& v, const Eigen::ArrayXd& f);

/// e^{-iH tau} |S_i> computed as V e^{-iE tau} V^T e_i. Unit norm.
Eigen::VectorXcd evolve_row(const Spectrum& spec, std::size_t i, double tau);

/// Probabilities below this floor are clamped for log arithmetic and the
/// state is flagged out-of-support.
constexpr double kProbabilityFloor = 1e-300;

struct GroundStateDistribution {
  BasisPtr basis;
  Eigen::VectorXd amplitudes;     // <S|Psi_0>
  Eigen::VectorXd probabilities;  // P(S) = |<S|Psi_0>|^2
  double energy = 0.0;            // E_0
  bool degenerate = false;        // E_1 - E_0 below tolerance

  bool in_support(std::size_t i) const { return probabilities(i) >= kProbabilityFloor; }
};

GroundStateDistribution ground_distribution(const Spectrum& spec);

/// Configuration "energy" eps(S) = -log10 P(S) (clamped at the floor).
double config_energy(double probability);

/// delta_eps = eps(S_j) - eps(S_i) = log10(P(S_i) / P(S_j)).
double delta_epsilon(double p_i, double p_j);

}  // namespace qavmc
