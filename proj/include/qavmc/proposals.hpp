#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "qavmc/rng.hpp"
#include "qavmc/spectral.hpp"

namespace qavmc {

enum class ProposalKind {
  Uniform,
  Exchange,
  ExcitationSD,
  ExcitationSDFlip,
  Quantum,
  Effective,
  QuantumAveraged,
};

std::string to_string(ProposalKind kind);
ProposalKind proposal_kind_from_string(const std::string& name);

/// A Metropolis-Hastings proposal kernel over a sector basis. Every kind is
/// symmetric (Q = Q^T) and row-stochastic, so the acceptance reduces to the
/// pi-ratio form. Row evaluation is pure; sampling uses a caller-supplied
/// stream (one independent stream per chain).
class ProposalKernel {
 public:
  virtual ~ProposalKernel() = default;
  virtual const SectorBasis& basis() const = 0;
  virtual ProposalKind kind() const = 0;
  virtual std::string descriptor() const = 0;
  /// Full proposal row Q(S_i, .) as a probability vector over the sector.
  virtual Eigen::VectorXd row(std::size_t i) const = 0;
  /// One sampled move; returns the index of the proposed configuration.
  virtual std::size_t sample(std::size_t i, RandomStream& rng) const = 0;
};

using KernelPtr = std::shared_ptr<const ProposalKernel>;

// --- classical kernels ---

KernelPtr make_uniform(BasisPtr basis);
KernelPtr make_exchange(BasisPtr basis);
KernelPtr make_excitation_sd(BasisPtr basis);
KernelPtr make_excitation_sd_flip(BasisPtr basis);
KernelPtr make_classical(ProposalKind kind, BasisPtr basis);

// --- quantum kernels ---

/// Q(S_i,S_j) = |<S_j| e^{-iH tau} |S_i>|^2 at fixed tau.
KernelPtr make_quantum(SpectrumPtr spec, double tau);

/// Per-step tau drawn uniformly from [tau_lo, tau_hi]. row() reports the
/// interval-averaged kernel on a 128-point midpoint grid.
KernelPtr make_quantum_interval(SpectrumPtr spec, double tau_lo, double tau_hi);

/// Time-averaged limit: Q_eff(S_i,S_j) = sum_levels [(P_L)_ij]^2 with P_L the
/// eigves projector of each (near-)degenerate level.
KernelPtr make_effective(SpectrumPtr spec);

/// Arithmetic mean of fixed-tau quantum kernels over (spectrum, tau) pairs;
/// covers tau grids, gamma_e grids, or both. All spectra must share the sector.
KernelPtr make_quantum_averaged(std::vector<std::pair<SpectrumPtr, double>> components);

/// Uniform mixture of arbitrary kernels over the same sector (e.g. the
/// random-gamma_e proposal: one interval-tau quantum kernel per gamma value).
KernelPtr make_mixture(std::vector<KernelPtr> components);

// --- spec-level row/sample entry points ---

Eigen::VectorXd classical_row(ProposalKind kind, const SectorBasis& basis, std::size_t i);
std::size_t classical_sample(ProposalKind kind, const SectorBasis& basis, std::size_t i,
                             RandomStream& rng);
Eigen::VectorXd quantum_row(const Spectrum& spec, std::size_t i, double tau);
Eigen::VectorXd effective_row(const Spectrum& spec, std::size_t i);
Eigen::VectorXd averaged_quantum_row(const std::vector<std::pair<SpectrumPtr, double>>& components,
                                     std::size_t i);

/// Assemble the full Q matrix of a kernel (row by row).
Eigen::MatrixXd assemble_matrix(const ProposalKernel& kernel);

/// Dense |U(tau)|^2 for a whole sector in one pass (BLAS-backed; used by scans).
Eigen::MatrixXd quantum_matrix(const Spectrum& spec, double tau);

/// Dense effective kernel matrix.
Eigen::MatrixXd effective_matrix(const Spectrum& spec);

/// Draw from a probability row by CDF walk.
std::size_t categorical_sample(const Eigen::VectorXd& row, RandomStream& rng);

}  // namespace qavmc
