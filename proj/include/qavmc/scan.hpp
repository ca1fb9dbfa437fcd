#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "qavmc/proposals.hpp"

namespace qavmc {

/// Uniform tau grid `start, start+step, ...` up to and including `stop`.
std::vector<double> tau_grid(double start, double stop, double step);

struct TauScan {
  std::vector<double> taus;
  std::vector<double> deltas;
  double delta_max = 0.0;
  double tau_at_max = 0.0;
};

/// Absolute spectral gap of the quantum proposal for every tau on the grid,
/// against the target pi. The evolution Hamiltonian may differ from the one
/// that produced pi (the x_e mechanism). Uses a spin-flip block decomposition
/// when the Hamiltonian commutes with the global flip, and a deflated Lanczos
/// eigensolve above `dense_cutoff` states.
TauScan quantum_gap_tau_scan(const SectorHamiltonian& h_evolve, const Eigen::VectorXd& pi,
                             const std::vector<double>& taus, Eigen::Index dense_cutoff = 600);

/// Same scan for a kernel averaged over several evolution Hamiltonians
/// (e.g. a gamma_e quadrature grid): per tau, Q is the component mean.
TauScan quantum_gap_tau_scan_multi(const std::vector<const SectorHamiltonian*>& h_components,
                                   const Eigen::VectorXd& pi, const std::vector<double>& taus,
                                   Eigen::Index dense_cutoff = 600);

/// Gap of an assembled kernel (classical kinds, effective, averaged).
double kernel_gap(const ProposalKernel& kernel, const Eigen::VectorXd& pi,
                  Eigen::Index dense_cutoff = 600);

/// Gap of the effective proposal derived from a spectrum.
double effective_gap(const Spectrum& spec, const Eigen::VectorXd& pi,
                     Eigen::Index dense_cutoff = 600);

/// Fock-space representation of the global spin flip in a balanced sector:
/// T e_i = sign_i e_{perm[i]}, with sign_i = (-1)^(doubly occupied sites).
/// The sign is the fermionic reordering parity of the alpha/beta mode swap.
struct FlipSymmetry {
  std::vector<std::size_t> perm;
  std::vector<int> signs;
};

std::optional<FlipSymmetry> flip_symmetry(const SectorBasis& basis);

/// True when H commutes with T: H(perm_i, perm_j) = s_i s_j H(i, j) (1e-12).
bool flip_symmetric(const SectorHamiltonian& h, const FlipSymmetry& sym);

}  // namespace qavmc
