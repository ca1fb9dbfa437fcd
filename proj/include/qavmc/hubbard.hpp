#pragma once

#include <utility>
#include <vector>

#include "qavmc/fermion.hpp"
#include "qavmc/hamiltonian.hpp"

namespace qavmc {

/// Open-boundary lattice: a chain or a rectangular grid.
struct LatticeSpec {
  enum class Kind { Chain, Grid };
  Kind kind = Kind::Chain;
  std::vector<int> dims;  // {L} or {Lx, Ly}

  int n_sites() const;
  /// Nearest-neighbor edges (i < j), symmetric and self-loop-free by construction.
  std::vector<std::pair<int, int>> edges() const;
};

inline LatticeSpec chain(int length) { return {LatticeSpec::Kind::Chain, {length}}; }
inline LatticeSpec grid(int lx, int ly) { return {LatticeSpec::Kind::Grid, {lx, ly}}; }

/// Fermi-Hubbard Hamiltonian on the (n_alpha, n_beta) sector:
///   H = -t sum_<ij>,sigma (a†_i,sigma a_j,sigma + h.c.) + U sum_i n_i,alpha n_i,beta
/// Interleaved spin-orbital ordering, Jordan-Wigner sign convention.
SectorHamiltonian build_hubbard(const LatticeSpec& lattice, double t, double U,
                                int n_alpha, int n_beta);

/// Second-quantized term list for the same Hamiltonian (feeds jordan_wigner
/// and the operator-application cross-checks).
FermionOps hubbard_terms(const LatticeSpec& lattice, double t, double U);

}  // namespace qavmc
