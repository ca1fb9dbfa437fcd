#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qavmc/fermion.hpp"
#include "qavmc/hamiltonian.hpp"

namespace qavmc {

/// One weighted Pauli string in symplectic form: coeff * prod_j X_j^{x_j} Z_j^{z_j}
/// (per qubit, X left of Z; Y_j corresponds to x_j = z_j = 1 with Y = i X Z).
struct PauliTerm {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  std::complex<double> coeff;
};

struct PauliHamiltonian {
  int n_qubits = 0;
  std::vector<PauliTerm> terms;  // merged, sorted by (x, z), near-zero dropped

  /// Standard {I,X,Y,Z} label, qubit 0 leftmost.
  static std::string label(const PauliTerm& t, int n_qubits);
  /// Weight in the standard basis: coeff * (-i)^(#Y).
  static std::complex<double> standard_weight(const PauliTerm& t);
};

/// Jordan-Wigner image of a second-quantized term list.
PauliHamiltonian jordan_wigner(const FermionOps& ops, int n_qubits);

/// Sector block of the Pauli-string sum: rows/columns restricted to the basis.
/// Throws if the result has a non-negligible imaginary part.
Eigen::MatrixXd pauli_sector_matrix(const PauliHamiltonian& ph, const SectorBasis& basis);

}  // namespace qavmc
