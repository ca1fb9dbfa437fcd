#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qavmc/basis.hpp"

namespace qavmc {

/// Real symmetric Hamiltonian matrix restricted to a particle-number sector.
/// Dense storage; symmetry is exact by construction and verified on build.
struct SectorHamiltonian {
  BasisPtr basis;
  Eigen::MatrixXd matrix;
  std::string param_tag;  // provenance: U / gamma_e / geometry label

  std::size_t size() const { return basis->size(); }

  /// Nonzero entries of row i (the sparse connected set used by local energy).
  std::vector<std::pair<std::size_t, double>> row_nonzeros(std::size_t i) const {
    std::vector<std::pair<std::size_t, double>> out;
    const auto n = static_cast<std::size_t>(matrix.cols());
    for (std::size_t j = 0; j < n; ++j) {
      const double v = matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v != 0.0) out.emplace_back(j, v);
    }
    return out;
  }
};

/// Symmetrize exactly (averages the accumulated upper/lower parts) and check
/// all entries are finite. Builders call this last.
void finalize_symmetric(SectorHamiltonian& h);

}  // namespace qavmc
