#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "qavmc/configuration.hpp"

namespace qavmc {

/// Enumerated basis of all configurations with fixed (n_alpha, n_beta),
/// ordered ascending by packed word. Immutable once built; shared by
/// Hamiltonians, spectra, kernels and chains.
class SectorBasis {
 public:
  SectorBasis(int n_orb, int n_alpha, int n_beta);

  int n_orb() const { return n_orb_; }
  int n_alpha() const { return n_alpha_; }
  int n_beta() const { return n_beta_; }
  int n_qubits() const { return 2 * n_orb_; }
  std::size_t size() const { return states_.size(); }

  std::uint64_t word(std::size_t i) const { return states_[i]; }
  Configuration state(std::size_t i) const { return {states_[i], n_qubits()}; }
  const std::vector<std::uint64_t>& words() const { return states_; }

  bool contains(std::uint64_t w) const { return index_.count(w) != 0; }
  std::size_t index_of(std::uint64_t w) const;

  bool operator==(const SectorBasis& other) const {
    return n_orb_ == other.n_orb_ && n_alpha_ == other.n_alpha_ && n_beta_ == other.n_beta_;
  }

 private:
  int n_orb_, n_alpha_, n_beta_;
  std::vector<std::uint64_t> states_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

using BasisPtr = std::shared_ptr<const SectorBasis>;

inline BasisPtr make_basis(int n_orb, int n_alpha, int n_beta) {
  return std::make_shared<const SectorBasis>(n_orb, n_alpha, n_beta);
}

std::uint64_t binomial(int n, int k);

}  // namespace qavmc
