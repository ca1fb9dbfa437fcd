#include "qavmc/pauli.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace qavmc {

namespace {

using Cplx = std::complex<double>;

// Product O(x1,z1) O(x2,z2) = (-1)^{|z1 & x2|} O(x1^x2, z1^z2).
void multiply_into(std::uint64_t& x1, std::uint64_t& z1, Cplx& c, std::uint64_t x2,
                   std::uint64_t z2) {
  if (popcount64(z1 & x2) & 1) c = -c;
  x1 ^= x2;
  z1 ^= z2;
}

struct Expansion {
  // sum of coeff * O(x, z)
  std::vector<PauliTerm> parts;
};

// a_j   = 1/2 [O(b, L) - O(b, L|b)], a†_j = 1/2 [O(b, L) + O(b, L|b)],
// with b the qubit bit and L the Jordan-Wigner Z string below j.
Expansion ladder_expansion(const LadderOp& op) {
  const std::uint64_t b = 1ull << op.orbital;
  const std::uint64_t L = low_mask(op.orbital);
  const double s = op.dagger ? +1.0 : -1.0;
  return {{{b, L, Cplx(0.5, 0.0)}, {b, L | b, Cplx(0.5 * s, 0.0)}}};
}

}  // namespace

PauliHamiltonian jordan_wigner(const FermionOps& ops, int n_qubits) {
  std::map<std::pair<std::uint64_t, std::uint64_t>, Cplx> acc;
  double scale = 0.0;

  for (const auto& term : ops) {
    for (const auto& op : term.ops)
      if (op.orbital < 0 || op.orbital >= n_qubits)
        throw std::out_of_range("jordan_wigner: orbital index out of range");
    scale = std::max(scale, std::abs(term.coeff));

    std::vector<PauliTerm> product{{0, 0, Cplx(term.coeff, 0.0)}};
    for (const auto& op : term.ops) {
      const Expansion ex = ladder_expansion(op);
      std::vector<PauliTerm> next;
      next.reserve(product.size() * ex.parts.size());
      for (const auto& lhs : product)
        for (const auto& rhs : ex.parts) {
          PauliTerm t = lhs;
          t.coeff *= rhs.coeff;
          multiply_into(t.x, t.z, t.coeff, rhs.x, rhs.z);
          next.push_back(t);
        }
      product = std::move(next);
    }
    for (const auto& t : product) acc[{t.x, t.z}] += t.coeff;
  }

  PauliHamiltonian out;
  out.n_qubits = n_qubits;
  const double drop = 1e-14 * std::max(1.0, scale);
  for (const auto& [key, c] : acc)
    if (std::abs(c) > drop) out.terms.push_back({key.first, key.second, c});
  return out;
}

std::string PauliHamiltonian::label(const PauliTerm& t, int n_qubits) {
  std::string s(n_qubits, 'I');
  for (int j = 0; j < n_qubits; ++j) {
    const bool xb = (t.x >> j) & 1ull, zb = (t.z >> j) & 1ull;
    if (xb && zb)
      s[j] = 'Y';
    else if (xb)
      s[j] = 'X';
    else if (zb)
      s[j] = 'Z';
  }
  return s;
}

std::complex<double> PauliHamiltonian::standard_weight(const PauliTerm& t) {
  // O(x,z) = i^(#Y) * standard string  =>  standard weight = coeff * (-i)^(#Y)
  static const Cplx minus_i_pow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  return t.coeff * minus_i_pow[popcount64(t.x & t.z) & 3];
}

Eigen::MatrixXd pauli_sector_matrix(const PauliHamiltonian& ph, const SectorBasis& basis) {
  const auto n = basis.size();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    const std::uint64_t w = basis.word(col);
    for (const auto& t : ph.terms) {
      const std::uint64_t v = w ^ t.x;
      if (!basis.contains(v)) continue;
      const double sign = (popcount64(w & t.z) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(basis.index_of(v)), static_cast<Eigen::Index>(col)) +=
          t.coeff * sign;
    }
  }
  const double imag_max = m.imag().cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, m.real().cwiseAbs().maxCoeff());
  if (imag_max > 1e-10 * scale)
    throw std::runtime_error("pauli_sector_matrix: non-real sector block");
  return m.real();
}

}  // namespace qavmc
