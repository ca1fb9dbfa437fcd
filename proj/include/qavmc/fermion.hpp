#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qavmc/configuration.hpp"

namespace qavmc {

/// One ladder operator acting on a spin-orbital (Jordan-Wigner ordering is the
/// spin-orbital index order; parity strings count occupied orbitals below).
struct LadderOp {
  int orbital;
  bool dagger;
};

/// coeff * op[0] * op[1] * ... (ops applied to a ket right-to-left).
struct FermionTerm {
  double coeff;
  std::vector<LadderOp> ops;
};

using FermionOps = std::vector<FermionTerm>;

/// Parity of the occupation below orbital k: Jordan-Wigner sign factor.
inline int jw_parity(std::uint64_t w, int k) {
  return popcount64(w & low_mask(k)) & 1 ? -1 : +1;
}

struct AppliedKet {
  std::uint64_t word;
  int sign;  // +1 or -1
};

/// Apply a product of ladder operators (rightmost first) to |w>.
/// Returns nothing when the product annihilates the ket.
inline std::optional<AppliedKet> apply_ops(std::uint64_t w, const std::vector<LadderOp>& ops) {
  int sign = 1;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    const std::uint64_t bit = 1ull << it->orbital;
    if (it->dagger) {
      if (w & bit) return std::nullopt;
      sign *= jw_parity(w, it->orbital);
      w |= bit;
    } else {
      if (!(w & bit)) return std::nullopt;
      sign *= jw_parity(w, it->orbital);
      w &= ~bit;
    }
  }
  return AppliedKet{w, sign};
}

/// a†_p a_q applied to |w> (p != q fast path; p == q handled too).
inline std::optional<AppliedKet> apply_hop(std::uint64_t w, int p, int q) {
  const std::uint64_t bp = 1ull << p, bq = 1ull << q;
  if (!(w & bq)) return std::nullopt;
  if (p == q) return AppliedKet{w, +1};
  if (w & bp) return std::nullopt;
  int sign = jw_parity(w, q);
  const std::uint64_t w1 = w & ~bq;
  sign *= jw_parity(w1, p);
  return AppliedKet{w1 | bp, sign};
}

}  // namespace qavmc
