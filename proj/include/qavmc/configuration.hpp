#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qavmc {

/// A many-body configuration: one occupation bit per spin-orbital, packed into
/// a 64-bit word (bit i = spin-orbital i, least significant bit first).
/// Spin-orbital ordering is interleaved: index 2*site for alpha, 2*site+1 for
/// beta, so a system with n spatial orbitals/sites uses 2n bits.
/// Spin value convention: s = +1 (occupied, qubit |1>), s = -1 (empty).
struct Configuration {
  std::uint64_t word = 0;
  int n_qubits = 0;

  bool occupied(int i) const { return (word >> i) & 1ull; }
  int spin(int i) const { return occupied(i) ? +1 : -1; }

  bool operator==(const Configuration&) const = default;
};

constexpr int kMaxQubits = 64;

inline int popcount64(std::uint64_t w) { return std::popcount(w); }

inline std::uint64_t low_mask(int n) {
  return n >= 64 ? ~0ull : ((1ull << n) - 1ull);
}

inline int alpha_count(std::uint64_t word, int n_orb) {
  const std::uint64_t alpha_mask = 0x5555555555555555ull & low_mask(2 * n_orb);
  return popcount64(word & alpha_mask);
}

inline int beta_count(std::uint64_t word, int n_orb) {
  const std::uint64_t beta_mask = 0xaaaaaaaaaaaaaaaaull & low_mask(2 * n_orb);
  return popcount64(word & beta_mask);
}

/// Exchange alpha and beta occupations site-wise. Involution.
inline std::uint64_t spin_flip_word(std::uint64_t word, int n_orb) {
  const std::uint64_t alpha_mask = 0x5555555555555555ull & low_mask(2 * n_orb);
  const std::uint64_t beta_mask = 0xaaaaaaaaaaaaaaaaull & low_mask(2 * n_orb);
  return ((word & alpha_mask) << 1) | ((word & beta_mask) >> 1);
}

inline Configuration spin_flip(const Configuration& s) {
  return {spin_flip_word(s.word, s.n_qubits / 2), s.n_qubits};
}

inline int hamming(std::uint64_t a, std::uint64_t b) { return popcount64(a ^ b); }

inline int hamming(const Configuration& a, const Configuration& b) {
  if (a.n_qubits != b.n_qubits)
    throw std::invalid_argument("hamming: configuration lengths differ");
  return hamming(a.word, b.word);
}

/// Bitstring with spin-orbital 0 leftmost, e.g. "1100" for word 0b0011, n=4.
inline std::string to_bitstring(std::uint64_t word, int n_qubits) {
  std::string s(n_qubits, '0');
  for (int i = 0; i < n_qubits; ++i)
    if ((word >> i) & 1ull) s[i] = '1';
  return s;
}

inline std::uint64_t from_bitstring(const std::string& bits) {
  if (bits.size() > kMaxQubits) throw std::invalid_argument("bitstring too long");
  std::uint64_t w = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      w |= 1ull << i;
    else if (bits[i] != '0')
      throw std::invalid_argument("bitstring must contain only 0/1");
  }
  return w;
}

/// Spins as an ordered +/-1 sequence (paper-style configuration vector).
inline std::vector<int> to_spins(std::uint64_t word, int n_qubits) {
  std::vector<int> s(n_qubits);
  for (int i = 0; i < n_qubits; ++i) s[i] = ((word >> i) & 1ull) ? +1 : -1;
  return s;
}

}  // namespace qavmc
