#include "qavmc/basis.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace qavmc {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

namespace {

// All k-subsets of [0, n) as bit masks, ascending.
std::vector<std::uint64_t> enumerate_masks(int n, int k) {
  std::vector<std::uint64_t> out;
  out.reserve(binomial(n, k));
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  std::uint64_t mask = low_mask(k);
  const std::uint64_t top = low_mask(n);
  while (mask <= top && (mask & ~top) == 0) {
    out.push_back(mask);
    // Gosper's hack: next subset with the same popcount.
    const std::uint64_t c = mask & (~mask + 1);
    const std::uint64_t r = mask + c;
    if (r > top) break;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
  return out;
}

// Spread an n_orb-bit mask onto even (alpha) or odd (beta) interleaved positions.
std::uint64_t interleave(std::uint64_t site_mask, int offset) {
  std::uint64_t w = 0;
  while (site_mask) {
    const int site = std::countr_zero(site_mask);
    w |= 1ull << (2 * site + offset);
    site_mask &= site_mask - 1;
  }
  return w;
}

}  // namespace

SectorBasis::SectorBasis(int n_orb, int n_alpha, int n_beta)
    : n_orb_(n_orb), n_alpha_(n_alpha), n_beta_(n_beta) {
  if (n_orb <= 0 || 2 * n_orb > kMaxQubits)
    throw std::invalid_argument("SectorBasis: n_orb out of range");
  if (n_alpha < 0 || n_alpha > n_orb || n_beta < 0 || n_beta > n_orb)
    throw std::invalid_argument("SectorBasis: electron counts outside [0, n_orb]");

  const auto alpha_masks = enumerate_masks(n_orb, n_alpha);
  const auto beta_masks = enumerate_masks(n_orb, n_beta);
  states_.reserve(alpha_masks.size() * beta_masks.size());
  for (const auto a : alpha_masks)
    for (const auto b : beta_masks) states_.push_back(interleave(a, 0) | interleave(b, 1));
  std::sort(states_.begin(), states_.end());

  index_.reserve(states_.size() * 2);
  for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i], i);
}

std::size_t SectorBasis::index_of(std::uint64_t w) const {
  auto it = index_.find(w);
  if (it == index_.end())
    throw std::out_of_range("SectorBasis: configuration " + to_bitstring(w, n_qubits()) +
                            " is not in the sector");
  return it->second;
}

}  // namespace qavmc
