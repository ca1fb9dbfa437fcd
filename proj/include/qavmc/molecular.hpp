#pragma once

#include <string>
#include <vector>

#include "qavmc/fermion.hpp"
#include "qavmc/hamiltonian.hpp"

namespace qavmc {

/// One- and two-electron integrals in chemists' notation, g_pqrs = (pq|rs),
/// spatial-orbital indices, Hartree units. Full 8-fold symmetric storage.
struct MolecularIntegrals {
  int n_orb = 0;
  std::vector<double> h;  // n_orb^2, h[p*n+q]
  std::vector<double> g;  // n_orb^4, g[((p*n+q)*n+r)*n+s]
  double e_nuc = 0.0;

  double one(int p, int q) const { return h[p * n_orb + q]; }
  double two(int p, int q, int r, int s) const {
    return g[((static_cast<std::size_t>(p) * n_orb + q) * n_orb + r) * n_orb + s];
  }
  void set_one(int p, int q, double v) {
    h[p * n_orb + q] = v;
    h[q * n_orb + p] = v;
  }
  void set_two(int p, int q, int r, int s, double v);
};

struct FcidumpData {
  MolecularIntegrals ints;
  int n_elec = 0;
  int ms2 = 0;
};

/// Molpro-convention FCIDUMP reader: namelist header with NORB/NELEC/MS2,
/// free-format `value p q r s` records, 1-based indices, core energy at 0 0 0 0.
FcidumpData load_fcidump(const std::string& path);

/// Replace the one-body part by (1-gamma_e) h + gamma_e * alpha * H_hopping,
/// where H_hopping is -1 on every off-diagonal and alpha = ||h||_F / sqrt(n(n-1)).
/// Two-body tensor and e_nuc are untouched.
MolecularIntegrals apply_hopping_mix(const MolecularIntegrals& ints, double gamma_e);

/// H = sum_pq,sigma h_pq a†_p,sigma a_q,sigma
///   + 1/2 sum_pqrs,sigma,tau g_pqrs a†_p,sigma a†_r,tau a_s,tau a_q,sigma + E_nuc
/// on the (n_alpha, n_beta) sector; interleaved ordering, JW signs.
SectorHamiltonian build_molecular(const MolecularIntegrals& ints, int n_alpha, int n_beta);

/// Second-quantized term list for the same Hamiltonian (E_nuc excluded).
FermionOps molecular_terms(const MolecularIntegrals& ints);

}  // namespace qavmc
