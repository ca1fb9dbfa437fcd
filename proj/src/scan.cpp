#include "qavmc/scan.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>

#include "qavmc/markov.hpp"

namespace qavmc {

std::vector<double> tau_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("tau_grid: step must be positive");
  std::vector<double> grid;
  for (int k = 0;; ++k) {
    const double tau = start + k * step;
    if (tau > stop + 1e-12) break;
    grid.push_back(tau);
  }
  if (grid.empty()) throw std::invalid_argument("tau_grid: empty grid");
  return grid;
}

std::optional<FlipSymmetry> flip_symmetry(const SectorBasis& basis) {
  if (basis.n_alpha() != basis.n_beta()) return std::nullopt;
  FlipSymmetry sym;
  sym.perm.resize(basis.size());
  sym.signs.resize(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const std::uint64_t w = basis.word(i);
    sym.perm[i] = basis.index_of(spin_flip_word(w, basis.n_orb()));
    int doubly = 0;
    for (int site = 0; site < basis.n_orb(); ++site)
      if (((w >> (2 * site)) & 1ull) && ((w >> (2 * site + 1)) & 1ull)) ++doubly;
    sym.signs[i] = (doubly % 2) ? -1 : 1;
  }
  return sym;
}

bool flip_symmetric(const SectorHamiltonian& h, const FlipSymmetry& sym) {
  const auto n = static_cast<Eigen::Index>(h.size());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::abs(h.matrix(static_cast<Eigen::Index>(sym.perm[i]),
                            static_cast<Eigen::Index>(sym.perm[j])) -
                   sym.signs[i] * sym.signs[j] * h.matrix(i, j)) > 1e-12)
        return false;
  return true;
}

namespace {

// Symmetry-adapted blocks of a flip-invariant Hamiltonian. Pair orbits
// {r, perm(r)} contribute (e_r + s_r e_perm(r))/sqrt2 to the T=+1 block and
// (e_r - s_r e_perm(r))/sqrt2 to the T=-1 block; a fixed point lands in the
// block matching its own sign.
struct FlipBlocks {
  // per-state assembly data:
  //   U_ij = cs_i cs_j Us[os_i,os_j] + ca_i ca_j Ua[oa_i,oa_j]
  std::vector<double> cs, ca;
  std::vector<Eigen::Index> os, oa;  // -1 when the state has no component there
  Eigen::VectorXd es, ea;            // block eigenvalues
  Eigen::MatrixXd vs, va;            // block eigenvectors

  static FlipBlocks build(const SectorHamiltonian& h, const FlipSymmetry& sym) {
    const auto n = h.size();
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    FlipBlocks fb;
    fb.cs.assign(n, 0.0);
    fb.ca.assign(n, 0.0);
    fb.os.assign(n, -1);
    fb.oa.assign(n, -1);

    // orbit representatives per block; fixed points keep their own sign
    std::vector<std::size_t> sym_rep, asym_rep;
    std::vector<int> sym_is_fixed, asym_is_fixed;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t p = sym.perm[i];
      if (p == i) {
        if (sym.signs[i] > 0) {
          fb.os[i] = static_cast<Eigen::Index>(sym_rep.size());
          fb.cs[i] = 1.0;
          sym_rep.push_back(i);
          sym_is_fixed.push_back(1);
        } else {
          fb.oa[i] = static_cast<Eigen::Index>(asym_rep.size());
          fb.ca[i] = 1.0;
          asym_rep.push_back(i);
          asym_is_fixed.push_back(1);
        }
      } else if (i < p) {
        const double s = sym.signs[i];
        const auto s_id = static_cast<Eigen::Index>(sym_rep.size());
        const auto a_id = static_cast<Eigen::Index>(asym_rep.size());
        fb.os[i] = fb.os[p] = s_id;
        fb.oa[i] = fb.oa[p] = a_id;
        fb.cs[i] = inv_sqrt2;
        fb.ca[i] = inv_sqrt2;
        fb.cs[p] = s * inv_sqrt2;
        fb.ca[p] = -s * inv_sqrt2;
        sym_rep.push_back(i);
        sym_is_fixed.push_back(0);
        asym_rep.push_back(i);
        asym_is_fixed.push_back(0);
      }
    }

    auto hval = [&](std::size_t x, std::size_t y) {
      return h.matrix(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
    };
    // block elements: pair x pair -> H(r,r') +/- s' H(r, perm r');
    // pair x fixed -> sqrt(2) H(r,f); fixed x fixed -> H(f,f')
    auto build_block = [&](const std::vector<std::size_t>& reps, const std::vector<int>& fixed,
                           double parity) {
      const auto m = static_cast<Eigen::Index>(reps.size());
      Eigen::MatrixXd block(m, m);
      for (Eigen::Index p = 0; p < m; ++p)
        for (Eigen::Index q = 0; q < m; ++q) {
          const std::size_t rp = reps[p], rq = reps[q];
          if (fixed[p] && fixed[q])
            block(p, q) = hval(rp, rq);
          else if (fixed[p] != fixed[q])
            block(p, q) = std::sqrt(2.0) * hval(rp, rq);
          else
            block(p, q) = hval(rp, rq) + parity * sym.signs[rq] * hval(rp, sym.perm[rq]);
        }
      return block;
    };

    const Eigen::MatrixXd hs = build_block(sym_rep, sym_is_fixed, +1.0);
    symmetric_eigen(0.5 * (hs + hs.transpose().eval()), fb.es, fb.vs);
    if (!asym_rep.empty()) {
      const Eigen::MatrixXd ha = build_block(asym_rep, asym_is_fixed, -1.0);
      symmetric_eigen(0.5 * (ha + ha.transpose().eval()), fb.ea, fb.va);
    }
    return fb;
  }

  // |U(tau)|^2 assembled from the two blocks.
  Eigen::MatrixXd quantum_matrix(double tau) const {
    const Eigen::ArrayXd ps = -tau * es.array();
    const Eigen::MatrixXd us_re = phase_conjugation(vs, ps.cos());
    const Eigen::MatrixXd us_im = phase_conjugation(vs, ps.sin());
    Eigen::MatrixXd ua_re, ua_im;
    if (ea.size() > 0) {
      const Eigen::ArrayXd pa = -tau * ea.array();
      ua_re = phase_conjugation(va, pa.cos());
      ua_im = phase_conjugation(va, pa.sin());
    }

    const auto n = static_cast<Eigen::Index>(cs.size());
    Eigen::MatrixXd q(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double sj_c = cs[j], aj_c = ca[j];
      const Eigen::Index sj = os[j], xj = oa[j];
      for (Eigen::Index i = 0; i < n; ++i) {
        double re = 0.0, im = 0.0;
        const Eigen::Index si = os[i];
        if (si >= 0 && sj >= 0) {
          const double w = cs[i] * sj_c;
          re += w * us_re(si, sj);
          im += w * us_im(si, sj);
        }
        const Eigen::Index xi = oa[i];
        if (xi >= 0 && xj >= 0) {
          const double w = ca[i] * aj_c;
          re += w * ua_re(xi, xj);
          im += w * ua_im(xi, xj);
        }
        q(i, j) = re * re + im * im;
      }
    }
    return q;
  }
};

}  // namespace

namespace {

// One evolution Hamiltonian prepared for repeated |U(tau)|^2 evaluation.
struct EvolutionEngine {
  std::optional<FlipBlocks> blocks;
  std::optional<Spectrum> spec;

  static EvolutionEngine prepare(const SectorHamiltonian& h) {
    EvolutionEngine e;
    const auto sym = flip_symmetry(*h.basis);
    if (sym && flip_symmetric(h, *sym))
      e.blocks = FlipBlocks::build(h, *sym);
    else
      e.spec = eigendecompose(h);
    return e;
  }

  Eigen::MatrixXd q_matrix(double tau) const {
    return blocks ? blocks->quantum_matrix(tau) : qavmc::quantum_matrix(*spec, tau);
  }
};

}  // namespace

TauScan quantum_gap_tau_scan_multi(const std::vector<const SectorHamiltonian*>& h_components,
                                   const Eigen::VectorXd& pi, const std::vector<double>& taus,
                                   Eigen::Index dense_cutoff) {
  if (taus.empty()) throw std::invalid_argument("quantum_gap_tau_scan: empty tau grid");
  if (h_components.empty())
    throw std::invalid_argument("quantum_gap_tau_scan: no evolution Hamiltonians");
  std::vector<EvolutionEngine> engines;
  engines.reserve(h_components.size());
  for (const auto* h : h_components) engines.push_back(EvolutionEngine::prepare(*h));

  TauScan scan;
  scan.taus = taus;
  scan.deltas.reserve(taus.size());
  const bool timing = std::getenv("QAVMC_SCAN_TIMING") != nullptr;
  GapSolveContext ctx;  // warm-starts carried along the grid
  for (const double tau : taus) {
    const auto t0 = std::chrono::steady_clock::now();
    Eigen::MatrixXd q = engines.front().q_matrix(tau);
    for (std::size_t c = 1; c < engines.size(); ++c) q += engines[c].q_matrix(tau);
    if (engines.size() > 1) q /= static_cast<double>(engines.size());
    const auto t1 = std::chrono::steady_clock::now();
    const double delta = spectral_gap_from_q(q, pi, dense_cutoff, &ctx);
    const auto t2 = std::chrono::steady_clock::now();
    if (timing)
      std::cerr << "[scan] tau=" << tau << " q_build="
                << std::chrono::duration<double>(t1 - t0).count() << "s gap="
                << std::chrono::duration<double>(t2 - t1).count() << "s delta=" << delta
                << std::endl;
    scan.deltas.push_back(delta);
    if (delta > scan.delta_max) {
      scan.delta_max = delta;
      scan.tau_at_max = tau;
    }
  }
  return scan;
}

TauScan quantum_gap_tau_scan(const SectorHamiltonian& h_evolve, const Eigen::VectorXd& pi,
                             const std::vector<double>& taus, Eigen::Index dense_cutoff) {
  return quantum_gap_tau_scan_multi({&h_evolve}, pi, taus, dense_cutoff);
}

double kernel_gap(const ProposalKernel& kernel, const Eigen::VectorXd& pi,
                  Eigen::Index dense_cutoff) {
  return spectral_gap_from_q(assemble_matrix(kernel), pi, dense_cutoff);
}

double effective_gap(const Spectrum& spec, const Eigen::VectorXd& pi, Eigen::Index dense_cutoff) {
  return spectral_gap_from_q(effective_matrix(spec), pi, dense_cutoff);
}

}  // namespace qavmc
