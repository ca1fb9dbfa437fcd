#include "qavmc/hubbard.hpp"

#include <cmath>
#include <stdexcept>

namespace qavmc {

void finalize_symmetric(SectorHamiltonian& h) {
  Eigen::MatrixXd sym = 0.5 * (h.matrix + h.matrix.transpose());
  if (!sym.allFinite()) throw std::runtime_error("SectorHamiltonian: non-finite entries");
  h.matrix = std::move(sym);
}

int LatticeSpec::n_sites() const {
  if (kind == Kind::Chain) {
    if (dims.size() != 1 || dims[0] < 1) throw std::invalid_argument("chain needs one positive dim");
    return dims[0];
  }
  if (dims.size() != 2 || dims[0] < 1 || dims[1] < 1)
    throw std::invalid_argument("grid needs two positive dims");
  return dims[0] * dims[1];
}

std::vector<std::pair<int, int>> LatticeSpec::edges() const {
  std::vector<std::pair<int, int>> e;
  if (kind == Kind::Chain) {
    const int L = n_sites();
    for (int i = 0; i + 1 < L; ++i) e.emplace_back(i, i + 1);
    return e;
  }
  const int lx = dims[0], ly = dims[1];
  n_sites();
  auto id = [lx](int x, int y) { return y * lx + x; };
  for (int y = 0; y < ly; ++y)
    for (int x = 0; x < lx; ++x) {
      if (x + 1 < lx) e.emplace_back(id(x, y), id(x + 1, y));
      if (y + 1 < ly) e.emplace_back(id(x, y), id(x, y + 1));
    }
  return e;
}

SectorHamiltonian build_hubbard(const LatticeSpec& lattice, double t, double U,
                                int n_alpha, int n_beta) {
  const int n_sites = lattice.n_sites();
  auto basis = make_basis(n_sites, n_alpha, n_beta);
  const auto n = basis->size();
  if (n == 0) throw std::invalid_argument("build_hubbard: empty sector");

  SectorHamiltonian h{basis, Eigen::MatrixXd::Zero(n, n),
                      "hubbard t=" + std::to_string(t) + " U=" + std::to_string(U)};
  const auto edges = lattice.edges();

  for (std::size_t j = 0; j < n; ++j) {
    const std::uint64_t w = basis->word(j);

    int doubly = 0;
    for (int site = 0; site < n_sites; ++site)
      if (((w >> (2 * site)) & 1ull) && ((w >> (2 * site + 1)) & 1ull)) ++doubly;
    h.matrix(j, j) += U * doubly;

    if (t == 0.0) continue;
    for (const auto& [a, b] : edges) {
      for (int sigma = 0; sigma < 2; ++sigma) {
        const int p = 2 * a + sigma, q = 2 * b + sigma;
        if (auto r = apply_hop(w, p, q)) h.matrix(basis->index_of(r->word), j) += -t * r->sign;
        if (auto r = apply_hop(w, q, p)) h.matrix(basis->index_of(r->word), j) += -t * r->sign;
      }
    }
  }

  finalize_symmetric(h);
  return h;
}

FermionOps hubbard_terms(const LatticeSpec& lattice, double t, double U) {
  FermionOps terms;
  for (const auto& [a, b] : lattice.edges()) {
    for (int sigma = 0; sigma < 2; ++sigma) {
      const int p = 2 * a + sigma, q = 2 * b + sigma;
      terms.push_back({-t, {{p, true}, {q, false}}});
      terms.push_back({-t, {{q, true}, {p, false}}});
    }
  }
  for (int site = 0; site < lattice.n_sites(); ++site) {
    const int pa = 2 * site, pb = 2 * site + 1;
    terms.push_back({U, {{pa, true}, {pa, false}, {pb, true}, {pb, false}}});
  }
  return terms;
}

}  // namespace qavmc
