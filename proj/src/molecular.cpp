#include "qavmc/molecular.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace qavmc {

void MolecularIntegrals::set_two(int p, int q, int r, int s, double v) {
  const int n = n_orb;
  auto at = [&](int a, int b, int c, int d) -> double& {
    return g[((static_cast<std::size_t>(a) * n + b) * n + c) * n + d];
  };
  // 8-fold permutational symmetry of real-orbital (pq|rs)
  at(p, q, r, s) = v;
  at(q, p, r, s) = v;
  at(p, q, s, r) = v;
  at(q, p, s, r) = v;
  at(r, s, p, q) = v;
  at(s, r, p, q) = v;
  at(r, s, q, p) = v;
  at(s, r, q, p) = v;
}

namespace {

// Pull NAME=value (integer) out of a namelist header chunk.
int parse_header_int(const std::string& header, const std::string& key) {
  auto pos = header.find(key);
  while (pos != std::string::npos) {
    const std::size_t after = pos + key.size();
    std::size_t i = after;
    while (i < header.size() && std::isspace(static_cast<unsigned char>(header[i]))) ++i;
    if (i < header.size() && header[i] == '=') {
      ++i;
      while (i < header.size() && std::isspace(static_cast<unsigned char>(header[i]))) ++i;
      std::size_t end = i;
      while (end < header.size() &&
             (std::isdigit(static_cast<unsigned char>(header[end])) || header[end] == '-' ||
              header[end] == '+'))
        ++end;
      if (end > i) return std::stoi(header.substr(i, end - i));
    }
    pos = header.find(key, pos + 1);
  }
  throw std::runtime_error("FCIDUMP header: missing " + key);
}

}  // namespace

FcidumpData load_fcidump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open FCIDUMP file: " + path);

  // Header runs until &END or a bare "/".
  std::string header, line;
  bool header_done = false;
  while (!header_done && std::getline(in, line)) {
    std::string upper = line;
    for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    header += ' ' + upper;
    if (upper.find("&END") != std::string::npos || upper.find('/') != std::string::npos)
      header_done = true;
  }
  if (!header_done) throw std::runtime_error("FCIDUMP: malformed header (no &END)");

  FcidumpData data;
  const int n_orb = parse_header_int(header, "NORB");
  if (n_orb < 1 || 2 * n_orb > kMaxQubits)
    throw std::runtime_error("FCIDUMP: NORB out of supported range");
  data.n_elec = parse_header_int(header, "NELEC");
  data.ms2 = parse_header_int(header, "MS2");

  auto& ints = data.ints;
  ints.n_orb = n_orb;
  ints.h.assign(static_cast<std::size_t>(n_orb) * n_orb, 0.0);
  ints.g.assign(static_cast<std::size_t>(n_orb) * n_orb * n_orb * n_orb, 0.0);

  bool have_core = false;
  double value;
  int p, q, r, s;
  while (in >> value >> p >> q >> r >> s) {
    if (p == 0 && q == 0 && r == 0 && s == 0) {
      ints.e_nuc = value;
      have_core = true;
    } else if (q == 0 && r == 0 && s == 0) {
      // orbital-energy record; not used
    } else if (r == 0 && s == 0) {
      if (p < 1 || p > n_orb || q < 1 || q > n_orb)
        throw std::runtime_error("FCIDUMP: one-electron index out of range");
      ints.set_one(p - 1, q - 1, value);
    } else {
      if (p < 1 || p > n_orb || q < 1 || q > n_orb || r < 1 || r > n_orb || s < 1 || s > n_orb)
        throw std::runtime_error("FCIDUMP: two-electron index out of range");
      ints.set_two(p - 1, q - 1, r - 1, s - 1, value);
    }
  }
  if (!in.eof()) throw std::runtime_error("FCIDUMP: malformed integral record");
  if (!have_core)
    std::cerr << "warning: FCIDUMP " << path << " has no core-energy record; using 0\n";
  return data;
}

MolecularIntegrals apply_hopping_mix(const MolecularIntegrals& ints, double gamma_e) {
  if (gamma_e < 0.0 || gamma_e > 1.0)
    throw std::invalid_argument("apply_hopping_mix: gamma_e outside [0,1]");
  const int n = ints.n_orb;
  if (n < 2) throw std::invalid_argument("apply_hopping_mix: needs at least 2 orbitals");

  double frob2 = 0.0;
  for (double v : ints.h) frob2 += v * v;
  const double alpha = std::sqrt(frob2) / std::sqrt(static_cast<double>(n) * (n - 1));

  MolecularIntegrals out = ints;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const double hopping = (p == q) ? 0.0 : -1.0;
      out.h[p * n + q] = (1.0 - gamma_e) * ints.one(p, q) + gamma_e * alpha * hopping;
    }
  return out;
}

SectorHamiltonian build_molecular(const MolecularIntegrals& ints, int n_alpha, int n_beta) {
  const int n_orb = ints.n_orb;
  if (static_cast<int>(ints.h.size()) != n_orb * n_orb)
    throw std::invalid_argument("build_molecular: one-electron block size mismatch");
  if (ints.g.size() != static_cast<std::size_t>(n_orb) * n_orb * n_orb * n_orb)
    throw std::invalid_argument("build_molecular: two-electron block size mismatch");

  auto basis = make_basis(n_orb, n_alpha, n_beta);
  const auto n = basis->size();
  SectorHamiltonian out{basis, Eigen::MatrixXd::Zero(n, n), "molecular"};

  for (std::size_t col = 0; col < n; ++col) {
    const std::uint64_t w = basis->word(col);

    for (int p = 0; p < n_orb; ++p)
      for (int q = 0; q < n_orb; ++q) {
        const double hpq = ints.one(p, q);
        if (hpq == 0.0) continue;
        for (int sigma = 0; sigma < 2; ++sigma)
          if (auto r = apply_hop(w, 2 * p + sigma, 2 * q + sigma))
            out.matrix(basis->index_of(r->word), col) += hpq * r->sign;
      }

    for (int p = 0; p < n_orb; ++p)
      for (int q = 0; q < n_orb; ++q)
        for (int r = 0; r < n_orb; ++r)
          for (int s = 0; s < n_orb; ++s) {
            const double gv = ints.two(p, q, r, s);
            if (gv == 0.0) continue;
            for (int sigma = 0; sigma < 2; ++sigma)
              for (int tau = 0; tau < 2; ++tau) {
                // a†_p,sigma a†_r,tau a_s,tau a_q,sigma applied right-to-left
                const std::uint64_t bq = 1ull << (2 * q + sigma);
                if (!(w & bq)) continue;
                int sign = jw_parity(w, 2 * q + sigma);
                std::uint64_t v = w & ~bq;
                const std::uint64_t bs = 1ull << (2 * s + tau);
                if (!(v & bs)) continue;
                sign *= jw_parity(v, 2 * s + tau);
                v &= ~bs;
                const std::uint64_t br = 1ull << (2 * r + tau);
                if (v & br) continue;
                sign *= jw_parity(v, 2 * r + tau);
                v |= br;
                const std::uint64_t bp = 1ull << (2 * p + sigma);
                if (v & bp) continue;
                sign *= jw_parity(v, 2 * p + sigma);
                v |= bp;
                out.matrix(basis->index_of(v), col) += 0.5 * gv * sign;
              }
          }
  }

  out.matrix.diagonal().array() += ints.e_nuc;
  finalize_symmetric(out);
  return out;
}

FermionOps molecular_terms(const MolecularIntegrals& ints) {
  FermionOps terms;
  const int n = ints.n_orb;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const double hpq = ints.one(p, q);
      if (hpq == 0.0) continue;
      for (int sigma = 0; sigma < 2; ++sigma)
        terms.push_back({hpq, {{2 * p + sigma, true}, {2 * q + sigma, false}}});
    }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double gv = ints.two(p, q, r, s);
          if (gv == 0.0) continue;
          for (int sigma = 0; sigma < 2; ++sigma)
            for (int tau = 0; tau < 2; ++tau)
              terms.push_back({0.5 * gv,
                               {{2 * p + sigma, true},
                                {2 * r + tau, true},
                                {2 * s + tau, false},
                                {2 * q + sigma, false}}});
        }
  return terms;
}

}  // namespace qavmc
