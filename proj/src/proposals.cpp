#include "qavmc/proposals.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace qavmc {

std::string to_string(ProposalKind kind) {
  switch (kind) {
    case ProposalKind::Uniform: return "Uniform";
    case ProposalKind::Exchange: return "Exchange";
    case ProposalKind::ExcitationSD: return "ExcitationSD";
    case ProposalKind::ExcitationSDFlip: return "ExcitationSD+flip";
    case ProposalKind::Quantum: return "Quantum";
    case ProposalKind::Effective: return "Effective";
    case ProposalKind::QuantumAveraged: return "QuantumAveraged";
  }
  return "?";
}

ProposalKind proposal_kind_from_string(const std::string& name) {
  if (name == "Uniform") return ProposalKind::Uniform;
  if (name == "Exchange") return ProposalKind::Exchange;
  if (name == "ExcitationSD") return ProposalKind::ExcitationSD;
  if (name == "ExcitationSD+flip" || name == "ExcitationSDFlip")
    return ProposalKind::ExcitationSDFlip;
  if (name == "Quantum") return ProposalKind::Quantum;
  if (name == "Effective") return ProposalKind::Effective;
  if (name == "QuantumAveraged") return ProposalKind::QuantumAveraged;
  throw std::invalid_argument("unknown proposal kind: " + name);
}

std::size_t categorical_sample(const Eigen::VectorXd& row, RandomStream& rng) {
  const double u = rng.uniform() * row.sum();
  double acc = 0.0;
  const auto n = row.size();
  for (Eigen::Index j = 0; j < n; ++j) {
    acc += row(j);
    if (u < acc) return static_cast<std::size_t>(j);
  }
  return static_cast<std::size_t>(n - 1);
}

namespace {

// Occupied / virtual spin-orbital lists of one spin within a word.
void occ_virt(std::uint64_t w, int n_orb, int sigma, std::vector<int>& occ,
              std::vector<int>& virt) {
  occ.clear();
  virt.clear();
  for (int p = 0; p < n_orb; ++p) {
    const int so = 2 * p + sigma;
    if ((w >> so) & 1ull)
      occ.push_back(so);
    else
      virt.push_back(so);
  }
}

class UniformProposal final : public ProposalKernel {
 public:
  explicit UniformProposal(BasisPtr basis) : basis_(std::move(basis)) {
    if (basis_->size() < 2)
      throw std::invalid_argument("Uniform proposal needs at least two states");
  }
  const SectorBasis& basis() const override { return *basis_; }
  ProposalKind kind() const override { return ProposalKind::Uniform; }
  std::string descriptor() const override { return "Uniform"; }

  Eigen::VectorXd row(std::size_t i) const override {
    const auto n = basis_->size();
    Eigen::VectorXd q = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n - 1));
    q(static_cast<Eigen::Index>(i)) = 0.0;
    return q;
  }

  std::size_t sample(std::size_t i, RandomStream& rng) const override {
    const auto n = basis_->size();
    std::size_t j = rng.uniform_index(n - 1);
    if (j >= i) ++j;
    return j;
  }

 private:
  BasisPtr basis_;
};

class ExchangeProposal final : public ProposalKernel {
 public:
  explicit ExchangeProposal(BasisPtr basis) : basis_(std::move(basis)) {
    const int n_orb = basis_->n_orb();
    for (int sigma = 0; sigma < 2; ++sigma)
      for (int a = 0; a < n_orb; ++a)
        for (int b = a + 1; b < n_orb; ++b)
          pairs_.emplace_back(2 * a + sigma, 2 * b + sigma);
    if (pairs_.empty()) throw std::invalid_argument("Exchange proposal needs >= 2 orbitals");
  }
  const SectorBasis& basis() const override { return *basis_; }
  ProposalKind kind() const override { return ProposalKind::Exchange; }
  std::string descriptor() const override { return "Exchange"; }

  Eigen::VectorXd row(std::size_t i) const override {
    const auto n = basis_->size();
    Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
    const std::uint64_t w = basis_->word(i);
    const double mass = 1.0 / static_cast<double>(pairs_.size());
    for (const auto& [a, b] : pairs_) q(static_cast<Eigen::Index>(target(w, a, b, i))) += mass;
    return q;
  }

  std::size_t sample(std::size_t i, RandomStream& rng) const override {
    const auto& [a, b] = pairs_[rng.uniform_index(pairs_.size())];
    return target(basis_->word(i), a, b, i);
  }

 private:
  std::size_t target(std::uint64_t w, int a, int b, std::size_t self) const {
    const bool oa = (w >> a) & 1ull, ob = (w >> b) & 1ull;
    if (oa == ob) return self;  // equal occupation: swap is a self-move
    return basis_->index_of(w ^ (1ull << a) ^ (1ull << b));
  }

  BasisPtr basis_;
  std::vector<std::pair<int, int>> pairs_;
};

// Shared machinery for ExcitationSD and its +flip variant.
class ExcitationSDBase : public ProposalKernel {
 public:
  explicit ExcitationSDBase(BasisPtr basis) : basis_(std::move(basis)) {
    const int n_orb = basis_->n_orb();
    const int na = basis_->n_alpha(), nb = basis_->n_beta();
    const int va = n_orb - na, vb = n_orb - nb;
    n_singles_ = na * va + nb * vb;
    n_elec_ = na + nb;
    n_occ_pairs_ = n_elec_ * (n_elec_ - 1) / 2;
    // virtual-pair counts per occupied-pair spin multiset
    n_virt_aa_ = va * (va - 1) / 2;
    n_virt_bb_ = vb * (vb - 1) / 2;
    n_virt_ab_ = va * vb;
    if (n_singles_ == 0)
      std::cerr << "warning: ExcitationSD on a sector with no valid single excitation; "
                   "single branch collapses to self-moves\n";
  }
  const SectorBasis& basis() const override { return *basis_; }

 protected:
  // Accumulate the ExcitationSD row scaled by `weight` into q.
  void add_sd_row(Eigen::VectorXd& q, std::size_t i, double weight) const {
    const std::uint64_t w = basis_->word(i);
    const auto self = static_cast<Eigen::Index>(i);
    std::vector<int> occ_a, virt_a, occ_b, virt_b;
    occ_virt(w, basis_->n_orb(), 0, occ_a, virt_a);
    occ_virt(w, basis_->n_orb(), 1, occ_b, virt_b);

    // singles: uniform over (occupied, virtual) same-spin pairs
    if (n_singles_ == 0) {
      q(self) += 0.5 * weight;
    } else {
      const double m = 0.5 * weight / n_singles_;
      for (int o : occ_a)
        for (int v : virt_a) q(idx(w ^ (1ull << o) ^ (1ull << v))) += m;
      for (int o : occ_b)
        for (int v : virt_b) q(idx(w ^ (1ull << o) ^ (1ull << v))) += m;
    }

    // doubles: occupied pair uniform, then spin-matching virtual pair uniform
    if (n_occ_pairs_ == 0) {
      q(self) += 0.5 * weight;
      return;
    }
    const double pair_mass = 0.5 * weight / n_occ_pairs_;
    std::vector<int> occ_all(occ_a);
    occ_all.insert(occ_all.end(), occ_b.begin(), occ_b.end());
    for (std::size_t x = 0; x < occ_all.size(); ++x)
      for (std::size_t y = x + 1; y < occ_all.size(); ++y) {
        const int o1 = occ_all[x], o2 = occ_all[y];
        const bool s1 = o1 & 1, s2 = o2 & 1;
        const std::uint64_t base = w ^ (1ull << o1) ^ (1ull << o2);
        if (s1 == s2) {
          const auto& virt = s1 ? virt_b : virt_a;
          const long nv = s1 ? n_virt_bb_ : n_virt_aa_;
          if (nv == 0) {
            q(self) += pair_mass;
            continue;
          }
          const double m = pair_mass / nv;
          for (std::size_t u = 0; u < virt.size(); ++u)
            for (std::size_t v = u + 1; v < virt.size(); ++v)
              q(idx(base ^ (1ull << virt[u]) ^ (1ull << virt[v]))) += m;
        } else {
          if (n_virt_ab_ == 0) {
            q(self) += pair_mass;
            continue;
          }
          const double m = pair_mass / n_virt_ab_;
          for (int va : virt_a)
            for (int vb : virt_b) q(idx(base ^ (1ull << va) ^ (1ull << vb))) += m;
        }
      }
  }

  // One ExcitationSD move (no flip branch).
  std::size_t sample_sd(std::size_t i, RandomStream& rng) const {
    const std::uint64_t w = basis_->word(i);
    std::vector<int> occ_a, virt_a, occ_b, virt_b;
    occ_virt(w, basis_->n_orb(), 0, occ_a, virt_a);
    occ_virt(w, basis_->n_orb(), 1, occ_b, virt_b);

    if (rng.uniform() < 0.5) {
      if (n_singles_ == 0) return i;
      const auto k = rng.uniform_index(static_cast<std::uint64_t>(n_singles_));
      const auto n_a_singles = static_cast<std::uint64_t>(occ_a.size() * virt_a.size());
      int o, v;
      if (k < n_a_singles) {
        o = occ_a[k / virt_a.size()];
        v = virt_a[k % virt_a.size()];
      } else {
        const auto kb = k - n_a_singles;
        o = occ_b[kb / virt_b.size()];
        v = virt_b[kb % virt_b.size()];
      }
      return basis_->index_of(w ^ (1ull << o) ^ (1ull << v));
    }

    if (n_occ_pairs_ == 0) return i;
    std::vector<int> occ_all(occ_a);
    occ_all.insert(occ_all.end(), occ_b.begin(), occ_b.end());
    auto k = rng.uniform_index(static_cast<std::uint64_t>(n_occ_pairs_));
    std::size_t x = 0;
    while (k >= occ_all.size() - 1 - x) {
      k -= occ_all.size() - 1 - x;
      ++x;
    }
    const std::size_t y = x + 1 + k;
    const int o1 = occ_all[x], o2 = occ_all[y];
    const bool s1 = o1 & 1, s2 = o2 & 1;
    const std::uint64_t base = w ^ (1ull << o1) ^ (1ull << o2);
    if (s1 == s2) {
      const auto& virt = s1 ? virt_b : virt_a;
      const long nv = s1 ? n_virt_bb_ : n_virt_aa_;
      if (nv == 0) return i;
      auto kv = rng.uniform_index(static_cast<std::uint64_t>(nv));
      std::size_t u = 0;
      while (kv >= virt.size() - 1 - u) {
        kv -= virt.size() - 1 - u;
        ++u;
      }
      return basis_->index_of(base ^ (1ull << virt[u]) ^ (1ull << virt[u + 1 + kv]));
    }
    if (n_virt_ab_ == 0) return i;
    const auto kv = rng.uniform_index(static_cast<std::uint64_t>(n_virt_ab_));
    const int va = virt_a[kv / virt_b.size()];
    const int vb = virt_b[kv % virt_b.size()];
    return basis_->index_of(base ^ (1ull << va) ^ (1ull << vb));
  }

  Eigen::Index idx(std::uint64_t word) const {
    return static_cast<Eigen::Index>(basis_->index_of(word));
  }

  BasisPtr basis_;
  long n_singles_ = 0, n_elec_ = 0, n_occ_pairs_ = 0;
  long n_virt_aa_ = 0, n_virt_bb_ = 0, n_virt_ab_ = 0;
};

class ExcitationSDProposal final : public ExcitationSDBase {
 public:
  using ExcitationSDBase::ExcitationSDBase;
  ProposalKind kind() const override { return ProposalKind::ExcitationSD; }
  std::string descriptor() const override { return "ExcitationSD"; }

  Eigen::VectorXd row(std::size_t i) const override {
    Eigen::VectorXd q = Eigen::VectorXd::Zero(basis_->size());
    add_sd_row(q, i, 1.0);
    return q;
  }
  std::size_t sample(std::size_t i, RandomStream& rng) const override {
    return sample_sd(i, rng);
  }
};

class ExcitationSDFlipProposal final : public ExcitationSDBase {
 public:
  using ExcitationSDBase::ExcitationSDBase;
  ProposalKind kind() const override { return ProposalKind::ExcitationSDFlip; }
  std::string descriptor() const override { return "ExcitationSD+flip"; }

  Eigen::VectorXd row(std::size_t i) const override {
    Eigen::VectorXd q = Eigen::VectorXd::Zero(basis_->size());
    q(static_cast<Eigen::Index>(flip_target(i))) += 0.5;
    add_sd_row(q, i, 0.5);
    return q;
  }

  std::size_t sample(std::size_t i, RandomStream& rng) const override {
    if (rng.uniform() < 0.5) return flip_target(i);
    return sample_sd(i, rng);
  }

 private:
  std::size_t flip_target(std::size_t i) const {
    const std::uint64_t f = spin_flip_word(basis_->word(i), basis_->n_orb());
    // flip leaves the sector unless n_alpha == n_beta; treat as a self-move
    return basis_->contains(f) ? basis_->index_of(f) : i;
  }
};

class QuantumProposal final : public ProposalKernel {
 public:
  QuantumProposal(SpectrumPtr spec, double tau_lo, double tau_hi, bool interval)
      : spec_(std::move(spec)), tau_lo_(tau_lo), tau_hi_(tau_hi), interval_(interval) {
    if (!std::isfinite(tau_lo_) || !std::isfinite(tau_hi_))
      throw std::invalid_argument("Quantum proposal: tau must be finite");
    if (interval_ && tau_hi_ < tau_lo_)
      throw std::invalid_argument("Quantum proposal: empty tau interval");
  }
  const SectorBasis& basis() const override { return *spec_->basis; }
  ProposalKind kind() const override { return ProposalKind::Quantum; }
  std::string descriptor() const override {
    if (interval_)
      return "Quantum(tau~U[" + std::to_string(tau_lo_) + "," + std::to_string(tau_hi_) + "])";
    return "Quantum(tau=" + std::to_string(tau_lo_) + ")";
  }

  Eigen::VectorXd row(std::size_t i) const override {
    if (!interval_) return quantum_row(*spec_, i, tau_lo_);
    // marginal kernel of the per-step tau draw, midpoint rule
    constexpr int kGrid = 128;
    Eigen::VectorXd q = Eigen::VectorXd::Zero(spec_->size());
    const double step = (tau_hi_ - tau_lo_) / kGrid;
    for (int k = 0; k < kGrid; ++k)
      q += quantum_row(*spec_, i, tau_lo_ + (k + 0.5) * step);
    return q / kGrid;
  }

  std::size_t sample(std::size_t i, RandomStream& rng) const override {
    const double tau = interval_ ? rng.uniform(tau_lo_, tau_hi_) : tau_lo_;
    return categorical_sample(quantum_row(*spec_, i, tau), rng);
  }

 private:
  SpectrumPtr spec_;
  double tau_lo_, tau_hi_;
  bool interval_;
};

class EffectiveProposal final : public ProposalKernel {
 public:
  explicit EffectiveProposal(SpectrumPtr spec)
      : spec_(std::move(spec)), levels_(spec_->levels()) {}
  const SectorBasis& basis() const override { return *spec_->basis; }
  ProposalKind kind() const override { return ProposalKind::Effective; }
  std::string descriptor() const override { return "Effective"; }

  Eigen::VectorXd row(std::size_t i) const override {
    const auto& v = spec_->eigenvectors;
    Eigen::VectorXd q = Eigen::VectorXd::Zero(spec_->size());
    for (const auto& [b, e] : levels_) {
      const auto block = v.middleCols(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(e - b));
      const Eigen::VectorXd proj = block * block.row(static_cast<Eigen::Index>(i)).transpose();
      q += proj.array().square().matrix();
    }
    return q;
  }

  std::size_t sample(std::size_t i, RandomStream& rng) const override {
    return categorical_sample(row(i), rng);
  }

 private:
  SpectrumPtr spec_;
  std::vector<std::pair<std::size_t, std::size_t>> levels_;
};

class QuantumAveragedProposal final : public ProposalKernel {
 public:
  explicit QuantumAveragedProposal(std::vector<std::pair<SpectrumPtr, double>> components)
      : components_(std::move(components)) {
    if (components_.empty())
      throw std::invalid_argument("QuantumAveraged: quadrature grid is empty");
    for (const auto& [spec, tau] : components_)
      if (!(*spec->basis == *components_.front().first->basis))
        throw std::invalid_argument("QuantumAveraged: mismatched sector across spectra");
  }
  const SectorBasis& basis() const override { return *components_.front().first->basis; }
  ProposalKind kind() const override { return ProposalKind::QuantumAveraged; }
  std::string descriptor() const override {
    return "QuantumAveraged(" + std::to_string(components_.size()) + " components)";
  }

  Eigen::VectorXd row(std::size_t i) const override {
    Eigen::VectorXd q = Eigen::VectorXd::Zero(basis().size());
    for (const auto& [spec, tau] : components_) q += quantum_row(*spec, i, tau);
    return q / static_cast<double>(components_.size());
  }

  std::size_t sample(std::size_t i, RandomStream& rng) const override {
    const auto& [spec, tau] = components_[rng.uniform_index(components_.size())];
    return categorical_sample(quantum_row(*spec, i, tau), rng);
  }

 private:
  std::vector<std::pair<SpectrumPtr, double>> components_;
};

class MixtureProposal final : public ProposalKernel {
 public:
  explicit MixtureProposal(std::vector<KernelPtr> components)
      : components_(std::move(components)) {
    if (components_.empty()) throw std::invalid_argument("mixture: no components");
    for (const auto& k : components_)
      if (!(k->basis() == components_.front()->basis()))
        throw std::invalid_argument("mixture: mismatched sector across components");
  }
  const SectorBasis& basis() const override { return components_.front()->basis(); }
  ProposalKind kind() const override { return ProposalKind::QuantumAveraged; }
  std::string descriptor() const override {
    return "Mixture(" + std::to_string(components_.size()) + "x " +
           components_.front()->descriptor() + ", ...)";
  }
  Eigen::VectorXd row(std::size_t i) const override {
    Eigen::VectorXd q = Eigen::VectorXd::Zero(basis().size());
    for (const auto& k : components_) q += k->row(i);
    return q / static_cast<double>(components_.size());
  }
  std::size_t sample(std::size_t i, RandomStream& rng) const override {
    return components_[rng.uniform_index(components_.size())]->sample(i, rng);
  }

 private:
  std::vector<KernelPtr> components_;
};

}  // namespace

KernelPtr make_mixture(std::vector<KernelPtr> components) {
  return std::make_shared<MixtureProposal>(std::move(components));
}

KernelPtr make_uniform(BasisPtr basis) { return std::make_shared<UniformProposal>(std::move(basis)); }
KernelPtr make_exchange(BasisPtr basis) {
  return std::make_shared<ExchangeProposal>(std::move(basis));
}
KernelPtr make_excitation_sd(BasisPtr basis) {
  return std::make_shared<ExcitationSDProposal>(std::move(basis));
}
KernelPtr make_excitation_sd_flip(BasisPtr basis) {
  return std::make_shared<ExcitationSDFlipProposal>(std::move(basis));
}

KernelPtr make_classical(ProposalKind kind, BasisPtr basis) {
  switch (kind) {
    case ProposalKind::Uniform: return make_uniform(std::move(basis));
    case ProposalKind::Exchange: return make_exchange(std::move(basis));
    case ProposalKind::ExcitationSD: return make_excitation_sd(std::move(basis));
    case ProposalKind::ExcitationSDFlip: return make_excitation_sd_flip(std::move(basis));
    default: throw std::invalid_argument("make_classical: not a classical kind");
  }
}

KernelPtr make_quantum(SpectrumPtr spec, double tau) {
  return std::make_shared<QuantumProposal>(std::move(spec), tau, tau, false);
}
KernelPtr make_quantum_interval(SpectrumPtr spec, double tau_lo, double tau_hi) {
  return std::make_shared<QuantumProposal>(std::move(spec), tau_lo, tau_hi, true);
}
KernelPtr make_effective(SpectrumPtr spec) {
  return std::make_shared<EffectiveProposal>(std::move(spec));
}
KernelPtr make_quantum_averaged(std::vector<std::pair<SpectrumPtr, double>> components) {
  return std::make_shared<QuantumAveragedProposal>(std::move(components));
}

Eigen::VectorXd classical_row(ProposalKind kind, const SectorBasis& basis, std::size_t i) {
  auto shared = std::make_shared<const SectorBasis>(basis);
  return make_classical(kind, shared)->row(i);
}

std::size_t classical_sample(ProposalKind kind, const SectorBasis& basis, std::size_t i,
                             RandomStream& rng) {
  auto shared = std::make_shared<const SectorBasis>(basis);
  return make_classical(kind, shared)->sample(i, rng);
}

Eigen::VectorXd quantum_row(const Spectrum& spec, std::size_t i, double tau) {
  if (!std::isfinite(tau)) throw std::invalid_argument("quantum_row: tau must be finite");
  return evolve_row(spec, i, tau).cwiseAbs2();
}

Eigen::VectorXd effective_row(const Spectrum& spec, std::size_t i) {
  EffectiveProposal kernel(std::make_shared<const Spectrum>(spec));
  return kernel.row(i);
}

Eigen::VectorXd averaged_quantum_row(const std::vector<std::pair<SpectrumPtr, double>>& components,
                                     std::size_t i) {
  return QuantumAveragedProposal(components).row(i);
}

Eigen::MatrixXd assemble_matrix(const ProposalKernel& kernel) {
  const auto n = kernel.basis().size();
  Eigen::MatrixXd q(n, n);
  for (std::size_t i = 0; i < n; ++i) q.row(static_cast<Eigen::Index>(i)) = kernel.row(i);
  return q;
}

Eigen::MatrixXd quantum_matrix(const Spectrum& spec, double tau) {
  const Eigen::ArrayXd phase = -tau * spec.eigenvalues.array();
  const auto& v = spec.eigenvectors;
  const Eigen::MatrixXd u_re = phase_conjugation(v, phase.cos());
  const Eigen::MatrixXd u_im = phase_conjugation(v, phase.sin());
  return u_re.cwiseAbs2() + u_im.cwiseAbs2();
}

Eigen::MatrixXd effective_matrix(const Spectrum& spec) {
  const auto& v = spec.eigenvectors;
  const auto n = static_cast<Eigen::Index>(spec.size());
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [b, e] : spec.levels()) {
    const auto block = v.middleCols(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(e - b));
    q += (block * block.transpose()).cwiseAbs2();
  }
  return q;
}

}  // namespace qavmc
