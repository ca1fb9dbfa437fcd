#include "qavmc/markov.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <thread>

#include "qavmc/lanczos.hpp"

namespace qavmc {

double acceptance_symmetric(double pi_i, double pi_j) {
  if (!(pi_i > 0.0)) throw std::domain_error("acceptance_symmetric: current state has pi <= 0");
  return std::min(1.0, pi_j / pi_i);
}

double acceptance_general(double pi_i, double pi_j, double q_ij, double q_ji) {
  if (!(pi_i > 0.0)) throw std::domain_error("acceptance_general: current state has pi <= 0");
  if (!(q_ij > 0.0)) throw std::domain_error("acceptance_general: proposed move has Q = 0");
  return std::min(1.0, (pi_j * q_ji) / (pi_i * q_ij));
}

TransitionMatrix build_transition_matrix(const Eigen::MatrixXd& q, const Eigen::VectorXd& pi) {
  const auto n = q.rows();
  if (q.cols() != n || pi.size() != n)
    throw std::invalid_argument("build_transition_matrix: shape mismatch");
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(q.row(i).sum() - 1.0) > 1e-8)
      throw std::invalid_argument("build_transition_matrix: proposal row " + std::to_string(i) +
                                  " is not stochastic");
  if (std::abs(pi.sum() - 1.0) > 1e-8)
    throw std::invalid_argument("build_transition_matrix: pi is not normalized");

  TransitionMatrix tm;
  tm.pi = pi;
  tm.p.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double a = std::min(1.0, pi(j) / pi(i));
      const double v = q(i, j) * a;
      tm.p(i, j) = v;
      off += v;
    }
    tm.p(i, i) = 1.0 - off;
  }
  return tm;
}

namespace {

// Support restriction: indices with pi at or above the probability floor.
std::vector<Eigen::Index> support_indices(const Eigen::VectorXd& pi) {
  std::vector<Eigen::Index> keep;
  keep.reserve(pi.size());
  for (Eigen::Index i = 0; i < pi.size(); ++i)
    if (pi(i) >= kProbabilityFloor) keep.push_back(i);
  if (keep.size() < static_cast<std::size_t>(pi.size()))
    std::cerr << "warning: spectral gap restricted to " << keep.size() << " of " << pi.size()
              << " states (clamped probabilities excluded)\n";
  if (keep.empty()) throw std::invalid_argument("spectral_gap: empty support");
  return keep;
}

double gap_of_symmetrized(Eigen::MatrixXd& m, const Eigen::VectorXd& sqrt_pi,
                          Eigen::Index dense_cutoff, GapSolveContext* ctx) {
  const auto n = m.rows();
  if (n == 1) return 1.0;
  m = 0.5 * (m + m.transpose().eval());
  if (n <= dense_cutoff) {
    const Eigen::VectorXd evals = symmetric_eigenvalues(m);
    // top eigenvalue is 1 (stationary); delta from the largest remaining |.|
    double second = std::abs(evals(0));
    if (n >= 2) second = std::max(second, std::abs(evals(n - 2)));
    return std::clamp(1.0 - second, 0.0, 1.0);
  }

  const Eigen::VectorXd s = sqrt_pi / sqrt_pi.norm();
  auto matvec = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    y.noalias() = m * x;
    y.noalias() -= s * s.dot(x);
  };
  Eigen::VectorXd warm;
  if (ctx && ctx->warm_min.size() == n && ctx->warm_max.size() == n)
    warm = (ctx->warm_min + ctx->warm_max).normalized();
  const auto ext = lanczos_extremes(matvec, n, warm.size() == n ? &warm : nullptr);
  if (ext.converged) {
    if (ctx) {
      ctx->warm_min = ext.vec_min;
      ctx->warm_max = ext.vec_max;
    }
    const double second = std::max(std::abs(ext.min), std::abs(ext.max));
    return std::clamp(1.0 - second, 0.0, 1.0);
  }
  std::cerr << "warning: Lanczos gap solve unconverged after " << ext.iterations
            << " iterations; falling back to a dense eigensolve\n";
  const Eigen::VectorXd evals = symmetric_eigenvalues(m);
  const double second = std::max(std::abs(evals(0)), std::abs(evals(n - 2)));
  return std::clamp(1.0 - second, 0.0, 1.0);
}

}  // namespace

double spectral_gap(const TransitionMatrix& tm) {
  const auto keep = support_indices(tm.pi);
  const auto n = static_cast<Eigen::Index>(keep.size());
  Eigen::VectorXd sqrt_pi(n);
  for (Eigen::Index a = 0; a < n; ++a) sqrt_pi(a) = std::sqrt(tm.pi(keep[a]));
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      m(a, b) = sqrt_pi(a) * tm.p(keep[a], keep[b]) / sqrt_pi(b);
  return gap_of_symmetrized(m, sqrt_pi, 600, nullptr);
}

double spectral_gap_from_q(const Eigen::MatrixXd& q, const Eigen::VectorXd& pi,
                           Eigen::Index dense_cutoff, GapSolveContext* ctx) {
  const auto keep = support_indices(pi);
  const auto n = static_cast<Eigen::Index>(keep.size());
  Eigen::VectorXd sqrt_pi(n);
  for (Eigen::Index a = 0; a < n; ++a) sqrt_pi(a) = std::sqrt(pi(keep[a]));

  // M = D^{1/2} P D^{-1/2} built directly from Q:
  //   M_ab = Q_ab min(sqrt(pi_b/pi_a), sqrt(pi_a/pi_b)),  M_aa = 1 - sum_b Q_ab A_ab
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const Eigen::Index ia = keep[a];
    double off = 0.0;
    for (Eigen::Index b = 0; b < n; ++b) {
      if (b == a) continue;
      const Eigen::Index ib = keep[b];
      const double qv = q(ia, ib);
      const double ratio = pi(ib) / pi(ia);
      off += qv * std::min(1.0, ratio);
      const double r = sqrt_pi(b) / sqrt_pi(a);
      m(a, b) = qv * std::min(r, 1.0 / r);
    }
    m(a, a) = 1.0 - off;
  }
  return gap_of_symmetrized(m, sqrt_pi, dense_cutoff, ctx);
}

MaskedTransition build_transition_matrix_masked(const Eigen::MatrixXd& q,
                                                const Eigen::VectorXd& pi) {
  MaskedTransition out;
  out.support = support_indices(pi);
  const auto n = static_cast<Eigen::Index>(out.support.size());
  Eigen::VectorXd pi_sub(n);
  for (Eigen::Index a = 0; a < n; ++a) pi_sub(a) = pi(out.support[a]);
  pi_sub /= pi_sub.sum();
  out.tm.pi = pi_sub;
  out.tm.p.resize(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    double off = 0.0;
    for (Eigen::Index b = 0; b < n; ++b) {
      if (b == a) continue;
      const double v =
          q(out.support[a], out.support[b]) * std::min(1.0, pi_sub(b) / pi_sub(a));
      out.tm.p(a, b) = v;
      off += v;
    }
    out.tm.p(a, a) = 1.0 - off;
  }
  return out;
}

MixingBounds mixing_time_bounds(double delta, const Eigen::VectorXd& pi, double eps) {
  if (!(delta > 0.0) || delta > 1.0)
    throw std::domain_error("mixing_time_bounds: delta outside (0, 1]");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("mixing_time_bounds: bad eps");
  const double pi_min = pi.minCoeff();
  if (!(pi_min > 0.0)) throw std::invalid_argument("mixing_time_bounds: min pi must be > 0");
  MixingBounds b;
  b.lower = (1.0 / delta - 1.0) * std::log(1.0 / (2.0 * eps));
  b.upper = (1.0 / delta) * std::log(1.0 / (eps * pi_min));
  return b;
}

double tv_distance(const Eigen::MatrixXd& p_t, const Eigen::VectorXd& pi) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < p_t.rows(); ++i)
    worst = std::max(worst, 0.5 * (p_t.row(i).transpose() - pi).cwiseAbs().sum());
  return worst;
}

ExactMixing exact_mixing_time(const TransitionMatrix& tm, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("exact_mixing_time: bad eps");
  constexpr std::uint64_t kMaxSteps = 1ull << 20;

  ExactMixing result;
  if (tv_distance(tm.p, tm.pi) <= eps) {
    result.steps = 1;
    result.converged = true;
    return result;
  }

  // Repeated squaring until the TV criterion is met, storing the ladder.
  std::vector<Eigen::MatrixXd> powers;  // powers[k] = P^(2^k)
  powers.push_back(tm.p);
  std::uint64_t t = 1;
  while (t < kMaxSteps) {
    powers.push_back(powers.back() * powers.back());
    t *= 2;
    if (tv_distance(powers.back(), tm.pi) <= eps) break;
  }
  if (tv_distance(powers.back(), tm.pi) > eps) {
    result.steps = kMaxSteps;
    result.converged = false;
    return result;
  }

  // Bisection on (2^{k-1}, 2^k]: TV to stationarity is monotone in t.
  auto power_of = [&](std::uint64_t steps) {
    Eigen::MatrixXd acc;
    bool first = true;
    for (std::size_t k = 0; k < powers.size(); ++k)
      if ((steps >> k) & 1ull) {
        if (first) {
          acc = powers[k];
          first = false;
        } else {
          acc = acc * powers[k];
        }
      }
    return acc;
  };

  std::uint64_t lo = t / 2, hi = t;  // TV(lo) > eps, TV(hi) <= eps
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (tv_distance(power_of(mid), tm.pi) <= eps)
      hi = mid;
    else
      lo = mid;
  }
  result.steps = hi;
  result.converged = true;
  return result;
}

Observable density_pair_observable(int site_a, int spin_a, int site_b, int spin_b) {
  const int qa = 2 * site_a + spin_a, qb = 2 * site_b + spin_b;
  Observable o;
  o.name = "n_" + std::to_string(site_a + 1) + (spin_a ? "b" : "a") + "_n_" +
           std::to_string(site_b + 1) + (spin_b ? "b" : "a");
  o.eval = [qa, qb](std::uint64_t w) {
    return static_cast<double>(((w >> qa) & 1ull) & ((w >> qb) & 1ull));
  };
  return o;
}

LogTarget log_target_from_probabilities(const Eigen::VectorXd& probabilities) {
  auto probs = std::make_shared<Eigen::VectorXd>(probabilities);
  return [probs](std::size_t i) {
    const double p = (*probs)(static_cast<Eigen::Index>(i));
    if (p < kProbabilityFloor) return -std::numeric_limits<double>::infinity();
    return std::log(p);
  };
}

ChainSample run_chain(const ProposalKernel& kernel, const LogTarget& log_pi,
                      std::size_t start_index, std::size_t steps, std::size_t burn_in,
                      std::uint64_t seed, const std::vector<Observable>& observables) {
  const auto& basis = kernel.basis();
  if (start_index >= basis.size()) throw std::out_of_range("run_chain: start outside sector");
  if (!std::isfinite(log_pi(start_index)))
    throw std::invalid_argument("run_chain: start state is out of support");

  ChainSample sample;
  sample.seed = seed;
  sample.proposal = kernel.descriptor();
  sample.states.reserve(steps);
  sample.accepted.reserve(steps);
  for (const auto& o : observables) {
    sample.observable_names.push_back(o.name);
    sample.observable_series.emplace_back(static_cast<Eigen::Index>(steps));
  }

  RandomStream rng(seed);
  std::size_t current = start_index;
  double log_pi_current = log_pi(current);

  for (std::size_t step = 0; step < burn_in + steps; ++step) {
    const std::size_t proposed = kernel.sample(current, rng);
    const double log_pi_proposed = log_pi(proposed);
    const double log_ratio = log_pi_proposed - log_pi_current;
    const double eta = rng.uniform();
    bool accept;
    if (log_ratio >= 0.0)
      accept = true;  // A = 1 and eta < 1 always
    else
      accept = eta < std::exp(log_ratio);
    if (accept) {
      current = proposed;
      log_pi_current = log_pi_proposed;
    }

    if (step >= burn_in) {
      const std::size_t rec = step - burn_in;
      sample.states.push_back(static_cast<std::uint32_t>(current));
      sample.accepted.push_back(accept ? 1 : 0);
      if (accept) ++sample.acceptance_count;
      const std::uint64_t w = basis.word(current);
      for (std::size_t k = 0; k < observables.size(); ++k)
        sample.observable_series[k](static_cast<Eigen::Index>(rec)) = observables[k].eval(w);
    }
  }
  return sample;
}

std::vector<ChainSample> run_chains(const ProposalKernel& kernel, const LogTarget& log_pi,
                                    std::size_t start_index, std::size_t n_chains,
                                    std::size_t steps, std::size_t burn_in,
                                    std::uint64_t master_seed,
                                    const std::vector<Observable>& observables) {
  std::vector<ChainSample> samples(n_chains);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned n_workers = std::min<unsigned>(hw, static_cast<unsigned>(n_chains));
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    while (true) {
      const std::size_t c = next.fetch_add(1);
      if (c >= n_chains) break;
      const auto seed = derive_seed(master_seed, "chain/" + std::to_string(c));
      samples[c] = run_chain(kernel, log_pi, start_index, steps, burn_in, seed, observables);
    }
  };
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return samples;
}

}  // namespace qavmc
