#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qavmc/proposals.hpp"

namespace qavmc {

/// Metropolis acceptance for symmetric proposals: min(1, pi_j / pi_i).
double acceptance_symmetric(double pi_i, double pi_j);

/// General Metropolis-Hastings acceptance: min(1, pi_j q_ji / (pi_i q_ij)).
double acceptance_general(double pi_i, double pi_j, double q_ij, double q_ji);

struct TransitionMatrix {
  Eigen::MatrixXd p;   // row-stochastic
  Eigen::VectorXd pi;  // normalized target used to build it
};

/// P_ij = Q_ij A_ij off the diagonal, P_ii = 1 - sum_{j != i} Q_ij A_ij.
/// Q must be row-stochastic and symmetric; pi normalized and positive.
TransitionMatrix build_transition_matrix(const Eigen::MatrixXd& q, const Eigen::VectorXd& pi);

/// Carries Lanczos warm-start vectors between related gap solves (e.g.
/// consecutive tau grid points).
struct GapSolveContext {
  Eigen::VectorXd warm_min;
  Eigen::VectorXd warm_max;
};

/// Absolute spectral gap delta = 1 - |lambda_2| via the symmetrized similarity
/// D^{1/2} P D^{-1/2}. Dense eigenvalues-only solve for small chains; deflated
/// Lanczos (with dense fallback) above `dense_cutoff` rows. States with pi
/// below the probability floor are excluded from the support (with a warning).
double spectral_gap(const TransitionMatrix& tm);
double spectral_gap_from_q(const Eigen::MatrixXd& q, const Eigen::VectorXd& pi,
                           Eigen::Index dense_cutoff = 600, GapSolveContext* ctx = nullptr);

struct MixingBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// (1/delta - 1) ln(1/2eps)  <=  t_mix(eps)  <=  (1/delta) ln(1/(eps min pi)).
MixingBounds mixing_time_bounds(double delta, const Eigen::VectorXd& pi, double eps);

/// Transition matrix restricted to the support of pi (rejected out-of-support
/// proposals fold into the diagonal); pi renormalized over the support.
struct MaskedTransition {
  TransitionMatrix tm;
  std::vector<Eigen::Index> support;
};
MaskedTransition build_transition_matrix_masked(const Eigen::MatrixXd& q,
                                                const Eigen::VectorXd& pi);

struct ExactMixing {
  std::uint64_t steps = 0;
  bool converged = false;  // false when the 2^20 step cutoff was reached
};

/// Smallest t with max_i || P^t(i,.) - pi ||_TV <= eps (TV = half L1),
/// located by repeated squaring plus bisection on stored powers.
ExactMixing exact_mixing_time(const TransitionMatrix& tm, double eps);

/// Worst-row total-variation distance of P^t rows from pi for a given power.
double tv_distance(const Eigen::MatrixXd& p_t, const Eigen::VectorXd& pi);

/// Diagonal local observable evaluated on configurations.
struct Observable {
  std::string name;
  std::function<double(std::uint64_t)> eval;
};

/// n_{site_a, spin_a} * n_{site_b, spin_b} (0-based sites; spin 0 = alpha).
Observable density_pair_observable(int site_a, int spin_a, int site_b, int spin_b);

/// log pi(S) up to an additive constant; -inf marks out-of-support states.
using LogTarget = std::function<double(std::size_t)>;

LogTarget log_target_from_probabilities(const Eigen::VectorXd& probabilities);

struct ChainSample {
  std::vector<std::uint32_t> states;   // basis indices, post burn-in
  std::vector<std::uint8_t> accepted;  // per recorded step
  std::vector<std::string> observable_names;
  std::vector<Eigen::VectorXd> observable_series;
  std::size_t acceptance_count = 0;
  std::uint64_t seed = 0;
  std::string proposal;
};

/// Metropolis-Hastings chain with the pi-ratio acceptance. Performs
/// burn_in + steps updates and records the last `steps`. Deterministic
/// given the seed.
ChainSample run_chain(const ProposalKernel& kernel, const LogTarget& log_pi,
                      std::size_t start_index, std::size_t steps, std::size_t burn_in,
                      std::uint64_t seed, const std::vector<Observable>& observables = {});

/// Independent chains (derived seeds "chain/<k>" from the master seed),
/// executed on a small thread pool; results identical regardless of scheduling.
std::vector<ChainSample> run_chains(const ProposalKernel& kernel, const LogTarget& log_pi,
                                    std::size_t start_index, std::size_t n_chains,
                                    std::size_t steps, std::size_t burn_in,
                                    std::uint64_t master_seed,
                                    const std::vector<Observable>& observables = {});

}  // namespace qavmc
