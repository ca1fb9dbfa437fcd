#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qavmc/markov.hpp"
#include "qavmc/spectral.hpp"

namespace qavmc {

/// Autocovariance at a lag: c(t) = sum_{i=1}^{N-t} (O_i - mu)(O_{i+t} - mu) / (N - t),
/// with mu the full-series mean.
double autocovariance(const Eigen::VectorXd& series, Eigen::Index lag);

struct AutocorrResult {
  double tau_int = 1.0;          // integrated autocorrelation time
  Eigen::Index window = 0;       // chosen cutoff lag W
  Eigen::VectorXd rho;           // rho(1..W)
  double n_eff = 0.0;            // N_s / tau_int
  bool low_confidence = false;   // series shorter than 100
  bool window_found = true;      // self-consistent window located
};

/// tau = 1 + 2 sum_{t=1}^{W} rho(t) with W the smallest lag satisfying
/// W >= c * tau(W) (Sokal's self-consistent window, c = 5).
AutocorrResult integrated_autocorr(const Eigen::VectorXd& series, double window_factor = 5.0);

struct ObservableEstimate {
  Eigen::VectorXd chain_means;  // one per chain
  double pooled_mean = 0.0;
  double max_abs_error = 0.0;   // vs the supplied reference
  double std_dev = 0.0;         // across chains (sample std-dev)
};

ObservableEstimate estimate_observable(const std::vector<ChainSample>& chains,
                                       std::size_t observable_index, double reference);

struct ProposalHistogram {
  std::vector<int> hamming_bins;         // one integer bin per Hamming distance >= 1
  Eigen::VectorXd delta_eps_edges;       // inner bin edges (width 0.5 over the range)
  Eigen::MatrixXd weights;               // [hamming][delta_eps bin incl. under/overflow]
  double self_mass = 0.0;
  double total_weight = 0.0;             // == 1 - self_mass
};

/// Two-dimensional histogram of Q(S_i, .) over (Hamming distance, delta_eps),
/// each S_j weighted by Q(S_i, S_j). delta_eps bins have width 0.5 on
/// [range_lo, range_hi] with underflow/overflow bins retained.
ProposalHistogram proposal_histogram(const Eigen::VectorXd& row, const SectorBasis& basis,
                                     const Eigen::VectorXd& probabilities, std::size_t i,
                                     double range_lo = -8.0, double range_hi = 8.0);

struct ScalingFit {
  double a = 0.0;         // prefactor
  double k = 0.0;         // exponent in delta(N) = a 2^{-kN}
  double residual = 0.0;  // RMS residual of the log2-domain fit
  std::vector<std::pair<double, double>> points;
};

/// Ordinary least squares on log2(delta) = log2(a) - k N.
ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points);

/// First tau on the grid with delta_q(tau) >= c * delta_eff; empty when the
/// threshold is never met within the grid.
struct TauThreshold {
  double tau = 0.0;
  bool found = false;
};

TauThreshold tau_threshold(const std::vector<double>& tau_grid,
                           const std::vector<double>& delta_per_tau, double delta_eff, double c);

/// (a_q t_sc) / (a_c t_sq) * 2^{(k_c - k_q) N}: classical-over-quantum
/// effective-runtime ratio at size N.
double effective_runtime_ratio(const ScalingFit& classical_fit, const ScalingFit& quantum_fit,
                               double t_s_classical, double t_s_quantum, double n);

}  // namespace qavmc
