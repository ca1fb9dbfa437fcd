#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qavmc/markov.hpp"
#include "qavmc/rbm.hpp"

namespace qavmc {

/// E_loc(S) = sum_{S'} H(S,S') psi(S')/psi(S), ratios taken in the log domain.
/// `log_psi_of` maps a basis index to ln psi; -inf real part marks psi = 0.
std::complex<double> local_energy(const SectorHamiltonian& h,
                                  const std::function<std::complex<double>(std::size_t)>& log_psi_of,
                                  std::size_t i);

/// Per-iteration estimator bundle: local energies, log-derivative rows and
/// normalized weights (1/N_s for chain samples, P(S) in exact mode).
struct VmcEstimate {
  std::complex<double> energy;
  Eigen::VectorXd gradient;  // Eq.-4 style centered gradient, real
  Eigen::VectorXcd e_loc;
  Eigen::MatrixXcd log_derivatives;  // one row per sample/state
  Eigen::VectorXd weights;
};

VmcEstimate energy_and_gradient(const SectorHamiltonian& h, const RbmParams& params,
                                const std::vector<std::size_t>& samples);

/// Sampling-free mode: exact expectation under P(S) = |psi(S)|^2 / Z over the
/// whole sector (isolates sampler effects; reference curves).
VmcEstimate energy_and_gradient_exact(const SectorHamiltonian& h, const RbmParams& params);

/// Solve (Re S + shift I) x = g with S the sample covariance of the
/// log-derivatives. Falls back to the plain gradient with a warning if the
/// solve fails.
Eigen::VectorXd sr_precondition(const Eigen::MatrixXcd& log_derivatives,
                                const Eigen::VectorXd& weights, const Eigen::VectorXd& gradient,
                                double shift);

struct AdamState {
  Eigen::VectorXd m;  // first-moment accumulator
  Eigen::VectorXd v;  // second-moment accumulator
  long step = 0;
  double rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Standard bias-corrected Adam update, applied in place to `params`.
void adam_step(AdamState& state, const Eigen::VectorXd& gradient, Eigen::VectorXd& params);

struct VmcOptions {
  int iterations = 500;
  int n_samples = 1000;         // recorded chain steps per iteration (pooled)
  int n_chains = 1;
  double burn_in_fraction = 0.1;  // of per-chain samples, discarded every iteration
  bool warm_start = true;         // chains persist across iterations
  bool exact_enumeration = false;
  double alpha_density = 3.0;
  double init_sigma = 0.01;
  double learning_rate = 0.01;
  double sr_shift = 0.01;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 1;
  std::vector<Observable> observables;
};

struct VmcIterationRecord {
  int iteration = 0;
  double energy = 0.0;
  double acceptance_rate = 1.0;
  std::vector<double> observables;
};

struct VmcResult {
  std::vector<VmcIterationRecord> trajectory;
  RbmParams final_params;
  bool aborted = false;
  std::string abort_reason;
};

/// Full optimization loop: sample (or enumerate), estimate energy/gradient,
/// SR-precondition, Adam-update. Bit-reproducible for a given seed.
VmcResult vmc_optimize(const SectorHamiltonian& h, KernelPtr kernel, const VmcOptions& options);

}  // namespace qavmc
