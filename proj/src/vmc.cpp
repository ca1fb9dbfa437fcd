#include "qavmc/vmc.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace qavmc {

std::complex<double> local_energy(const SectorHamiltonian& h,
                                  const std::function<std::complex<double>(std::size_t)>& log_psi_of,
                                  std::size_t i) {
  const std::complex<double> log_psi_i = log_psi_of(i);
  if (!(log_psi_i.real() > -std::numeric_limits<double>::infinity()))
    throw std::domain_error("local_energy: psi vanishes at the sampled configuration");
  std::complex<double> acc = 0.0;
  for (const auto& [j, hij] : h.row_nonzeros(i)) {
    if (j == i) {
      acc += hij;
      continue;
    }
    const std::complex<double> log_psi_j = log_psi_of(j);
    if (!(log_psi_j.real() > -std::numeric_limits<double>::infinity())) continue;
    acc += hij * std::exp(log_psi_j - log_psi_i);
  }
  return acc;
}

namespace {

VmcEstimate estimate_from(const SectorHamiltonian& h, const RbmParams& params,
                          const std::vector<std::size_t>& states,
                          const Eigen::VectorXd& weights) {
  const auto n = static_cast<Eigen::Index>(states.size());
  VmcEstimate est;
  est.weights = weights;
  est.e_loc.resize(n);
  est.log_derivatives.resize(n, params.n_params());

  // ln psi over the distinct basis states touched by the rows (memoized)
  std::unordered_map<std::size_t, std::complex<double>> cache;
  auto log_psi_of = [&](std::size_t j) {
    auto it = cache.find(j);
    if (it != cache.end()) return it->second;
    const auto v = log_psi(params, h.basis->word(j));
    cache.emplace(j, v);
    return v;
  };

  for (Eigen::Index k = 0; k < n; ++k) {
    const std::size_t i = states[k];
    est.e_loc(k) = local_energy(h, log_psi_of, i);
    est.log_derivatives.row(k) = grad_log_psi(params, h.basis->word(i));
  }

  const std::complex<double> energy = (est.weights.cast<std::complex<double>>().array() *
                                       est.e_loc.array()).sum();
  est.energy = energy;

  // Eq.-4 centered gradient: 2 Re[<(E_loc - E) conj(O_k)>]
  Eigen::VectorXcd centered = est.e_loc.array() - energy;
  Eigen::VectorXcd weighted = centered.array() * est.weights.cast<std::complex<double>>().array();
  est.gradient = 2.0 * (est.log_derivatives.conjugate().transpose() * weighted).real();
  return est;
}

}  // namespace

VmcEstimate energy_and_gradient(const SectorHamiltonian& h, const RbmParams& params,
                                const std::vector<std::size_t>& samples) {
  if (samples.empty()) throw std::invalid_argument("energy_and_gradient: empty sample set");
  const auto n = static_cast<Eigen::Index>(samples.size());
  return estimate_from(h, params, samples,
                       Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

VmcEstimate energy_and_gradient_exact(const SectorHamiltonian& h, const RbmParams& params) {
  const auto n = static_cast<Eigen::Index>(h.size());
  // P(S) = exp(2 f_amp(S)) / Z via log-sum-exp
  Eigen::VectorXd log_w(n);
  for (Eigen::Index i = 0; i < n; ++i)
    log_w(i) = 2.0 * log_psi(params, h.basis->word(i)).real();
  const double shift = log_w.maxCoeff();
  Eigen::VectorXd weights = (log_w.array() - shift).exp();
  weights /= weights.sum();

  std::vector<std::size_t> states(n);
  for (Eigen::Index i = 0; i < n; ++i) states[i] = static_cast<std::size_t>(i);
  return estimate_from(h, params, states, weights);
}

Eigen::VectorXd sr_precondition(const Eigen::MatrixXcd& log_derivatives,
                                const Eigen::VectorXd& weights, const Eigen::VectorXd& gradient,
                                double shift) {
  if (!(shift > 0.0)) throw std::invalid_argument("sr_precondition: shift must be positive");
  const Eigen::VectorXcd wc = weights.cast<std::complex<double>>();
  const Eigen::VectorXcd o_mean = log_derivatives.transpose() * wc;
  // S = <O* O^T> - <O>* <O>^T  (Hermitian PSD); real part drives real params
  Eigen::MatrixXcd s = log_derivatives.adjoint() * (weights.asDiagonal() * log_derivatives);
  s.noalias() -= o_mean.conjugate() * o_mean.transpose();
  Eigen::MatrixXd s_real = s.real();
  s_real.diagonal().array() += shift;

  Eigen::LDLT<Eigen::MatrixXd> solver(s_real);
  if (solver.info() != Eigen::Success) {
    std::cerr << "warning: SR solve failed; falling back to the plain gradient\n";
    return gradient;
  }
  Eigen::VectorXd x = solver.solve(gradient);
  if (!x.allFinite()) {
    std::cerr << "warning: SR solve produced non-finite update; falling back\n";
    return gradient;
  }
  return x;
}

void adam_step(AdamState& state, const Eigen::VectorXd& gradient, Eigen::VectorXd& params) {
  if (state.step == 0) {
    state.m = Eigen::VectorXd::Zero(params.size());
    state.v = Eigen::VectorXd::Zero(params.size());
  }
  if (gradient.size() != params.size() || state.m.size() != params.size())
    throw std::invalid_argument("adam_step: shape mismatch");
  ++state.step;
  state.m = state.beta1 * state.m + (1.0 - state.beta1) * gradient;
  state.v = state.beta2 * state.v + (1.0 - state.beta2) * gradient.cwiseAbs2();
  const double bc1 = 1.0 - std::pow(state.beta1, state.step);
  const double bc2 = 1.0 - std::pow(state.beta2, state.step);
  const Eigen::ArrayXd m_hat = state.m.array() / bc1;
  const Eigen::ArrayXd v_hat = state.v.array() / bc2;
  params.array() -= state.rate * m_hat / (v_hat.sqrt() + state.epsilon);
}

VmcResult vmc_optimize(const SectorHamiltonian& h, KernelPtr kernel, const VmcOptions& options) {
  const int n_qubits = h.basis->n_qubits();
  const int n_hidden = std::max(1, static_cast<int>(std::lround(options.alpha_density * n_qubits)));
  RbmParams params = init_rbm(n_qubits, n_hidden, options.init_sigma,
                              derive_seed(options.seed, "vmc/init"));
  Eigen::VectorXd flat = params.flatten();

  AdamState adam;
  adam.rate = options.learning_rate;
  adam.beta1 = options.adam_beta1;
  adam.beta2 = options.adam_beta2;
  adam.epsilon = options.adam_epsilon;

  VmcResult result;
  result.trajectory.reserve(options.iterations);

  // persistent chain state (warm starts)
  const int n_chains = std::max(1, options.n_chains);
  std::vector<RandomStream> streams;
  std::vector<std::size_t> positions(n_chains);
  for (int c = 0; c < n_chains; ++c) {
    streams.emplace_back(derive_seed(options.seed, "vmc/chain/" + std::to_string(c)));
    positions[c] = streams[c].uniform_index(h.size());
  }
  const int per_chain = std::max(1, options.n_samples / n_chains);

  for (int iter = 0; iter < options.iterations; ++iter) {
    params = RbmParams::unflatten(flat, n_qubits, n_hidden);

    VmcEstimate est;
    double acceptance_rate = 1.0;
    std::vector<std::size_t> samples;

    if (options.exact_enumeration) {
      est = energy_and_gradient_exact(h, params);
    } else {
      // per-iteration ln|psi|^2 table (the target shifts with the parameters)
      const auto n = static_cast<Eigen::Index>(h.size());
      Eigen::VectorXd log_pi(n);
      for (Eigen::Index i = 0; i < n; ++i)
        log_pi(i) = 2.0 * log_psi(params, h.basis->word(i)).real();

      // the target moved with the parameters: discard a fraction each
      // iteration even when the chain state is warm-started
      const std::size_t burn = static_cast<std::size_t>(options.burn_in_fraction * per_chain);
      std::size_t accepted = 0, total = 0;
      samples.reserve(static_cast<std::size_t>(per_chain) * n_chains);
      for (int c = 0; c < n_chains; ++c) {
        if (!options.warm_start) positions[c] = streams[c].uniform_index(h.size());
        std::size_t cur = positions[c];
        for (std::size_t step = 0; step < burn + static_cast<std::size_t>(per_chain); ++step) {
          const std::size_t prop = kernel->sample(cur, streams[c]);
          const double log_ratio = log_pi(static_cast<Eigen::Index>(prop)) -
                                   log_pi(static_cast<Eigen::Index>(cur));
          const double eta = streams[c].uniform();
          const bool accept = log_ratio >= 0.0 || eta < std::exp(log_ratio);
          if (accept) cur = prop;
          if (step >= burn) {
            samples.push_back(cur);
            ++total;
            if (accept) ++accepted;
          }
        }
        positions[c] = cur;
      }
      acceptance_rate = total ? static_cast<double>(accepted) / total : 0.0;
      est = energy_and_gradient(h, params, samples);
    }

    const double energy = est.energy.real();
    if (!std::isfinite(energy)) {
      result.aborted = true;
      result.abort_reason = "divergent energy at iteration " + std::to_string(iter);
      std::cerr << "vmc_optimize aborted: " << result.abort_reason << "\n";
      break;
    }

    VmcIterationRecord rec;
    rec.iteration = iter;
    rec.energy = energy;
    rec.acceptance_rate = acceptance_rate;
    for (const auto& obs : options.observables) {
      double value = 0.0;
      if (options.exact_enumeration) {
        for (Eigen::Index i = 0; i < est.weights.size(); ++i)
          value += est.weights(i) * obs.eval(h.basis->word(static_cast<std::size_t>(i)));
      } else {
        for (const auto s : samples) value += obs.eval(h.basis->word(s));
        value /= static_cast<double>(samples.size());
      }
      rec.observables.push_back(value);
    }
    result.trajectory.push_back(std::move(rec));

    const Eigen::VectorXd preconditioned =
        sr_precondition(est.log_derivatives, est.weights, est.gradient, options.sr_shift);
    adam_step(adam, preconditioned, flat);
  }

  result.final_params = RbmParams::unflatten(flat, n_qubits, n_hidden);
  return result;
}

}  // namespace qavmc
