#include "qavmc/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace qavmc {

double autocovariance(const Eigen::VectorXd& series, Eigen::Index lag) {
  const auto n = series.size();
  if (n == 0) throw std::invalid_argument("autocovariance: empty series");
  if (lag < 0 || lag >= n) throw std::invalid_argument("autocovariance: lag out of range");
  const double mu = series.mean();
  const auto m = n - lag;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) acc += (series(i) - mu) * (series(i + lag) - mu);
  return acc / static_cast<double>(m);
}

AutocorrResult integrated_autocorr(const Eigen::VectorXd& series, double window_factor) {
  AutocorrResult r;
  const auto n = series.size();
  if (n == 0) throw std::invalid_argument("integrated_autocorr: empty series");
  r.low_confidence = n < 100;

  const double c0 = autocovariance(series, 0);
  if (c0 <= 0.0) {
    // constant series: no fluctuations to correlate
    r.tau_int = 1.0;
    r.window = 0;
    r.n_eff = static_cast<double>(n) / r.tau_int;
    return r;
  }

  const Eigen::Index max_lag = n - 1;
  std::vector<double> rho;
  rho.reserve(256);
  double tau = 1.0;
  Eigen::Index w = 0;
  bool found = false;
  for (Eigen::Index t = 1; t <= max_lag; ++t) {
    rho.push_back(autocovariance(series, t) / c0);
    tau += 2.0 * rho.back();
    w = t;
    if (static_cast<double>(t) >= window_factor * tau) {
      found = true;
      break;
    }
  }
  r.tau_int = tau;
  r.window = w;
  r.window_found = found;
  r.rho = Eigen::Map<const Eigen::VectorXd>(rho.data(), static_cast<Eigen::Index>(rho.size()));
  r.n_eff = static_cast<double>(n) / r.tau_int;
  return r;
}

ObservableEstimate estimate_observable(const std::vector<ChainSample>& chains,
                                       std::size_t observable_index, double reference) {
  if (chains.empty()) throw std::invalid_argument("estimate_observable: no chains");
  ObservableEstimate e;
  const auto m = static_cast<Eigen::Index>(chains.size());
  e.chain_means.resize(m);
  for (Eigen::Index c = 0; c < m; ++c) {
    const auto& series = chains[c].observable_series.at(observable_index);
    if (series.size() == 0) throw std::invalid_argument("estimate_observable: empty series");
    e.chain_means(c) = series.mean();
  }
  e.pooled_mean = e.chain_means.mean();
  e.max_abs_error = (e.chain_means.array() - reference).abs().maxCoeff();
  if (m > 1) {
    const double var =
        (e.chain_means.array() - e.pooled_mean).square().sum() / static_cast<double>(m - 1);
    e.std_dev = std::sqrt(var);
  }
  return e;
}

ProposalHistogram proposal_histogram(const Eigen::VectorXd& row, const SectorBasis& basis,
                                     const Eigen::VectorXd& probabilities, std::size_t i,
                                     double range_lo, double range_hi) {
  if (i >= basis.size()) throw std::out_of_range("proposal_histogram: S_i outside sector");
  if (row.size() != static_cast<Eigen::Index>(basis.size()))
    throw std::invalid_argument("proposal_histogram: row size mismatch");

  ProposalHistogram h;
  const int max_distance = basis.n_qubits();
  h.hamming_bins.resize(max_distance + 1);
  for (int d = 0; d <= max_distance; ++d) h.hamming_bins[d] = d;

  constexpr double kWidth = 0.5;
  const int inner = std::max(1, static_cast<int>(std::round((range_hi - range_lo) / kWidth)));
  h.delta_eps_edges.resize(inner + 1);
  for (int b = 0; b <= inner; ++b) h.delta_eps_edges(b) = range_lo + kWidth * b;
  const int n_eps_bins = inner + 2;  // + underflow and overflow
  h.weights = Eigen::MatrixXd::Zero(max_distance + 1, n_eps_bins);

  const std::uint64_t wi = basis.word(i);
  const double pi_i = probabilities(static_cast<Eigen::Index>(i));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const double qv = row(static_cast<Eigen::Index>(j));
    if (j == i) {
      h.self_mass += qv;
      continue;
    }
    if (qv == 0.0) continue;
    const int d = hamming(wi, basis.word(j));
    const double de = delta_epsilon(pi_i, probabilities(static_cast<Eigen::Index>(j)));
    int bin;
    if (de < range_lo)
      bin = 0;
    else if (de >= range_hi)
      bin = n_eps_bins - 1;
    else
      bin = 1 + static_cast<int>((de - range_lo) / kWidth);
    h.weights(d, bin) += qv;
    h.total_weight += qv;
  }
  return h;
}

ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw std::invalid_argument("fit_scaling: need at least 2 points");
  for (const auto& [n, delta] : points)
    if (!(delta > 0.0)) throw std::invalid_argument("fit_scaling: nonpositive delta");

  // OLS on y = log2(delta) = log2(a) - k N
  const auto m = static_cast<double>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [n, delta] : points) {
    const double y = std::log2(delta);
    sx += n;
    sy += y;
    sxx += n * n;
    sxy += n * y;
  }
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_scaling: degenerate abscissae");
  const double slope = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / m;

  ScalingFit fit;
  fit.k = -slope;
  fit.a = std::exp2(intercept);
  fit.points = points;
  double ss = 0.0;
  for (const auto& [n, delta] : points) {
    const double resid = std::log2(delta) - (intercept + slope * n);
    ss += resid * resid;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

TauThreshold tau_threshold(const std::vector<double>& tau_grid,
                           const std::vector<double>& delta_per_tau, double delta_eff, double c) {
  if (tau_grid.size() != delta_per_tau.size())
    throw std::invalid_argument("tau_threshold: grid/delta size mismatch");
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("tau_threshold: c outside (0, 1]");
  TauThreshold out;
  for (std::size_t k = 0; k < tau_grid.size(); ++k)
    if (delta_per_tau[k] >= c * delta_eff) {
      out.tau = tau_grid[k];
      out.found = true;
      return out;
    }
  return out;
}

double effective_runtime_ratio(const ScalingFit& classical_fit, const ScalingFit& quantum_fit,
                               double t_s_classical, double t_s_quantum, double n) {
  if (!(t_s_classical > 0.0 && t_s_quantum > 0.0))
    throw std::invalid_argument("effective_runtime_ratio: runtimes must be positive");
  return (quantum_fit.a * t_s_classical) / (classical_fit.a * t_s_quantum) *
         std::exp2((classical_fit.k - quantum_fit.k) * n);
}

}  // namespace qavmc
