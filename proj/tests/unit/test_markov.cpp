#include <doctest.h>

#include "oracles.hpp"
#include "qavmc/hubbard.hpp"
#include "qavmc/markov.hpp"

using namespace qavmc;

namespace {

// The hand-built 2-state chain: Uniform proposal, pi = (2/3, 1/3).
TransitionMatrix two_state_chain() {
  Eigen::MatrixXd q(2, 2);
  q << 0, 1, 1, 0;
  Eigen::VectorXd pi(2);
  pi << 2.0 / 3.0, 1.0 / 3.0;
  return build_transition_matrix(q, pi);
}

void check_detailed_balance(const TransitionMatrix& tm, double tol = 1e-9) {
  for (Eigen::Index i = 0; i < tm.p.rows(); ++i)
    for (Eigen::Index j = 0; j < tm.p.cols(); ++j) {
      const double lhs = tm.pi(i) * tm.p(i, j), rhs = tm.pi(j) * tm.p(j, i);
      CHECK(std::abs(lhs - rhs) <= tol * std::max(1.0, std::max(std::abs(lhs), std::abs(rhs))));
    }
}

}  // namespace

TEST_CASE("acceptance probabilities") {
  CHECK(acceptance_symmetric(0.2, 0.2) == 1.0);
  CHECK(acceptance_symmetric(0.4, 0.2) == doctest::Approx(0.5));
  CHECK(acceptance_symmetric(0.4, 0.0) == 0.0);
  CHECK_THROWS_AS(acceptance_symmetric(0.0, 0.1), std::domain_error);

  // symmetric Q cancels; general values multiply
  CHECK(acceptance_general(0.4, 0.2, 0.3, 0.3) == doctest::Approx(0.5));
  CHECK(acceptance_general(0.5, 0.5, 0.1, 0.2) == 1.0);
  CHECK(acceptance_general(1.0, 0.3, 0.1, 0.2) == doctest::Approx(0.6));
  CHECK_THROWS_AS(acceptance_general(0.5, 0.5, 0.0, 0.1), std::domain_error);
}

TEST_CASE("two-state transition matrix matches the hand computation") {
  const auto tm = two_state_chain();
  CHECK(tm.p(0, 0) == doctest::Approx(0.5));
  CHECK(tm.p(0, 1) == doctest::Approx(0.5));
  CHECK(tm.p(1, 0) == doctest::Approx(1.0));
  CHECK(tm.p(1, 1) == doctest::Approx(0.0));
  check_detailed_balance(tm);
}

TEST_CASE("uniform target accepts every move: P equals Q") {
  auto basis = make_basis(3, 1, 1);
  const auto q = assemble_matrix(*make_uniform(basis));
  const auto n = q.rows();
  const auto tm = build_transition_matrix(q, Eigen::VectorXd::Constant(n, 1.0 / n));
  CHECK((tm.p - q).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("built transition matrices satisfy detailed balance and stationarity") {
  const auto h = build_hubbard(chain(4), 1.0, 8.0, 2, 2);
  const auto ground = ground_distribution(eigendecompose(h));
  for (const auto kind : {ProposalKind::Uniform, ProposalKind::Exchange,
                          ProposalKind::ExcitationSD, ProposalKind::ExcitationSDFlip}) {
    const auto q = assemble_matrix(*make_classical(kind, h.basis));
    const auto tm = build_transition_matrix(q, ground.probabilities);
    check_detailed_balance(tm);
    // pi^T P = pi^T
    const Eigen::VectorXd left = tm.p.transpose() * tm.pi;
    CHECK((left - tm.pi).cwiseAbs().maxCoeff() < 1e-9);
    // rows sum to one, entries nonnegative
    for (Eigen::Index i = 0; i < tm.p.rows(); ++i) {
      CHECK(std::abs(tm.p.row(i).sum() - 1.0) < 1e-10);
      CHECK(tm.p.row(i).minCoeff() > -1e-15);
    }
  }
}

TEST_CASE("transition matrix construction validates inputs") {
  Eigen::MatrixXd q(2, 2);
  q << 0.5, 0.4, 0.4, 0.6;  // first row sums to 0.9
  Eigen::VectorXd pi(2);
  pi << 0.5, 0.5;
  CHECK_THROWS_AS(build_transition_matrix(q, pi), std::invalid_argument);
}

TEST_CASE("spectral gap: hand value, reducible chain, eigenvalue range") {
  CHECK(spectral_gap(two_state_chain()) == doctest::Approx(0.5).epsilon(1e-12));

  TransitionMatrix id;
  id.p = Eigen::MatrixXd::Identity(3, 3);
  id.pi = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
  CHECK(spectral_gap(id) == 0.0);

  const auto h = build_hubbard(chain(3), 1.0, 2.0, 2, 1);
  const auto ground = ground_distribution(eigendecompose(h));
  const auto q = assemble_matrix(*make_exchange(h.basis));
  const auto tm = build_transition_matrix(q, ground.probabilities);
  const double delta = spectral_gap(tm);
  CHECK(delta >= 0.0);
  CHECK(delta <= 1.0);
  CHECK(delta == doctest::Approx(spectral_gap_from_q(q, ground.probabilities)).epsilon(1e-12));
}

TEST_CASE("mixing-time bounds formulas") {
  Eigen::VectorXd pi(2);
  pi << 2.0 / 3.0, 1.0 / 3.0;
  const auto b = mixing_time_bounds(0.5, pi, 0.01);
  CHECK(b.lower == doctest::Approx(std::log(50.0)));
  CHECK(b.upper == doctest::Approx(2.0 * std::log(300.0)));

  const auto instant = mixing_time_bounds(1.0, pi, 0.01);
  CHECK(instant.lower == 0.0);

  CHECK_THROWS_AS(mixing_time_bounds(0.0, pi, 0.01), std::domain_error);
  CHECK_THROWS_AS(mixing_time_bounds(0.5, pi, 2.0), std::invalid_argument);
}

TEST_CASE("exact mixing time: one-step chain, explicit-powers value, monotone in eps") {
  TransitionMatrix flat;
  flat.pi = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
  flat.p = flat.pi.transpose().replicate(3, 1);
  CHECK(exact_mixing_time(flat, 0.01).steps == 1);

  const auto tm = two_state_chain();
  // oracle: direct matrix powers, worst-row half-L1 distance
  int expected = 1;
  while (oracles::tv_after_steps(tm.p, tm.pi, expected) > 0.01) ++expected;
  CHECK(expected == 7);
  const auto mix = exact_mixing_time(tm, 0.01);
  CHECK(mix.converged);
  CHECK(mix.steps == static_cast<std::uint64_t>(expected));

  CHECK(exact_mixing_time(tm, 0.001).steps >= mix.steps);
  CHECK(exact_mixing_time(tm, 0.05).steps <= mix.steps);
}

TEST_CASE("mixing-time sandwich on small chains") {
  const auto h = build_hubbard(chain(3), 1.0, 6.0, 2, 1);
  const auto ground = ground_distribution(eigendecompose(h));
  for (const auto kind : {ProposalKind::Uniform, ProposalKind::ExcitationSD}) {
    const auto q = assemble_matrix(*make_classical(kind, h.basis));
    const auto tm = build_transition_matrix(q, ground.probabilities);
    const double delta = spectral_gap(tm);
    const auto bounds = mixing_time_bounds(delta, tm.pi, 0.01);
    const auto mix = exact_mixing_time(tm, 0.01);
    CHECK(mix.converged);
    CHECK(static_cast<double>(mix.steps) >= bounds.lower - 1.0);  // integer step above the bound
    CHECK(static_cast<double>(mix.steps) <= bounds.upper);
  }
}

TEST_CASE("chains never move under the tau=0 quantum kernel") {
  const auto h = build_hubbard(chain(2), 1.0, 8.0, 1, 1);
  auto spec = eigendecompose_shared(h);
  const auto ground = ground_distribution(*spec);
  auto kernel = make_quantum(spec, 0.0);
  const auto sample = run_chain(*kernel, log_target_from_probabilities(ground.probabilities), 1,
                                200, 10, 42, {});
  for (const auto s : sample.states) CHECK(s == 1);
}

TEST_CASE("two-state chain frequencies converge to pi") {
  Eigen::VectorXd pi(2);
  pi << 2.0 / 3.0, 1.0 / 3.0;
  auto basis = make_basis(2, 1, 0);
  auto kernel = make_uniform(basis);
  const std::size_t steps = 1000000;
  const auto sample =
      run_chain(*kernel, log_target_from_probabilities(pi), 0, steps, 1000, 99, {});
  double visits0 = 0;
  for (const auto s : sample.states) visits0 += (s == 0);
  const double freq = visits0 / static_cast<double>(steps);
  // 3 sigma of the correlated estimator; generous envelope
  CHECK(freq == doctest::Approx(2.0 / 3.0).epsilon(0.01));
}

TEST_CASE("chains are bit-reproducible and record observables post burn-in") {
  const auto h = build_hubbard(chain(3), 1.0, 4.0, 2, 1);
  const auto ground = ground_distribution(eigendecompose(h));
  auto kernel = make_excitation_sd(h.basis);
  const auto obs = density_pair_observable(0, 0, 2, 1);
  const auto log_pi = log_target_from_probabilities(ground.probabilities);

  const auto a = run_chain(*kernel, log_pi, 0, 500, 50, 1234, {obs});
  const auto b = run_chain(*kernel, log_pi, 0, 500, 50, 1234, {obs});
  CHECK(a.states == b.states);
  CHECK(a.accepted == b.accepted);
  CHECK(a.acceptance_count == b.acceptance_count);
  CHECK(a.observable_series[0] == b.observable_series[0]);
  CHECK(a.states.size() == 500);
  CHECK(a.acceptance_count <= 500);
  for (std::size_t s = 0; s < a.states.size(); ++s)
    CHECK(a.observable_series[0](static_cast<Eigen::Index>(s)) ==
          obs.eval(h.basis->word(a.states[s])));

  // independent chains: same result regardless of scheduling
  const auto batch1 = run_chains(*kernel, log_pi, 0, 4, 300, 30, 777, {obs});
  const auto batch2 = run_chains(*kernel, log_pi, 0, 4, 300, 30, 777, {obs});
  for (int c = 0; c < 4; ++c) CHECK(batch1[c].states == batch2[c].states);
  CHECK(batch1[0].states != batch1[1].states);

  CHECK_THROWS_AS(run_chain(*kernel, [](std::size_t) { return -INFINITY; }, 0, 10, 0, 1, {}),
                  std::invalid_argument);
}
