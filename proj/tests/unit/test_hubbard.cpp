#include <doctest.h>

#include "oracles.hpp"
#include "qavmc/hubbard.hpp"
#include "qavmc/spectral.hpp"

using namespace qavmc;

TEST_CASE("two-site Hubbard ground energy matches the analytic formula") {
  for (const double u : {0.0, 1.0, 4.0, 8.0}) {
    const auto h = build_hubbard(chain(2), 1.0, u, 1, 1);
    CHECK(h.size() == 4);
    const auto spec = eigendecompose(h);
    CHECK(spec.eigenvalues(0) ==
          doctest::Approx(oracles::two_site_hubbard_ground(1.0, u)).epsilon(1e-12));
  }
  // U=0 non-interacting limit: two electrons in the bonding level
  const auto spec = eigendecompose(build_hubbard(chain(2), 1.0, 0.0, 1, 1));
  CHECK(spec.eigenvalues(0) == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("t=0 Hubbard matrix is diagonal") {
  const auto h = build_hubbard(chain(3), 0.0, 5.0, 2, 1);
  CHECK((h.matrix - Eigen::MatrixXd(h.matrix.diagonal().asDiagonal())).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("Hubbard matrix is exactly symmetric with U-counting diagonal") {
  const auto h = build_hubbard(chain(4), 1.0, 8.0, 2, 2);
  CHECK((h.matrix - h.matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);
  for (std::size_t j = 0; j < h.size(); ++j) {
    const std::uint64_t w = h.basis->word(j);
    int doubly = 0;
    for (int site = 0; site < 4; ++site)
      if (((w >> (2 * site)) & 1ull) && ((w >> (2 * site + 1)) & 1ull)) ++doubly;
    CHECK(h.matrix(j, j) == doctest::Approx(8.0 * doubly));
  }
}

TEST_CASE("direct Hubbard build agrees with the slow operator-application oracle") {
  for (const auto& lattice : {chain(4), grid(2, 2)}) {
    const auto h = build_hubbard(lattice, 1.0, 3.0, 2, 2);
    const auto slow = oracles::slow_sector_matrix(hubbard_terms(lattice, 1.0, 3.0), *h.basis);
    CHECK((h.matrix - slow).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("empty sector and inconsistent dims are rejected") {
  CHECK_THROWS_AS(build_hubbard(chain(2), 1.0, 1.0, 3, 0), std::invalid_argument);
  LatticeSpec bad{LatticeSpec::Kind::Grid, {4}};
  CHECK_THROWS_AS(build_hubbard(bad, 1.0, 1.0, 1, 1), std::invalid_argument);
}

TEST_CASE("half-filled FHM ground probabilities have spin-flip symmetry") {
  const auto h = build_hubbard(chain(4), 1.0, 8.0, 2, 2);
  const auto ground = ground_distribution(eigendecompose(h));
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto j = h.basis->index_of(spin_flip_word(h.basis->word(i), 4));
    CHECK(ground.probabilities(i) ==
          doctest::Approx(ground.probabilities(j)).epsilon(0).scale(1).epsilon(1e-10));
  }
}
