#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "oracles.hpp"
#include "qavmc/molecular.hpp"
#include "qavmc/spectral.hpp"

using namespace qavmc;

namespace {

std::string fixture(const std::string& name) { return std::string(QAVMC_FIXTURE_DIR "/") + name; }

std::string write_temp(const std::string& content) {
  static int counter = 0;
  const std::string path = "test_fcidump_" + std::to_string(counter++) + ".tmp";
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("fcidump records are routed by their zero-index pattern") {
  const auto path = write_temp(
      "&FCI NORB=2,NELEC=2,MS2=0,\n ORBSYM=1,1,\n ISYM=1,\n&END\n"
      " 0.75   1 1 1 1\n"
      "-1.25   1 1 0 0\n"
      " 0.5    0 0 0 0\n");
  const auto data = load_fcidump(path);
  std::remove(path.c_str());
  CHECK(data.ints.e_nuc == 0.5);
  CHECK(data.ints.one(0, 0) == -1.25);
  CHECK(data.n_elec == 2);
  CHECK(data.ints.two(0, 0, 0, 0) == 0.75);
}

TEST_CASE("fcidump populates all 8-fold symmetric images") {
  const auto path = write_temp(
      "&FCI NORB=3,NELEC=2,MS2=0,\n ORBSYM=1,1,1,\n ISYM=1,\n&END\n"
      " 0.4  2 1 3 1\n"
      " 0.0  0 0 0 0\n");
  const auto data = load_fcidump(path);
  std::remove(path.c_str());
  const auto& g = data.ints;
  for (const double v : {g.two(1, 0, 2, 0), g.two(0, 1, 2, 0), g.two(1, 0, 0, 2),
                         g.two(0, 1, 0, 2), g.two(2, 0, 1, 0), g.two(0, 2, 1, 0),
                         g.two(2, 0, 0, 1), g.two(0, 2, 0, 1)})
    CHECK(v == 0.4);
}

TEST_CASE("fcidump errors: malformed header, bad index, missing core energy") {
  const auto no_end = write_temp("&FCI NORB=2,NELEC=2,MS2=0,\n 1.0 1 1 0 0\n");
  CHECK_THROWS_AS(load_fcidump(no_end), std::runtime_error);
  std::remove(no_end.c_str());

  const auto bad_index = write_temp(
      "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n 1.0  5 1 0 0\n");
  CHECK_THROWS_AS(load_fcidump(bad_index), std::runtime_error);
  std::remove(bad_index.c_str());

  const auto no_core = write_temp("&FCI NORB=2,NELEC=2,MS2=0,\n&END\n 1.0 1 1 0 0\n");
  const auto data = load_fcidump(no_core);  // warns, treats core as 0
  std::remove(no_core.c_str());
  CHECK(data.ints.e_nuc == 0.0);

  CHECK_THROWS_AS(load_fcidump("does_not_exist.fcidump"), std::runtime_error);
}

TEST_CASE("hopping mix: gamma endpoints and the n=2 identity case") {
  MolecularIntegrals ints;
  ints.n_orb = 2;
  ints.h = {1.0, 0.0, 0.0, 1.0};
  ints.g.assign(16, 0.25);
  ints.e_nuc = 0.5;

  const auto unchanged = apply_hopping_mix(ints, 0.0);
  CHECK(unchanged.h == ints.h);
  CHECK(unchanged.g == ints.g);
  CHECK(unchanged.e_nuc == ints.e_nuc);

  // ||h||_F = sqrt(2), sqrt(n(n-1)) = sqrt(2): alpha = 1
  const auto mixed = apply_hopping_mix(ints, 0.5);
  CHECK(mixed.one(0, 0) == doctest::Approx(0.5));
  CHECK(mixed.one(0, 1) == doctest::Approx(-0.5));
  CHECK(mixed.one(1, 0) == doctest::Approx(-0.5));
  CHECK(mixed.one(1, 1) == doctest::Approx(0.5));
  CHECK(mixed.g == ints.g);  // two-body tensor bit-exact

  const auto full = apply_hopping_mix(ints, 1.0);
  CHECK(full.one(0, 0) == 0.0);
  CHECK(full.one(1, 1) == 0.0);
  CHECK(full.one(0, 1) == doctest::Approx(-1.0));

  CHECK_THROWS_AS(apply_hopping_mix(ints, 1.5), std::invalid_argument);
  MolecularIntegrals tiny;
  tiny.n_orb = 1;
  tiny.h = {1.0};
  tiny.g = {0.0};
  CHECK_THROWS_AS(apply_hopping_mix(tiny, 0.5), std::invalid_argument);
}

TEST_CASE("molecular builder: nuclear term and number-operator diagonal") {
  MolecularIntegrals ints;
  ints.n_orb = 2;
  ints.h.assign(4, 0.0);
  ints.g.assign(16, 0.0);
  ints.e_nuc = 1.5;
  const auto h0 = build_molecular(ints, 1, 1);
  CHECK((h0.matrix - 1.5 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

  // diagonal-only h: entries are occupied-orbital energy sums + e_nuc
  ints.h = {0.3, 0.0, 0.0, -0.7};
  const auto h1 = build_molecular(ints, 1, 1);
  for (std::size_t i = 0; i < h1.size(); ++i) {
    const std::uint64_t w = h1.basis->word(i);
    double expect = 1.5;
    for (int p = 0; p < 2; ++p)
      for (int sigma = 0; sigma < 2; ++sigma)
        if ((w >> (2 * p + sigma)) & 1ull) expect += ints.one(p, p);
    CHECK(h1.matrix(i, i) == doctest::Approx(expect).epsilon(1e-14));
  }
  for (std::size_t i = 0; i < h1.size(); ++i)
    for (std::size_t j = 0; j < h1.size(); ++j)
      if (i != j) CHECK(h1.matrix(i, j) == 0.0);
}

TEST_CASE("H2 fixture sector matrix matches the operator-application oracle") {
  const auto data = load_fcidump(fixture("h2_sto3g_oao_r0.74.fcidump"));
  const auto h = build_molecular(data.ints, 1, 1);
  CHECK(h.size() == 4);

  auto terms = molecular_terms(data.ints);
  Eigen::MatrixXd slow = oracles::slow_sector_matrix(terms, *h.basis);
  slow.diagonal().array() += data.ints.e_nuc;
  CHECK((h.matrix - slow).cwiseAbs().maxCoeff() < 1e-12);

  const auto spec = eigendecompose(h);
  const auto slow_spec = symmetric_eigenvalues(slow);
  CHECK(spec.eigenvalues(0) == doctest::Approx(slow_spec(0)).epsilon(1e-12));
  // STO-3G H2 near equilibrium
  CHECK(spec.eigenvalues(0) == doctest::Approx(-1.137270175).epsilon(1e-6));
}

TEST_CASE("molecular builder validates integral shapes") {
  MolecularIntegrals bad;
  bad.n_orb = 2;
  bad.h.assign(3, 0.0);
  bad.g.assign(16, 0.0);
  CHECK_THROWS_AS(build_molecular(bad, 1, 1), std::invalid_argument);
}
