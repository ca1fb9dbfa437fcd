#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "qavmc/cli.hpp"
#include "qavmc/diagnostics.hpp"
#include "qavmc/hubbard.hpp"
#include "qavmc/molecular.hpp"
#include "qavmc/scan.hpp"
#include "qavmc/vmc.hpp"

namespace py = pybind11;
using namespace qavmc;

namespace {

// pybind11 holders cannot be shared_ptr<const T>; bind mutable holders and
// const-cast at the boundary (the C++ API itself stays const-correct).
template <typename T>
std::shared_ptr<T> unconst(std::shared_ptr<const T> p) {
  return std::const_pointer_cast<T>(std::move(p));
}

LatticeSpec lattice_from(const std::string& kind, const std::vector<int>& dims) {
  LatticeSpec spec;
  if (kind == "chain")
    spec.kind = LatticeSpec::Kind::Chain;
  else if (kind == "grid")
    spec.kind = LatticeSpec::Kind::Grid;
  else
    throw std::invalid_argument("lattice kind must be 'chain' or 'grid'");
  spec.dims = dims;
  spec.n_sites();
  return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "quantum-assisted VMC core: sector Hamiltonians, proposal kernels, "
            "Markov-chain analysis, RBM-based VMC";

  py::class_<SectorBasis, std::shared_ptr<SectorBasis>>(m, "SectorBasis")
      .def(py::init<int, int, int>(), py::arg("n_orb"), py::arg("n_alpha"), py::arg("n_beta"))
      .def_property_readonly("n_orb", &SectorBasis::n_orb)
      .def_property_readonly("n_alpha", &SectorBasis::n_alpha)
      .def_property_readonly("n_beta", &SectorBasis::n_beta)
      .def_property_readonly("n_qubits", &SectorBasis::n_qubits)
      .def("__len__", &SectorBasis::size)
      .def("word", &SectorBasis::word)
      .def("index_of", &SectorBasis::index_of)
      .def("contains", &SectorBasis::contains)
      .def("words", [](const SectorBasis& b) { return b.words(); })
      .def("bitstring", [](const SectorBasis& b, std::size_t i) {
        return to_bitstring(b.word(i), b.n_qubits());
      });

  m.def("spin_flip_word", &spin_flip_word, py::arg("word"), py::arg("n_orb"));
  m.def("hamming", static_cast<int (*)(std::uint64_t, std::uint64_t)>(&hamming));

  py::class_<SectorHamiltonian>(m, "SectorHamiltonian")
      .def_property_readonly("basis",
                             [](const SectorHamiltonian& h) { return unconst(h.basis); })
      .def_property_readonly("matrix", [](const SectorHamiltonian& h) { return h.matrix; })
      .def_property_readonly("param_tag", [](const SectorHamiltonian& h) { return h.param_tag; })
      .def("__len__", &SectorHamiltonian::size);

  m.def(
      "build_hubbard",
      [](const std::string& kind, const std::vector<int>& dims, double t, double u, int n_alpha,
         int n_beta) { return build_hubbard(lattice_from(kind, dims), t, u, n_alpha, n_beta); },
      py::arg("kind"), py::arg("dims"), py::arg("t"), py::arg("U"), py::arg("n_alpha"),
      py::arg("n_beta"));

  py::class_<MolecularIntegrals>(m, "MolecularIntegrals")
      .def_property_readonly("n_orb", [](const MolecularIntegrals& i) { return i.n_orb; })
      .def_property_readonly("e_nuc", [](const MolecularIntegrals& i) { return i.e_nuc; })
      .def("one", &MolecularIntegrals::one)
      .def("two", &MolecularIntegrals::two);

  m.def("load_fcidump", [](const std::string& path) {
    const auto data = load_fcidump(path);
    return py::make_tuple(data.ints, data.n_elec, data.ms2);
  });
  m.def("apply_hopping_mix", &apply_hopping_mix, py::arg("ints"), py::arg("gamma_e"));
  m.def("build_molecular", &build_molecular, py::arg("ints"), py::arg("n_alpha"),
        py::arg("n_beta"));

  py::class_<Spectrum, std::shared_ptr<Spectrum>>(m, "Spectrum")
      .def_property_readonly("eigenvalues", [](const Spectrum& s) { return s.eigenvalues; })
      .def_property_readonly("eigenvectors", [](const Spectrum& s) { return s.eigenvectors; })
      .def("evolve_row",
           [](const Spectrum& s, std::size_t i, double tau) { return evolve_row(s, i, tau); });
  m.def("eigendecompose",
        [](const SectorHamiltonian& h) { return unconst(eigendecompose_shared(h)); });
  m.def("ground_probabilities",
        [](const Spectrum& spec) { return ground_distribution(spec).probabilities; });
  m.def("ground_energy", [](const Spectrum& spec) { return ground_distribution(spec).energy; });
  m.def("config_energy", &config_energy);
  m.def("delta_epsilon", &delta_epsilon);

  py::class_<RandomStream>(m, "RandomStream").def(py::init<std::uint64_t>());

  py::class_<ProposalKernel, std::shared_ptr<ProposalKernel>>(m, "ProposalKernel")
      .def("row", &ProposalKernel::row)
      .def("sample", &ProposalKernel::sample)
      .def_property_readonly("descriptor", &ProposalKernel::descriptor)
      .def("matrix", [](const ProposalKernel& k) { return assemble_matrix(k); });

  m.def("make_classical", [](const std::string& kind, std::shared_ptr<SectorBasis> basis) {
    return unconst(make_classical(proposal_kind_from_string(kind), std::move(basis)));
  });
  m.def(
      "make_quantum",
      [](std::shared_ptr<Spectrum> spec, double tau) {
        return unconst(make_quantum(std::move(spec), tau));
      },
      py::arg("spectrum"), py::arg("tau"));
  m.def("make_quantum_interval", [](std::shared_ptr<Spectrum> spec, double lo, double hi) {
    return unconst(make_quantum_interval(std::move(spec), lo, hi));
  });
  m.def("make_effective", [](std::shared_ptr<Spectrum> spec) {
    return unconst(make_effective(std::move(spec)));
  });
  m.def("quantum_matrix", &quantum_matrix);
  m.def("effective_matrix", &effective_matrix);

  m.def("build_transition_matrix", [](const Eigen::MatrixXd& q, const Eigen::VectorXd& pi) {
    return build_transition_matrix(q, pi).p;
  });
  m.def("spectral_gap_from_q", [](const Eigen::MatrixXd& q, const Eigen::VectorXd& pi) {
    return spectral_gap_from_q(q, pi);
  });
  m.def("mixing_time_bounds", [](double delta, const Eigen::VectorXd& pi, double eps) {
    const auto b = mixing_time_bounds(delta, pi, eps);
    return py::make_tuple(b.lower, b.upper);
  });
  m.def("exact_mixing_time", [](const Eigen::MatrixXd& q, const Eigen::VectorXd& pi, double eps) {
    const auto mix = exact_mixing_time(build_transition_matrix(q, pi), eps);
    return py::make_tuple(mix.steps, mix.converged);
  });

  m.def(
      "run_chain",
      [](const std::shared_ptr<ProposalKernel>& kernel, const Eigen::VectorXd& pi,
         std::size_t start, std::size_t steps, std::size_t burn_in, std::uint64_t seed) {
        const auto sample =
            run_chain(*kernel, log_target_from_probabilities(pi), start, steps, burn_in, seed);
        return py::make_tuple(sample.states, sample.acceptance_count);
      },
      py::arg("kernel"), py::arg("pi"), py::arg("start"), py::arg("steps"), py::arg("burn_in") = 0,
      py::arg("seed") = 1);

  m.def("autocovariance", &autocovariance);
  m.def("integrated_autocorr", [](const Eigen::VectorXd& series) {
    const auto r = integrated_autocorr(series);
    return py::make_tuple(r.tau_int, r.window, r.n_eff);
  });
  m.def("fit_scaling", [](const std::vector<std::pair<double, double>>& pts) {
    const auto f = fit_scaling(pts);
    return py::make_tuple(f.a, f.k, f.residual);
  });
  m.def("effective_runtime_ratio",
        [](double a_c, double k_c, double a_q, double k_q, double t_sc, double t_sq, double n) {
          return effective_runtime_ratio({a_c, k_c, 0.0, {}}, {a_q, k_q, 0.0, {}}, t_sc, t_sq, n);
        });

  m.def("tau_grid", &tau_grid);
  m.def("quantum_gap_tau_scan",
        [](const SectorHamiltonian& h, const Eigen::VectorXd& pi, const std::vector<double>& taus) {
          const auto scan = quantum_gap_tau_scan(h, pi, taus);
          return py::make_tuple(scan.deltas, scan.delta_max, scan.tau_at_max);
        });

  m.def(
      "vmc_optimize",
      [](const SectorHamiltonian& h, const std::shared_ptr<ProposalKernel>& kernel,
         int iterations, int n_samples,
         bool exact_enumeration, double alpha, double learning_rate, double sr_shift,
         std::uint64_t seed) {
        VmcOptions options;
        options.iterations = iterations;
        options.n_samples = n_samples;
        options.exact_enumeration = exact_enumeration;
        options.alpha_density = alpha;
        options.learning_rate = learning_rate;
        options.sr_shift = sr_shift;
        options.seed = seed;
        const auto result = vmc_optimize(h, kernel, options);
        std::vector<double> energies;
        for (const auto& rec : result.trajectory) energies.push_back(rec.energy);
        return py::make_tuple(energies, result.aborted);
      },
      py::arg("hamiltonian"), py::arg("kernel"), py::arg("iterations") = 200,
      py::arg("n_samples") = 500, py::arg("exact_enumeration") = false, py::arg("alpha") = 3.0,
      py::arg("learning_rate") = 0.01, py::arg("sr_shift") = 0.01, py::arg("seed") = 1);

  m.def("run_subcommand", [](const std::string& name, const std::string& config_json) {
    return cli::run_subcommand_json(name, nlohmann::json::parse(config_json));
  });
}
