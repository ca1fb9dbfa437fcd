#include "qavmc/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "qavmc/diagnostics.hpp"
#include "qavmc/hubbard.hpp"
#include "qavmc/io.hpp"
#include "qavmc/molecular.hpp"
#include "qavmc/scan.hpp"
#include "qavmc/vmc.hpp"

namespace qavmc::cli {

using nlohmann::json;

const std::vector<std::string> kSubcommands = {
    "gap-scan", "gap-size", "tau-threshold", "histogram",
    "mcmc-observable", "vmc", "mixing-time"};

namespace {

std::string fd(double v) { return format_double(v); }

// shortest round-trip decimal, for human-facing labels
std::string short_num(double v) { return json(v).dump(); }

// ---------- config access ----------

const json& require(const json& j, const std::string& key, const std::string& context) {
  if (!j.contains(key))
    throw ValidationError("missing required field '" + context + "." + key + "'");
  return j.at(key);
}

const json& require_nonempty(const json& j, const std::string& key, const std::string& context) {
  const auto& v = require(j, key, context);
  if (!v.is_array() || v.empty())
    throw ValidationError("field '" + context + "." + key + "' must be a non-empty list");
  return v;
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

std::string slug(std::string s) {
  for (auto& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  return s;
}

// ---------- system ----------

struct System {
  bool hubbard = true;
  LatticeSpec lattice;
  double t = 1.0;
  double u = 0.0;
  MolecularIntegrals ints;
  std::string fcidump_path;
  std::string molecule_class = "h_chain";  // selects the default tau grid
  int n_alpha = 0, n_beta = 0;
  SectorHamiltonian h;
  std::string label;
};

LatticeSpec parse_lattice(const json& lat) {
  LatticeSpec spec;
  const auto kind = require(lat, "kind", "system.lattice").get<std::string>();
  if (kind == "chain")
    spec.kind = LatticeSpec::Kind::Chain;
  else if (kind == "grid")
    spec.kind = LatticeSpec::Kind::Grid;
  else
    throw ValidationError("system.lattice.kind must be 'chain' or 'grid'");
  spec.dims = require(lat, "dims", "system.lattice").get<std::vector<int>>();
  spec.n_sites();  // validates
  return spec;
}

System build_system(const json& sys_j) {
  System sys;
  const auto type = require(sys_j, "type", "system").get<std::string>();
  if (type == "hubbard") {
    sys.hubbard = true;
    sys.lattice = parse_lattice(require(sys_j, "lattice", "system"));
    sys.t = get_or(sys_j, "t", 1.0);
    sys.u = require(sys_j, "U", "system").get<double>();
    const int sites = sys.lattice.n_sites();
    if (sys_j.contains("sector")) {
      const auto sector = sys_j.at("sector").get<std::vector<int>>();
      if (sector.size() != 2) throw ValidationError("system.sector must be [n_alpha, n_beta]");
      sys.n_alpha = sector[0];
      sys.n_beta = sector[1];
    } else {
      sys.n_alpha = (sites + 1) / 2;  // half filling
      sys.n_beta = sites / 2;
    }
    sys.h = build_hubbard(sys.lattice, sys.t, sys.u, sys.n_alpha, sys.n_beta);
    sys.label = "U=" + fd(sys.u);
  } else if (type == "molecule") {
    sys.hubbard = false;
    sys.fcidump_path = require(sys_j, "fcidump", "system").get<std::string>();
    if (!std::filesystem::exists(sys.fcidump_path))
      throw ValidationError("system.fcidump: file not found: " + sys.fcidump_path);
    const auto data = load_fcidump(sys.fcidump_path);
    sys.ints = data.ints;
    sys.molecule_class = get_or<std::string>(sys_j, "class", "h_chain");
    if (sys.molecule_class != "h_chain" && sys.molecule_class != "h2o")
      throw ValidationError("system.class must be 'h_chain' or 'h2o'");
    if (sys_j.contains("sector")) {
      const auto sector = sys_j.at("sector").get<std::vector<int>>();
      if (sector.size() != 2) throw ValidationError("system.sector must be [n_alpha, n_beta]");
      sys.n_alpha = sector[0];
      sys.n_beta = sector[1];
    } else {
      sys.n_alpha = (data.n_elec + data.ms2) / 2;
      sys.n_beta = (data.n_elec - data.ms2) / 2;
    }
    sys.h = build_molecular(sys.ints, sys.n_alpha, sys.n_beta);
    sys.label = std::filesystem::path(sys.fcidump_path).stem().string();
  } else {
    throw ValidationError("system.type must be 'hubbard' or 'molecule'");
  }
  return sys;
}

// ---------- proposals ----------

bool is_quantum_kind(ProposalKind k) {
  return k == ProposalKind::Quantum || k == ProposalKind::Effective ||
         k == ProposalKind::QuantumAveraged;
}

std::vector<double> gamma_grid(const json& prop) {
  // "gamma_e": number, or {"interval": [lo, hi], "points": n}
  if (!prop.contains("gamma_e")) return {};
  const auto& g = prop.at("gamma_e");
  if (g.is_number()) return {g.get<double>()};
  const auto interval = require(g, "interval", "proposal.gamma_e").get<std::vector<double>>();
  if (interval.size() != 2) throw ValidationError("proposal.gamma_e.interval must be [lo, hi]");
  const int points = get_or(g, "points", 7);
  if (points < 1) throw ValidationError("proposal.gamma_e.points must be >= 1");
  std::vector<double> grid;
  for (int k = 0; k < points; ++k)
    grid.push_back(points == 1 ? 0.5 * (interval[0] + interval[1])
                               : interval[0] + k * (interval[1] - interval[0]) / (points - 1));
  return grid;
}

/// Evolution Hamiltonians H(x_e) behind a quantum-kind proposal. More than
/// one entry when gamma_e is an interval (quadrature grid).
std::vector<SectorHamiltonian> evolution_hams(const json& prop, const System& sys) {
  if (sys.hubbard) {
    const double u_e = get_or(prop, "u_e", sys.u);
    if (prop.contains("gamma_e"))
      throw ValidationError("proposal.gamma_e applies to molecular systems only");
    return {build_hubbard(sys.lattice, sys.t, u_e, sys.n_alpha, sys.n_beta)};
  }
  MolecularIntegrals base = sys.ints;
  if (prop.contains("fcidump_e")) {
    const auto path = prop.at("fcidump_e").get<std::string>();
    if (!std::filesystem::exists(path))
      throw ValidationError("proposal.fcidump_e: file not found: " + path);
    base = load_fcidump(path).ints;
  }
  const auto gammas = gamma_grid(prop);
  std::vector<SectorHamiltonian> out;
  if (gammas.empty()) {
    out.push_back(build_molecular(base, sys.n_alpha, sys.n_beta));
  } else {
    for (const double g : gammas)
      out.push_back(build_molecular(apply_hopping_mix(base, g), sys.n_alpha, sys.n_beta));
  }
  return out;
}

std::vector<double> default_tau_grid(const System& sys) {
  if (sys.hubbard) return tau_grid(0.1, 20.0, 0.2);
  if (sys.molecule_class == "h2o") return tau_grid(0.1, 40.0, 0.2);
  return tau_grid(0.1, 60.0, 0.2);
}

std::vector<double> proposal_tau_grid(const json& prop, const json& experiment,
                                      const System& sys) {
  for (const json* src : {&prop, &experiment}) {
    if (src->contains("tau_grid")) {
      const auto g = src->at("tau_grid").get<std::vector<double>>();
      if (g.size() != 3) throw ValidationError("tau_grid must be [start, stop, step]");
      return tau_grid(g[0], g[1], g[2]);
    }
  }
  return default_tau_grid(sys);
}

std::string proposal_label(const json& prop, const System& sys) {
  if (prop.contains("label")) return prop.at("label").get<std::string>();
  const auto kind = proposal_kind_from_string(require(prop, "kind", "proposal").get<std::string>());
  std::string name = to_string(kind);
  if (!is_quantum_kind(kind)) return name;
  if (sys.hubbard) {
    if (prop.contains("u_e")) name += "(U_e=" + short_num(prop.at("u_e").get<double>()) + ")";
  } else {
    if (prop.contains("fcidump_e")) name += "(R_e)";
    if (prop.contains("gamma_e")) {
      const auto& g = prop.at("gamma_e");
      name += g.is_number() ? "(hopping,g=" + short_num(g.get<double>()) + ")"
                            : "(hopping,random)";
    }
  }
  return name;
}

/// Kernel used by chain-based experiments (mcmc-observable, vmc, histogram).
KernelPtr chain_kernel(const json& prop, const System& sys, const json& experiment) {
  const auto kind = proposal_kind_from_string(require(prop, "kind", "proposal").get<std::string>());
  if (!is_quantum_kind(kind)) return make_classical(kind, sys.h.basis);

  std::vector<SpectrumPtr> specs;
  for (const auto& h : evolution_hams(prop, sys)) specs.push_back(eigendecompose_shared(h));

  if (kind == ProposalKind::Effective) {
    std::vector<KernelPtr> parts;
    for (const auto& s : specs) parts.push_back(make_effective(s));
    return parts.size() == 1 ? parts.front() : make_mixture(std::move(parts));
  }

  if (kind == ProposalKind::QuantumAveraged) {
    const auto grid = proposal_tau_grid(prop, experiment, sys);
    std::vector<std::pair<SpectrumPtr, double>> components;
    for (const auto& s : specs)
      for (const double tau : grid) components.emplace_back(s, tau);
    return make_quantum_averaged(std::move(components));
  }

  // Quantum: fixed tau or per-step tau draw from an interval
  double tau_lo, tau_hi;
  bool interval;
  if (prop.contains("tau")) {
    const auto& tj = prop.at("tau");
    if (tj.is_number()) {
      tau_lo = tau_hi = tj.get<double>();
      interval = false;
    } else {
      const auto iv = tj.get<std::vector<double>>();
      if (iv.size() != 2) throw ValidationError("proposal.tau must be a number or [lo, hi]");
      tau_lo = iv[0];
      tau_hi = iv[1];
      interval = true;
    }
  } else {
    const auto grid = proposal_tau_grid(prop, experiment, sys);
    tau_lo = grid.front();
    tau_hi = grid.back();
    interval = true;
  }
  std::vector<KernelPtr> parts;
  for (const auto& s : specs)
    parts.push_back(interval ? make_quantum_interval(s, tau_lo, tau_hi) : make_quantum(s, tau_lo));
  return parts.size() == 1 ? parts.front() : make_mixture(std::move(parts));
}

struct GapResult {
  double delta = 0.0;
  double tau_at_max = 0.0;
  bool has_tau = false;
};

/// Gap of one proposal against pi, following the scan protocol for quantum
/// kernels (max over the tau grid).
GapResult proposal_gap(const json& prop, const System& sys, const Eigen::VectorXd& pi,
                       const json& experiment) {
  const auto kind = proposal_kind_from_string(require(prop, "kind", "proposal").get<std::string>());
  GapResult r;
  if (!is_quantum_kind(kind)) {
    r.delta = kernel_gap(*make_classical(kind, sys.h.basis), pi);
    return r;
  }
  const auto hams = evolution_hams(prop, sys);
  if (kind == ProposalKind::Effective) {
    Eigen::MatrixXd q;
    for (const auto& h : hams) {
      const Eigen::MatrixXd m = effective_matrix(eigendecompose(h));
      q = q.size() == 0 ? m : (q + m).eval();
    }
    if (hams.size() > 1) q /= static_cast<double>(hams.size());
    r.delta = spectral_gap_from_q(q, pi);
    return r;
  }
  std::vector<const SectorHamiltonian*> ptrs;
  for (const auto& h : hams) ptrs.push_back(&h);
  const auto grid = proposal_tau_grid(prop, experiment, sys);
  if (kind == ProposalKind::QuantumAveraged) {
    // the explicitly tau-averaged kernel has a single gap, no max-over-tau
    std::vector<SpectrumPtr> specs;
    for (const auto& h : hams) specs.push_back(eigendecompose_shared(h));
    std::vector<std::pair<SpectrumPtr, double>> components;
    for (const auto& s : specs)
      for (const double tau : grid) components.emplace_back(s, tau);
    r.delta = kernel_gap(*make_quantum_averaged(std::move(components)), pi);
    return r;
  }
  const auto scan = quantum_gap_tau_scan_multi(ptrs, pi, grid);
  r.delta = scan.delta_max;
  r.tau_at_max = scan.tau_at_max;
  r.has_tau = true;
  return r;
}

// ---------- shared experiment pieces ----------

Observable observable_from(const json& experiment, const System& sys) {
  const int n_orb = sys.h.basis->n_orb();
  if (!experiment.contains("observable"))
    return density_pair_observable(0, 0, n_orb - 1, 1);  // n_{1,alpha} n_{N,beta}
  const auto& o = experiment.at("observable");
  auto spin_of = [](const std::string& s) {
    if (s == "alpha") return 0;
    if (s == "beta") return 1;
    throw ValidationError("observable spin must be 'alpha' or 'beta'");
  };
  const int site_a = require(o, "site_a", "experiment.observable").get<int>() - 1;
  const int site_b = require(o, "site_b", "experiment.observable").get<int>() - 1;
  if (site_a < 0 || site_a >= n_orb || site_b < 0 || site_b >= n_orb)
    throw ValidationError("experiment.observable sites outside the lattice");
  return density_pair_observable(site_a,
                                 spin_of(require(o, "spin_a", "experiment.observable")),
                                 site_b,
                                 spin_of(require(o, "spin_b", "experiment.observable")));
}

std::size_t start_index_from(const json& experiment, const System& sys,
                             const GroundStateDistribution& ground) {
  const auto start = get_or<std::string>(experiment, "start", "argmax");
  if (start == "argmax") {
    Eigen::Index at = 0;
    ground.probabilities.maxCoeff(&at);
    return static_cast<std::size_t>(at);
  }
  return sys.h.basis->index_of(from_bitstring(start));
}

json provenance(const std::string& hash, std::uint64_t seed) {
  json j;
  j["schema_version"] = 1;
  j["config_hash"] = hash;
  j["seed"] = seed;
  return j;
}

void write_json(OutputTracker& out, const std::string& name, const json& j) {
  const auto path = out.claim(name);
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open output file: " + path.string());
  f << j.dump(2) << "\n";
}

struct Ctx {
  json config;
  std::string hash;
  std::uint64_t seed = 0;
  OutputTracker* out = nullptr;
};

// ---------- subcommands ----------

void run_gap_scan(Ctx& ctx) {
  const auto& experiment = get_or(ctx.config, "experiment", json::object());
  const auto& proposals = require_nonempty(ctx.config, "proposals", "config");
  json base_sys = require(ctx.config, "system", "config");

  std::vector<json> variants;  // one system block per scanned parameter
  std::vector<std::string> labels;
  if (base_sys.at("type") == "hubbard") {
    for (const double u : require_nonempty(experiment, "u_values", "experiment").get<std::vector<double>>()) {
      json s = base_sys;
      s["U"] = u;
      variants.push_back(s);
      labels.push_back(fd(u));
    }
  } else {
    for (const auto& f : require_nonempty(experiment, "fcidumps", "experiment")) {
      json s = base_sys;
      s["fcidump"] = require(f, "path", "experiment.fcidumps[]").get<std::string>();
      variants.push_back(s);
      labels.push_back(require(f, "label", "experiment.fcidumps[]").is_string()
                           ? f.at("label").get<std::string>()
                           : fd(f.at("label").get<double>()));
    }
  }

  CsvWriter csv(ctx.out->claim("gap_scan.csv"), "gap-scan", ctx.hash, ctx.seed,
                {"param", "kernel", "n_states", "delta", "tau_at_max"});
  for (std::size_t v = 0; v < variants.size(); ++v) {
    const System sys = build_system(variants[v]);
    const auto ground = ground_distribution(eigendecompose(sys.h));
    for (const auto& prop : proposals) {
      const auto gap = proposal_gap(prop, sys, ground.probabilities, experiment);
      csv.row({labels[v], proposal_label(prop, sys), std::to_string(sys.h.size()),
               fd(gap.delta), gap.has_tau ? fd(gap.tau_at_max) : ""});
    }
  }
}

void run_gap_size(Ctx& ctx) {
  const auto& experiment = require(ctx.config, "experiment", "config");
  const auto& proposals = require_nonempty(ctx.config, "proposals", "config");
  json base_sys = require(ctx.config, "system", "config");

  std::vector<json> variants;
  std::vector<double> sizes;
  if (base_sys.at("type") == "hubbard") {
    if (parse_lattice(require(base_sys, "lattice", "system")).kind != LatticeSpec::Kind::Chain)
      throw ValidationError("gap-size sizes apply to chain lattices");
    for (const int n : require_nonempty(experiment, "sizes", "experiment").get<std::vector<int>>()) {
      json s = base_sys;
      s["lattice"]["dims"] = {n};
      s.erase("sector");
      variants.push_back(s);
      sizes.push_back(n);
    }
  } else {
    for (const auto& f : require_nonempty(experiment, "sizes", "experiment")) {
      json s = base_sys;
      s["fcidump"] = require(f, "path", "experiment.sizes[]").get<std::string>();
      variants.push_back(s);
      sizes.push_back(require(f, "n", "experiment.sizes[]").get<double>());
    }
  }

  std::map<std::string, std::vector<std::pair<double, double>>> fit_points;
  CsvWriter csv(ctx.out->claim("gap_size.csv"), "gap-size", ctx.hash, ctx.seed,
                {"size", "kernel", "n_states", "delta", "tau_at_max"});
  for (std::size_t v = 0; v < variants.size(); ++v) {
    const System sys = build_system(variants[v]);
    const auto ground = ground_distribution(eigendecompose(sys.h));
    for (const auto& prop : proposals) {
      const auto gap = proposal_gap(prop, sys, ground.probabilities, experiment);
      const auto label = proposal_label(prop, sys);
      fit_points[label].emplace_back(sizes[v], gap.delta);
      csv.row({fd(sizes[v]), label, std::to_string(sys.h.size()), fd(gap.delta),
               gap.has_tau ? fd(gap.tau_at_max) : ""});
    }
  }

  json fits = provenance(ctx.hash, ctx.seed);
  for (const auto& [label, points] : fit_points) {
    const auto fit = fit_scaling(points);
    json fj;
    fj["a"] = fit.a;
    fj["k"] = fit.k;
    fj["residual"] = fit.residual;
    for (const auto& [n, d] : points) fj["points"].push_back({n, d});
    fits["fits"][label] = fj;
  }
  write_json(*ctx.out, "gap_size_fits.json", fits);
}

void run_tau_threshold(Ctx& ctx) {
  const auto& experiment = require(ctx.config, "experiment", "config");
  const auto& proposals = require_nonempty(ctx.config, "proposals", "config");
  json base_sys = require(ctx.config, "system", "config");
  const auto c_values = require(experiment, "c_values", "experiment").get<std::vector<double>>();

  std::vector<json> variants;
  std::vector<double> sizes;
  if (base_sys.at("type") == "hubbard") {
    for (const int n : require_nonempty(experiment, "sizes", "experiment").get<std::vector<int>>()) {
      json s = base_sys;
      s["lattice"]["dims"] = {n};
      s.erase("sector");
      variants.push_back(s);
      sizes.push_back(n);
    }
  } else {
    for (const auto& f : require_nonempty(experiment, "sizes", "experiment")) {
      json s = base_sys;
      s["fcidump"] = require(f, "path", "experiment.sizes[]").get<std::string>();
      variants.push_back(s);
      sizes.push_back(require(f, "n", "experiment.sizes[]").get<double>());
    }
  }

  CsvWriter csv(ctx.out->claim("tau_threshold.csv"), "tau-threshold", ctx.hash, ctx.seed,
                {"size", "kernel", "c", "tau", "found", "delta_eff"});
  for (std::size_t v = 0; v < variants.size(); ++v) {
    const System sys = build_system(variants[v]);
    const auto ground = ground_distribution(eigendecompose(sys.h));
    for (const auto& prop : proposals) {
      const auto kind =
          proposal_kind_from_string(require(prop, "kind", "proposal").get<std::string>());
      if (kind != ProposalKind::Quantum)
        throw ValidationError("tau-threshold expects Quantum proposals only");
      const auto hams = evolution_hams(prop, sys);
      std::vector<const SectorHamiltonian*> ptrs;
      for (const auto& h : hams) ptrs.push_back(&h);
      const auto grid = proposal_tau_grid(prop, experiment, sys);
      const auto scan = quantum_gap_tau_scan_multi(ptrs, ground.probabilities, grid);

      // delta_eff of the same evolution Hamiltonian(s)
      Eigen::MatrixXd q_eff;
      for (const auto& h : hams) {
        const Eigen::MatrixXd m = effective_matrix(eigendecompose(h));
        q_eff = q_eff.size() == 0 ? m : (q_eff + m).eval();
      }
      if (hams.size() > 1) q_eff /= static_cast<double>(hams.size());
      const double delta_eff = spectral_gap_from_q(q_eff, ground.probabilities);

      for (const double c : c_values) {
        const auto th = tau_threshold(scan.taus, scan.deltas, delta_eff, c);
        csv.row({fd(sizes[v]), proposal_label(prop, sys), fd(c),
                 th.found ? fd(th.tau) : "", th.found ? "1" : "0", fd(delta_eff)});
      }
    }
  }
}

void run_histogram(Ctx& ctx) {
  const auto& experiment = get_or(ctx.config, "experiment", json::object());
  const auto& proposals = require_nonempty(ctx.config, "proposals", "config");
  const System sys = build_system(require(ctx.config, "system", "config"));
  const auto ground = ground_distribution(eigendecompose(sys.h));
  const auto start = start_index_from(experiment, sys, ground);
  const auto range = get_or(experiment, "range", std::vector<double>{-8.0, 8.0});
  if (range.size() != 2) throw ValidationError("experiment.range must be [lo, hi]");

  CsvWriter csv(ctx.out->claim("histogram.csv"), "histogram", ctx.hash, ctx.seed,
                {"kernel", "hamming", "de_lo", "de_hi", "weight"});
  json summary = provenance(ctx.hash, ctx.seed);
  summary["start_state"] = to_bitstring(sys.h.basis->word(start), sys.h.basis->n_qubits());
  for (const auto& prop : proposals) {
    const auto kernel = chain_kernel(prop, sys, experiment);
    const auto label = proposal_label(prop, sys);
    const auto hist = proposal_histogram(kernel->row(start), *sys.h.basis, ground.probabilities,
                                         start, range[0], range[1]);
    const auto n_bins = hist.weights.cols();
    for (int d = 0; d < hist.weights.rows(); ++d)
      for (Eigen::Index b = 0; b < n_bins; ++b) {
        if (hist.weights(d, b) == 0.0) continue;
        const std::string lo = b == 0 ? "-inf" : fd(hist.delta_eps_edges(b - 1));
        const std::string hi = b == n_bins - 1 ? "inf" : fd(hist.delta_eps_edges(b));
        csv.row({label, std::to_string(d), lo, hi, fd(hist.weights(d, b))});
      }
    summary["kernels"][label] = {{"self_mass", hist.self_mass},
                                 {"total_weight", hist.total_weight}};
  }
  write_json(*ctx.out, "histogram_summary.json", summary);
}

void run_mcmc_observable(Ctx& ctx) {
  const auto& experiment = require(ctx.config, "experiment", "config");
  const auto& proposals = require_nonempty(ctx.config, "proposals", "config");
  const System sys = build_system(require(ctx.config, "system", "config"));
  const auto ground = ground_distribution(eigendecompose(sys.h));
  const auto obs = observable_from(experiment, sys);
  const auto start = start_index_from(experiment, sys, ground);
  const int n_chains = get_or(experiment, "n_chains", 100);
  const auto sample_sizes =
      require_nonempty(experiment, "n_samples", "experiment").get<std::vector<std::size_t>>();
  const double burn_fraction = get_or(experiment, "burn_in_fraction", 0.1);
  const int write_chains = get_or(experiment, "write_chains", 0);

  double reference = 0.0;
  for (std::size_t i = 0; i < sys.h.size(); ++i)
    reference += ground.probabilities(static_cast<Eigen::Index>(i)) *
                 obs.eval(sys.h.basis->word(i));

  const auto log_pi = log_target_from_probabilities(ground.probabilities);
  CsvWriter csv(ctx.out->claim("mcmc_observable.csv"), "mcmc-observable", ctx.hash, ctx.seed,
                {"kernel", "n_samples", "n_chains", "reference", "pooled_mean", "mae", "sigma",
                 "tau_int_mean"});
  for (const auto& prop : proposals) {
    const auto kernel = chain_kernel(prop, sys, experiment);
    const auto label = proposal_label(prop, sys);
    for (const auto n_samples : sample_sizes) {
      const auto burn = static_cast<std::size_t>(burn_fraction * n_samples);
      const auto chains = run_chains(*kernel, log_pi, start, n_chains, n_samples, burn,
                                     derive_seed(ctx.seed, "mcmc/" + label), {obs});
      const auto est = estimate_observable(chains, 0, reference);
      double tau_sum = 0.0;
      for (const auto& c : chains) tau_sum += integrated_autocorr(c.observable_series[0]).tau_int;
      csv.row({label, std::to_string(n_samples), std::to_string(n_chains), fd(reference),
               fd(est.pooled_mean), fd(est.max_abs_error), fd(est.std_dev),
               fd(tau_sum / n_chains)});
      for (int k = 0; k < write_chains && k < static_cast<int>(chains.size()); ++k) {
        CsvWriter ccsv(ctx.out->claim("chain_" + slug(label) + "_" + std::to_string(k) + ".csv"),
                       "chain-sample", ctx.hash, chains[k].seed,
                       {"step", "state", "accepted", obs.name});
        for (std::size_t s = 0; s < chains[k].states.size(); ++s)
          ccsv.row({std::to_string(s),
                    to_bitstring(sys.h.basis->word(chains[k].states[s]), sys.h.basis->n_qubits()),
                    std::to_string(int(chains[k].accepted[s])),
                    fd(chains[k].observable_series[0](static_cast<Eigen::Index>(s)))});
      }
    }
  }
}

void run_vmc(Ctx& ctx) {
  const auto& experiment = require(ctx.config, "experiment", "config");
  const auto& proposals = require_nonempty(ctx.config, "proposals", "config");
  const System sys = build_system(require(ctx.config, "system", "config"));
  const auto obs = observable_from(experiment, sys);

  VmcOptions options;
  options.iterations = get_or(experiment, "iterations", 500);
  options.n_samples = get_or(experiment, "n_samples", 1000);
  options.n_chains = get_or(experiment, "n_chains", 1);
  options.alpha_density = get_or(experiment, "alpha", 3.0);
  options.learning_rate = get_or(experiment, "learning_rate", 0.01);
  options.sr_shift = get_or(experiment, "sr_shift", 0.01);
  options.init_sigma = get_or(experiment, "init_sigma", 0.01);
  options.warm_start = get_or(experiment, "warm_start", true);
  options.observables = {obs};

  const auto spec = eigendecompose(sys.h);
  json summary = provenance(ctx.hash, ctx.seed);
  summary["exact_ground_energy"] = spec.eigenvalues(0);

  auto write_trajectory = [&](const std::string& label, const VmcResult& result) {
    CsvWriter csv(ctx.out->claim("vmc_" + slug(label) + ".csv"), "vmc", ctx.hash, ctx.seed,
                  {"iteration", "energy", "acceptance_rate", obs.name});
    for (const auto& rec : result.trajectory)
      csv.row({std::to_string(rec.iteration), fd(rec.energy), fd(rec.acceptance_rate),
               fd(rec.observables[0])});
    summary["kernels"][label] = {
        {"final_energy", result.trajectory.empty() ? 0.0 : result.trajectory.back().energy},
        {"aborted", result.aborted}};
    // checkpoint with shape-tagged arrays
    json ck = provenance(ctx.hash, ctx.seed);
    ck["n_visible"] = result.final_params.n_visible();
    ck["n_hidden"] = result.final_params.n_hidden();
    for (const auto& [name, blk] :
         {std::pair<std::string, const RbmBlock*>{"amplitude", &result.final_params.amplitude},
          {"phase", &result.final_params.phase}}) {
      json bj;
      bj["a"] = std::vector<double>(blk->a.data(), blk->a.data() + blk->a.size());
      bj["b"] = std::vector<double>(blk->b.data(), blk->b.data() + blk->b.size());
      json rows = json::array();
      for (Eigen::Index mu = 0; mu < blk->w.rows(); ++mu)
        rows.push_back(std::vector<double>(blk->w.row(mu).begin(), blk->w.row(mu).end()));
      bj["w"] = rows;
      ck[name] = bj;
    }
    write_json(*ctx.out, "vmc_" + slug(label) + "_params.json", ck);
  };

  if (get_or(experiment, "exact_reference", true)) {
    VmcOptions exact = options;
    exact.exact_enumeration = true;
    exact.seed = derive_seed(ctx.seed, "vmc/exact");
    write_trajectory("exact", vmc_optimize(sys.h, make_uniform(sys.h.basis), exact));
  }
  for (const auto& prop : proposals) {
    const auto label = proposal_label(prop, sys);
    VmcOptions run = options;
    run.seed = derive_seed(ctx.seed, "vmc/" + label);
    write_trajectory(label, vmc_optimize(sys.h, chain_kernel(prop, sys, experiment), run));
  }
  write_json(*ctx.out, "vmc_summary.json", summary);
}

void run_mixing_time(Ctx& ctx) {
  const auto& experiment = get_or(ctx.config, "experiment", json::object());
  const auto& proposals = require_nonempty(ctx.config, "proposals", "config");
  const System sys = build_system(require(ctx.config, "system", "config"));
  const auto ground = ground_distribution(eigendecompose(sys.h));
  const double eps = get_or(experiment, "epsilon", 0.01);
  const auto exact_limit = get_or<std::size_t>(experiment, "exact_limit", 1000);

  CsvWriter csv(ctx.out->claim("mixing_time.csv"), "mixing-time", ctx.hash, ctx.seed,
                {"kernel", "tau", "delta", "lower_bound", "upper_bound", "t_mix",
                 "t_mix_converged", "epsilon"});
  for (const auto& prop : proposals) {
    const auto kind =
        proposal_kind_from_string(require(prop, "kind", "proposal").get<std::string>());
    std::string tau_cell;
    Eigen::MatrixXd q;
    if (kind == ProposalKind::Quantum) {
      double tau;
      if (prop.contains("tau") && prop.at("tau").is_number()) {
        tau = prop.at("tau").get<double>();
      } else {
        // default to the gap-maximizing tau on the scan grid
        const auto hams = evolution_hams(prop, sys);
        std::vector<const SectorHamiltonian*> ptrs;
        for (const auto& h : hams) ptrs.push_back(&h);
        tau = quantum_gap_tau_scan_multi(ptrs, ground.probabilities,
                                         proposal_tau_grid(prop, experiment, sys))
                  .tau_at_max;
      }
      tau_cell = fd(tau);
      const auto hams = evolution_hams(prop, sys);
      for (const auto& h : hams) {
        const Eigen::MatrixXd m = quantum_matrix(eigendecompose(h), tau);
        q = q.size() == 0 ? m : (q + m).eval();
      }
      if (hams.size() > 1) q /= static_cast<double>(hams.size());
    } else {
      q = assemble_matrix(*chain_kernel(prop, sys, experiment));
    }

    const auto masked = build_transition_matrix_masked(q, ground.probabilities);
    const double delta = spectral_gap(masked.tm);
    std::string lower = "", upper = "", steps = "", converged = "";
    if (delta > 0.0) {
      const auto bounds = mixing_time_bounds(delta, masked.tm.pi, eps);
      lower = fd(bounds.lower);
      upper = fd(bounds.upper);
    }
    if (masked.tm.p.rows() <= static_cast<Eigen::Index>(exact_limit)) {
      const auto mix = exact_mixing_time(masked.tm, eps);
      steps = std::to_string(mix.steps);
      converged = mix.converged ? "1" : "0";
    }
    csv.row({proposal_label(prop, sys), tau_cell, fd(delta), lower, upper, steps, converged,
             fd(eps)});
  }
}

}  // namespace

int run_subcommand_json(const std::string& name, json config) {
  try {
    if (std::find(kSubcommands.begin(), kSubcommands.end(), name) == kSubcommands.end())
      throw ValidationError("unknown subcommand: " + name);
    if (!config.contains("seed") || !config.at("seed").is_number_integer() ||
        config.at("seed").get<std::int64_t>() < 0)
      throw ValidationError("missing required field 'seed' (no wall-clock seeding)");

    Ctx ctx;
    ctx.config = std::move(config);
    ctx.seed = ctx.config.at("seed").get<std::uint64_t>();
    ctx.hash = [&] {
      std::ostringstream hex;
      hex << std::hex << fnv1a64(ctx.config.dump());
      return hex.str();
    }();

    std::filesystem::path dir = get_or<std::string>(ctx.config, "output_dir", "out");
    if (const char* root = std::getenv("QAVMC_OUTPUT_ROOT")) dir = std::filesystem::path(root) / dir;
    OutputTracker tracker(dir);
    ctx.out = &tracker;

    try {
      if (name == "gap-scan")
        run_gap_scan(ctx);
      else if (name == "gap-size")
        run_gap_size(ctx);
      else if (name == "tau-threshold")
        run_tau_threshold(ctx);
      else if (name == "histogram")
        run_histogram(ctx);
      else if (name == "mcmc-observable")
        run_mcmc_observable(ctx);
      else if (name == "vmc")
        run_vmc(ctx);
      else if (name == "mixing-time")
        run_mixing_time(ctx);
      return 0;
    } catch (...) {
      tracker.discard_all();
      throw;
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int run_subcommand(const std::string& name, const std::string& config_path,
                   const Overrides& overrides) {
  json config;
  try {
    std::ifstream in(config_path);
    if (!in) throw ValidationError("cannot open config file: " + config_path);
    config = json::parse(in);

    for (const auto& set : overrides.sets) {
      const auto eq = set.find('=');
      if (eq == std::string::npos)
        throw ValidationError("--set expects dotted.path=value, got: " + set);
      const std::string path = set.substr(0, eq), value = set.substr(eq + 1);
      json* at = &config;
      std::size_t begin = 0;
      while (true) {
        const auto dot = path.find('.', begin);
        const std::string key = path.substr(begin, dot - begin);
        if (key.empty()) throw ValidationError("--set has an empty path segment: " + set);
        if (dot == std::string::npos) {
          (*at)[key] = json::accept(value) ? json::parse(value) : json(value);
          break;
        }
        at = &(*at)[key];
        begin = dot + 1;
      }
    }
    if (overrides.seed) config["seed"] = *overrides.seed;
    if (overrides.output_dir) config["output_dir"] = *overrides.output_dir;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "validation error: config is not valid JSON: " << e.what() << "\n";
    return 1;
  }
  return run_subcommand_json(name, std::move(config));
}

}  // namespace qavmc::cli
