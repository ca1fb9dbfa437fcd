"""Python-side smoke tests for the _core extension."""

import math

import numpy as np
import pytest

qavmc = pytest.importorskip("qavmc")


def test_hubbard_ground_energy_formula():
    h = qavmc.build_hubbard("chain", [2], t=1.0, U=8.0, n_alpha=1, n_beta=1)
    assert len(h) == 4
    spec = qavmc.eigendecompose(h)
    expected = 0.5 * (8.0 - math.sqrt(64.0 + 16.0))
    assert spec.eigenvalues[0] == pytest.approx(expected, abs=1e-10)
    assert qavmc.ground_energy(spec) == pytest.approx(expected, abs=1e-10)


def test_basis_and_flip():
    basis = qavmc.SectorBasis(4, 2, 2)
    assert len(basis) == 36
    w = basis.word(7)
    assert basis.index_of(w) == 7
    assert qavmc.hamming(w, qavmc.spin_flip_word(w, 4)) % 2 == 0


def test_proposal_rows_are_stochastic_and_symmetric():
    h = qavmc.build_hubbard("chain", [4], t=1.0, U=8.0, n_alpha=2, n_beta=2)
    spec = qavmc.eigendecompose(h)
    for kernel in (
        qavmc.make_classical("ExcitationSD", h.basis),
        qavmc.make_quantum(spec, 2.5),
        qavmc.make_effective(spec),
    ):
        q = kernel.matrix()
        assert np.allclose(q.sum(axis=1), 1.0, atol=1e-10)
        assert np.allclose(q, q.T, atol=1e-10)


def test_chain_runs_and_reproduces():
    h = qavmc.build_hubbard("chain", [3], t=1.0, U=4.0, n_alpha=2, n_beta=1)
    spec = qavmc.eigendecompose(h)
    pi = qavmc.ground_probabilities(spec)
    kernel = qavmc.make_classical("ExcitationSD", h.basis)
    states_a, accepted_a = qavmc.run_chain(kernel, pi, 0, 500, burn_in=50, seed=42)
    states_b, accepted_b = qavmc.run_chain(kernel, pi, 0, 500, burn_in=50, seed=42)
    assert states_a == states_b
    assert accepted_a == accepted_b
    assert len(states_a) == 500


def test_gap_scan_and_fit():
    h = qavmc.build_hubbard("chain", [2], t=1.0, U=8.0, n_alpha=1, n_beta=1)
    pi = qavmc.ground_probabilities(qavmc.eigendecompose(h))
    deltas, delta_max, tau_at_max = qavmc.quantum_gap_tau_scan(h, pi, qavmc.tau_grid(0.1, 5.0, 0.5))
    assert delta_max == pytest.approx(max(deltas))
    assert delta_max > 0.0
    a, k, residual = qavmc.fit_scaling([(4.0, 2.0 ** -2.0), (6.0, 2.0 ** -3.0)])
    assert a == pytest.approx(1.0)
    assert k == pytest.approx(0.5)
    assert residual < 1e-12


def test_vmc_smoke():
    h = qavmc.build_hubbard("chain", [2], t=1.0, U=8.0, n_alpha=1, n_beta=1)
    energies, aborted = qavmc.vmc_optimize(
        h, qavmc.make_classical("Uniform", h.basis), iterations=50, exact_enumeration=True, seed=3
    )
    assert not aborted
    assert len(energies) == 50
    assert energies[-1] < energies[0]


def test_cli_entry_point(tmp_path):
    config = {
        "seed": 5,
        "output_dir": str(tmp_path / "out"),
        "system": {"type": "hubbard", "lattice": {"kind": "chain", "dims": [2]}, "t": 1.0, "U": 4.0},
        "proposals": [{"kind": "Uniform"}],
        "experiment": {"u_values": [4.0]},
    }
    import json

    assert qavmc.run_subcommand("gap-scan", json.dumps(config)) == 0
    assert (tmp_path / "out" / "gap_scan.csv").exists()
