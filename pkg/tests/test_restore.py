from fractions import Fraction
from math import asin, comb, pi, sin, sqrt

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symrestore.circuit import bcs_prepare
from symrestore.errors import DomainError, EmptySectorError
from symrestore.pauli import PauliString, PauliSum, number_operator_pauli
from symrestore.projector import ProjectorSpec, classical_filter, lcu_decomposition, product_form_values
from symrestore.restore import (
    ABSENT,
    TRIVIAL,
    ObservableLcu,
    controlled_evolution,
    dense_projected_expectation,
    expectation_generating_function,
    expectation_postprocessed,
    good_bad_state,
    grover_project,
    hadamard_expectation,
    hadamard_oracle_project,
    iqpe_project,
    lcu_project,
    qpe_project,
)
from symrestore.statevec import ZERO_PROB, Statevector, new_basis_state, popcounts, random_state, uniform_state
from symrestore.symmetry import integer_labels, spectrum


def observable(n, ops, coeff=1.0):
    return ObservableLcu.from_pauli_sum(PauliSum(((coeff, PauliString.from_ops(n, ops)),)))


def sector_state(n, count):
    return Statevector(n, np.where(popcounts(n) == count, 1.0, 0.0)).normalize()


def filtered(psi, kind, target):
    return classical_filter(psi, kind, target).normalized()


def fidelity(a, b):
    return abs(a.inner(b)) ** 2


# ---------------------------------------------------------------- post-processing


def test_hadamard_expectation_matches_direct(rng):
    psi = random_state(3, rng)
    d = np.exp(1j * rng.uniform(0, 2 * pi, size=8))
    got = hadamard_expectation(psi, lambda s: Statevector(3, d * s.amplitudes))
    assert abs(got - np.vdot(psi.amplitudes, d * psi.amplitudes)) < 1e-12


def test_postprocessed_number_and_identity(rng):
    psi = random_state(4, rng)
    lcu = lcu_decomposition("particle_number", 2, n_qubits=4)
    n_op = ObservableLcu.from_pauli_sum(number_operator_pauli(4))
    assert abs(expectation_postprocessed(psi, n_op, lcu) - 2.0) < 1e-10
    assert abs(expectation_postprocessed(psi, observable(4, {}), lcu) - 1.0) < 1e-10


def test_postprocessed_bcs_z0():
    psi = bcs_prepare([0.9, 2.1]).run()
    z0 = observable(4, {0: "Z"})
    lcu = lcu_decomposition("particle_number", 2, n_qubits=4)
    got = expectation_postprocessed(psi, z0, lcu)
    dense_p = np.diag((popcounts(4) == 2).astype(float))
    mat = z0.apply
    num = np.vdot(psi.amplitudes, mat(Statevector(4, dense_p @ psi.amplitudes)).amplitudes).real
    den = np.vdot(psi.amplitudes, dense_p @ psi.amplitudes).real
    assert abs(got - num / den) < 1e-9


def test_postprocessed_empty_sector():
    lcu = lcu_decomposition("particle_number", 2, n_qubits=3)
    with pytest.raises(EmptySectorError):
        expectation_postprocessed(new_basis_state(3, 0), observable(3, {}), lcu)


def test_postprocessed_rejects_non_commuting(rng):
    lcu = lcu_decomposition("particle_number", 1, n_qubits=3)
    with pytest.raises(DomainError):
        expectation_postprocessed(random_state(3, rng), observable(3, {0: "X"}), lcu)


def test_generating_function(rng):
    psi = random_state(4, rng)
    obs = ObservableLcu.from_pauli_sum(PauliSum((
        (0.7, PauliString.from_ops(4, {0: "Z", 2: "Z"})),
        (0.3, PauliString.from_ops(4, {1: "X", 3: "X"})),
        (0.3, PauliString.from_ops(4, {1: "Y", 3: "Y"})),
    )))
    lcu = lcu_decomposition("particle_number", 2, n_qubits=4)
    ref = expectation_postprocessed(psi, obs, lcu)
    assert abs(expectation_generating_function(psi, obs, 2, 5) - ref) < 1e-9
    assert abs(dense_projected_expectation(psi, obs, "particle_number", 2) - ref) < 1e-9
    raw = np.vdot(psi.amplitudes, obs.apply(psi).amplitudes).real
    assert abs(expectation_generating_function(psi, obs, 2, 1) - raw) < 1e-12
    inside = sector_state(4, 2)
    raw = np.vdot(inside.amplitudes, obs.apply(inside).amplitudes).real
    assert abs(expectation_generating_function(inside, obs, 2, 5) - raw) < 1e-12


# ---------------------------------------------------------------- LCU


def test_lcu_project_in_sector():
    psi = sector_state(3, 2)
    res = lcu_project(psi, lcu_decomposition("particle_number", 2, n_qubits=3))
    assert abs(res.success_probability - 1) < 1e-12
    assert np.max(np.abs(res.final_state.amplitudes - psi.amplitudes)) < 1e-12


def test_lcu_project_uniform():
    res = lcu_project(uniform_state(3), lcu_decomposition("particle_number", 2, n_qubits=3))
    assert np.allclose(res.final_state.amplitudes, sector_state(3, 2).amplitudes)
    assert abs(res.success_probability - 3 / 8) < 1e-12
    assert res.accepted == "ancillas=" + "0" * res.trace["n_ancilla"]
    assert abs(sum(b.probability for b in res.branches) - 1) < 1e-12


def test_lcu_project_absent():
    res = lcu_project(new_basis_state(3, 0), lcu_decomposition("particle_number", 2, n_qubits=3))
    assert res.status == ABSENT and res.final_state is None


def test_lcu_ladder_gate_count():
    for n in range(1, 9):
        lcu = lcu_decomposition("particle_number", n // 2, n_qubits=n)
        res = lcu_project(uniform_state(n), lcu)
        assert res.circuit.count("MCPHASE") == n * lcu.Lambda


def test_lcu_sampled_mode_is_seeded():
    lcu = lcu_decomposition("particle_number", 2, n_qubits=3)
    a = lcu_project(uniform_state(3), lcu, mode="sample", seed=4)
    b = lcu_project(uniform_state(3), lcu, mode="sample", seed=4)
    assert a.status == b.status and a.trace["sampled_pattern"] == b.trace["sampled_pattern"]
    kept = sum(lcu_project(uniform_state(3), lcu, mode="sample", seed=s).status == "ok" for s in range(400))
    assert abs(kept / 400 - 3 / 8) < 5 * sqrt(3 / 8 * 5 / 8 / 400)


# ---------------------------------------------------------------- Hadamard + oracle


def test_hadamard_oracle_cases():
    spec = ProjectorSpec("particle_number", 2)
    res = hadamard_oracle_project(sector_state(3, 2), spec)
    assert abs(res.success_probability - 1) < 1e-12
    res = hadamard_oracle_project(uniform_state(3), spec)
    assert abs(res.success_probability - 3 / 8) < 1e-12
    assert fidelity(res.final_state, sector_state(3, 2)) > 1 - 1e-10
    assert {b.label for b in res.branches} == {"good", "bad"}
    res = hadamard_oracle_project(sector_state(3, 1), spec)
    assert res.status == ABSENT and res.trace["p_good"] == 0


# ---------------------------------------------------------------- Grover


def test_grover_closed_form():
    theta = pi / 26
    psi = good_bad_state(8, "particle_number", 4, theta)
    res = grover_project(psi, ProjectorSpec("particle_number", 4), "fixed_n", n_steps=6, n_max=30)
    for n, p in enumerate(res.trace["p_n"]):
        assert abs(p - sin((2 * n + 1) * theta) ** 2) < 1e-10
    assert abs(res.success_probability - 1) < 1e-10


def test_grover_modes(rng):
    spec = ProjectorSpec("particle_number", 3)
    psi = random_state(6, rng)
    auto = grover_project(psi, spec, "auto_optimal")
    period = auto.trace["p_n"][: int(np.ceil(pi / (2 * auto.trace["theta"]))) + 1]
    assert abs(auto.success_probability - max(period)) < 1e-12
    hoyer = grover_project(good_bad_state(6, "particle_number", 3, 0.3, seed=2), spec, "hoyer")
    assert abs(hoyer.success_probability - 1) < 1e-10
    assert hoyer.trace["n_steps"] == hoyer.trace["n_G"] == int(np.ceil((pi / 2 - 0.3) / 0.6))
    target = filtered(psi, "particle_number", 3)
    assert fidelity(grover_project(psi, spec, "hoyer").final_state, target) > 1 - 1e-10


def test_grover_degenerate_inputs():
    spec = ProjectorSpec("particle_number", 2)
    assert grover_project(new_basis_state(3, 0), spec).status == ABSENT
    res = grover_project(sector_state(3, 2), spec, "hoyer")
    assert res.status == TRIVIAL and res.success_probability == 1
    with pytest.raises(DomainError):
        grover_project(uniform_state(3), spec, "fixed_n")


# ---------------------------------------------------------------- QPE


def test_qpe_uniform_four_qubits():
    psi = uniform_state(4)
    res = qpe_project(psi, "particle_number", 2)
    dist = res.trace["distribution"]
    assert sorted(dist) == [0, 1, 2, 3, 4]
    for k, p in dist.items():
        assert abs(p - comb(4, int(k)) / 16) < 1e-12
    for b in res.branches:
        assert b.pattern == int(b.label)
        assert fidelity(b.state, filtered(psi, "particle_number", b.label)) > 1 - 1e-10


def test_qpe_eigenstate_single_pattern():
    res = qpe_project(sector_state(5, 3), "particle_number", 3)
    assert len(res.branches) == 1 and abs(res.success_probability - 1) < 1e-12


def test_qpe_table_register():
    res = qpe_project(uniform_state(16), "particle_number", 8)
    assert res.trace["n_ancilla_table"] == 4
    assert res.trace["n_ancilla"] == 5
    assert abs(res.success_probability - comb(16, 8) / 2**16) < 1e-12


def test_qpe_other_kinds(rng):
    psi = random_state(5, rng)
    for kind in ("sz", "parity"):
        res = qpe_project(psi, kind, spectrum(kind, 5)[0])
        assert abs(sum(b.probability for b in res.branches) - 1) < 1e-12
        for b in res.branches:
            assert fidelity(b.state, filtered(psi, kind, b.label)) > 1 - 1e-10


# ---------------------------------------------------------------- IQPE


def test_iqpe_sixteen_qubit_ladder():
    res = iqpe_project(uniform_state(16), "particle_number", 8)
    steps = res.trace["sector_probabilities"]
    assert all(steps[1][k] == 0 for k in range(1, 17, 2))
    alive = {int(k) for k, p in steps[3].items() if p > ZERO_PROB}
    assert alive == {0, 8, 16}
    side = Fraction(1, 2**16) / Fraction(comb(16, 8) + 2, 2**16)
    assert abs(steps[3][0] - float(side)) < 1e-12 and abs(steps[3][16] - float(side)) < 1e-12
    assert abs(steps[4][8] - 1) < 1e-12
    assert abs(res.success_probability - comb(16, 8) / 2**16) < 1e-10


def test_iqpe_in_sector_state():
    psi = sector_state(6, 3)
    res = iqpe_project(psi, "particle_number", 3)
    assert all(abs(p - 1) < 1e-12 for p in res.trace["survival"])
    assert np.max(np.abs(res.final_state.amplitudes - psi.amplitudes)) < 1e-12


def test_iqpe_absent():
    res = iqpe_project(sector_state(4, 1), "particle_number", 2)
    assert res.status == ABSENT and res.final_state is None


@settings(max_examples=15, deadline=None)
@given(st.integers(3, 8), st.integers(0, 2**31 - 1), st.data())
def test_iqpe_survivors_follow_factor_eigenvalues(n, seed, data):
    psi = random_state(n, seed)
    target = data.draw(st.sampled_from(spectrum("particle_number", n)))
    res = iqpe_project(psi, "particle_number", target)
    j = np.arange(n + 1) - target
    for l, dist in enumerate(res.trace["sector_probabilities"][1:]):
        factors = product_form_values(j, l + 1)
        for m in range(n + 1):
            survives = abs(factors[m]) > 1e-12
            assert survives == (j[m] % 2 ** (l + 1) == 0)
            if not survives:
                assert dist[m] < 1e-20


def test_controlled_evolution_gate_counts():
    for n in range(1, 8):
        gates = controlled_evolution("particle_number", n, n, 0.3)
        assert sum(g.name == "CPHASE" for g in gates) == n


# ---------------------------------------------------------------- cross-method


@settings(max_examples=12, deadline=None)
@given(st.integers(3, 7), st.sampled_from(["particle_number", "sz", "parity"]), st.integers(0, 2**31 - 1), st.data())
def test_methods_agree_with_filter(n, kind, seed, data):
    psi = random_state(n, seed)
    target = data.draw(st.sampled_from(spectrum(kind, n)))
    ref = classical_filter(psi, kind, target)
    good = ref.normalized()
    spec = ProjectorSpec(kind, target)
    results = [
        lcu_project(psi, lcu_decomposition(kind, target, n_qubits=n)),
        hadamard_oracle_project(psi, spec),
        qpe_project(psi, kind, target),
        iqpe_project(psi, kind, target),
    ]
    for res in results:
        assert fidelity(res.final_state, good) > 1 - 1e-10
        assert abs(res.success_probability - ref.weight) < 1e-10
    hoyer = grover_project(psi, spec, "hoyer")
    assert abs(hoyer.success_probability - 1) < 1e-10
    assert fidelity(hoyer.final_state, good) > 1 - 1e-10
