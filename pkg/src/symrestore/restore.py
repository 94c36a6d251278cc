"""Symmetry-restoration procedures on the dense simulator.

Every indirect method is built as a :class:`Circuit` on the system register
plus ancillas appended above it, so gate counts can be read off the circuit
that was actually run. Measurements default to exact branch enumeration; a
sampled mode draws a single outcome from a seed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import asin, ceil, cos, floor, isclose, log2, pi, sin, sqrt

import numpy as np
from scipy.optimize import brentq

from .circuit import Circuit, Gate, standard_gate
from .errors import DomainError, EmptySectorError
from .pauli import DiagonalOperator, PauliString, PauliSum, apply_pauli_string, canonical_kind, commutator_norm
from .projector import (
    LcuDecomposition,
    ProjectorSpec,
    classical_filter,
    generalized_oracle,
    lcu_decomposition,
    minimal_factor_count,
    oracle_from_projector,
)
from .statevec import (
    ZERO_PROB,
    Statevector,
    apply_unitary,
    measure_qubits,
    postselect,
    random_state,
    sector_probabilities,
    unit_phase,
    unit_phases,
    uniform_state,
)
from .symmetry import DIAGONAL_KINDS, check_in_spectrum, integer_labels

OK = "ok"
ABSENT = "good_component_absent"
TRIVIAL = "trivial"
COMMUTATOR_TOL = 1e-8
DENOMINATOR_TOL = 1e-12


@dataclass(frozen=True)
class Branch:
    """One ancilla measurement outcome."""

    pattern: int
    bits: str
    probability: float
    state: Statevector
    label: object = None


@dataclass(frozen=True)
class RestorationResult:
    """Outcome of a restoration run.

    ``final_state`` is ``None`` when ``status`` is ``good_component_absent``.
    ``accepted`` names the kept ancilla pattern (or the amplification schedule
    for Grover). ``branches`` lists every measured outcome in branch mode.
    """

    final_state: Statevector | None
    success_probability: float
    accepted: str
    trace: dict = field(default_factory=dict)
    status: str = OK
    branches: tuple[Branch, ...] = ()
    circuit: Circuit | None = field(default=None, compare=False)

    def __post_init__(self):
        p = float(self.success_probability)
        if not -1e-9 <= p <= 1 + 1e-9:
            raise DomainError(f"success probability {p} outside [0, 1]")
        object.__setattr__(self, "success_probability", min(max(p, 0.0), 1.0))

    @property
    def ok(self) -> bool:
        return self.status != ABSENT


def _absent(accepted: str, trace: dict, branches=(), circuit=None, p: float = 0.0) -> RestorationResult:
    return RestorationResult(None, p, accepted, trace, ABSENT, tuple(branches), circuit)


def _bits(value: int, width: int) -> str:
    return format(value, f"0{width}b") if width else ""


# ---------------------------------------------------------------- evolutions


def controlled_evolution(kind: str, n_system: int, control: int, angle: float, shift: float = 0.0) -> list[Gate]:
    """Gates for ``|1><1|_c (x) e^{i angle (m - shift)}`` with ``m`` the integer label.

    Particle number and ``S_z`` use one controlled phase per system qubit plus
    a phase on the control for the scalar part. Parity is a controlled
    diagonal over the whole system register.
    """
    kind = canonical_kind(kind)
    if kind == "parity":
        _, m = integer_labels(kind, n_system)
        payload = unit_phases(angle * (m - shift))
        return [Gate("DIAG", (), tuple(range(n_system)), ((control, 1),), payload, "parity-evolution")]
    a = integer_labels(kind, n_system)[0]
    if kind == "particle_number":
        per_qubit, scalar = angle, -angle * shift
    elif kind == "sz":
        per_qubit, scalar = -angle / a, angle * (n_system / (2 * a) - shift)
    else:
        raise DomainError(f"no controlled evolution for {kind}")
    gates = [standard_gate("CPHASE", (per_qubit,), (control, q)) for q in range(n_system)]
    if abs(unit_phase(scalar) - 1) > 1e-13:
        gates.append(standard_gate("PHASE", (scalar,), (control,)))
    return gates


def _diag_kind(kind: str) -> str:
    kind = canonical_kind(kind)
    if kind not in DIAGONAL_KINDS:
        raise DomainError(f"{kind} is not diagonal in the computational basis")
    return kind


# ---------------------------------------------------------------- Hadamard tests


@dataclass(frozen=True)
class ObservableLcu:
    """``O = sum_k w_k W_k`` with real ``w_k`` and Pauli strings ``W_k``."""

    terms: tuple[tuple[float, PauliString], ...]

    def __post_init__(self):
        terms = []
        for w, p in self.terms:
            w = complex(w) * complex(p.phase)
            if abs(w.imag) > 1e-12:
                raise DomainError("observable coefficients must be real")
            terms.append((w.real, PauliString(p.factors)))
        object.__setattr__(self, "terms", tuple(terms))

    @classmethod
    def from_pauli_sum(cls, ps: PauliSum) -> "ObservableLcu":
        return cls(tuple(ps.simplify().terms))

    @property
    def n_qubits(self) -> int:
        return self.terms[0][1].n_qubits if self.terms else 0

    def apply(self, state: Statevector) -> Statevector:
        out = np.zeros_like(state.amplitudes)
        for w, p in self.terms:
            out += w * apply_pauli_string(state, p).amplitudes
        return Statevector(state.n_qubits, out)


_H = standard_gate("H", (), (0,)).matrix()


def hadamard_test(state: Statevector, apply_u, imaginary: bool = False) -> float:
    """Simulated Hadamard test: returns ``Re`` (or ``Im``) of ``<psi|U|psi>``.

    ``apply_u`` maps a statevector to ``U`` applied to it. The ancilla sits
    above the system; the estimate is ``P(0) - P(1)`` read from the exact
    branch probabilities.
    """
    n = state.n_qubits
    upper = apply_u(state).amplitudes
    joint = Statevector(n + 1, np.concatenate([state.amplitudes, upper]) / sqrt(2))
    if imaginary:
        joint = apply_unitary(joint, np.diag([1, -1j]), (n,))
    joint = apply_unitary(joint, _H, (n,))
    p0, _ = postselect(joint, (n,), 0)
    return 2 * p0 - 1


def hadamard_expectation(state: Statevector, apply_u) -> complex:
    return complex(hadamard_test(state, apply_u), hadamard_test(state, apply_u, imaginary=True))


def _check_commutes(observable: ObservableLcu, proj_diag: np.ndarray, state: Statevector) -> None:
    n = state.n_qubits
    diag = DiagonalOperator(proj_diag)
    probes = [state] + [random_state(n, seed) for seed in (11, 12)]
    if commutator_norm(observable, diag, probes) > COMMUTATOR_TOL:
        raise DomainError("observable does not commute with the projector")


def expectation_postprocessed(state: Statevector, observable: ObservableLcu, proj: LcuDecomposition) -> float:
    """``<O P> / <P>`` from Hadamard tests of ``W_k V_l`` and ``V_l``.

    Raises :class:`EmptySectorError` when the denominator vanishes.
    """
    n = state.n_qubits
    if observable.n_qubits != n:
        raise DomainError("observable and state sizes differ")
    _check_commutes(observable, proj.diagonal(n), state)
    num = 0j
    den = 0j
    for l, term in enumerate(proj.terms):
        v = proj.term_diagonal(l, n)

        def apply_v(s, v=v):
            return Statevector(n, v * s.amplitudes)

        den += term.beta * hadamard_expectation(state, apply_v)
        for w, p in observable.terms:
            num += w * term.beta * hadamard_expectation(
                state, lambda s, p=p, apply_v=apply_v: apply_pauli_string(apply_v(s), p)
            )
    if abs(den) < DENOMINATOR_TOL:
        raise EmptySectorError()
    return float((num / den).real)


def expectation_generating_function(
    state: Statevector,
    observable: ObservableLcu,
    target,
    n_angles: int,
    kind: str = "particle_number",
) -> float:
    """Discretized gauge-angle ratio with ``n_angles`` uniform points.

    Exact once ``n_angles`` exceeds the largest label span; with fewer points
    sectors alias modulo ``n_angles`` (one point gives the raw expectation).
    """
    lcu = lcu_decomposition(kind, target, n_qubits=state.n_qubits, n_terms=n_angles)
    return expectation_postprocessed(state, observable, lcu)


def dense_projected_expectation(state: Statevector, observable, kind: str, target) -> float:
    """Oracle: ``<psi|O P|psi> / <psi|P|psi>`` with the exact sector filter."""
    vec, weight = classical_filter(state, kind, target)
    if weight < DENOMINATOR_TOL:
        raise EmptySectorError()
    return float(np.vdot(state.amplitudes, observable.apply(vec).amplitudes).real / weight)


# ---------------------------------------------------------------- LCU


def _householder(gamma: np.ndarray) -> np.ndarray:
    """Real reflection mapping ``e_0`` to ``gamma`` (its own inverse)."""
    dim = gamma.size
    e0 = np.zeros(dim)
    e0[0] = 1.0
    v = e0 - gamma
    if np.linalg.norm(v) < 1e-15:
        return np.eye(dim, dtype=np.complex128)
    return (np.eye(dim) - 2 * np.outer(v, v) / np.dot(v, v)).astype(np.complex128)


def lcu_circuit(lcu: LcuDecomposition, n_system: int) -> Circuit:
    """Prepare, select and unprepare on ``n_lcu`` ancillas above the system."""
    n_a = lcu.n_lcu
    anc = tuple(range(n_system, n_system + n_a))
    betas = np.zeros(1 << n_a)
    betas[: lcu.Lambda] = lcu.betas
    if np.any(betas < 0):
        raise DomainError("LCU coefficients must be non-negative")
    B = _householder(np.sqrt(betas / betas.sum()))
    gates = [Gate("UNITARY", (), anc, (), B, "B")]
    scalars = np.ones(1 << n_a, dtype=np.complex128)
    for l, term in enumerate(lcu.terms):
        ctrl = tuple((a, (l >> i) & 1) for i, a in enumerate(anc))
        gates += [standard_gate("MCPHASE", (term.qubit_phase,), (q,), controls=ctrl) for q in range(n_system)]
        scalars[l] = unit_phase(term.scalar_phase)
    gates.append(Gate("DIAG", (), anc, (), scalars, "scalar-phases"))
    gates.append(Gate("UNITARY", (), anc, (), B, "B^"))
    return Circuit(n_system + n_a, tuple(gates))


def lcu_project(
    state: Statevector,
    lcu: LcuDecomposition,
    mode: str = "branch",
    seed: int | None = None,
) -> RestorationResult:
    """Apply ``sum_l beta_l V_l`` probabilistically and keep all-zero ancillas.

    The kept branch carries ``P|psi> / sum(beta)``, so with normalized
    coefficients the success probability is the sector weight.
    """
    n = state.n_qubits
    circ = lcu_circuit(lcu, n)
    anc = tuple(range(n, circ.n_qubits))
    out = circ.run(state.with_ancillas(len(anc)))
    trace = {"n_ancilla": len(anc), "Lambda": lcu.Lambda, "gate_counts": circ.gate_counts()}
    accepted = "ancillas=" + "0" * len(anc)
    branches = tuple(
        Branch(o.value, _bits(o.value, len(anc)), o.probability, o.post_state)
        for o in measure_qubits(out, anc)
    )
    if mode == "sample":
        drawn = measure_qubits(out, anc, mode="sample", seed=seed)[0]
        trace["sampled_pattern"] = drawn.value
        if drawn.value != 0:
            return _absent(accepted, {**trace, "rejected": True}, branches, circ)
    p, post = postselect(out, anc, 0)
    if post is None:
        return _absent(accepted, trace, branches, circ, p)
    return RestorationResult(post, p, accepted, trace, OK, branches, circ)


# ---------------------------------------------------------------- Hadamard + oracle


def hadamard_oracle_project(
    state: Statevector,
    spec: ProjectorSpec,
    mode: str = "branch",
    seed: int | None = None,
) -> RestorationResult:
    """Hadamard test with the oracle ``U_f = I - 2P`` as controlled unitary.

    Outcome 1 on the ancilla leaves ``P|psi>`` (good part), outcome 0 leaves
    the bad part. Both are reported as branches.
    """
    n = state.n_qubits
    u_f = oracle_from_projector(spec, n)
    gates = (
        standard_gate("H", (), (n,)),
        Gate("DIAG", (), tuple(range(n)), ((n, 1),), u_f.diagonal, "U_f"),
        standard_gate("H", (), (n,)),
    )
    circ = Circuit(n + 1, gates)
    out = circ.run(state.with_ancillas(1))
    outcomes = {o.value: o for o in measure_qubits(out, (n,))}
    branches = tuple(
        Branch(v, str(v), o.probability, o.post_state, "good" if v else "bad")
        for v, o in sorted(outcomes.items())
    )
    trace = {
        "p_good": outcomes[1].probability if 1 in outcomes else 0.0,
        "p_bad": outcomes[0].probability if 0 in outcomes else 0.0,
        "gate_counts": circ.gate_counts(),
    }
    if mode == "sample":
        drawn = measure_qubits(out, (n,), mode="sample", seed=seed)[0]
        trace["sampled_pattern"] = drawn.value
        if drawn.value != 1:
            return _absent("ancilla=1", {**trace, "rejected": True}, branches, circ)
    if 1 not in outcomes:
        return _absent("ancilla=1", trace, branches, circ)
    good = outcomes[1]
    return RestorationResult(good.post_state, good.probability, "ancilla=1", trace, OK, branches, circ)


# ---------------------------------------------------------------- Grover / Hoyer


def good_bad_state(n_qubits: int, kind: str, target, theta: float, seed: int | None = None) -> Statevector:
    """``sin(theta)|G> + cos(theta)|B>`` with ``theta`` measured from the bad axis.

    ``|G>`` and ``|B>`` are the normalized in-sector and out-of-sector parts
    of a uniform state, or of a random state when ``seed`` is given.
    """
    base = uniform_state(n_qubits) if seed is None else random_state(n_qubits, seed)
    good = classical_filter(base, kind, target).normalized()
    bad = Statevector(n_qubits, base.amplitudes - good.amplitudes * good.inner(base)).normalize()
    return sin(theta) * good + cos(theta) * bad


def _reflect_about(state: Statevector, psi: np.ndarray, phi: float) -> Statevector:
    """``I + (e^{i phi} - 1) |psi><psi|``."""
    amps = state.amplitudes
    return Statevector(state.n_qubits, amps + (unit_phase(phi) - 1) * np.vdot(psi, amps) * psi)


def hoyer_phases(theta: float, n_full: int) -> tuple[float, float]:
    """Phases ``(delta, phi)`` of the final generalized step.

    Before the step the state makes angle ``a = (2 n_full + 1) theta`` with
    the bad axis. After ``U(delta)`` and ``R(phi)`` the bad amplitude is
    ``cos a + (e^{i phi} - 1) K cos theta`` with ``K = <psi|U(delta)|state>``;
    it vanishes when ``e^{i phi} = 1 - cos a / (K cos theta)`` lies on the
    unit circle, which fixes ``delta``.
    """
    a = (2 * n_full + 1) * theta
    s, c, sa, ca = sin(theta), cos(theta), sin(a), cos(a)

    def k_of(d):
        return s * sa * complex(np.exp(1j * d)) + c * ca

    def residual(d):
        return abs(1 - ca / (c * k_of(d))) - 1

    grid = np.linspace(0.0, pi, 4001)
    values = [residual(d) for d in grid]
    delta = None
    for i in range(grid.size - 1):
        if values[i] == 0.0:
            delta = float(grid[i])
            break
        if values[i] * values[i + 1] < 0:
            delta = brentq(residual, grid[i], grid[i + 1], xtol=1e-15, rtol=1e-15)
            break
    if delta is None:
        delta = float(grid[int(np.argmin(np.abs(values)))])
    ephi = 1 - ca / (c * k_of(delta))
    return delta, float(np.angle(ephi))


def grover_project(
    state: Statevector,
    spec: ProjectorSpec,
    mode: str = "auto_optimal",
    n_steps: int | None = None,
    n_max: int | None = None,
) -> RestorationResult:
    """Amplitude amplification with ``G = R_psi U_f``.

    ``mode`` is ``fixed_n`` (``n_steps`` iterations), ``auto_optimal`` (the
    step count maximizing ``p_n`` over one period) or ``hoyer`` (full steps
    plus one generalized step reaching ``p = 1``). ``trace["p_n"]`` lists
    ``p_n`` for ``n = 0..n_max``.
    """
    if mode not in ("fixed_n", "auto_optimal", "hoyer"):
        raise DomainError(f"unknown Grover mode {mode!r}")
    if mode == "fixed_n" and (n_steps is None or n_steps < 0):
        raise DomainError("fixed_n needs a non-negative n_steps")
    n = state.n_qubits
    psi = state.normalize()
    u_f = oracle_from_projector(spec, n)
    good = classical_filter(psi, spec.kind, spec.target)
    p_g = good.weight
    trace = {"p_G": p_g, "mode": mode}
    if p_g <= ZERO_PROB:
        return _absent("grover", trace)
    if p_g >= 1 - 1e-15:
        return RestorationResult(psi, 1.0, "grover:n=0", {**trace, "p_n": [1.0], "n_steps": 0}, TRIVIAL)
    theta = asin(sqrt(p_g))
    trace["theta"] = theta
    period = ceil(pi / (2 * theta))
    horizon = max(n_max or 0, n_steps or 0, period)
    mask = np.abs(good.vector.amplitudes) > 0

    def step(s: Statevector) -> Statevector:
        return _reflect_about(u_f.apply(s), psi.amplitudes, pi)

    def p_good(s: Statevector) -> float:
        return float(np.sum(np.abs(s.amplitudes[mask]) ** 2))

    states = [psi]
    for _ in range(horizon):
        states.append(step(states[-1]))
    p_n = [p_good(s) for s in states]
    trace["p_n"] = p_n[: (n_max if n_max is not None else horizon) + 1]

    if mode == "fixed_n":
        chosen = n_steps
        final = states[chosen]
    elif mode == "auto_optimal":
        chosen = int(np.argmax(p_n[: period + 1]))
        final = states[chosen]
    else:
        w = pi / 2 - theta
        ratio = w / (2 * theta)
        n_full = floor(ratio)
        if isclose(ratio, round(ratio), abs_tol=1e-12):
            n_full = round(ratio)
            final = states[n_full]
            chosen = n_full
            trace["generalized_step"] = None
        else:
            delta, phi = hoyer_phases(theta, n_full)
            u_delta = generalized_oracle(spec, n, delta)
            final = _reflect_about(u_delta.apply(states[n_full]), psi.amplitudes, phi)
            chosen = n_full + 1
            trace["generalized_step"] = {"delta": delta, "phi": phi}
        trace["n_G"] = ceil(ratio - 1e-12)
    trace["n_steps"] = chosen
    p_final = p_good(final)
    trace["p_final"] = p_final
    return RestorationResult(final.normalize(), p_final, f"grover:n={chosen}", trace, OK)


# ---------------------------------------------------------------- QPE


def _inverse_qft(n_bits: int) -> np.ndarray:
    dim = 1 << n_bits
    x = np.arange(dim)
    return unit_phases(-2 * pi * np.outer(x, x) / dim) / sqrt(dim)


def qpe_register_size(kind: str, n_system: int) -> int:
    """Smallest ``n0`` with ``2**n0`` above the largest label shift."""
    _, m = integer_labels(kind, n_system)
    return minimal_factor_count(int(m.max() - m.min()))


def table_qpe_ancillas(n_system: int) -> int:
    return floor(log2(n_system))


def qpe_circuit(kind: str, n_system: int) -> Circuit:
    kind = _diag_kind(kind)
    _, m = integer_labels(kind, n_system)
    m0 = int(m.min())
    n0 = qpe_register_size(kind, n_system)
    anc = tuple(range(n_system, n_system + n0))
    gates = [standard_gate("H", (), (q,)) for q in anc]
    for j, q in enumerate(anc):
        gates += controlled_evolution(kind, n_system, q, 2 * pi * (1 << j) / (1 << n0), shift=m0)
    gates.append(Gate("UNITARY", (), anc, (), _inverse_qft(n0), "QFT^"))
    return Circuit(n_system + n0, tuple(gates))


def qpe_project(
    state: Statevector,
    kind: str,
    target,
    mode: str = "branch",
    seed: int | None = None,
) -> RestorationResult:
    """Phase estimation of ``V = exp(2 pi i (m - m0) / 2^n0)`` and readout.

    The ancilla pattern equals the integer ``m - m0`` exactly, so every branch
    holds one filtered sector; the branch of ``target`` is returned.
    """
    kind = _diag_kind(kind)
    n = state.n_qubits
    check_in_spectrum(kind, n, target)
    a, m = integer_labels(kind, n)
    m0 = int(m.min())
    circ = qpe_circuit(kind, n)
    anc = tuple(range(n, circ.n_qubits))
    out = circ.run(state.with_ancillas(len(anc)))
    branches = tuple(
        Branch(o.value, _bits(o.value, len(anc)), o.probability, o.post_state, a * (o.value + m0))
        for o in measure_qubits(out, anc)
    )
    want = int(round(float(target) / a)) - m0
    accepted = "ancillas=" + _bits(want, len(anc))
    trace = {
        "n_ancilla": len(anc),
        "n_ancilla_table": table_qpe_ancillas(n),
        "distribution": {b.label: b.probability for b in branches},
        "gate_counts": circ.gate_counts(),
    }
    if mode == "sample":
        drawn = measure_qubits(out, anc, mode="sample", seed=seed)[0]
        trace["sampled_pattern"] = drawn.value
        if drawn.value != want:
            return _absent(accepted, {**trace, "rejected": True}, branches, circ)
    hit = [b for b in branches if b.pattern == want]
    if not hit:
        return _absent(accepted, trace, branches, circ)
    return RestorationResult(hit[0].state, hit[0].probability, accepted, trace, OK, branches, circ)


# ---------------------------------------------------------------- IQPE


def iqpe_depth(kind: str, n_system: int, target) -> int:
    a, m = integer_labels(kind, n_system)
    m_a = int(round(float(target) / a))
    return minimal_factor_count(int(max(m_a - m.min(), m.max() - m_a)))


def iqpe_step_circuit(kind: str, n_system: int, target, l: int) -> Circuit:
    """``H``, controlled ``e^{i phi_l m}``, ``R(-phi_l m_alpha)``, ``H`` with ``phi_l = pi/2^l``."""
    kind = _diag_kind(kind)
    a = integer_labels(kind, n_system)[0]
    m_a = int(round(float(target) / a))
    phi = pi / (1 << l)
    anc = n_system
    gates = [standard_gate("H", (), (anc,))]
    gates += controlled_evolution(kind, n_system, anc, phi)
    gates.append(standard_gate("PHASE", (-phi * m_a,), (anc,)))
    gates.append(standard_gate("H", (), (anc,)))
    return Circuit(n_system + 1, tuple(gates))


def iqpe_project(
    state: Statevector,
    kind: str,
    target,
    l_max: int | None = None,
    mode: str = "branch",
    seed: int | None = None,
) -> RestorationResult:
    """Run ``l_max`` single-ancilla circuits, keeping the ancilla in 0 each time.

    ``trace["survival"][l]`` is the probability of keeping outcome 0 at step
    ``l``; ``trace["sector_probabilities"][l]`` is the renormalized sector
    distribution after ``l`` circuits (entry 0 is the input).
    """
    kind = _diag_kind(kind)
    n = state.n_qubits
    check_in_spectrum(kind, n, target)
    depth = iqpe_depth(kind, n, target) if l_max is None else int(l_max)
    if depth < 0:
        raise DomainError("l_max must be non-negative")
    labels = integer_labels(kind, n)
    a = labels[0]
    sector_of = a * labels[1]
    rng = np.random.default_rng(seed) if mode == "sample" else None
    current = state.normalize()
    survival: list[float] = []
    sectors = [sector_probabilities(current, sector_of)]
    gates: list[Gate] = []
    cumulative = 1.0
    for l in range(depth):
        step = iqpe_step_circuit(kind, n, target, l)
        gates += step.gates
        out = step.run(current.with_ancillas(1))
        p, post = postselect(out, (n,), 0)
        survival.append(p)
        if rng is not None and post is not None and rng.random() >= p:
            post = None
        if post is None:
            trace = {"survival": survival, "sector_probabilities": sectors, "depth": depth}
            return _absent("ancilla=0 each step", trace, circuit=Circuit(n + 1, tuple(gates)), p=0.0)
        cumulative *= p
        current = post
        sectors.append(sector_probabilities(current, sector_of))
    trace = {
        "survival": survival,
        "sector_probabilities": sectors,
        "depth": depth,
        "n_iqpe_table": floor(log2(n)) + 1,
    }
    circ = Circuit(n + 1, tuple(gates))
    trace["gate_counts"] = circ.gate_counts()
    return RestorationResult(current, cumulative, "ancilla=0 each step", trace, OK, circuit=circ)
