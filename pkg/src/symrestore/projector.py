"""Projector representations onto symmetry sectors.

Every diagonal form is evaluated on the integer labels ``m(k)`` of the basis
states (eigenvalue = ``a * m``), so no dense operator is ever built. The total
spin projector is the only non-diagonal case and is applied through repeated
Pauli-sum application.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil, floor, log2, pi

import numpy as np

from .errors import DomainError, EmptySectorError
from .pauli import DiagonalOperator, canonical_kind, s_squared_transposition
from .statevec import Statevector, popcounts, unit_phases
from .symmetry import (
    DIAGONAL_KINDS,
    check_in_spectrum,
    diagonal_labels,
    integer_labels,
    spectrum,
)

FORMS = (
    "delta_filter",
    "lowdin",
    "parity_closed",
    "gauge_integral",
    "discrete_sum",
    "product",
    "oracle",
)
EXACT_TOL = 1e-10


@dataclass(frozen=True)
class ProjectorSpec:
    """Which sector to project on, and through which representation.

    ``n_points`` is the quadrature size of ``gauge_integral``; ``max_count``
    is ``M`` of ``discrete_sum`` (``M + 1`` terms); ``n_factors`` is the
    number of ``product`` factors. ``None`` picks the smallest exact value.
    """

    kind: str
    target: float
    form: str = "delta_filter"
    n_points: int | None = None
    max_count: int | None = None
    n_factors: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", canonical_kind(self.kind))
        if self.form not in FORMS:
            raise DomainError(f"unknown projector form {self.form!r}")
        if self.form == "parity_closed" and self.kind != "parity":
            raise DomainError("parity_closed applies to the parity operator only")
        if self.kind == "total_spin" and self.form not in ("delta_filter", "lowdin"):
            raise DomainError(f"form {self.form!r} needs a basis-diagonal symmetry")
        for name in ("n_points", "max_count", "n_factors"):
            value = getattr(self, name)
            if value is not None and value < (0 if name == "max_count" else 1):
                raise DomainError(f"{name} must be positive")


@dataclass(frozen=True)
class Projection:
    """Unnormalized projected vector ``P|psi>`` and weight ``<psi|P|psi>``."""

    vector: Statevector
    weight: float

    def __iter__(self):
        return iter((self.vector, self.weight))

    @property
    def empty(self) -> bool:
        return self.vector.norm() ** 2 < 1e-24

    def normalized(self) -> Statevector:
        if self.empty:
            raise EmptySectorError()
        return self.vector.normalize()


@dataclass(frozen=True)
class LcuTerm:
    """``V = e^{i scalar_phase} * (phase(qubit_phase) on every qubit)``."""

    beta: float
    qubit_phase: float
    scalar_phase: float


@dataclass(frozen=True)
class LcuDecomposition:
    """``P = sum_l beta_l V_l`` with every ``V_l`` a product of phase gates."""

    kind: str
    target: float
    terms: tuple[LcuTerm, ...]
    notes: dict = field(default_factory=dict, compare=False)

    @property
    def Lambda(self) -> int:
        """Term count, the convention of the resource table (``n_q + 1``)."""
        return len(self.terms)

    @property
    def n_lcu(self) -> int:
        return ceil(log2(self.Lambda + 1))

    @property
    def betas(self) -> np.ndarray:
        return np.array([t.beta for t in self.terms])

    def term_diagonal(self, l: int, n_qubits: int) -> np.ndarray:
        t = self.terms[l]
        return unit_phases(t.scalar_phase + t.qubit_phase * popcounts(n_qubits))

    def diagonal(self, n_qubits: int) -> np.ndarray:
        return sum(t.beta * self.term_diagonal(l, n_qubits) for l, t in enumerate(self.terms))

    def apply(self, state: Statevector) -> Statevector:
        return Statevector(state.n_qubits, self.diagonal(state.n_qubits) * state.amplitudes)


def _shifted_integers(kind: str, target, n_qubits: int) -> np.ndarray:
    """``j(k) = m(k) - m_target`` on every basis index."""
    check_in_spectrum(kind, n_qubits, target)
    a, m = integer_labels(kind, n_qubits)
    return m - int(round(float(target) / a))


def _span(kind: str, n_qubits: int) -> int:
    a, m = integer_labels(kind, n_qubits)
    return int(m.max() - m.min())


def minimal_factor_count(max_shift: int) -> int:
    """Smallest ``L`` with ``2**L > max_shift`` (at least one factor)."""
    return floor(log2(max_shift)) + 1 if max_shift >= 1 else 1


def sum_form_values(j, n_terms: int) -> np.ndarray:
    """``(1/n) sum_k e^{2 pi i k j / n}`` evaluated on integer shifts ``j``."""
    j = np.asarray(j, dtype=np.int64)
    k = np.arange(n_terms)
    angles = 2 * pi * np.outer(j % n_terms, k) / n_terms
    return unit_phases(angles).sum(axis=1) / n_terms


def product_form_values(j, n_factors: int, upto: int | None = None) -> np.ndarray:
    """``prod_l (1 + e^{i pi j / 2^l}) / 2`` over ``l < upto`` (default all)."""
    j = np.asarray(j, dtype=np.int64)
    out = np.ones(j.shape, dtype=np.complex128)
    for l in range(n_factors if upto is None else upto):
        out *= (1 + unit_phases(pi * (j % (1 << (l + 1))) / (1 << l))) / 2
    return out


def binary_fraction_deviation(n_bits: int) -> float:
    """Max deviation between the product and sum forms for ``M = 2**n_bits``.

    Both sides are diagonal in the shift ``j``, and their values are periodic
    in ``j`` with period ``M``, so comparing ``j = 0..M-1`` covers the whole
    operator.
    """
    M = 1 << n_bits
    j = np.arange(M)
    return float(np.max(np.abs(product_form_values(j, n_bits) - sum_form_values(j, M))))


def _lowdin_values(labels: np.ndarray, target, others) -> np.ndarray:
    out = np.ones(labels.shape, dtype=np.complex128)
    for lam in others:
        out *= (labels - lam) / (float(target) - lam)
    return out


def projector_diagonal(spec: ProjectorSpec, n_qubits: int) -> np.ndarray:
    """Diagonal of the projector ``spec`` on an ``n_qubits`` register."""
    kind = spec.kind
    if kind not in DIAGONAL_KINDS:
        raise DomainError("total spin has no diagonal representation")
    check_in_spectrum(kind, n_qubits, spec.target)
    labels = diagonal_labels(kind, n_qubits)
    if spec.form in ("delta_filter", "oracle"):
        delta = np.isclose(labels, float(spec.target), atol=1e-12).astype(np.complex128)
        return 1 - 2 * delta if spec.form == "oracle" else delta
    if spec.form == "lowdin":
        others = [v for v in spectrum(kind, n_qubits) if abs(v - float(spec.target)) > 1e-12]
        return _lowdin_values(labels.astype(np.float64), spec.target, others)
    if spec.form == "parity_closed":
        return (1 + float(spec.target) * labels).astype(np.complex128) / 2
    j = _shifted_integers(kind, spec.target, n_qubits)
    span = _span(kind, n_qubits)
    if spec.form == "gauge_integral":
        return sum_form_values(j, spec.n_points or span + 1)
    if spec.form == "discrete_sum":
        M = span if spec.max_count is None else spec.max_count
        return sum_form_values(j, M + 1)
    n_factors = spec.n_factors or minimal_factor_count(int(np.max(np.abs(j))))
    return product_form_values(j, n_factors)


def is_exact(spec: ProjectorSpec, n_qubits: int) -> bool:
    """True when the chosen form equals the sector filter on this register."""
    if spec.kind == "total_spin" or spec.form == "oracle":
        return True
    diag = projector_diagonal(spec, n_qubits)
    ref = projector_diagonal(ProjectorSpec(spec.kind, spec.target), n_qubits)
    return bool(np.max(np.abs(diag - ref)) < EXACT_TOL)


def _apply_total_spin(state: Statevector, spec: ProjectorSpec) -> np.ndarray:
    n = state.n_qubits
    s2 = s_squared_transposition(n)
    S = float(spec.target)
    target_eval = S * (S + 1)
    if spec.form == "delta_filter":
        from .symmetry import spin_eigenbasis_bruteforce

        out = np.zeros(state.dim, dtype=np.complex128)
        for e in spin_eigenbasis_bruteforce(n):
            if abs(e.S - S) < 1e-9:
                out += e.amplitudes * np.vdot(e.amplitudes, state.amplitudes)
        return out
    # Cost grows with the number of distinct S(S+1) values.
    vec = state
    for other in spectrum("total_spin", n):
        ev = other * (other + 1)
        if abs(ev - target_eval) < 1e-12:
            continue
        shifted = s2.apply(vec).amplitudes - ev * vec.amplitudes
        vec = Statevector(n, shifted / (target_eval - ev))
    return vec.amplitudes


def apply_projector(state: Statevector, spec: ProjectorSpec) -> Projection:
    """``P|psi>`` and ``p = <psi|P|psi>`` for the form given by ``spec``."""
    check_in_spectrum(spec.kind, state.n_qubits, spec.target)
    if spec.kind == "total_spin":
        amps = _apply_total_spin(state, spec)
    else:
        if spec.form == "oracle":
            raise DomainError("the oracle form is unitary, use oracle_from_projector")
        amps = projector_diagonal(spec, state.n_qubits) * state.amplitudes
    vector = Statevector(state.n_qubits, amps)
    return Projection(vector, float(np.vdot(state.amplitudes, amps).real))


def classical_filter(state: Statevector, kind: str, value) -> Projection:
    """Reference sector filter: zero every amplitude outside the sector."""
    kind = canonical_kind(kind)
    if kind not in DIAGONAL_KINDS:
        raise DomainError("classical_filter needs a basis-diagonal symmetry")
    return apply_projector(state, ProjectorSpec(kind, value))


def sector_filter_mask(kind: str, value, n_qubits: int) -> np.ndarray:
    check_in_spectrum(kind, n_qubits, value)
    return np.isclose(diagonal_labels(kind, n_qubits), float(value), atol=1e-12)


def lcu_decomposition(
    kind: str,
    target,
    max_count: int | None = None,
    n_qubits: int | None = None,
    n_terms: int | None = None,
) -> LcuDecomposition:
    """Discrete gauge sum as an LCU of per-qubit phase products.

    Particle number uses ``M + 1`` terms with ``V_l = e^{2 pi i l (N - target)
    / (M + 1)}``. ``S_z`` onto ``M_s`` is rewritten as the particle number
    onto ``n/2 - M_s`` (needs ``n_qubits``). Parity uses ``(I + pi P)/2`` with
    ``P`` the tensor product of ``Z``, i.e. phase(pi) on every qubit.
    ``n_terms`` overrides ``M + 1`` for a truncated (approximate) sum.
    """
    kind = canonical_kind(kind)
    if kind == "parity":
        if n_qubits is not None:
            check_in_spectrum(kind, n_qubits, target)
        if int(target) not in (1, -1):
            raise DomainError("parity target must be +1 or -1")
        flip = 0.0 if int(target) == 1 else pi
        terms = (LcuTerm(0.5, 0.0, 0.0), LcuTerm(0.5, pi, flip))
        return LcuDecomposition(kind, int(target), terms)
    if kind == "sz":
        if n_qubits is None:
            raise DomainError("S_z decomposition needs n_qubits")
        check_in_spectrum(kind, n_qubits, target)
        n_target = int(round(n_qubits / 2 - float(target)))
    elif kind == "particle_number":
        n_target = int(target)
        if n_qubits is not None:
            check_in_spectrum(kind, n_qubits, target)
    else:
        raise DomainError(f"no phase-gate decomposition for {kind}")
    if max_count is None:
        if n_qubits is None:
            raise DomainError("give max_count or n_qubits")
        max_count = n_qubits
    if n_qubits is not None and max_count < n_qubits:
        raise DomainError("max_count must cover every reachable particle count")
    if not 0 <= n_target <= max_count:
        raise DomainError(f"target {target} outside 0..{max_count}")
    count = max_count + 1 if n_terms is None else n_terms
    terms = tuple(
        LcuTerm(1.0 / count, 2 * pi * l / count, -2 * pi * l * n_target / count)
        for l in range(count)
    )
    return LcuDecomposition(kind, float(target) if kind == "sz" else n_target, terms)


def product_projector(target: int, n_qubits: int, n_factors: int | None = None) -> DiagonalOperator:
    """Particle-number projector as ``prod_l (1 + e^{i pi (N - target)/2^l})/2``."""
    spec = ProjectorSpec("particle_number", target, "product", n_factors=n_factors)
    return DiagonalOperator(projector_diagonal(spec, n_qubits))


def gauge_integral_projector(target: int, n_qubits: int, n_points: int | None = None) -> DiagonalOperator:
    """Uniform quadrature of the gauge integral; exact once ``n_points > n_qubits``."""
    spec = ProjectorSpec("particle_number", target, "gauge_integral", n_points=n_points)
    return DiagonalOperator(projector_diagonal(spec, n_qubits))


def discrete_sum_projector(target: int, n_qubits: int, max_count: int | None = None) -> DiagonalOperator:
    spec = ProjectorSpec("particle_number", target, "discrete_sum", max_count=max_count)
    return DiagonalOperator(projector_diagonal(spec, n_qubits))


def _exact_filter_diagonal(spec: ProjectorSpec, n_qubits: int) -> np.ndarray:
    if spec.kind == "total_spin":
        raise DomainError("oracle construction needs a basis-diagonal symmetry")
    if not is_exact(spec, n_qubits):
        raise DomainError(f"form {spec.form!r} is not the exact sector projector on {n_qubits} qubits")
    return projector_diagonal(ProjectorSpec(spec.kind, spec.target), n_qubits)


def oracle_from_projector(spec: ProjectorSpec, n_qubits: int) -> DiagonalOperator:
    """``U_f = I - 2P``: -1 on the sector, +1 elsewhere."""
    return DiagonalOperator(1 - 2 * _exact_filter_diagonal(spec, n_qubits))


def generalized_oracle(spec: ProjectorSpec, n_qubits: int, delta: float) -> DiagonalOperator:
    """``U(delta) = I + (e^{i delta} - 1) P``."""
    p = _exact_filter_diagonal(spec, n_qubits)
    return DiagonalOperator(1 + (unit_phases(delta) - 1) * p)
