"""Pauli strings, Pauli sums, diagonal operators and the Jordan-Wigner map.

Text format for a Pauli string is ``"<sign>[i] P_{n-1}...P_0"``, e.g.
``"-i XIZ"`` is ``-i * X_2 Z_0`` on three qubits. The letter for qubit 0 is
written last, matching the ket ordering used in ``statevec``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Mapping

import numpy as np

from .errors import DomainError
from .statevec import Statevector, popcounts

_MATS = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}

# (a, b) -> (phase, c) with sigma_a sigma_b = phase * sigma_c
_PRODUCT = {}
for _a in "IXYZ":
    _PRODUCT[("I", _a)] = (1, _a)
    _PRODUCT[(_a, "I")] = (1, _a)
    _PRODUCT[(_a, _a)] = (1, "I")
_PRODUCT.update({
    ("X", "Y"): (1j, "Z"), ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"), ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"), ("X", "Z"): (-1j, "Y"),
})

_KIND_ALIASES = {
    "number": "particle_number",
    "particle_number": "particle_number",
    "n": "particle_number",
    "sz": "sz",
    "parity": "parity",
    "s_squared": "total_spin",
    "total_spin": "total_spin",
    "s2": "total_spin",
}


def canonical_kind(kind: str) -> str:
    try:
        return _KIND_ALIASES[kind.lower()]
    except (KeyError, AttributeError):
        raise DomainError(f"unknown symmetry kind {kind!r}") from None


@dataclass(frozen=True)
class PauliString:
    """``phase * (x) factors``; ``factors[j]`` acts on qubit ``j``."""

    factors: tuple[str, ...]
    phase: complex = 1.0

    def __post_init__(self):
        facs = tuple(str(f).upper() for f in self.factors)
        if any(f not in _MATS for f in facs):
            raise DomainError(f"invalid Pauli letters {facs}")
        object.__setattr__(self, "factors", facs)
        ph = complex(self.phase)
        if abs(abs(ph) - 1.0) > 1e-12:
            raise DomainError(f"Pauli phase must have unit modulus, got {ph}")
        object.__setattr__(self, "phase", ph)

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(("I",) * n_qubits)

    @classmethod
    def from_ops(cls, n_qubits: int, ops: Mapping[int, str], phase: complex = 1.0) -> "PauliString":
        facs = ["I"] * n_qubits
        for q, letter in ops.items():
            if not 0 <= q < n_qubits:
                raise DomainError(f"qubit {q} out of range")
            facs[q] = letter
        return cls(tuple(facs), phase)

    @classmethod
    def parse(cls, text: str) -> "PauliString":
        m = re.fullmatch(r"\s*([+-]?)\s*(i?)\s*([IXYZ]+)\s*", text)
        if m is None:
            raise DomainError(f"cannot parse Pauli string {text!r}")
        sign, imag, letters = m.groups()
        phase = (-1.0 if sign == "-" else 1.0) * (1j if imag else 1.0)
        return cls(tuple(reversed(letters)), phase)

    def __str__(self) -> str:
        ph = self.phase
        table = {1: "+", -1: "-", 1j: "+i", -1j: "-i"}
        for val, txt in table.items():
            if abs(ph - val) < 1e-12:
                prefix = txt
                break
        else:
            prefix = f"({ph:.17g})"
        return f"{prefix} {''.join(reversed(self.factors))}"

    @property
    def n_qubits(self) -> int:
        return len(self.factors)

    @property
    def x_mask(self) -> int:
        return sum(1 << j for j, f in enumerate(self.factors) if f in "XY")

    @property
    def z_mask(self) -> int:
        return sum(1 << j for j, f in enumerate(self.factors) if f in "YZ")

    @property
    def weight(self) -> int:
        return sum(f != "I" for f in self.factors)

    def adjoint(self) -> "PauliString":
        return PauliString(self.factors, np.conj(self.phase))

    def __matmul__(self, other: "PauliString") -> "PauliString":
        if self.n_qubits != other.n_qubits:
            raise DomainError("size mismatch in Pauli product")
        phase = self.phase * other.phase
        facs = []
        for a, b in zip(self.factors, other.factors):
            ph, c = _PRODUCT[(a, b)]
            phase *= ph
            facs.append(c)
        return PauliString(tuple(facs), phase)

    def to_matrix(self) -> np.ndarray:
        # kron puts its first factor on the most significant bit
        mats = [_MATS[f] for f in reversed(self.factors)] or [np.eye(1)]
        return self.phase * reduce(np.kron, mats)


def apply_pauli_string(state: Statevector, p: PauliString) -> Statevector:
    """Exact action of a Pauli string by bit flips and signs."""
    if state.n_qubits != p.n_qubits:
        raise DomainError(f"Pauli string on {p.n_qubits} qubits, state on {state.n_qubits}")
    k = np.arange(state.dim, dtype=np.int64)
    n_y = sum(f == "Y" for f in p.factors)
    signs = 1 - 2 * (popcounts(state.n_qubits)[k & p.z_mask] & 1)
    # Y|b> = i(-1)^b |1-b>: the i^nY is global, the sign comes from z_mask
    coeff = p.phase * (1j ** n_y) * signs
    out = np.empty_like(state.amplitudes)
    out[k ^ p.x_mask] = coeff * state.amplitudes
    return Statevector(state.n_qubits, out)


@dataclass(frozen=True)
class PauliSum:
    terms: tuple[tuple[complex, PauliString], ...] = field(default_factory=tuple)

    def __post_init__(self):
        terms = tuple((complex(c), p) for c, p in self.terms)
        sizes = {p.n_qubits for _, p in terms}
        if len(sizes) > 1:
            raise DomainError("all terms must act on the same register")
        object.__setattr__(self, "terms", terms)

    @property
    def n_qubits(self) -> int:
        return self.terms[0][1].n_qubits if self.terms else 0

    def __add__(self, other: "PauliSum") -> "PauliSum":
        return PauliSum(self.terms + other.terms)

    def __mul__(self, scalar: complex) -> "PauliSum":
        return PauliSum(tuple((scalar * c, p) for c, p in self.terms))

    __rmul__ = __mul__

    def __matmul__(self, other: "PauliSum") -> "PauliSum":
        return PauliSum(tuple(
            (ca * cb, pa @ pb) for ca, pa in self.terms for cb, pb in other.terms
        )).simplify()

    def adjoint(self) -> "PauliSum":
        return PauliSum(tuple((np.conj(c), p.adjoint()) for c, p in self.terms))

    def simplify(self, tol: float = 1e-14) -> "PauliSum":
        """Fold phases into coefficients and merge equal strings."""
        acc: dict[tuple[str, ...], complex] = {}
        for c, p in self.terms:
            acc[p.factors] = acc.get(p.factors, 0.0) + c * p.phase
        return PauliSum(tuple(
            (c, PauliString(f)) for f, c in acc.items() if abs(c) > tol
        ))

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return all(abs(c.imag) <= tol for c, _ in self.simplify().terms)

    def apply(self, state: Statevector) -> Statevector:
        out = np.zeros_like(state.amplitudes)
        for c, p in self.terms:
            out += c * apply_pauli_string(state, p).amplitudes
        return Statevector(state.n_qubits, out)

    def to_matrix(self) -> np.ndarray:
        dim = 1 << self.n_qubits
        out = np.zeros((dim, dim), dtype=np.complex128)
        for c, p in self.terms:
            out += c * p.to_matrix()
        return out


@dataclass(frozen=True)
class DiagonalOperator:
    """Operator diagonal in the computational basis, stored as eigenvalues."""

    diagonal: np.ndarray

    def __post_init__(self):
        d = np.array(self.diagonal, copy=True)
        d = d.astype(np.complex128) if np.iscomplexobj(d) else d.astype(np.float64)
        n = d.size.bit_length() - 1
        if d.ndim != 1 or 1 << n != d.size:
            raise DomainError("diagonal length must be a power of two")
        d.flags.writeable = False
        object.__setattr__(self, "diagonal", d)

    @property
    def n_qubits(self) -> int:
        return self.diagonal.size.bit_length() - 1

    def apply(self, state: Statevector) -> Statevector:
        if state.dim != self.diagonal.size:
            raise DomainError("size mismatch")
        return Statevector(state.n_qubits, self.diagonal * state.amplitudes)

    def to_matrix(self) -> np.ndarray:
        return np.diag(self.diagonal)

    def __matmul__(self, other: "DiagonalOperator") -> "DiagonalOperator":
        return DiagonalOperator(self.diagonal * other.diagonal)


def _z_chain(n: int, j: int) -> dict[int, str]:
    return {k: "Z" for k in range(j)}


def jwt_creation(j: int, n: int) -> PauliSum:
    """Qubit image of a_j^dagger: (X_j - iY_j)/2 with -Z on every qubit k < j."""
    if not 0 <= j < n:
        raise DomainError(f"orbital {j} out of range for {n} qubits")
    sign = (-1.0) ** j
    ops_x = {**_z_chain(n, j), j: "X"}
    ops_y = {**_z_chain(n, j), j: "Y"}
    return PauliSum((
        (0.5 * sign, PauliString.from_ops(n, ops_x)),
        (-0.5j * sign, PauliString.from_ops(n, ops_y)),
    ))


def jwt_annihilation(j: int, n: int) -> PauliSum:
    return jwt_creation(j, n).adjoint()


def number_operator_pauli(n: int) -> PauliSum:
    """N = sum_j (I - Z_j)/2 as a Pauli sum."""
    terms = [(0.5 * n, PauliString.identity(n))]
    terms += [(-0.5, PauliString.from_ops(n, {j: "Z"})) for j in range(n)]
    return PauliSum(tuple(terms))


def s_squared_pauli(n: int) -> PauliSum:
    """S^2 = 1/4 sum_{j,l} (X_j X_l + Y_j Y_l + Z_j Z_l), all ordered pairs."""
    terms = []
    for j in range(n):
        for l in range(n):
            for a in "XYZ":
                p = PauliString.from_ops(n, {j: a}) @ PauliString.from_ops(n, {l: a})
                terms.append((0.25, p))
    return PauliSum(tuple(terms))


def s_squared_transposition(n: int) -> PauliSum:
    """S^2 = N(4-N)/4 I + sum_{j<l} P_jl with P_jl = (I + XX + YY + ZZ)/2."""
    terms = [(n * (4 - n) / 4.0, PauliString.identity(n))]
    for j in range(n):
        for l in range(j + 1, n):
            terms.append((0.5, PauliString.identity(n)))
            for a in "XYZ":
                terms.append((0.5, PauliString.from_ops(n, {j: a, l: a})))
    return PauliSum(tuple(terms))


def number_diagonal(n: int) -> np.ndarray:
    return popcounts(n).astype(np.float64)


def sz_diagonal(n: int) -> np.ndarray:
    return n / 2.0 - popcounts(n)


def parity_diagonal(n: int) -> np.ndarray:
    return 1.0 - 2.0 * (popcounts(n) & 1)


def build_symmetry_operator(kind: str, n: int) -> PauliSum | DiagonalOperator:
    """Symmetry operator on ``n`` qubits.

    Basis-diagonal symmetries come back as :class:`DiagonalOperator`; total
    spin comes back as the transposition-form :class:`PauliSum`.
    """
    if n < 1:
        raise DomainError("register size must be at least 1")
    kind = canonical_kind(kind)
    if kind == "particle_number":
        return DiagonalOperator(number_diagonal(n))
    if kind == "sz":
        return DiagonalOperator(sz_diagonal(n))
    if kind == "parity":
        return DiagonalOperator(parity_diagonal(n))
    return s_squared_transposition(n)


def commutator_norm(a, b, states: Iterable[Statevector]) -> float:
    """max ||(AB - BA) psi|| over ``states``; operands need ``.apply``."""
    worst = 0.0
    for psi in states:
        ab = a.apply(b.apply(psi)).amplitudes
        ba = b.apply(a.apply(psi)).amplitudes
        worst = max(worst, float(np.linalg.norm(ab - ba)))
    return worst
