"""Dense statevector engine.

Qubit ordering is little-endian everywhere in the package: qubit ``j`` holds
bit ``j`` of the basis index, so ``|s_{n-1} ... s_1 s_0>`` has index
``sum_j s_j 2**j``. Printed bit strings follow the same convention as the
usual ket notation, most significant qubit first.

Ancilla registers are always appended *above* the system register, i.e. a
system of ``n`` qubits with ``a`` ancillas occupies qubits ``0..n-1`` and the
ancillas are ``n..n+a-1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import pi
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DomainError, ResourceLimitError

MAX_QUBITS = 24
# Branch outcomes below this probability are treated as absent.
ZERO_PROB = 1e-20
UNITARY_TOL = 1e-10


@dataclass(frozen=True)
class Statevector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 0 or self.n_qubits > MAX_QUBITS:
            raise ResourceLimitError(
                f"{self.n_qubits} qubits outside the dense budget (max {MAX_QUBITS})"
            )
        amps = np.array(self.amplitudes, dtype=np.complex128, copy=True).reshape(-1)
        if amps.size != 1 << self.n_qubits:
            raise DomainError(
                f"expected {1 << self.n_qubits} amplitudes, got {amps.size}"
            )
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize: bool = False) -> "Statevector":
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        n = amps.size.bit_length() - 1
        if amps.size == 0 or 1 << n != amps.size:
            raise DomainError("amplitude count must be a power of two")
        state = cls(n, amps)
        return state.normalize() if normalize else state

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalize(self) -> "Statevector":
        nrm = self.norm()
        if nrm == 0.0:
            raise DomainError("cannot normalize the zero vector")
        return Statevector(self.n_qubits, self.amplitudes / nrm)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def inner(self, other: "Statevector") -> complex:
        """Return <self|other>."""
        _check_same_size(self, other)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "Statevector") -> float:
        """|<self|other>|^2 for normalized inputs."""
        return abs(self.inner(other)) ** 2

    def with_ancillas(self, n_ancilla: int) -> "Statevector":
        """Tensor ``n_ancilla`` qubits in |0> above the current register."""
        amps = np.zeros(self.dim << n_ancilla, dtype=np.complex128)
        amps[: self.dim] = self.amplitudes
        return Statevector(self.n_qubits + n_ancilla, amps)

    def __add__(self, other: "Statevector") -> "Statevector":
        _check_same_size(self, other)
        return Statevector(self.n_qubits, self.amplitudes + other.amplitudes)

    def __rmul__(self, scalar: complex) -> "Statevector":
        return Statevector(self.n_qubits, complex(scalar) * self.amplitudes)

    def bitstring(self, index: int) -> str:
        return format(index, f"0{self.n_qubits}b") if self.n_qubits else ""


@dataclass(frozen=True)
class MeasurementOutcome:
    """One branch of a projective measurement on a subset of qubits.

    ``observed_bits[i]`` is the result on the ``i``-th measured qubit, in the
    order the qubits were passed; ``value`` packs them little-endian.
    """

    observed_bits: tuple[int, ...]
    value: int
    probability: float
    post_state: Statevector


def _check_same_size(a: Statevector, b: Statevector) -> None:
    if a.n_qubits != b.n_qubits:
        raise DomainError(f"register size mismatch: {a.n_qubits} vs {b.n_qubits}")


def new_basis_state(n_qubits: int, index: int) -> Statevector:
    if n_qubits < 0:
        raise DomainError("n_qubits must be non-negative")
    if not 0 <= index < (1 << n_qubits):
        raise DomainError(f"basis index {index} out of range for {n_qubits} qubits")
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return Statevector(n_qubits, amps)


def uniform_state(n_qubits: int) -> Statevector:
    dim = 1 << n_qubits
    return Statevector(n_qubits, np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128))


def random_state(n_qubits: int, rng: np.random.Generator | int | None = None) -> Statevector:
    """Haar-like random normalized state (complex Gaussian, normalized)."""
    rng = np.random.default_rng(rng)
    dim = 1 << n_qubits
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return Statevector(n_qubits, amps / np.linalg.norm(amps))


def unit_phase(phi: float) -> complex:
    """e^{i phi}, exact when phi is a multiple of pi/2."""
    quarter = phi / (pi / 2)
    r = round(quarter)
    if abs(quarter - r) < 1e-13:
        return (1.0 + 0j, 1j, -1.0 + 0j, -1j)[r % 4]
    return complex(np.exp(1j * phi))


@lru_cache(maxsize=32)
def popcounts(n_qubits: int) -> np.ndarray:
    """n_1(k) for every basis index k of an ``n_qubits`` register."""
    k = np.arange(1 << n_qubits, dtype=np.int64)
    out = np.zeros_like(k)
    for j in range(n_qubits):
        out += (k >> j) & 1
    out.flags.writeable = False
    return out


def _sub_index(n_qubits: int, qubits: Sequence[int]) -> np.ndarray:
    """Little-endian index of every basis state restricted to ``qubits``."""
    k = np.arange(1 << n_qubits, dtype=np.int64)
    if list(qubits) == list(range(len(qubits))):
        return k & ((1 << len(qubits)) - 1)
    sub = np.zeros_like(k)
    for i, q in enumerate(qubits):
        sub |= ((k >> q) & 1) << i
    return sub


def _control_mask(n_qubits: int, controls: Sequence[tuple[int, int]]) -> np.ndarray | None:
    if not controls:
        return None
    k = np.arange(1 << n_qubits, dtype=np.int64)
    mask = np.ones(k.size, dtype=bool)
    for q, bit in controls:
        mask &= ((k >> q) & 1) == bit
    return mask


def _check_wires(n_qubits: int, targets: Sequence[int], controls: Sequence[tuple[int, int]]):
    wires = list(targets) + [q for q, _ in controls]
    if len(set(wires)) != len(wires):
        raise DomainError(f"overlapping wires: targets={list(targets)} controls={list(controls)}")
    for q in wires:
        if not 0 <= q < n_qubits:
            raise DomainError(f"wire {q} out of range for {n_qubits} qubits")
    for _, bit in controls:
        if bit not in (0, 1):
            raise DomainError("control value must be 0 or 1")


def _norm_controls(controls) -> tuple[tuple[int, int], ...]:
    out = []
    for c in controls or ():
        if isinstance(c, (int, np.integer)):
            out.append((int(c), 1))
        else:
            q, bit = c
            out.append((int(q), int(bit)))
    return tuple(out)


def apply_unitary(
    state: Statevector,
    matrix,
    targets: Sequence[int],
    controls: Iterable = (),
) -> Statevector:
    """Apply ``matrix`` to ``targets``, conditioned on ``controls``.

    ``matrix`` row/column index bit ``i`` refers to ``targets[i]``. Each
    control is ``(qubit, bit)``; a bare integer means control-on-1. A
    control-on-0 corresponds to the open circle of circuit diagrams.
    """
    targets = [int(t) for t in targets]
    controls = _norm_controls(controls)
    n = state.n_qubits
    if not targets:
        raise DomainError("at least one target qubit is required")
    _check_wires(n, targets, controls)
    u = np.asarray(matrix, dtype=np.complex128)
    k = len(targets)
    if u.shape != (1 << k, 1 << k):
        raise DomainError(f"matrix shape {u.shape} does not match {k} target qubits")
    if np.max(np.abs(u.conj().T @ u - np.eye(1 << k))) > UNITARY_TOL:
        raise DomainError("matrix is not unitary")

    axis = lambda q: n - 1 - q  # C-order reshape puts the top qubit first
    src = [axis(q) for q, _ in controls] + [axis(t) for t in reversed(targets)]
    dst = list(range(len(controls))) + list(range(n - k, n))
    psi = np.moveaxis(state.amplitudes.reshape((2,) * n), src, dst)
    out = psi.copy()
    sel = tuple(bit for _, bit in controls)
    block = psi[sel]
    shape = block.shape
    cols = block.reshape(-1, 1 << k)
    # Elementwise accumulation instead of a BLAS product: fused multiply-adds
    # would spoil exact cancellations and bitwise reproducibility.
    res = np.zeros_like(cols)
    for j in range(1 << k):
        for i in range(1 << k):
            if u[i, j] != 0:
                res[:, i] += u[i, j] * cols[:, j]
    out[sel] = res.reshape(shape)
    out = np.moveaxis(out, dst, src)
    return Statevector(n, out.reshape(-1))


def apply_diagonal(
    state: Statevector,
    diagonal,
    qubits: Sequence[int] | None = None,
    controls: Iterable = (),
    check_unitary: bool = True,
) -> Statevector:
    """Multiply by a diagonal operator acting on ``qubits`` (default: all).

    ``diagonal[j]`` is the eigenvalue for sub-index ``j`` over ``qubits``.
    """
    n = state.n_qubits
    qubits = list(range(n)) if qubits is None else [int(q) for q in qubits]
    controls = _norm_controls(controls)
    _check_wires(n, qubits, controls)
    d = np.asarray(diagonal, dtype=np.complex128).reshape(-1)
    if d.size != 1 << len(qubits):
        raise DomainError(f"diagonal of length {d.size} does not match {len(qubits)} qubits")
    if check_unitary and np.max(np.abs(np.abs(d) - 1.0)) > UNITARY_TOL:
        raise DomainError("diagonal operator is not unitary")
    factor = d if len(qubits) == n and qubits == list(range(n)) else d[_sub_index(n, qubits)]
    mask = _control_mask(n, controls)
    if mask is not None:
        factor = np.where(mask, factor, 1.0)
    return Statevector(n, state.amplitudes * factor)


def _outcome(state: Statevector, qubits, sub, value, prob, remove) -> MeasurementOutcome:
    mask = sub == value
    if remove:
        amps = state.amplitudes[mask]
        n_out = state.n_qubits - len(qubits)
    else:
        amps = np.where(mask, state.amplitudes, 0.0)
        n_out = state.n_qubits
    post = Statevector(n_out, amps / np.sqrt(prob))
    bits = tuple((value >> i) & 1 for i in range(len(qubits)))
    return MeasurementOutcome(bits, int(value), float(prob), post)


def _pattern_probabilities(state: Statevector, qubits: Sequence[int]):
    qubits = [int(q) for q in qubits]
    if not qubits:
        raise DomainError("empty qubit list")
    _check_wires(state.n_qubits, qubits, ())
    sub = _sub_index(state.n_qubits, qubits)
    probs = np.bincount(sub, weights=state.probabilities(), minlength=1 << len(qubits))
    return qubits, sub, probs


def measure_qubits(
    state: Statevector,
    qubits: Sequence[int],
    mode: str = "branch",
    seed: int | np.random.Generator | None = None,
    remove: bool = True,
) -> list[MeasurementOutcome]:
    """Projectively measure ``qubits`` in the computational basis.

    ``mode="branch"`` returns every outcome with non-negligible probability,
    ordered by value. ``mode="sample"`` draws a single outcome from ``seed``.
    Post-measurement states are renormalized; measured qubits are dropped
    when ``remove`` is true.
    """
    qubits, sub, probs = _pattern_probabilities(state, qubits)
    if mode == "branch":
        return [
            _outcome(state, qubits, sub, v, p, remove)
            for v, p in enumerate(probs)
            if p > ZERO_PROB
        ]
    if mode == "sample":
        rng = np.random.default_rng(seed)
        v = int(rng.choice(probs.size, p=probs / probs.sum()))
        return [_outcome(state, qubits, sub, v, probs[v], remove)]
    raise DomainError(f"unknown measurement mode {mode!r}")


def postselect(
    state: Statevector, qubits: Sequence[int], value: int = 0, remove: bool = True
) -> tuple[float, Statevector | None]:
    """Probability of observing ``value`` on ``qubits`` and the collapsed state.

    The state is ``None`` when the outcome is (numerically) impossible.
    """
    qubits, sub, probs = _pattern_probabilities(state, qubits)
    p = float(probs[value])
    if p <= ZERO_PROB:
        return p, None
    return p, _outcome(state, qubits, sub, value, p, remove).post_state


def sample_counts(
    state: Statevector,
    qubits: Sequence[int],
    shots: int,
    seed: int | np.random.Generator | None = None,
) -> dict[int, int]:
    """Emulate ``shots`` repetitions of a measurement; returns value -> count."""
    _, _, probs = _pattern_probabilities(state, qubits)
    rng = np.random.default_rng(seed)
    draws = rng.choice(probs.size, size=shots, p=probs / probs.sum())
    values, counts = np.unique(draws, return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts)}


def sector_probabilities(state: Statevector, labeler: Callable[[int], object] | np.ndarray) -> dict:
    """Total probability carried by each sector label.

    ``labeler`` maps a basis index to its label, or is a precomputed label
    array of length ``2**n``.
    """
    if callable(labeler):
        labels = np.array([labeler(k) for k in range(state.dim)])
    else:
        labels = np.asarray(labeler)
        if labels.size != state.dim:
            raise DomainError("label array length does not match the register")
    keys, inverse = np.unique(labels, return_inverse=True)
    sums = np.bincount(inverse.reshape(-1), weights=state.probabilities(), minlength=keys.size)
    return {k.item(): float(s) for k, s in zip(keys, sums)}


def unit_phases(angles) -> np.ndarray:
    """Vectorized :func:`unit_phase`."""
    angles = np.asarray(angles, dtype=np.float64)
    shape = angles.shape
    angles = angles.reshape(-1)
    quarter = angles / (pi / 2)
    r = np.rint(quarter)
    exact = np.abs(quarter - r) < 1e-13
    table = np.array([1.0, 1j, -1.0, -1j], dtype=np.complex128)
    out = np.exp(1j * angles)
    out[exact] = table[r[exact].astype(np.int64) % 4]
    return out.reshape(shape)
