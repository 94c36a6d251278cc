"""Sector labels, sector dimensions and total-spin multiplet counting."""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, isclose, sqrt

import numpy as np

from .errors import DomainError, ResourceLimitError
from .pauli import canonical_kind, s_squared_transposition
from .statevec import popcounts

KINDS = ("particle_number", "sz", "parity", "total_spin")
DIAGONAL_KINDS = ("particle_number", "sz", "parity")
MAX_BRUTEFORCE_QUBITS = 8


@dataclass(frozen=True)
class SectorLabel:
    kind: str
    value: float


@dataclass(frozen=True)
class SpinBasisEntry:
    S: float
    M: float
    degeneracy_index: int
    amplitudes: np.ndarray


def _two_times(value, what: str) -> int:
    twice = 2 * float(value)
    if abs(twice - round(twice)) > 1e-9:
        raise DomainError(f"{what}={value} is not a half-integer")
    return int(round(twice))


def sector_label(k: int, kind: str, n: int) -> SectorLabel:
    kind = canonical_kind(kind)
    if not 0 <= k < (1 << n):
        raise DomainError(f"basis index {k} out of range for {n} qubits")
    n1 = int(k).bit_count()
    if kind == "particle_number":
        return SectorLabel(kind, n1)
    if kind == "sz":
        return SectorLabel(kind, n / 2 - n1)
    if kind == "parity":
        return SectorLabel(kind, 1 if n1 % 2 == 0 else -1)
    raise DomainError("total spin is not diagonal in the computational basis")


def diagonal_labels(kind: str, n: int) -> np.ndarray:
    """Vectorized sector labels for every basis index."""
    kind = canonical_kind(kind)
    pc = popcounts(n)
    if kind == "particle_number":
        return pc.copy()
    if kind == "sz":
        return n / 2.0 - pc
    if kind == "parity":
        return 1 - 2 * (pc & 1)
    raise DomainError("total spin is not diagonal in the computational basis")


def spectrum(kind: str, n: int) -> list:
    """Eigen-labels of the symmetry operator in ascending order."""
    kind = canonical_kind(kind)
    if kind == "particle_number":
        return list(range(n + 1))
    if kind == "sz":
        return [n / 2 - n1 for n1 in range(n, -1, -1)]
    if kind == "parity":
        return [-1, 1] if n >= 1 else [1]
    return [t / 2 for t in range(n % 2, n + 1, 2)]


def check_in_spectrum(kind: str, n: int, value) -> None:
    if not any(isclose(float(value), float(v), abs_tol=1e-12) for v in spectrum(kind, n)):
        raise DomainError(f"{value} is not in the spectrum of {kind} on {n} qubits")


def sector_dimension(n: int, kind: str, value) -> int:
    kind = canonical_kind(kind)
    check_in_spectrum(kind, n, value)
    if kind == "particle_number":
        return comb(n, int(value))
    if kind == "sz":
        return comb(n, int(round(n / 2 - float(value))))
    if kind == "parity":
        return 1 << (n - 1)
    S = float(value)
    return young_degeneracy(n, S) * int(round(2 * S + 1))


def integer_scale(kind: str, n: int) -> float:
    """Constant ``a`` such that every eigenvalue is ``a`` times an integer."""
    kind = canonical_kind(kind)
    if kind == "sz" and n % 2 == 1:
        return 0.5
    if kind in DIAGONAL_KINDS:
        return 1.0
    raise DomainError(f"{kind} has no integer mapping on the computational basis")


def integer_labels(kind: str, n: int) -> tuple[float, np.ndarray]:
    """(a, m) with eigenvalue(k) = a * m[k] and m integer."""
    a = integer_scale(kind, n)
    m = np.rint(diagonal_labels(kind, n) / a).astype(np.int64)
    return a, m


def young_degeneracy(n: int, S) -> int:
    """Number of paths to total spin ``S`` on the two-row tableau lattice.

    Each added qubit moves S by +-1/2 while keeping S >= 0; the count equals
    the number of independent (S, M) multiplets on ``n`` qubits.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    two_s = _two_times(S, "S")
    if two_s < 0 or two_s > n or (n - two_s) % 2:
        raise DomainError(f"S={S} is not reachable with {n} spins")
    counts = {1: 1}
    for _ in range(n - 1):
        nxt: dict[int, int] = {}
        for t, c in counts.items():
            nxt[t + 1] = nxt.get(t + 1, 0) + c
            if t >= 1:
                nxt[t - 1] = nxt.get(t - 1, 0) + c
        counts = nxt
    return counts.get(two_s, 0)


def _spin_from_eigenvalue(lam: float) -> float:
    S = (-1.0 + sqrt(max(1.0 + 4.0 * lam, 0.0))) / 2.0
    return round(2 * S) / 2


def _canonical_phase(v: np.ndarray) -> np.ndarray:
    idx = int(np.argmax(np.abs(v) > 1e-9))
    return v * (abs(v[idx]) / v[idx])


def spin_eigenbasis_bruteforce(n: int, cluster_tol: float = 1e-8) -> list[SpinBasisEntry]:
    """Orthonormal (S^2, S_z) eigenbasis by dense diagonalization per M block.

    Entries are sorted by S descending, then M descending. Each vector has its
    first non-negligible component made real and positive.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    if n > MAX_BRUTEFORCE_QUBITS:
        raise ResourceLimitError(f"brute-force eigenbasis limited to {MAX_BRUTEFORCE_QUBITS} qubits")
    s2 = s_squared_transposition(n).to_matrix()
    pc = popcounts(n)
    entries = []
    for n1 in range(n + 1):
        idx = np.flatnonzero(pc == n1)
        block = s2[np.ix_(idx, idx)]
        vals, vecs = np.linalg.eigh(block)
        M = n / 2 - n1
        start = 0
        while start < len(vals):
            stop = start + 1
            while stop < len(vals) and vals[stop] - vals[start] < cluster_tol:
                stop += 1
            S = _spin_from_eigenvalue(float(np.mean(vals[start:stop])))
            for d, col in enumerate(range(start, stop)):
                full = np.zeros(1 << n, dtype=np.complex128)
                full[idx] = vecs[:, col]
                entries.append(SpinBasisEntry(S, M, d, _canonical_phase(full)))
            start = stop
    entries.sort(key=lambda e: (-e.S, -e.M, e.degeneracy_index))
    return entries
