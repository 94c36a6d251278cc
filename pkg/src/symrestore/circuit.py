"""Gates, circuits and the ansatz builders.

Rotations follow R_O(a) = exp(-i a O / 2). A gate's matrix acts on its
``targets`` (bit ``i`` of the matrix index is ``targets[i]``) and fires only
when every ``(qubit, bit)`` pair in ``controls`` matches.

Serialized form, one gate per line after a ``qubits <n>`` header::

    NAME<TAB>p1,p2<TAB>t1,t2<TAB>c1:b1,c2:b2

with ``-`` for an empty field and parameters printed with 17 significant
digits so that a parse round-trip is exact.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import cos, pi, sin
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError
from .statevec import (
    Statevector,
    apply_diagonal,
    apply_unitary,
    _norm_controls,
    new_basis_state,
    popcounts,
    unit_phase,
)

_FIXED = {
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    "H": np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2),
}
_ARITY = {
    "X": 0, "Y": 0, "Z": 0, "H": 0, "CNOT": 0,
    "RX": 1, "RY": 1, "RZ": 1, "PHASE": 1, "CPHASE": 1, "MCPHASE": 1,
}
_PAYLOAD = ("MCU", "UNITARY", "DIAG")


def rx(t: float) -> np.ndarray:
    return np.array([[cos(t / 2), -1j * sin(t / 2)], [-1j * sin(t / 2), cos(t / 2)]], dtype=np.complex128)


def ry(t: float) -> np.ndarray:
    return np.array([[cos(t / 2), -sin(t / 2)], [sin(t / 2), cos(t / 2)]], dtype=np.complex128)


def rz(t: float) -> np.ndarray:
    return np.array([[unit_phase(-t / 2), 0], [0, unit_phase(t / 2)]], dtype=np.complex128)


def phase(t: float) -> np.ndarray:
    return np.array([[1, 0], [0, unit_phase(t)]], dtype=np.complex128)


@dataclass(frozen=True)
class Gate:
    name: str
    params: tuple[float, ...] = ()
    targets: tuple[int, ...] = ()
    controls: tuple[tuple[int, int], ...] = ()
    payload: np.ndarray | None = field(default=None, compare=False)
    label: str | None = None

    def matrix(self) -> np.ndarray:
        """Matrix on the target qubits (the controls are implicit)."""
        name = self.name
        if name in _FIXED:
            return _FIXED[name]
        if name == "CNOT":
            return _FIXED["X"]
        if name == "RX":
            return rx(self.params[0])
        if name == "RY":
            return ry(self.params[0])
        if name == "RZ":
            return rz(self.params[0])
        if name in ("PHASE", "CPHASE", "MCPHASE"):
            return phase(self.params[0])
        if name in ("MCU", "UNITARY"):
            return self.payload
        if name == "DIAG":
            return np.diag(self.payload)
        raise DomainError(f"unknown gate {name!r}")

    @property
    def wires(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.controls) + self.targets

    def inverse(self) -> "Gate":
        if self.name in _FIXED or self.name == "CNOT":
            return self
        if self.name in ("RX", "RY", "RZ", "PHASE", "CPHASE", "MCPHASE"):
            return Gate(self.name, (-self.params[0],), self.targets, self.controls)
        if self.name == "DIAG":
            return Gate("DIAG", (), self.targets, self.controls, np.conj(self.payload), _dagger(self.label))
        return Gate(self.name, (), self.targets, self.controls, self.payload.conj().T, _dagger(self.label))

    def apply(self, state: Statevector) -> Statevector:
        if self.name == "DIAG":
            return apply_diagonal(state, self.payload, self.targets, self.controls)
        return apply_unitary(state, self.matrix(), self.targets, self.controls)


def _dagger(label: str | None) -> str | None:
    if label is None:
        return None
    return label[:-1] if label.endswith("^") else label + "^"


def standard_gate(name: str, params: Sequence[float] = (), wires: Sequence[int] = (), *,
                  controls: Iterable = (), matrix=None) -> Gate:
    """Build a named gate.

    For ``CNOT`` and ``CPHASE`` the wires are ``(control, target)``. ``MCU``
    takes an explicit ``matrix`` on ``wires`` plus ``controls``; every other
    gate may also receive extra ``controls``.
    """
    name = name.upper()
    params = tuple(float(p) for p in params)
    wires = tuple(int(w) for w in wires)
    ctrl = _norm_controls(controls)
    if name == "MCU":
        if matrix is None or params:
            raise DomainError("MCU takes a matrix and no angle parameters")
        m = np.asarray(matrix, dtype=np.complex128)
        if m.shape != (1 << len(wires),) * 2:
            raise DomainError("MCU matrix does not match its target wires")
        return Gate("MCU", (), wires, ctrl, m)
    if name not in _ARITY:
        raise DomainError(f"unknown gate {name!r}")
    if len(params) != _ARITY[name]:
        raise DomainError(f"{name} expects {_ARITY[name]} parameter(s), got {len(params)}")
    if name in ("CNOT", "CPHASE"):
        if len(wires) != 2:
            raise DomainError(f"{name} acts on (control, target)")
        return Gate(name, params, (wires[1],), ((wires[0], 1),) + ctrl)
    if len(wires) != 1:
        raise DomainError(f"{name} acts on a single target qubit")
    return Gate(name, params, wires, ctrl)


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        gates = tuple(self.gates)
        for g in gates:
            for q in g.wires:
                if not 0 <= q < self.n_qubits:
                    raise DomainError(f"gate {g.name} uses wire {q} outside {self.n_qubits} qubits")
        object.__setattr__(self, "gates", gates)

    def extend(self, gates: Iterable[Gate]) -> "Circuit":
        return Circuit(self.n_qubits, self.gates + tuple(gates))

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n_qubits != self.n_qubits:
            raise DomainError("cannot concatenate circuits of different widths")
        return self.extend(other.gates)

    def inverse(self) -> "Circuit":
        return Circuit(self.n_qubits, tuple(g.inverse() for g in reversed(self.gates)))

    def run(self, state: Statevector | None = None) -> Statevector:
        if state is None:
            state = new_basis_state(self.n_qubits, 0)
        if state.n_qubits != self.n_qubits:
            raise DomainError("state and circuit widths differ")
        for g in self.gates:
            state = g.apply(state)
        return state

    def unitary(self) -> np.ndarray:
        """Dense matrix realized by the circuit (columns are images of basis states)."""
        dim = 1 << self.n_qubits
        cols = [self.run(new_basis_state(self.n_qubits, k)).amplitudes for k in range(dim)]
        return np.stack(cols, axis=1)

    def count(self, name: str) -> int:
        return sum(g.name == name.upper() for g in self.gates)

    def gate_counts(self) -> dict[str, int]:
        return dict(sorted(Counter(g.name for g in self.gates).items()))

    @property
    def n_parameters(self) -> int:
        return sum(len(g.params) for g in self.gates)

    def to_text(self) -> str:
        lines = [f"qubits {self.n_qubits}"]
        for g in self.gates:
            if g.name in _PAYLOAD:
                ptxt = f"payload:{g.label or g.name.lower()}"
            else:
                ptxt = ",".join(format(p, ".17g") for p in g.params) or "-"
            ttxt = ",".join(map(str, g.targets)) or "-"
            ctxt = ",".join(f"{q}:{b}" for q, b in g.controls) or "-"
            lines.append("\t".join((g.name, ptxt, ttxt, ctxt)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Circuit":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = lines[0].split()
        if len(head) != 2 or head[0] != "qubits":
            raise DomainError("missing 'qubits <n>' header")
        gates = []
        for ln in lines[1:]:
            name, ptxt, ttxt, ctxt = ln.split("\t")
            if ptxt.startswith("payload:"):
                raise DomainError(f"gate {name} carries an opaque payload and cannot be parsed")
            params = () if ptxt == "-" else tuple(float(p) for p in ptxt.split(","))
            targets = () if ttxt == "-" else tuple(int(t) for t in ttxt.split(","))
            controls = () if ctxt == "-" else tuple(
                tuple(int(x) for x in c.split(":")) for c in ctxt.split(","))
            if name not in _ARITY or len(params) != _ARITY[name]:
                raise DomainError(f"bad gate line {ln!r}")
            gates.append(Gate(name, params, targets, controls))
        return cls(int(head[1]), tuple(gates))


def _r_gates(q: int, t1: float, t2: float) -> list[Gate]:
    # R(t1, t2) = RZ(t2 + pi) RY(t1 + pi/2): RY acts first
    return [Gate("RY", (t1 + pi / 2,), (q,)), Gate("RZ", (t2 + pi,), (q,))]


def _r_dagger_gates(q: int, t1: float, t2: float) -> list[Gate]:
    return [g.inverse() for g in reversed(_r_gates(q, t1, t2))]


def number_block_gates(q0: int, q1: int, t1: float, t2: float) -> list[Gate]:
    """Two-parameter block mixing |01> and |10> on (q0, q1); q0 is the low bit."""
    return [
        Gate("CNOT", (), (q1,), ((q0, 1),)),
        *_r_dagger_gates(q0, t1, t2),
        Gate("CNOT", (), (q0,), ((q1, 1),)),
        *_r_gates(q0, t1, t2),
        Gate("CNOT", (), (q1,), ((q0, 1),)),
    ]


def parity_block_gates(q0: int, q1: int, t1: float, t2: float) -> list[Gate]:
    """Two-parameter block mixing |00> and |11>, leaving odd parity unchanged."""
    return [
        Gate("CNOT", (), (q1,), ((q0, 1),)),
        Gate("X", (), (q0,)),
        *_r_dagger_gates(q0, t1, t2),
        Gate("CNOT", (), (q0,), ((q1, 0),)),
        *_r_gates(q0, t1, t2),
        Gate("X", (), (q0,)),
        Gate("CNOT", (), (q1,), ((q0, 1),)),
    ]


def reduced_block_gates(q: int, t1: float, t2: float) -> list[Gate]:
    return [
        Gate("X", (), (q,)),
        *_r_dagger_gates(q, t1, t2),
        Gate("X", (), (q,)),
        *_r_gates(q, t1, t2),
        Gate("X", (), (q,)),
    ]


def symmetry_block_unitary(variant: str, theta1: float, theta2: float) -> Circuit:
    """Symmetry-restricted two-parameter blocks.

    ``sz_preserving`` and ``parity_block`` act on qubits (0, 1); ``reduced``
    is the equivalent single-qubit rotation once the block is encoded on one
    qubit.
    """
    if variant == "sz_preserving":
        return Circuit(2, number_block_gates(0, 1, theta1, theta2))
    if variant == "parity_block":
        return Circuit(2, parity_block_gates(0, 1, theta1, theta2))
    if variant == "reduced":
        return Circuit(1, reduced_block_gates(0, theta1, theta2))
    raise DomainError(f"unknown block variant {variant!r}")


def _a_gates(q: int, alpha: float, gamma: float, delta: float) -> list[Gate]:
    # A = RZ(alpha) RY(gamma) RZ(delta)
    return [Gate("RZ", (delta,), (q,)), Gate("RY", (gamma,), (q,)), Gate("RZ", (alpha,), (q,))]


def general_two_qubit_template(params: Sequence[float]) -> Circuit:
    """Generic two-qubit unitary template with three CNOTs and 15 angles.

    ``params`` are ``A1(3), A2(3), t1, t2, t3, A3(3), A4(3)``.
    """
    p = [float(x) for x in params]
    if len(p) != 15:
        raise DomainError("the general two-qubit template takes 15 parameters")
    gates = [
        *_a_gates(0, *p[0:3]), *_a_gates(1, *p[3:6]),
        Gate("CNOT", (), (0,), ((1, 1),)),
        Gate("RZ", (p[6],), (0,)), Gate("RZ", (p[7],), (1,)),
        Gate("CNOT", (), (1,), ((0, 1),)),
        Gate("RZ", (p[8],), (1,)),
        Gate("CNOT", (), (0,), ((1, 1),)),
        *_a_gates(0, *p[9:12]), *_a_gates(1, *p[12:15]),
    ]
    return Circuit(2, gates)


def _occupation_bits(n_qubits: int, seed_occupations) -> list[int]:
    if isinstance(seed_occupations, (int, np.integer)):
        if not 0 <= seed_occupations < (1 << n_qubits):
            raise DomainError("seed pattern out of range")
        return [(int(seed_occupations) >> j) & 1 for j in range(n_qubits)]
    bits = [int(b) for b in seed_occupations]
    if len(bits) != n_qubits or any(b not in (0, 1) for b in bits):
        raise DomainError("seed occupations must list one bit per qubit")
    return bits


def brick_pairs(n_qubits: int, layer: int) -> list[tuple[int, int]]:
    start = layer % 2
    return [(q, q + 1) for q in range(start, n_qubits - 1, 2)]


def pn_ansatz_layered(n_qubits: int, n_particles: int, layer_params: Sequence[tuple[float, float]],
                      seed_occupations) -> Circuit:
    """Particle-number preserving ansatz.

    X gates load ``seed_occupations`` (an int bitmask or one bit per qubit,
    qubit 0 first), then number-conserving blocks are laid in a brick
    pattern: even layers on pairs (0,1), (2,3), ..., odd layers on (1,2),
    (3,4), .... Parameters are consumed block by block; the last layer may be
    partial.
    """
    bits = _occupation_bits(n_qubits, seed_occupations)
    if sum(bits) != n_particles:
        raise DomainError(f"seed pattern holds {sum(bits)} particles, expected {n_particles}")
    gates = [Gate("X", (), (q,)) for q, b in enumerate(bits) if b]
    params = list(layer_params)
    if params and n_qubits < 2:
        raise DomainError("blocks need at least two qubits")
    layer = 0
    while params:
        for q0, q1 in brick_pairs(n_qubits, layer):
            if not params:
                break
            t1, t2 = params.pop(0)
            gates += number_block_gates(q0, q1, t1, t2)
        layer += 1
    return Circuit(n_qubits, gates)


def bcs_prepare(thetas: Sequence[float], encoding: str = "two_qubits_per_pair",
                n_qubits: int | None = None) -> Circuit:
    """Product-of-pairs state prod_n [cos(t_n/2) + sin(t_n/2) P_n^dagger] |vac>.

    ``two_qubits_per_pair`` puts pair ``n`` on qubits (2n, 2n+1) via RY and a
    CNOT; ``one_qubit_per_pair`` encodes each pair occupation on one qubit.
    """
    thetas = [float(t) for t in thetas]
    if encoding == "two_qubits_per_pair":
        width = 2 * len(thetas)
        gates = []
        for n, t in enumerate(thetas):
            gates += [Gate("RY", (t,), (2 * n,)), Gate("CNOT", (), (2 * n + 1,), ((2 * n, 1),))]
    elif encoding == "one_qubit_per_pair":
        width = len(thetas)
        gates = [Gate("RY", (t,), (n,)) for n, t in enumerate(thetas)]
    else:
        raise DomainError(f"unknown encoding {encoding!r}")
    if n_qubits is not None and n_qubits != width:
        raise DomainError(f"{encoding} with {len(thetas)} pairs needs {width} qubits, got {n_qubits}")
    return Circuit(width, gates)


def pair_number_labels(n_qubits: int, encoding: str = "two_qubits_per_pair") -> np.ndarray:
    """Number of occupied pairs for every basis index."""
    pc = popcounts(n_qubits)
    return pc // 2 if encoding == "two_qubits_per_pair" else pc.copy()
