"""Resource accounting for the restoration methods.

Counts follow the comparison table conventions: ``Lambda`` is the number of
LCU terms (``n_q + 1`` for particle number), ``n_LCU = ceil(log2(Lambda+1))``,
``n_QPE = floor(log2 n_q)``, ``n_IQPE = floor(log2 n_q) + 1`` and
``n_G = ceil(w / 2 theta)`` with ``w = pi/2 - theta``. Gate inventories use
the gate names of the simulated circuits so they can be checked against them.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from math import asin, ceil, floor, log2, pi, sin, sqrt

from .errors import DomainError
from .projector import minimal_factor_count

METHODS = ("postproc", "lcu", "hadamard_oracle", "grover", "hoyer", "qpe", "iqpe")
_ALIASES = {"hadamard-oracle": "hadamard_oracle", "postprocessing": "postproc"}


@dataclass(frozen=True)
class ResourceReport:
    method: str
    n_ancilla: int
    n_measurement_rounds: int
    gate_inventory: dict
    retained_probability: float | str
    gives_projected_state: bool
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n_ancilla < 0 or self.n_measurement_rounds < 0:
            raise DomainError("counts must be non-negative")
        if any(v < 0 for v in self.gate_inventory.values()):
            raise DomainError("gate counts must be non-negative")
        p = self.retained_probability
        if not isinstance(p, str) and not 0.0 <= p <= 1.0:
            raise DomainError("retained probability outside [0, 1]")

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def n_lcu(Lambda: int) -> int:
    return ceil(log2(Lambda + 1))


def n_qpe(n_q: int) -> int:
    return floor(log2(n_q))


def n_iqpe(n_q: int) -> int:
    return floor(log2(n_q)) + 1


def grover_steps(p_g: float) -> int | None:
    """``ceil(w / 2 theta)``; ``None`` when ``p_g = 0`` (no rotation defined)."""
    if p_g <= 0.0:
        return None
    theta = asin(sqrt(p_g))
    ratio = (pi / 2 - theta) / (2 * theta)
    return max(0, ceil(ratio - 1e-9))


def resource_report(method: str, n_q: int, Lambda: int | None = None, p_G: float | None = None) -> ResourceReport:
    """Table-style resource summary for particle-number restoration on ``n_q`` qubits."""
    method = _ALIASES.get(method, method)
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}")
    if n_q < 1:
        raise DomainError("n_q must be at least 1")
    if Lambda is None:
        Lambda = n_q + 1
    if Lambda < 1:
        raise DomainError("Lambda must be at least 1")
    if p_G is not None and not 0.0 <= p_G <= 1.0:
        raise DomainError("p_G must lie in [0, 1]")
    retained = "p_G" if p_G is None else float(p_G)

    if method == "postproc":
        return ResourceReport(
            method, 1, Lambda,
            {"H": 2 * Lambda, "CPHASE": Lambda * n_q},
            "deterministic", False,
            {"hadamard_tests": Lambda},
        )
    if method == "lcu":
        n_a = n_lcu(Lambda)
        return ResourceReport(
            method, n_a, 1,
            {"MCPHASE": Lambda * n_q, "DIAG": 1, "UNITARY": 2},
            retained, True,
            {"Lambda": Lambda, "state_preparation_parameters": 2 * (1 << n_a),
             "state_preparation_count_kind": "estimate"},
        )
    if method == "hadamard_oracle":
        return ResourceReport(method, 1, 1, {"H": 2, "DIAG": 1}, retained, True, {"oracle_calls": 1})
    if method == "qpe":
        exact = minimal_factor_count(n_q)
        return ResourceReport(
            method, n_qpe(n_q), 1,
            {"H": exact, "CPHASE": exact * n_q, "UNITARY": 1},
            retained, True,
            {"n_ancilla_exact": exact, "controlled_evolutions": exact,
             "controlled_evolutions_table": Lambda, "inverse_qft_qubits": exact,
             "inverse_qft_two_qubit_gates": exact * (exact - 1) // 2},
        )
    if method == "iqpe":
        rounds = n_iqpe(n_q)
        return ResourceReport(
            method, 1, rounds,
            {"H": 2 * rounds, "CPHASE": rounds * n_q, "PHASE": rounds},
            retained, True,
            {"controlled_evolutions": rounds},
        )
    if p_G is None:
        raise DomainError(f"{method} needs p_G")
    steps = grover_steps(p_G)
    if steps is None:
        return ResourceReport(method, 0, 0, {}, 0.0, True, {"n_G": None, "flag": "undefined n_G for p_G = 0"})
    theta = asin(sqrt(p_G))
    if method == "grover":
        retained = sin((2 * steps + 1) * theta) ** 2
    else:
        retained = 1.0
    return ResourceReport(
        method, 0, 1,
        {"oracle": steps, "reflection": steps},
        min(retained, 1.0), True,
        {"n_G": steps, "theta": theta},
    )
