"""Symmetry restoration of many-body states on a dense statevector simulator."""
from .circuit import Circuit, Gate, bcs_prepare, pn_ansatz_layered, standard_gate, symmetry_block_unitary
from .errors import DomainError, EmptySectorError, ResourceLimitError, SymRestoreError
from .pauli import PauliString, PauliSum, build_symmetry_operator, jwt_annihilation, jwt_creation
from .projector import (
    LcuDecomposition,
    ProjectorSpec,
    apply_projector,
    classical_filter,
    gauge_integral_projector,
    lcu_decomposition,
    oracle_from_projector,
    product_projector,
)
from .resources import ResourceReport, resource_report
from .restore import (
    ObservableLcu,
    RestorationResult,
    expectation_generating_function,
    expectation_postprocessed,
    grover_project,
    hadamard_oracle_project,
    iqpe_project,
    lcu_project,
    qpe_project,
)
from .statevec import Statevector, new_basis_state, random_state, uniform_state
from .symmetry import sector_dimension, sector_label, spin_eigenbasis_bruteforce, young_degeneracy

__version__ = "0.1.0"
