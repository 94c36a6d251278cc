from math import sqrt

import numpy as np
import pytest

from symrestore.errors import DomainError
from symrestore.pauli import (
    DiagonalOperator,
    PauliString,
    PauliSum,
    apply_pauli_string,
    build_symmetry_operator,
    canonical_kind,
    commutator_norm,
    jwt_annihilation,
    jwt_creation,
    number_operator_pauli,
    s_squared_pauli,
    s_squared_transposition,
)
from symrestore.statevec import Statevector, new_basis_state, random_state

SX = np.array([[0, 1], [1, 0]])
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0, -1.0])
I2 = np.eye(2)


def embed(ops, n):
    """Dense operator with ``ops[q]`` on qubit q (qubit 0 is the last kron factor)."""
    out = np.array([[1.0]])
    for q in reversed(range(n)):
        out = np.kron(out, ops.get(q, I2))
    return out


def dense_creation(j, n):
    """a_j^dagger from the textbook Jordan-Wigner definition."""
    ops = {k: -SZ for k in range(j)}
    ops[j] = (SX - 1j * SY) / 2
    return embed(ops, n)


def test_z_and_xx_actions():
    out = apply_pauli_string(new_basis_state(2, 1), PauliString.parse("IZ"))
    assert np.allclose(out.amplitudes, -new_basis_state(2, 1).amplitudes)
    out = apply_pauli_string(new_basis_state(2, 0), PauliString.parse("XX"))
    assert np.allclose(out.amplitudes, new_basis_state(2, 3).amplitudes)


def test_parity_string_eigenvalues():
    p = PauliString.parse("ZZZ")
    for k in range(8):
        out = apply_pauli_string(new_basis_state(3, k), p)
        assert out.amplitudes[k] == (-1) ** bin(k).count("1")


def test_parse_and_print_round_trip():
    p = PauliString.parse("-i XIZY")
    assert p.factors == ("Y", "Z", "I", "X")
    assert PauliString.parse(str(p)) == p


def test_string_matrix_against_kron(rng):
    p = PauliString.parse("i XYZ")
    ref = 1j * embed({2: SX, 1: SY, 0: SZ}, 3)
    assert np.allclose(p.to_matrix(), ref)
    psi = random_state(3, rng)
    assert np.allclose(apply_pauli_string(psi, p).amplitudes, ref @ psi.amplitudes)


def test_product_table(rng):
    a, b = PauliString.parse("XYZI"), PauliString.parse("-YYXZ")
    assert np.allclose((a @ b).to_matrix(), a.to_matrix() @ b.to_matrix())


def test_size_mismatch():
    with pytest.raises(DomainError):
        apply_pauli_string(new_basis_state(2, 0), PauliString.parse("XXX"))


def test_creation_single_qubit():
    ad = jwt_creation(0, 1).to_matrix()
    a = jwt_annihilation(0, 1).to_matrix()
    assert np.allclose(ad @ [1, 0], [0, 1])
    assert np.allclose(a @ [1, 0], [0, 0])


def test_creation_matches_textbook_definition():
    for n in range(1, 5):
        for j in range(n):
            assert np.allclose(jwt_creation(j, n).to_matrix(), dense_creation(j, n))


def test_anticommutators():
    for n in range(1, 6):
        ad = [jwt_creation(j, n).to_matrix() for j in range(n)]
        a = [m.conj().T for m in ad]
        eye = np.eye(1 << n)
        for j in range(n):
            for k in range(n):
                assert np.max(np.abs(a[j] @ ad[k] + ad[k] @ a[j] - (j == k) * eye)) < 1e-12
                assert np.max(np.abs(a[j] @ a[k] + a[k] @ a[j])) < 1e-12


def test_creation_antisymmetry(rng):
    psi = random_state(3, rng)
    a0, a1 = jwt_creation(0, 3), jwt_creation(1, 3)
    lhs = a1.apply(a0.apply(psi)).amplitudes
    rhs = a0.apply(a1.apply(psi)).amplitudes
    assert np.allclose(lhs, -rhs)


def test_jwt_number_operator_is_popcount():
    n = 4
    total = sum((jwt_creation(j, n) @ jwt_annihilation(j, n) for j in range(n)), PauliSum())
    dense = total.to_matrix()
    pc = [bin(k).count("1") for k in range(1 << n)]
    assert np.max(np.abs(dense - np.diag(pc))) < 1e-14
    assert np.max(np.abs(number_operator_pauli(n).to_matrix() - np.diag(pc))) < 1e-14


def test_symmetry_operators():
    sz = build_symmetry_operator("sz", 3)
    assert sz.diagonal[5] == -0.5
    assert isinstance(build_symmetry_operator("number", 3), DiagonalOperator)
    par = build_symmetry_operator("parity", 4)
    assert np.all((par @ par).diagonal == 1)


def test_s_squared_on_two_spins():
    s2 = build_symmetry_operator("s_squared", 2)
    singlet = Statevector(2, np.array([0, -1, 1, 0]) / sqrt(2))
    assert np.allclose(s2.apply(singlet).amplitudes, 0)
    up = new_basis_state(2, 0)
    assert np.allclose(s2.apply(up).amplitudes, 2 * up.amplitudes)


def test_s_squared_forms_agree(rng):
    for n in range(1, 7):
        a, b = s_squared_pauli(n), s_squared_transposition(n)
        assert a.is_hermitian() and b.is_hermitian()
        for _ in range(3):
            psi = random_state(n, rng)
            assert np.max(np.abs(a.apply(psi).amplitudes - b.apply(psi).amplitudes)) < 1e-10


def test_s_squared_commutes_with_sz(rng):
    for n in range(2, 6):
        states = [random_state(n, rng) for _ in range(3)]
        assert commutator_norm(s_squared_transposition(n), build_symmetry_operator("sz", n), states) < 1e-10


def test_kind_aliases():
    assert canonical_kind("number") == "particle_number"
    assert canonical_kind("s_squared") == "total_spin"
    with pytest.raises(DomainError):
        canonical_kind("angular")
