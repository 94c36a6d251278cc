from math import comb, sqrt

import numpy as np
import pytest

from symrestore.errors import DomainError, ResourceLimitError
from symrestore.pauli import s_squared_transposition, sz_diagonal
from symrestore.symmetry import (
    integer_labels,
    sector_dimension,
    sector_label,
    spectrum,
    spin_eigenbasis_bruteforce,
    young_degeneracy,
)


def test_sector_labels():
    assert sector_label(5, "particle_number", 3).value == 2
    assert sector_label(5, "sz", 3).value == -0.5
    assert sector_label(6, "parity", 3).value == 1
    with pytest.raises(DomainError):
        sector_label(0, "total_spin", 3)


def test_sector_dimensions():
    assert sector_dimension(16, "particle_number", 8) == 12870
    assert sector_dimension(4, "parity", 1) == 8
    assert sector_dimension(3, "sz", 1.5) == 1
    with pytest.raises(DomainError):
        sector_dimension(3, "particle_number", 4)


def test_dimensions_sum_to_register():
    for n in range(1, 9):
        for kind in ("particle_number", "sz", "parity", "total_spin"):
            assert sum(sector_dimension(n, kind, v) for v in spectrum(kind, n)) == 2**n


def test_integer_mapping():
    a, m = integer_labels("sz", 3)
    assert a == 0.5 and set(m.tolist()) == {3, 1, -1, -3}
    a, m = integer_labels("sz", 4)
    assert a == 1 and np.allclose(a * m, sz_diagonal(4))


def test_young_degeneracy_examples():
    assert young_degeneracy(2, 0) == 1
    assert young_degeneracy(2, 1) == 1
    assert young_degeneracy(4, 1) == 3
    with pytest.raises(DomainError):
        young_degeneracy(3, 1)


def test_young_sum_rule():
    for n in range(1, 11):
        total = sum(young_degeneracy(n, S) * int(2 * S + 1) for S in spectrum("total_spin", n))
        assert total == 2**n


def test_young_matches_bruteforce_multiplicity():
    for n in range(1, 7):
        evals = np.linalg.eigvalsh(s_squared_transposition(n).to_matrix())
        for S in spectrum("total_spin", n):
            mult = int(np.sum(np.abs(evals - S * (S + 1)) < 1e-8))
            assert mult == young_degeneracy(n, S) * (2 * S + 1)


def test_two_spin_table():
    basis = spin_eigenbasis_bruteforce(2)
    assert [(e.S, e.M) for e in basis] == [(1, 1), (1, 0), (1, -1), (0, 0)]
    expected = [
        [1, 0, 0, 0],
        [0, 1 / sqrt(2), 1 / sqrt(2), 0],
        [0, 0, 0, 1],
        [0, -1 / sqrt(2), 1 / sqrt(2), 0],
    ]
    for e, ref in zip(basis, expected):
        assert abs(abs(np.vdot(ref, e.amplitudes)) - 1) < 1e-10


def test_three_spin_doublets():
    basis = spin_eigenbasis_bruteforce(3)
    half = [e for e in basis if e.S == 0.5 and e.M == 0.5]
    assert len(half) == 2


def test_eigenbasis_properties():
    for n in range(1, 7):
        basis = spin_eigenbasis_bruteforce(n)
        assert len(basis) == 2**n
        mat = np.array([e.amplitudes for e in basis])
        assert np.max(np.abs(mat.conj() @ mat.T - np.eye(2**n))) < 1e-10
        s2 = s_squared_transposition(n).to_matrix()
        sz = sz_diagonal(n)
        for e in basis:
            assert np.max(np.abs(s2 @ e.amplitudes - e.S * (e.S + 1) * e.amplitudes)) < 1e-10
            assert np.max(np.abs(sz * e.amplitudes - e.M * e.amplitudes)) < 1e-10


def test_eigenbasis_size_limit():
    with pytest.raises(ResourceLimitError):
        spin_eigenbasis_bruteforce(9)


def test_binomial_dimensions():
    for n in range(1, 10):
        for k in range(n + 1):
            assert sector_dimension(n, "particle_number", k) == comb(n, k)
