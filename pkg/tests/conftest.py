import numpy as np
import pytest

from wignerlab import FiniteGroup, finite_rep
from wignerlab.groups import philox_stream

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]])
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@pytest.fixture
def rng():
    return philox_stream(0xC0FFEE)


def random_hermitian(d, rng):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (a + a.conj().T) / 2


def matrix_group(generators):
    """Close a set of matrices under multiplication and return the
    (FiniteGroup, UnitaryRep) realized by them.  Used to put specific
    unitaries such as Pauli X and Z inside an honest finite group."""
    mats = [np.eye(generators[0].shape[0], dtype=complex)]
    frontier = list(generators)
    while frontier:
        cand = frontier.pop()
        if any(np.allclose(cand, m, atol=1e-12) for m in mats):
            continue
        mats.append(cand)
        for m in list(mats):
            frontier.append(cand @ m)
            frontier.append(m @ cand)
    order = len(mats)
    table = np.zeros((order, order), dtype=int)
    for i in range(order):
        for j in range(order):
            prod = mats[i] @ mats[j]
            matches = [k for k in range(order) if np.allclose(prod, mats[k], atol=1e-12)]
            assert len(matches) == 1, "generators do not close into a finite group"
            table[i, j] = matches[0]
    group = FiniteGroup(tuple(f"g{i}" for i in range(order)), table, 0)
    return group, finite_rep(group, mats, "matrix-group")


def element_index(rep, matrix):
    """Index of the group element represented by the given matrix."""
    from wignerlab import element_unitary
    from wignerlab.groups import finite_elements

    for g in finite_elements(rep.group):
        if np.allclose(element_unitary(rep, g), matrix, atol=1e-12):
            return g
    raise AssertionError("matrix not found in the represented group")
