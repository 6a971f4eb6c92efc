import random

import numpy as np
import pytest

from goodslice import linalg
from goodslice.lie import (
    ClassicalType,
    ConfigurationError,
    NotInAlgebra,
    ad_weight_basis,
    bracket,
    build_classical,
    centralizer_basis,
)
from goodslice.nilpotent import Partition, standard_triple

from conftest import algebra

SMALL = ["A1", "A2", "A3", "B1", "B2", "B3", "C1", "C2", "C3", "D2", "D3", "D4"]


def comm(x, y):
    return linalg.normalize(np.dot(x, y) - np.dot(y, x))


@pytest.mark.parametrize("name,dim,N", [("A1", 3, 2), ("C2", 10, 4), ("D6", 66, 12)])
def test_dimensions(name, dim, N):
    L = algebra(name)
    assert (L.dim, L.N) == (dim, N)


def test_rank_bound():
    with pytest.raises(ConfigurationError):
        build_classical(ClassicalType("A", 7))
    with pytest.raises(ConfigurationError):
        ClassicalType("D", 1)
    with pytest.raises(ConfigurationError):
        ClassicalType("E", 6)
    assert build_classical(ClassicalType("A", 7), max_rank=7).dim == 63


@pytest.mark.parametrize("name", SMALL)
def test_basis_and_form(name):
    L = algebra(name)
    assert L.dim == L.type.dimension
    G = L.form_gram
    assert np.array_equal(G, G.T)
    assert linalg.rank(G) == L.dim
    if L.form is not None:
        J = L.form
        for b in L.basis:
            assert linalg.is_zero(linalg.normalize(np.dot(b.T, J) + np.dot(J, b)))


@pytest.mark.parametrize("name", SMALL)
def test_closure_jacobi_and_invariance(name):
    L = algebra(name)
    rng = random.Random(name)
    for _ in range(50):
        x, y, z = (rng.choice(L.basis) for _ in range(3))
        assert L.contains(comm(x, y))
        jac = comm(x, comm(y, z)) + comm(y, comm(z, x)) + comm(z, comm(x, y))
        assert linalg.is_zero(linalg.normalize(jac))
        assert L.trace_form(comm(x, y), z) + L.trace_form(y, comm(x, z)) == 0


def test_sl2_bracket_and_centralizer():
    L = algebra("A1")
    T = standard_triple(L, Partition((2,)))
    assert np.array_equal(bracket(L, T.e, T.f), T.h)
    assert linalg.is_zero(bracket(L, T.e, T.e))
    ge = centralizer_basis(L, T.e)
    assert len(ge) == 1 and linalg.rank(np.array([ge[0].ravel(), T.e.ravel()], dtype=object)) == 1
    assert ad_weight_basis(L, ge, T.h)[0][1] == 2
    (z, w), = ad_weight_basis(L, centralizer_basis(L, T.f), T.h)
    assert w == -2 and linalg.rank(np.array([z.ravel(), T.f.ravel()], dtype=object)) == 1


def test_centralizer_of_zero():
    L = algebra("B2")
    assert len(centralizer_basis(L, linalg.qmatrix(L.N, L.N))) == L.dim


def test_non_member_rejected():
    L = algebra("C2")
    x = linalg.qmatrix(4, 4)
    x[0, 0] = 1
    with pytest.raises(NotInAlgebra):
        L.coords(x)
    with pytest.raises(NotInAlgebra):
        bracket(L, x, L.basis[0])


@pytest.mark.parametrize("name", ["A3", "B3", "C3", "D4"])
def test_weight_bases_span(name):
    from goodslice.nilpotent import enumerate_partitions

    L = algebra(name)
    for lam in enumerate_partitions(L.type):
        T = standard_triple(L, lam)
        ge, gf = centralizer_basis(L, T.e), centralizer_basis(L, T.f)
        assert len(ge) == len(gf) == L.dim - linalg.rank(L.ad_matrix(T.e))
        assert (len(ge) - L.rank) % 2 == 0
        we, wf = ad_weight_basis(L, ge, T.h), ad_weight_basis(L, gf, T.h)
        assert all(n >= 0 for _, n in we) and all(m <= 0 for _, m in wf)
        stacked = np.array([L.coords(v) for v, _ in we] + [L.coords(v) for v in ge], dtype=object)
        assert linalg.rank(stacked) == len(ge)
