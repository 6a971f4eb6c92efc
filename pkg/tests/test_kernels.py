import numpy as np
from hypothesis import given, strategies as st

from goodslice import kernels, linalg
from goodslice.criterion import PRIMES, _pack
from goodslice.multipoly import SparsePoly

from conftest import polys

P = PRIMES[0]
BACKENDS = ["numpy"] + (["numba"] if kernels.BACKEND == "numba" else [])


@given(st.lists(st.lists(st.integers(-4, 4), min_size=4, max_size=4), min_size=1, max_size=5))
def test_rank_backends_match_exact(rows):
    exact = linalg.rank(linalg.qmatrix(rows))
    a = np.array(rows, dtype=np.int64) % P
    for b in BACKENDS:
        assert kernels.rank_mod_p(a, P, backend=b) == exact


def test_rank_mod_small_prime():
    a = np.array([[1, 2], [2, 4]], dtype=np.int64)
    assert kernels.rank_mod_p(a, 7) == 1
    b = np.array([[1, 2], [3, 4]], dtype=np.int64)
    # det = -2: rank drops only mod 2
    for backend in BACKENDS:
        assert kernels.rank_mod_p(b, 2, backend=backend) == 1
        assert kernels.rank_mod_p(b, 5, backend=backend) == 2


@given(st.lists(polys(), min_size=1, max_size=4), st.lists(st.integers(1, P - 1), min_size=3, max_size=3))
def test_eval_backends_match_python(ps, pt):
    packed = _pack(ps, P)
    expected = [p.evaluate(pt, prime=P) for p in ps]
    for b in BACKENDS:
        assert list(kernels.eval_mod_p(*packed, np.array(pt), P, backend=b)) == expected


def test_empty_inputs():
    assert kernels.rank_mod_p(np.zeros((0, 3), dtype=np.int64), P) == 0
    packed = _pack([SparsePoly.zero(2)], P)
    assert list(kernels.eval_mod_p(*packed, np.array([1, 2]), P)) == [0]
