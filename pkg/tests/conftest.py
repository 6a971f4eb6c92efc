import functools
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from goodslice.invariants import fundamental_invariants
from goodslice.lie import ClassicalType, build_classical
from goodslice.multipoly import SparsePoly
from goodslice.nilpotent import Partition, standard_triple
from goodslice.slodowy import restrict_all, slice_chart

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

NV = 3

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
exps = st.tuples(*[st.integers(0, 3)] * NV)


@st.composite
def polys(draw, nvars=NV, max_terms=5):
    e = st.tuples(*[st.integers(0, 3)] * nvars)
    terms = draw(st.dictionaries(e, coeffs, max_size=max_terms))
    return SparsePoly(nvars, terms)


points = st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=3), min_size=NV, max_size=NV)


@functools.lru_cache(maxsize=None)
def algebra(name: str):
    return build_classical(ClassicalType.parse(name))


@functools.lru_cache(maxsize=None)
def orbit(name: str, partition: str):
    """(L, triple, chart, restrictions) for a named orbit, memoised across tests."""
    L = algebra(name)
    T = standard_triple(L, Partition.parse(partition))
    chart = slice_chart(L, T)
    rs = restrict_all(fundamental_invariants(L), chart)
    return L, T, chart, rs


@pytest.fixture
def frac():
    return Fraction
