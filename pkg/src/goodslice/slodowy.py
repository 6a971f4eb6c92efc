"""Slodowy slice charts, restriction of invariants and initial components.

A chart fixes a weight basis z_1..z_r of g^f (ad h eigenvalue -m_j) and
uses coordinates t_j on the slice e + sum t_j z_j.  Through the trace form
t_j is a linear function on g^f, i.e. an element of g^e of ad-h weight m_j,
so it carries Slodowy weight m_j + 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import budget, linalg
from .invariants import InvariantPoly, affine_matrix, apply_invariants
from .lie import LieAlgebra, StructuralError, ad_weight_basis, centralizer_basis
from .multipoly import SparsePoly, initial_component, linear_combination, substitute_affine, weighted_components
from .nilpotent import Sl2Triple

DEFAULT_PROBE_CAP = 12


@dataclass
class SliceChart:
    algebra: LieAlgebra = field(repr=False)
    triple: Sl2Triple = field(repr=False)
    e_basis: list[tuple[np.ndarray, int]] = field(repr=False)
    f_basis: list[tuple[np.ndarray, int]] = field(repr=False)

    @property
    def r(self) -> int:
        return len(self.f_basis)

    @property
    def e_weights(self) -> list[int]:
        return [n for _, n in self.e_basis]

    @property
    def f_weights(self) -> list[int]:
        return [m for _, m in self.f_basis]

    @property
    def slodowy_weights(self) -> tuple[int, ...]:
        return tuple(m + 2 for m in self.f_weights)

    @cached_property
    def pairing(self) -> np.ndarray:
        L = self.algebra
        P = linalg.qmatrix(self.r, self.r)
        for i, (x, _) in enumerate(self.e_basis):
            for j, (z, _) in enumerate(self.f_basis):
                P[i, j] = L.trace_form(x, z)
        return P

    @cached_property
    def slice_matrix(self) -> np.ndarray:
        """e + sum_j t_j z_j with entries affine in t1..tr."""
        return affine_matrix(self.triple.e, [z for z, _ in self.f_basis])

    @cached_property
    def coordinate_images(self) -> list[SparsePoly]:
        """c_a as an affine function of t: the comorphism of t -> e + sum t_j z_j."""
        L = self.algebra
        ce = L.coords(self.triple.e)
        cz = [L.coords(z) for z, _ in self.f_basis]
        return [SparsePoly.linear([c[a] for c in cz], const=ce[a]) if self.r else SparsePoly.constant(0, ce[a])
                for a in range(L.dim)]

    @cached_property
    def _projection(self) -> np.ndarray:
        """Rows map coordinates in g to coordinates in the z basis, killing [e, g]."""
        L = self.algebra
        Z = [L.coords(z) for z, _ in self.f_basis]
        ad_e = L.ad_matrix(self.triple.e)
        red, pivots = linalg.rref(ad_e.T.copy())
        image = [np.array(red[i], dtype=object) for i in range(len(pivots))]
        W = np.array(Z + image, dtype=object).T.copy()
        if W.shape[1] != L.dim:
            raise StructuralError("dim g^f + rank ad e != dim g")
        try:
            Winv = linalg.inverse(W)
        except ZeroDivisionError as exc:
            raise StructuralError("g is not the direct sum of [e, g] and g^f") from exc
        return Winv[: self.r]

    def action_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of y -> pi_{g^f}([x, y]) on g^f in the z basis."""
        L = self.algebra
        cols = []
        for z, _ in self.f_basis:
            v = L.coords(linalg.normalize(np.dot(x, z) - np.dot(z, x)), check=False)
            cols.append(linalg.normalize(np.dot(self._projection, v)))
        return np.array(cols, dtype=object).T.copy() if cols else linalg.qmatrix(0, 0)


def slice_chart(L: LieAlgebra, T: Sl2Triple) -> SliceChart:
    """Weight bases of g^e and g^f and the resulting slice coordinates."""
    ge = centralizer_basis(L, T.e)
    gf = centralizer_basis(L, T.f)
    if len(ge) != len(gf):
        raise StructuralError("dim g^e != dim g^f")
    e_basis = ad_weight_basis(L, ge, T.h)
    f_raw = ad_weight_basis(L, gf, T.h)
    if any(n < 0 for _, n in e_basis):
        raise StructuralError("negative ad-h weight on g^e")
    if any(m > 0 for _, m in f_raw):
        raise StructuralError("positive ad-h weight on g^f")
    # ascending m = -weight; stable on the basis order within a weight
    f_basis = sorted(((z, -w) for z, w in f_raw), key=lambda item: item[1])
    chart = SliceChart(L, T, e_basis, f_basis)
    if chart.r and linalg.rank(chart.pairing) != chart.r:
        raise StructuralError("trace-form pairing between g^e and g^f is degenerate")
    return chart


@dataclass
class SliceRestriction:
    label: str
    source_degree: int
    kappa: SparsePoly
    initial: SparsePoly
    initial_degree: int

    @property
    def slodowy_degree(self) -> int:
        return 2 * self.source_degree


def restriction_from_kappa(q: InvariantPoly, kappa: SparsePoly, chart: SliceChart) -> SliceRestriction:
    if kappa.is_zero():
        raise StructuralError(f"restriction of {q.label} to the slice vanishes")
    if not kappa.is_homogeneous(chart.slodowy_weights, 2 * q.degree):
        raise StructuralError(
            f"restriction of {q.label} is not Slodowy-homogeneous of degree {2 * q.degree}: "
            f"degrees {sorted(kappa.degrees(chart.slodowy_weights))}"
        )
    deg, init = initial_component(kappa)
    return SliceRestriction(q.label, q.degree, kappa, init, deg)


def restrict_all(qs: Sequence[InvariantPoly], chart: SliceChart, method: str = "matrix") -> list[SliceRestriction]:
    """kappa(q) for each generator, with the homogeneity invariant asserted.

    ``matrix`` applies each recipe to the slice matrix directly; ``substitute``
    substitutes the affine coordinate images into q written in c1..c_dim
    (only practical for small algebras).
    """
    if method == "matrix":
        kappas = apply_invariants(qs, chart.slice_matrix) if chart.r else [
            SparsePoly.constant(0, q.apply(_constant_matrix(chart.triple.e)).constant_term()) for q in qs]
    elif method == "substitute":
        kappas = [substitute_affine(q.poly, chart.coordinate_images) for q in qs]
    else:
        raise ValueError(f"unknown restriction method {method!r}")
    return [restriction_from_kappa(q, k, chart) for q, k in zip(qs, kappas)]


def _constant_matrix(m: np.ndarray) -> np.ndarray:
    N = m.shape[0]
    out = np.empty((N, N), dtype=object)
    for i in range(N):
        for j in range(N):
            out[i, j] = SparsePoly.constant(0, m[i, j])
    return out


def restrict_to_slice(q: InvariantPoly, chart: SliceChart, method: str = "matrix") -> SliceRestriction:
    return restrict_all([q], chart, method)[0]


def ge_invariance_check(p: SparsePoly, chart: SliceChart) -> bool:
    """True iff every element of g^e annihilates ``p`` (a polynomial on g^f)."""
    if p.nvars != chart.r:
        raise ValueError(f"polynomial has {p.nvars} variables, chart has {chart.r}")
    if p.is_constant():
        return True
    partials = [p.derivative(j) for j in range(chart.r)]
    for x, _ in chart.e_basis:
        A = chart.action_matrix(x)
        # D_x p = sum_j (sum_k A[j, k] t_k) dp/dt_j
        pairs = []
        for j in range(chart.r):
            if partials[j].is_zero() or not any(A[j]):
                continue
            pairs.append(SparsePoly.linear(list(A[j])) * partials[j])
        if pairs and not linear_combination([(1, q) for q in pairs], chart.r).is_zero():
            return False
        budget.check()
    return True


def _monomials_up_to(degrees: Sequence[int], cap: int):
    """Exponent vectors a with sum(a_i * degrees[i]) <= cap, excluding 0."""
    out = []

    def rec(i, rem, acc):
        if i == len(degrees):
            if any(acc):
                out.append(tuple(acc))
            return
        for a in range(rem // degrees[i] + 1):
            rec(i + 1, rem - a * degrees[i], acc + [a])

    rec(0, cap, [])
    return out


def product_of(kappas: Sequence[SparsePoly], exps: Sequence[int], cache: dict | None = None) -> SparsePoly:
    """prod kappas[i] ** exps[i], memoised on the exponent vector."""
    cache = {} if cache is None else cache
    key = tuple(exps)
    if key in cache:
        return cache[key]
    if not any(key):
        res = SparsePoly.constant(kappas[0].nvars, 1)
    else:
        i = max(j for j, a in enumerate(key) if a)
        prev = list(key)
        prev[i] -= 1
        res = product_of(kappas, prev, cache) * kappas[i]
    cache[key] = res
    return res


def filtered_basis(polys: Sequence[SparsePoly]) -> list[tuple[SparsePoly, int]]:
    """Basis of span(polys) with distinct lowest monomials; returns (initial component, degree).

    The initial components of the returned basis span the associated graded
    of the span for the standard-degree filtration.
    """
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return []
    n = polys[0].nvars
    rows = [dict(p.as_dict()) for p in polys]
    order = lambda m: (sum(m), m)  # noqa: E731 - lowest first
    basis: list[dict] = []
    pivots: list[tuple] = []
    for row in rows:
        row = {m: Fraction(c) for m, c in row.items()}
        for piv, b in zip(pivots, basis):
            c = row.get(piv)
            if c:
                f = c / b[piv]
                for m, v in b.items():
                    w = row.get(m, 0) - f * v
                    if w:
                        row[m] = w
                    else:
                        row.pop(m, None)
        if not row:
            continue
        piv = min(row, key=order)
        # keep earlier rows reduced at the new pivot
        for k, b in enumerate(basis):
            c = b.get(piv)
            if c:
                f = c / row[piv]
                for m, v in row.items():
                    w = b.get(m, 0) - f * v
                    if w:
                        b[m] = w
                    else:
                        b.pop(m, None)
        basis.append(row)
        pivots.append(piv)
    out = []
    for b in basis:
        p = SparsePoly(n, b)
        deg, init = initial_component(p)
        out.append((init, deg))
    out.sort(key=lambda item: item[1])
    return out


def initial_filtration_probe(restrictions: Sequence[SliceRestriction], chart: SliceChart,
                             degree_cap: int = DEFAULT_PROBE_CAP) -> list[tuple[SparsePoly, int]]:
    """Initial components of the filtered pieces of k[kappa(q_1), ..., kappa(q_l)] up to ``degree_cap``.

    ``degree_cap`` bounds the standard degree of the source invariant.  For
    each such degree, the span of the products of restrictions is reduced so
    that every rational combination with a cancelling leading part is found.
    """
    if not restrictions:
        return []
    kappas = [r.kappa for r in restrictions]
    degrees = [r.source_degree for r in restrictions]
    cache: dict = {}
    by_degree: dict[int, list[SparsePoly]] = {}
    for exps in _monomials_up_to(degrees, degree_cap):
        d = sum(a * b for a, b in zip(exps, degrees))
        by_degree.setdefault(d, []).append(product_of(kappas, exps, cache))
    out = []
    for d in sorted(by_degree):
        out.extend(filtered_basis(by_degree[d]))
        budget.check()
    return out


def slodowy_components(p: SparsePoly, chart: SliceChart) -> list[tuple[int, SparsePoly]]:
    return weighted_components(p, chart.slodowy_weights)
