"""Fundamental invariants of the classical algebras as explicit polynomials.

Generators are characteristic-polynomial coefficients of the defining
representation, plus the Pfaffian in type D.  Each generator keeps its
recipe, so it can be applied to any square matrix of polynomials: the
generic element gives the polynomial in the coordinates c1..c_dim, and an
affine matrix such as e + sum(t_j z_j) gives its restriction directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

from . import budget
from .lie import LieAlgebra, StructuralError
from .multipoly import SparsePoly, _norm

PolyMatrix = list  # list[list[SparsePoly]]


def generic_element(L: LieAlgebra) -> np.ndarray:
    """X = sum_a c_a b_a as an N x N object array of linear SparsePoly entries."""
    N = L.N
    X = np.empty((N, N), dtype=object)
    for i in range(N):
        for j in range(N):
            X[i, j] = SparsePoly.linear([b[i, j] for b in L.basis])
    return X


def affine_matrix(base: np.ndarray, directions: Sequence[np.ndarray]) -> np.ndarray:
    """base + sum_j t_j * directions[j] with polynomial entries in t1..tr."""
    N = base.shape[0]
    r = len(directions)
    X = np.empty((N, N), dtype=object)
    for i in range(N):
        for j in range(N):
            X[i, j] = SparsePoly.linear([d[i, j] for d in directions], const=base[i, j]) if r else SparsePoly.constant(0, base[i, j])
    return X


def _common_denominator(X) -> int:
    d = 1
    for row in X:
        for p in row:
            q = p.denominator()
            d = d * q // gcd(d, q)
    return d


def _poly_matmul(A: PolyMatrix, M: PolyMatrix, nvars: int, diagonal_only: bool = False) -> PolyMatrix:
    n = len(A)
    out: PolyMatrix = [[None] * n for _ in range(n)]
    for i in range(n):
        row_terms = [(l, A[i][l]._t) for l in range(n) if A[i][l]._t]
        cols = [i] if diagonal_only else range(n)
        for j in cols:
            acc: dict = {}
            get = acc.get
            for l, at in row_terms:
                mt = M[l][j]._t
                if not mt:
                    continue
                for ka, ca in at.items():
                    for km, cm in mt.items():
                        k = ka + km
                        acc[k] = get(k, 0) + ca * cm
            out[i][j] = SparsePoly._raw(nvars, {k: _norm(c) for k, c in acc.items() if c})
        budget.check()
    return out


def char_poly_coeffs(X) -> list[SparsePoly]:
    """[sigma_1, ..., sigma_N] with det(lambda - X) = sum (-1)^k sigma_k lambda^(N-k).

    Faddeev-LeVerrier.  Entries are first scaled to integer coefficients so
    the division by k in each step is an exact integer division.
    """
    rows = [list(r) for r in np.asarray(X, dtype=object)]
    n = len(rows)
    if n == 0:
        return []
    nvars = rows[0][0].nvars
    D = _common_denominator(rows)
    A = [[p.scale(D) if D != 1 else p for p in r] for r in rows]
    zero = SparsePoly.zero(nvars)
    M = [[SparsePoly.constant(nvars, 1) if i == j else zero for j in range(n)] for i in range(n)]
    sigmas: list[SparsePoly] = []
    for k in range(1, n + 1):
        AM = _poly_matmul(A, M, nvars, diagonal_only=(k == n))
        tr: dict = {}
        for i in range(n):
            for key, c in AM[i][i]._t.items():
                tr[key] = tr.get(key, 0) + c
        ck: dict = {}
        for key, c in tr.items():
            if not c:
                continue
            if type(c) is int:
                if c % k:
                    raise StructuralError("Faddeev-LeVerrier division is not exact")
                ck[key] = -(c // k)
            else:
                ck[key] = _norm(-c / k)
        c_poly = SparsePoly._raw(nvars, ck)
        sign = -1 if k % 2 else 1
        scale = Fraction(sign, D**k)
        sigmas.append(c_poly.scale(scale) if scale != 1 else c_poly)
        if k < n:
            for i in range(n):
                AM[i][i] = AM[i][i] + c_poly
            M = AM
    return sigmas


def pfaffian(S) -> SparsePoly:
    """Pfaffian of a skew-symmetric matrix of polynomials (expansion along the first row, memoised)."""
    rows = [list(r) for r in np.asarray(S, dtype=object)]
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    nvars = rows[0][0].nvars
    for i in range(n):
        for j in range(n):
            if rows[i][j] != -rows[j][i]:
                raise ValueError("matrix is not skew-symmetric")
    if n % 2:
        return SparsePoly.zero(nvars)
    memo: dict[tuple[int, ...], SparsePoly] = {}
    one = SparsePoly.constant(nvars, 1)

    def pf(idx: tuple[int, ...]) -> SparsePoly:
        if not idx:
            return one
        if idx in memo:
            return memo[idx]
        first = idx[0]
        acc: dict = {}
        for pos in range(1, len(idx)):
            a = rows[first][idx[pos]]
            if not a._t:
                continue
            sub = pf(idx[1:pos] + idx[pos + 1 :])
            if not sub._t:
                continue
            sign = 1 if pos % 2 else -1
            for ka, ca in a._t.items():
                for ks, cs in sub._t.items():
                    k = ka + ks
                    acc[k] = acc.get(k, 0) + sign * ca * cs
        budget.check()
        res = SparsePoly._raw(nvars, {k: _norm(c) for k, c in acc.items() if c})
        memo[idx] = res
        return res

    return pf(tuple(range(n)))


def skew_form(L: LieAlgebra, X) -> np.ndarray:
    """J X, skew-symmetric for X in an orthogonal algebra."""
    if L.type.family != "D":
        raise ValueError("the Pfaffian invariant exists only in type D")
    J = L.form
    X = np.asarray(X, dtype=object)
    N = L.N
    out = np.empty((N, N), dtype=object)
    for i in range(N):
        # J is a signed permutation: row i of J X is J[i, N-1-i] * row N-1-i of X
        s = J[i, N - 1 - i]
        for j in range(N):
            out[i, j] = X[N - 1 - i, j] * s if s != 1 else X[N - 1 - i, j]
    return out


def pfaffian_sign(L: LieAlgebra) -> int:
    """Normalisation making Pf(J X_ref) = +1 for X_ref = diag(1,..,1,-1,..,-1)."""
    N = L.N
    ref = np.empty((N, N), dtype=object)
    for i in range(N):
        for j in range(N):
            v = 0
            if i == j:
                v = 1 if i < N // 2 else -1
            ref[i, j] = SparsePoly.constant(0, v)
    val = pfaffian(skew_form(L, ref)).constant_term()
    if val not in (1, -1):
        raise StructuralError(f"reference Pfaffian is {val}, expected +-1")
    return int(val)


@dataclass
class InvariantPoly:
    """One fundamental generator: a recipe (``sigma`` k or ``pfaffian``) and its degree."""

    algebra: LieAlgebra = field(repr=False)
    kind: str
    degree: int
    index: int = 0  # k for sigma_k
    _poly: SparsePoly | None = field(default=None, repr=False)

    @property
    def label(self) -> str:
        return "Pf" if self.kind == "pfaffian" else f"sigma{self.index}"

    @property
    def poly(self) -> SparsePoly:
        """The generator in the coordinates c1..c_dim (computed on first use)."""
        if self._poly is None:
            self._poly = apply_invariants([self], generic_element(self.algebra))[0]
        return self._poly

    def apply(self, X) -> SparsePoly:
        return apply_invariants([self], X)[0]


def apply_invariants(qs: Sequence[InvariantPoly], X) -> list[SparsePoly]:
    """Evaluate the recipes of ``qs`` on a square polynomial matrix, sharing work."""
    if not qs:
        return []
    L = qs[0].algebra
    need_sigma = [q.index for q in qs if q.kind == "sigma"]
    sigmas = char_poly_coeffs(X) if need_sigma else []
    pf = None
    if any(q.kind == "pfaffian" for q in qs):
        pf = pfaffian(skew_form(L, X))
        s = pfaffian_sign(L)
        if s != 1:
            pf = -pf
    out = []
    for q in qs:
        out.append(pf if q.kind == "pfaffian" else sigmas[q.index - 1])
    return out


def fundamental_invariants(L: LieAlgebra) -> list[InvariantPoly]:
    """Generators of S(g)^g sorted by degree (sigma before Pf on ties)."""
    l = L.rank
    fam = L.type.family
    if fam == "A":
        qs = [InvariantPoly(L, "sigma", k, k) for k in range(2, l + 2)]
    elif fam in ("B", "C"):
        qs = [InvariantPoly(L, "sigma", k, k) for k in range(2, 2 * l + 1, 2)]
    else:
        qs = [InvariantPoly(L, "sigma", k, k) for k in range(2, 2 * l - 1, 2)]
        qs.append(InvariantPoly(L, "pfaffian", l, 0))
    qs.sort(key=lambda q: (q.degree, q.kind == "pfaffian"))
    return qs


def pfaffian_invariant(L: LieAlgebra) -> InvariantPoly:
    if L.type.family != "D":
        raise ValueError("the Pfaffian invariant exists only in type D")
    return InvariantPoly(L, "pfaffian", L.rank, 0)


def coadjoint_derivation(L: LieAlgebra, b: np.ndarray, p: SparsePoly) -> SparsePoly:
    """d/ds p(exp(s ad b) X) at s = 0, in the coordinates c1..c_dim.

    The coordinates of [b, X] are linear in c: column a of ad b maps c_a.
    """
    ad = L.ad_matrix(b)
    dim = L.dim
    out = SparsePoly.zero(dim)
    for i in range(dim):
        row = ad[i]
        if not any(row):
            continue
        dp = p.derivative(i)
        if dp.is_zero():
            continue
        out = out + dp * SparsePoly.linear(list(row))
    return out
