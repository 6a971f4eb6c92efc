"""Exact linear algebra over Q on numpy object arrays.

Matrices hold ``int`` / ``Fraction`` entries.  Everything here is exact;
floating point never enters.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np


class InconsistentSystem(ArithmeticError):
    pass


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def qmatrix(rows, cols=None) -> np.ndarray:
    """Build an object array of exact rationals.

    ``qmatrix(n, m)`` is the zero matrix; otherwise ``rows`` is any nested
    sequence of ints / Fractions.
    """
    if cols is not None:
        a = np.empty((rows, cols), dtype=object)
        a.fill(0)
        return a
    a = np.array(rows, dtype=object)
    if a.ndim == 1:
        a = a.reshape(1, -1) if len(a) else a.reshape(0, 0)
    return normalize(a)


def identity(n: int) -> np.ndarray:
    a = qmatrix(n, n)
    for i in range(n):
        a[i, i] = 1
    return a


def normalize(a: np.ndarray) -> np.ndarray:
    out = np.empty(a.shape, dtype=object)
    flat_in = a.ravel()
    flat_out = out.ravel()
    for i, v in enumerate(flat_in):
        if isinstance(v, Fraction):
            flat_out[i] = _norm(v)
        else:
            flat_out[i] = int(v)
    return out


def is_zero(a: np.ndarray) -> bool:
    return not any(v != 0 for v in a.ravel())


def rref(a: np.ndarray) -> tuple[list[list], list[int]]:
    """Reduced row echelon form (as nested lists) and pivot columns.

    Pivots are taken at the first nonzero position scanning columns left to
    right, so the result is fully deterministic.
    """
    m = [[Fraction(v) for v in row] for row in np.asarray(a, dtype=object)]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        row = m[r]
        for j in range(c, ncols):
            if row[j]:
                row[j] *= inv
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f:
                    mi = m[i]
                    for j in range(c, ncols):
                        if row[j]:
                            mi[j] -= f * row[j]
        pivots.append(c)
        r += 1
    return [[_norm(v) for v in row] for row in m], pivots


def rank(a: np.ndarray) -> int:
    a = np.asarray(a, dtype=object)
    if a.size == 0:
        return 0
    return len(rref(a)[1])


def kernel(a: np.ndarray) -> np.ndarray:
    """Basis of the right null space as the rows of the returned array.

    Each basis vector has a 1 at its free column and zeros at the other free
    columns (the usual echelon basis).
    """
    a = np.asarray(a, dtype=object)
    ncols = a.shape[1]
    if a.shape[0] == 0:
        return identity(ncols)
    red, pivots = rref(a)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = qmatrix(len(free), ncols)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = _norm(-Fraction(red[i][fc]))
    return basis


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """One solution x of ``a @ x = b`` (b a vector or a matrix of columns)."""
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    vec = b.ndim == 1
    if vec:
        b = b.reshape(-1, 1)
    aug = np.concatenate([a, b], axis=1)
    red, pivots = rref(aug)
    n = a.shape[1]
    if any(p >= n for p in pivots):
        raise InconsistentSystem("linear system has no solution")
    x = qmatrix(n, b.shape[1])
    for i, pc in enumerate(pivots):
        for j in range(b.shape[1]):
            x[pc, j] = red[i][n + j]
    return x[:, 0] if vec else x


def inverse(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=object)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("square matrix required")
    aug = np.concatenate([a, identity(n)], axis=1)
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return qmatrix([row[n:] for row in red])


def det(a: np.ndarray) -> object:
    """Determinant by fraction-free (Bareiss) elimination.

    Rational input is scaled to an integer matrix first so every division
    in the recurrence is exact.
    """
    a = np.asarray(a, dtype=object)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("square matrix required")
    if n == 0:
        return 1
    den = 1
    for v in a.ravel():
        if isinstance(v, Fraction):
            den = den * v.denominator // gcd(den, v.denominator)
    m = [[int(v * den) for v in row] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            p = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if p is None:
                return 0
            m[k], m[p] = m[p], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return _norm(Fraction(sign * m[n - 1][n - 1], den**n))


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return normalize(np.dot(a, b))


def column_stack(vectors: Sequence[np.ndarray]) -> np.ndarray:
    return np.array(vectors, dtype=object).T.copy()


def primitive(v: np.ndarray) -> np.ndarray:
    """Scale a rational vector to a primitive integer vector with positive leading entry."""
    v = np.asarray(v, dtype=object)
    den = 1
    for x in v:
        if isinstance(x, Fraction):
            den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        return qmatrix(len(v), 1)[:, 0]
    lead = next(x for x in ints if x)
    s = 1 if lead > 0 else -1
    return np.array([s * x // g for x in ints], dtype=object)
