"""Classical simple Lie algebras in their defining representation.

The orthogonal and symplectic algebras are realised as

    { X : X^T J + J X = 0 }

with ``J`` anti-diagonal (symmetric for so, skew for sp).  With this choice
diagonal matrices form a split Cartan subalgebra, and every basis element
below is a weight vector for any diagonal ``h``.

Basis elements are sorted by the flattened position of their first nonzero
entry; no two share that position, so the basis is in echelon form and the
enumeration is reproducible.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import linalg
from .linalg import qmatrix

FAMILIES = ("A", "B", "C", "D")
DEFAULT_MAX_RANK = int(os.environ.get("GOODSLICE_MAX_RANK", "6"))


class ConfigurationError(ValueError):
    """Unsupported family or rank."""


class NotInAlgebra(ValueError):
    """A matrix that was required to lie in the algebra does not."""


class StructuralError(RuntimeError):
    """An internal consistency check failed; indicates a bug, not bad input."""


@dataclass(frozen=True, order=True)
class ClassicalType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigurationError(f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}")
        minimum = 2 if self.family == "D" else 1
        if self.rank < minimum:
            raise ConfigurationError(f"type {self.family} needs rank >= {minimum}, got {self.rank}")

    @property
    def defining_size(self) -> int:
        return {"A": self.rank + 1, "B": 2 * self.rank + 1, "C": 2 * self.rank, "D": 2 * self.rank}[self.family]

    @property
    def dimension(self) -> int:
        l = self.rank
        return {"A": l * (l + 2), "B": l * (2 * l + 1), "C": l * (2 * l + 1), "D": l * (2 * l - 1)}[self.family]

    @property
    def name(self) -> str:
        n = self.defining_size
        return {"A": f"sl{n}", "B": f"so{n}", "C": f"sp{n}", "D": f"so{n}"}[self.family]

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"

    @classmethod
    def parse(cls, text: str) -> "ClassicalType":
        text = text.strip().upper()
        return cls(text[0], int(text[1:]))


def form_matrix(t: ClassicalType) -> np.ndarray | None:
    """The anti-diagonal form J (None for type A)."""
    if t.family == "A":
        return None
    n = t.defining_size
    j = qmatrix(n, n)
    for i in range(n):
        if t.family == "C":
            j[i, n - 1 - i] = 1 if i < n // 2 else -1
        else:
            j[i, n - 1 - i] = 1
    return j


def _unit(n: int, i: int, j: int, c=1) -> np.ndarray:
    m = qmatrix(n, n)
    m[i, j] = c
    return m


def _first_position(m: np.ndarray) -> int:
    flat = m.ravel()
    return next(i for i, v in enumerate(flat) if v != 0)


class LieAlgebra:
    """A classical Lie algebra with a fixed, reproducible basis."""

    def __init__(self, ctype: ClassicalType, basis: list[np.ndarray], form: np.ndarray | None):
        self.type = ctype
        self.N = ctype.defining_size
        self.basis = basis
        self.dim = len(basis)
        self.rank = ctype.rank
        self.form = form
        flat = np.array([b.ravel() for b in basis], dtype=object)
        _, pivots = linalg.rref(flat)
        if len(pivots) != self.dim:
            raise StructuralError("basis is linearly dependent")
        self._positions = pivots
        inv = linalg.inverse(flat[:, pivots].T.copy())
        # sparse rows: coords[a] = sum(inv[a, k] * x.flat[positions[k]])
        self._coord_rows = [[(pivots[k], v) for k, v in enumerate(row) if v != 0] for row in inv]

    def __repr__(self) -> str:
        return f"LieAlgebra({self.type}, dim={self.dim})"

    def coords(self, x: np.ndarray, check: bool = True) -> np.ndarray:
        """Coordinates of ``x`` in the basis; raises NotInAlgebra if ``x`` is not a member."""
        flat = np.asarray(x, dtype=object).ravel()
        c = np.empty(self.dim, dtype=object)
        for a, row in enumerate(self._coord_rows):
            s = 0
            for pos, v in row:
                if flat[pos]:
                    s += v * flat[pos]
            c[a] = linalg._norm(s) if isinstance(s, Fraction) else s
        if check and not np.array_equal(self.from_coords(c), np.asarray(x, dtype=object)):
            raise NotInAlgebra("matrix is not an element of the algebra")
        return c

    def contains(self, x: np.ndarray) -> bool:
        try:
            self.coords(x)
        except NotInAlgebra:
            return False
        return True

    def from_coords(self, c) -> np.ndarray:
        out = qmatrix(self.N, self.N)
        for v, b in zip(c, self.basis):
            if v:
                out = out + v * b
        return linalg.normalize(out)

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return bracket(self, x, y)

    def ad_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of ad x in the basis (column a = coords of [x, b_a])."""
        cols = [self.coords(_comm(x, b), check=False) for b in self.basis]
        return np.array(cols, dtype=object).T.copy()

    def trace_form(self, x: np.ndarray, y: np.ndarray):
        return linalg._norm(Fraction(sum(np.asarray(x, dtype=object).ravel() * np.asarray(y, dtype=object).T.ravel())))

    @cached_property
    def form_gram(self) -> np.ndarray:
        g = qmatrix(self.dim, self.dim)
        for a in range(self.dim):
            for b in range(a, self.dim):
                g[a, b] = g[b, a] = self.trace_form(self.basis[a], self.basis[b])
        return g


def _comm(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return linalg.normalize(np.dot(x, y) - np.dot(y, x))


def build_classical(t: ClassicalType, max_rank: int | None = None) -> LieAlgebra:
    """sl_{l+1}, so_{2l+1}, sp_{2l} or so_{2l} with the deterministic basis."""
    limit = DEFAULT_MAX_RANK if max_rank is None else max_rank
    if t.rank > limit:
        raise ConfigurationError(f"rank {t.rank} exceeds the supported bound {limit}")
    n = t.defining_size
    basis: list[np.ndarray] = []
    if t.family == "A":
        for i in range(n):
            for j in range(n):
                if i != j:
                    basis.append(_unit(n, i, j))
        for i in range(n - 1):
            h = _unit(n, i, i)
            h[i + 1, i + 1] = -1
            basis.append(h)
        form = None
    else:
        form = form_matrix(t)
        jinv = linalg.inverse(form)
        skew = t.family in ("B", "D")
        for a in range(n):
            for b in range(a, n):
                if a == b and skew:
                    continue
                s = _unit(n, a, b)
                s[b, a] = -1 if skew else 1
                if a == b:
                    s[a, a] = 1
                basis.append(linalg.matmul(jinv, s))
    basis.sort(key=_first_position)
    if len(basis) != t.dimension:
        raise StructuralError(f"built {len(basis)} basis elements, expected {t.dimension}")
    return LieAlgebra(t, basis, form)


def bracket(L: LieAlgebra, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """[x, y] = xy - yx for members of ``L``."""
    for m in (x, y):
        if not L.contains(m):
            raise NotInAlgebra("bracket operands must lie in the algebra")
    return _comm(x, y)


def centralizer_coords(L: LieAlgebra, x: np.ndarray) -> np.ndarray:
    """Echelon basis of ker(ad x), as coordinate rows."""
    L.coords(x)
    return linalg.kernel(L.ad_matrix(x))


def centralizer_basis(L: LieAlgebra, x: np.ndarray) -> list[np.ndarray]:
    return [L.from_coords(row) for row in centralizer_coords(L, x)]


def ad_weight_basis(L: LieAlgebra, subspace: list[np.ndarray], h: np.ndarray) -> list[tuple[np.ndarray, int]]:
    """Basis of ad-h eigenvectors of an ad-h stable subspace, sorted by weight.

    Raises StructuralError when the subspace is not stable or the spectrum of
    ad h on it is not a set of integers.
    """
    if not subspace:
        return []
    V = np.array([L.coords(v) for v in subspace], dtype=object)
    k = len(subspace)
    if linalg.rank(V) != k:
        raise StructuralError("subspace vectors are linearly dependent")
    ad_h = L.ad_matrix(h)
    images = linalg.normalize(np.dot(V, ad_h.T))
    if linalg.rank(np.concatenate([V, images])) != k:
        raise StructuralError("subspace is not ad-h stable")
    diag = np.array_equal(ad_h, np.diag(np.diag(ad_h)))
    if diag:
        weights_of = list(np.diag(ad_h))
        if any(isinstance(w, Fraction) for w in weights_of):
            raise StructuralError("ad h has non-integer eigenvalues")
        found = []
        for m in sorted(set(weights_of)):
            support = [a for a in range(L.dim) if weights_of[a] == m]
            red, pivots = linalg.rref(V[:, support])
            for row in red[: len(pivots)]:
                vec = qmatrix(L.dim, 1)[:, 0]
                for a, v in zip(support, row):
                    vec[a] = v
                found.append((linalg.primitive(vec), int(m)))
    else:
        # general path: kernels of (A - m) on the subspace for a bounded scan
        A = linalg.solve(V.T.copy(), images.T.copy())
        bound = 2 * L.N
        found = []
        for m in range(-bound, bound + 1):
            K = linalg.kernel(linalg.normalize(A - m * linalg.identity(k)))
            for row in K:
                found.append((linalg.primitive(np.dot(row, V)), m))
    if len(found) != k:
        raise StructuralError(f"ad h is not diagonalisable with integer weights on the subspace ({len(found)} of {k})")
    return [(L.from_coords(vec), m) for vec, m in found]
