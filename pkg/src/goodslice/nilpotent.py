"""Nilpotent orbits by partition and their standard sl2-triples."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .lie import ClassicalType, LieAlgebra, StructuralError, form_matrix
from .linalg import qmatrix


class PartitionError(ValueError):
    """Partition is not a valid orbit label for the requested type."""


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if not parts or any(p <= 0 for p in parts):
            raise PartitionError("parts must be positive integers")
        object.__setattr__(self, "parts", tuple(sorted(parts, reverse=True)))

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def very_even(self) -> bool:
        return all(p % 2 == 0 for p in self.parts)

    def multiplicities(self) -> Counter:
        return Counter(self.parts)

    def transpose(self) -> tuple[int, ...]:
        return tuple(sum(1 for p in self.parts if p > i) for i in range(self.parts[0]))

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        try:
            parts = [int(x) for x in text.replace(" ", "").strip("()").split(",") if x]
        except ValueError:
            raise PartitionError(f"cannot parse partition {text!r}; expected e.g. 5,3,2,2") from None
        return cls(tuple(parts))


def parity_violation(t: ClassicalType, lam: Partition) -> str | None:
    """Human-readable statement of the violated rule, or None when valid."""
    n = t.defining_size
    if lam.total != n:
        return f"parts must sum to the defining size {n} of {t.name} (got {lam.total})"
    if t.family in ("B", "D"):
        bad = sorted((p, m) for p, m in lam.multiplicities().items() if p % 2 == 0 and m % 2)
        if bad:
            p, m = bad[0]
            return f"type {t.family}: every even part must have even multiplicity (part {p} occurs {m} times)"
    if t.family == "C":
        bad = sorted((p, m) for p, m in lam.multiplicities().items() if p % 2 == 1 and m % 2)
        if bad:
            p, m = bad[0]
            return f"type C: every odd part must have even multiplicity (part {p} occurs {m} times)"
    return None


def validate_partition(t: ClassicalType, lam: Partition) -> Partition:
    msg = parity_violation(t, lam)
    if msg:
        raise PartitionError(msg)
    return lam


def _partitions(n: int, largest: int):
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def enumerate_partitions(t: ClassicalType) -> list[Partition]:
    """Valid orbit labels of ``t`` in reverse lexicographic order."""
    n = t.defining_size
    out = []
    for parts in _partitions(n, n):
        lam = Partition(parts)
        if parity_violation(t, lam) is None:
            out.append(lam)
    return out


@dataclass
class Sl2Triple:
    e: np.ndarray
    h: np.ndarray
    f: np.ndarray
    partition: Partition | None = None
    very_even: bool = field(default=False)

    def relations_hold(self) -> bool:
        def comm(x, y):
            return linalg.normalize(np.dot(x, y) - np.dot(y, x))

        return (
            np.array_equal(comm(self.h, self.e), linalg.normalize(2 * self.e))
            and np.array_equal(comm(self.h, self.f), linalg.normalize(-2 * self.f))
            and np.array_equal(comm(self.e, self.f), self.h)
        )


# -- block model --------------------------------------------------------------
#
# Abstract basis: Jordan strings v_1..v_k with e v_i = v_{i-1} and h-weight
# k+1-2i.  A self-dual string carries the form B(v_i, v_j) = c (-1)^i
# [i+j = k+1]; two paired strings v, w carry B(v_i, w_j) = (-1)^i [i+j = k+1]
# and B(w_j, v_i) = eps * B(v_i, w_j).  Both make e skew for B.


def _block_model(t: ClassicalType, lam: Partition):
    n = t.defining_size
    E = qmatrix(n, n)
    H = qmatrix(n, n)
    G = qmatrix(n, n)
    eps = -1 if t.family == "C" else 1
    pairs: list[tuple[int, int, int]] = []  # (weight of x, x, y) abstract indices
    middles: list[tuple[int, int]] = []  # (index, form value)
    pos = 0

    def string(k: int) -> list[int]:
        nonlocal pos
        idx = list(range(pos, pos + k))
        pos += k
        for i in range(1, k + 1):
            H[idx[i - 1], idx[i - 1]] = k + 1 - 2 * i
            if i >= 2:
                E[idx[i - 2], idx[i - 1]] = 1
        return idx

    mult = lam.multiplicities()
    self_dual_parity = 1 if t.family in ("B", "D") else 0
    n_middles = sum(m for p, m in mult.items() if p % 2 == 1) if t.family in ("B", "D") else 0
    if t.family == "B":
        middle_signs = [1] + [1 if j % 2 == 0 else -1 for j in range(n_middles - 1)]
    else:
        middle_signs = [1 if j % 2 == 0 else -1 for j in range(n_middles)]

    for k in sorted(mult, reverse=True):
        m = mult[k]
        if t.family == "A":
            for _ in range(m):
                string(k)
        elif k % 2 == self_dual_parity:
            for _ in range(m):
                v = string(k)
                mid = (k + 1) // 2 if k % 2 else None
                c = 1
                if mid is not None:
                    s = middle_signs[len(middles)]
                    c = s * (-1) ** mid
                for i in range(1, k + 1):
                    G[v[i - 1], v[k - i]] = c * (-1) ** i
                for i in range(1, k + 1):
                    j = k + 1 - i
                    if i < j:
                        pairs.append((k + 1 - 2 * i, v[i - 1], v[j - 1]))
                if mid is not None:
                    middles.append((v[mid - 1], G[v[mid - 1], v[mid - 1]]))
        else:
            for _ in range(m // 2):
                v = string(k)
                w = string(k)
                for i in range(1, k + 1):
                    j = k + 1 - i
                    G[v[i - 1], w[j - 1]] = (-1) ** i
                    G[w[j - 1], v[i - 1]] = eps * (-1) ** i
                    wt = k + 1 - 2 * i
                    if wt >= 0:
                        pairs.append((wt, v[i - 1], w[j - 1]))
                    else:
                        pairs.append((-wt, w[j - 1], v[i - 1]))
    return E, H, G, pairs, middles


def _adapted_basis(t: ClassicalType, lam: Partition) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Change of basis P with P^T G P = J, returning (e, h) in the new basis and P."""
    n = t.defining_size
    E, H, G, pairs, middles = _block_model(t, lam)

    def unit(i):
        v = qmatrix(n, 1)[:, 0]
        v[i] = 1
        return v

    def form(x, y):
        return linalg._norm(Fraction(sum(a * b for a, b in zip(np.dot(x, G), y))))

    vec_pairs: list[tuple[int, int, np.ndarray, np.ndarray]] = []
    for order, (wt, x, y) in enumerate(pairs):
        vec_pairs.append((wt, order, unit(x), unit(y)))
    center = None
    rest = middles
    if t.family == "B":
        center_idx, val = middles[0]
        if val != 1:
            raise StructuralError("central vector must have norm 1")
        center = unit(center_idx)
        rest = middles[1:]
    for j in range(0, len(rest), 2):
        (a, sa), (b, sb) = rest[j], rest[j + 1]
        if (sa, sb) != (1, -1):
            raise StructuralError("middle vectors must alternate in norm")
        p = unit(a) + unit(b)
        q = linalg.normalize((unit(a) - unit(b)) * Fraction(1, 2))
        vec_pairs.append((0, len(pairs) + j, p, q))

    vec_pairs.sort(key=lambda item: (-item[0], item[1]))
    P = qmatrix(n, n)
    for slot, (_, _, x, y) in enumerate(vec_pairs):
        g = form(x, y)
        y = linalg.normalize(y * Fraction(1, 1) / g) if g != 1 else y
        P[:, slot] = x
        P[:, n - 1 - slot] = y
    if center is not None:
        P[:, n // 2] = center
    J = form_matrix(t)
    if not np.array_equal(linalg.normalize(np.dot(np.dot(P.T, G), P)), J):
        raise StructuralError("block model does not match the standard form")
    Pinv = linalg.inverse(P)
    e = linalg.normalize(np.dot(np.dot(Pinv, E), P))
    h = linalg.normalize(np.dot(np.dot(Pinv, H), P))
    return e, h, P


def nilpotent_and_characteristic(t: ClassicalType, lam: Partition) -> tuple[np.ndarray, np.ndarray]:
    validate_partition(t, lam)
    if t.family == "A":
        E, H, _, _, _ = _block_model(t, lam)
        return E, H
    e, h, _ = _adapted_basis(t, lam)
    return e, h


def standard_triple(L: LieAlgebra, lam: Partition) -> Sl2Triple:
    """Representative e of the orbit of ``lam`` completed to an sl2-triple in ``L``."""
    e, h = nilpotent_and_characteristic(L.type, lam)
    L.coords(e)
    ch = L.coords(h)
    ad_e = L.ad_matrix(e)
    ad_h = L.ad_matrix(h)
    system = np.concatenate([ad_e, linalg.normalize(ad_h + 2 * linalg.identity(L.dim))])
    rhs = np.concatenate([ch, qmatrix(L.dim, 1)[:, 0]])
    try:
        cf = linalg.solve(system, rhs)
    except linalg.InconsistentSystem as exc:
        raise StructuralError(f"no f completes the triple for {lam}") from exc
    f = L.from_coords(cf)
    triple = Sl2Triple(e, h, f, lam, very_even=(L.type.family == "D" and lam.very_even))
    if not triple.relations_hold():
        raise StructuralError(f"sl2 relations fail for {lam}")
    return triple


def sl2_weights(lam: Partition) -> list[int]:
    """Multiset of h-eigenvalues on the defining space, descending."""
    return sorted((k + 1 - 2 * i for k in lam.parts for i in range(1, k + 1)), reverse=True)


def centralizer_dimension(t: ClassicalType, lam: Partition) -> int:
    """Closed-form dim g^e (used as an independent check)."""
    tr = lam.transpose()
    sq = sum(x * x for x in tr)
    odd = sum(1 for p in lam.parts if p % 2)
    if t.family == "A":
        return sq - 1
    if t.family in ("B", "D"):
        return (sq - odd) // 2
    return (sq + odd) // 2
