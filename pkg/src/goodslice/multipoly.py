"""Sparse multivariate polynomials with exact rational coefficients.

Monomials are stored packed into a single Python int, ``_BITS`` bits per
variable, so that multiplying two monomials is one integer addition.  The
public surface speaks in exponent tuples; packing never leaks out.

Coefficients are ``int`` whenever integral and ``fractions.Fraction``
otherwise.  A polynomial is immutable once built.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import budget

_BITS = 10
_MASK = (1 << _BITS) - 1
MAX_EXPONENT = _MASK

Coeff = "int | Fraction"


class ArityError(ValueError):
    """Operands live in polynomial rings of different arity."""


class BadPrime(ArithmeticError):
    """A coefficient denominator is divisible by the chosen prime."""


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def to_rational(c):
    """Coerce an int / Fraction / numeric string to the canonical coefficient."""
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, int):
        return int(c)
    if isinstance(c, Fraction):
        return _norm(c)
    if isinstance(c, str):
        return _norm(Fraction(c))
    # numpy integers and the like
    if hasattr(c, "__index__"):
        return int(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


def pack(exps: Sequence[int]) -> int:
    key = 0
    for i, e in enumerate(exps):
        if e < 0 or e > MAX_EXPONENT:
            raise ValueError(f"exponent {e} out of range")
        key |= e << (_BITS * i)
    return key


def unpack(key: int, nvars: int) -> tuple[int, ...]:
    return tuple((key >> (_BITS * i)) & _MASK for i in range(nvars))


def unpack_many(keys: Sequence[int], nvars: int) -> np.ndarray:
    """Exponent rows of many packed keys at once, as an int64 array."""
    if not keys or nvars == 0:
        return np.zeros((len(keys), nvars), dtype=np.int64)
    nbytes = (_BITS * nvars + 7) // 8
    raw = np.frombuffer(b"".join(k.to_bytes(nbytes, "little") for k in keys), dtype=np.uint8)
    bits = np.unpackbits(raw.reshape(len(keys), nbytes), axis=1, bitorder="little")[:, : _BITS * nvars]
    weights = (1 << np.arange(_BITS, dtype=np.int64))
    return bits.reshape(len(keys), nvars, _BITS).astype(np.int64) @ weights


class SparsePoly:
    """Polynomial in ``nvars`` variables over Q.

    >>> x = SparsePoly.var(2, 0); y = SparsePoly.var(2, 1)
    >>> (x + y) * (x - y) == x * x - y * y
    True
    """

    __slots__ = ("nvars", "_t", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], object] | None = None):
        self.nvars = int(nvars)
        self._hash = None
        t: dict[int, object] = {}
        if terms:
            for exps, c in terms.items():
                if len(exps) != self.nvars:
                    raise ArityError(f"exponent vector {tuple(exps)} has length != {self.nvars}")
                c = to_rational(c)
                if c:
                    k = pack(exps)
                    t[k] = _norm(t.get(k, 0) + c)
                    if not t[k]:
                        del t[k]
        self._t = t

    @classmethod
    def _raw(cls, nvars: int, t: dict) -> "SparsePoly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p._t = t
        p._hash = None
        return p

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "SparsePoly":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c) -> "SparsePoly":
        c = to_rational(c)
        return cls._raw(nvars, {0: c} if c else {})

    @classmethod
    def var(cls, nvars: int, i: int) -> "SparsePoly":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for arity {nvars}")
        return cls._raw(nvars, {1 << (_BITS * i): 1})

    @classmethod
    def linear(cls, coeffs: Sequence, const=0) -> "SparsePoly":
        """``const + sum(coeffs[i] * x_i)``."""
        t = {}
        c0 = to_rational(const)
        if c0:
            t[0] = c0
        for i, c in enumerate(coeffs):
            c = to_rational(c)
            if c:
                t[1 << (_BITS * i)] = c
        return cls._raw(len(coeffs), t)

    # -- basic protocol ----------------------------------------------------

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant_term(self):
        return self._t.get(0, 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, SparsePoly):
            return self.nvars == other.nvars and self._t == other._t
        if isinstance(other, (int, Fraction)):
            return self._t == ({0: _norm(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._t.items())))
        return self._hash

    def items(self) -> Iterator[tuple[tuple[int, ...], object]]:
        """(exponents, coefficient) pairs in canonical order."""
        n = self.nvars
        for k in self._sorted_keys():
            yield unpack(k, n), self._t[k]

    def as_dict(self) -> dict[tuple[int, ...], object]:
        return dict(self.items())

    def coefficient(self, exps: Sequence[int]):
        return self._t.get(pack(exps), 0)

    def _sorted_keys(self) -> list[int]:
        # graded-lex, highest first
        n = self.nvars
        return sorted(self._t, key=lambda k: (_total_degree(k), unpack(k, n)), reverse=True)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "SparsePoly") -> None:
        if self.nvars != other.nvars:
            raise ArityError(f"arity mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return SparsePoly.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self._t)
        for k, c in other._t.items():
            v = t.get(k, 0) + c
            if v:
                t[k] = _norm(v)
            else:
                t.pop(k, None)
        return SparsePoly._raw(self.nvars, t)

    __radd__ = __add__

    def __neg__(self) -> "SparsePoly":
        return SparsePoly._raw(self.nvars, {k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c) -> "SparsePoly":
        c = to_rational(c)
        if not c:
            return SparsePoly.zero(self.nvars)
        return SparsePoly._raw(self.nvars, {k: _norm(v * c) for k, v in self._t.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return SparsePoly._raw(self.nvars, _mul_terms(self._t, other._t))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "SparsePoly":
        if n < 0:
            raise ValueError("negative power")
        result = SparsePoly.constant(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- gradings ----------------------------------------------------------

    def total_degree(self) -> int:
        """Largest standard degree of a term; -1 for the zero polynomial."""
        return max((_total_degree(k) for k in self._t), default=-1)

    def weighted_degree_of(self, exps: Sequence[int], weights: Sequence[int]) -> int:
        return sum(e * w for e, w in zip(exps, weights))

    def degrees(self, weights: Sequence[int] | None = None) -> set[int]:
        """Set of (weighted) degrees of the terms."""
        if weights is None:
            return {_total_degree(k) for k in self._t}
        _check_weights(weights, self.nvars)
        return {_weighted(k, weights) for k in self._t}

    def is_homogeneous(self, weights: Sequence[int] | None = None, degree: int | None = None) -> bool:
        ds = self.degrees(weights)
        if not ds:
            return True
        if len(ds) != 1:
            return False
        return degree is None or ds == {degree}

    def homogeneous_part(self, degree: int, weights: Sequence[int] | None = None) -> "SparsePoly":
        if weights is None:
            t = {k: c for k, c in self._t.items() if _total_degree(k) == degree}
        else:
            _check_weights(weights, self.nvars)
            t = {k: c for k, c in self._t.items() if _weighted(k, weights) == degree}
        return SparsePoly._raw(self.nvars, t)

    def lowest_degree(self, weights: Sequence[int] | None = None) -> int:
        ds = self.degrees(weights)
        if not ds:
            raise ValueError("zero polynomial has no degree")
        return min(ds)

    # -- calculus & evaluation --------------------------------------------

    def derivative(self, i: int) -> "SparsePoly":
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for arity {self.nvars}")
        shift = _BITS * i
        one = 1 << shift
        t = {}
        for k, c in self._t.items():
            e = (k >> shift) & _MASK
            if e:
                t[k - one] = _norm(c * e)
        return SparsePoly._raw(self.nvars, t)

    def variables(self) -> list[int]:
        """Indices of variables that actually occur."""
        acc = 0
        for k in self._t:
            acc |= k
        return [i for i in range(self.nvars) if (acc >> (_BITS * i)) & _MASK]

    def __call__(self, *point):
        return self.evaluate(point[0] if len(point) == 1 and isinstance(point[0], (list, tuple)) else point)

    def evaluate(self, point: Sequence, prime: int | None = None):
        """Value at ``point``; exact over Q, or in F_p when ``prime`` is given."""
        if len(point) != self.nvars:
            raise ArityError(f"point has {len(point)} entries, ring has {self.nvars} variables")
        n = self.nvars
        if prime is None:
            pts = [to_rational(x) for x in point]
            total = 0
            for k, c in self._t.items():
                v = c
                for i in range(n):
                    e = (k >> (_BITS * i)) & _MASK
                    if e:
                        v = v * pts[i] ** e
                total += v
            return _norm(Fraction(total)) if isinstance(total, Fraction) else total
        pts = [reduce_mod(x, prime) for x in point]
        total = 0
        for k, c in self._t.items():
            v = reduce_mod(c, prime)
            for i in range(n):
                e = (k >> (_BITS * i)) & _MASK
                if e:
                    v = v * pow(pts[i], e, prime) % prime
            total += v
        return total % prime

    def reduce(self, prime: int) -> tuple[np.ndarray, list[int]]:
        """Exponent rows (int64 array) and coefficient residues mod ``prime``."""
        keys, cs = [], []
        for k, c in self._t.items():
            r = reduce_mod(c, prime)
            if r:
                keys.append(k)
                cs.append(r)
        return unpack_many(keys, self.nvars), cs

    def denominator(self) -> int:
        d = 1
        for c in self._t.values():
            if type(c) is Fraction:
                d = d * c.denominator // _gcd(d, c.denominator)
        return d

    # -- ring maps ---------------------------------------------------------

    def substitute(self, images: Sequence["SparsePoly"]) -> "SparsePoly":
        return substitute_affine(self, images)

    def embed(self, nvars: int, positions: Sequence[int] | None = None) -> "SparsePoly":
        """Rename variable i to ``positions[i]`` in a ring of arity ``nvars``."""
        if positions is None:
            positions = range(self.nvars)
        positions = list(positions)
        t = {}
        for k, c in self._t.items():
            nk = 0
            for i, pos in enumerate(positions):
                e = (k >> (_BITS * i)) & _MASK
                if e:
                    nk += e << (_BITS * pos)
            t[nk] = c
        return SparsePoly._raw(nvars, t)

    # -- text --------------------------------------------------------------

    def to_text(self, names: Sequence[str] | str = "t") -> str:
        return format_poly(self, names)

    def __repr__(self) -> str:
        return f"SparsePoly({self.nvars}, {self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _total_degree(k: int) -> int:
    d = 0
    while k:
        d += k & _MASK
        k >>= _BITS
    return d


def _weighted(k: int, weights: Sequence[int]) -> int:
    d = 0
    i = 0
    while k:
        e = k & _MASK
        if e:
            d += e * weights[i]
        k >>= _BITS
        i += 1
    return d


def _check_weights(weights: Sequence[int], n: int) -> None:
    if len(weights) != n:
        raise ArityError(f"weight vector has length {len(weights)}, ring has {n} variables")
    if any(w < 1 for w in weights):
        raise ValueError("weights must be positive integers")


def _mul_terms(a: dict, b: dict) -> dict:
    if len(a) < len(b):
        a, b = b, a
    out: dict[int, object] = {}
    get = out.get
    check = budget.check
    n = 0
    for kb, cb in b.items():
        for ka, ca in a.items():
            k = ka + kb
            out[k] = get(k, 0) + ca * cb
        n += len(a)
        if n > 200_000:
            check()
            n = 0
    return {k: _norm(c) for k, c in out.items() if c}


def reduce_mod(c, prime: int) -> int:
    if type(c) is Fraction:
        den = c.denominator % prime
        if den == 0:
            raise BadPrime(f"denominator {c.denominator} vanishes mod {prime}")
        return c.numerator * pow(den, -1, prime) % prime
    return c % prime


# -- free-standing operations -------------------------------------------------


def poly_arith(a: SparsePoly, b: SparsePoly, op: str) -> SparsePoly:
    if a.nvars != b.nvars:
        raise ArityError(f"arity mismatch: {a.nvars} vs {b.nvars}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def poly_sum(polys: Iterable[SparsePoly], nvars: int) -> SparsePoly:
    t: dict[int, object] = {}
    for p in polys:
        if p.nvars != nvars:
            raise ArityError(f"arity mismatch: {p.nvars} vs {nvars}")
        for k, c in p._t.items():
            t[k] = t.get(k, 0) + c
    return SparsePoly._raw(nvars, {k: _norm(c) for k, c in t.items() if c})


def linear_combination(pairs: Iterable[tuple[object, SparsePoly]], nvars: int) -> SparsePoly:
    """``sum(c * p)`` without building the intermediate scaled polynomials."""
    t: dict[int, object] = {}
    for c, p in pairs:
        if p.nvars != nvars:
            raise ArityError(f"arity mismatch: {p.nvars} vs {nvars}")
        if not c:
            continue
        for k, v in p._t.items():
            t[k] = t.get(k, 0) + c * v
    return SparsePoly._raw(nvars, {k: _norm(c) for k, c in t.items() if c})


def substitute_affine(p: SparsePoly, images: Sequence[SparsePoly]) -> SparsePoly:
    """Apply the ring map sending variable i to ``images[i]``."""
    if len(images) != p.nvars:
        raise ArityError(f"{len(images)} images for a ring of arity {p.nvars}")
    if not images:
        return p
    target = images[0].nvars
    if any(im.nvars != target for im in images):
        raise ArityError("images must share a common target arity")
    if p.is_zero():
        return SparsePoly.zero(target)
    # power cache per variable
    powers: list[list[SparsePoly]] = [[SparsePoly.constant(target, 1)] for _ in images]

    def power(i: int, e: int) -> SparsePoly:
        cache = powers[i]
        while len(cache) <= e:
            cache.append(cache[-1] * images[i])
        return cache[e]

    # Horner-free but memoised over shared prefixes of the exponent vector
    out: dict[int, object] = {}
    n = p.nvars
    for k, c in p._t.items():
        term = None
        for i in range(n):
            e = (k >> (_BITS * i)) & _MASK
            if e:
                f = power(i, e)
                term = f if term is None else term * f
        if term is None:
            out[0] = out.get(0, 0) + c
            continue
        for kk, v in term._t.items():
            out[kk] = out.get(kk, 0) + c * v
        budget.check()
    return SparsePoly._raw(target, {k: _norm(v) for k, v in out.items() if v})


def weighted_components(p: SparsePoly, weights: Sequence[int] | None = None) -> list[tuple[int, SparsePoly]]:
    """Split ``p`` into homogeneous pieces, lowest degree first."""
    if weights is None:
        weights = (1,) * p.nvars
    _check_weights(weights, p.nvars)
    parts: dict[int, dict] = {}
    for k, c in p._t.items():
        parts.setdefault(_weighted(k, weights), {})[k] = c
    return [(d, SparsePoly._raw(p.nvars, parts[d])) for d in sorted(parts)]


def initial_component(p: SparsePoly, weights: Sequence[int] | None = None) -> tuple[int, SparsePoly]:
    """Lowest-degree homogeneous component together with its degree."""
    comps = weighted_components(p, weights)
    if not comps:
        raise ValueError("zero polynomial has no initial component")
    return comps[0]


def partial_derivative(p: SparsePoly, var_index: int) -> SparsePoly:
    return p.derivative(var_index)


def evaluate(p: SparsePoly, point: Sequence, prime: int | None = None):
    return p.evaluate(point, prime)


def exact_divide(a: SparsePoly, b: SparsePoly) -> SparsePoly:
    """Quotient ``a / b`` when ``b`` divides ``a`` exactly; raises otherwise."""
    a._check(b)
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero():
        return SparsePoly.zero(a.nvars)
    n = a.nvars

    def lead(t: dict) -> int:
        return max(t, key=lambda k: (_total_degree(k), unpack(k, n)))

    kb = lead(b._t)
    cb = b._t[kb]
    eb = unpack(kb, n)
    rem = dict(a._t)
    quot: dict[int, object] = {}
    while rem:
        kr = lead(rem)
        er = unpack(kr, n)
        if any(x < y for x, y in zip(er, eb)):
            raise ArithmeticError("inexact polynomial division")
        kq = kr - kb
        cq = _norm(Fraction(rem[kr]) / cb)
        quot[kq] = cq
        for k, c in b._t.items():
            kk = k + kq
            v = rem.get(kk, 0) - cq * c
            if v:
                rem[kk] = _norm(v)
            else:
                rem.pop(kk, None)
        budget.check()
    return SparsePoly._raw(n, quot)


# -- canonical text -----------------------------------------------------------


def _fmt_coeff(c) -> str:
    if type(c) is Fraction:
        return f"{c.numerator}/{c.denominator}"
    return f"{c}/1"


def format_poly(p: SparsePoly, names: Sequence[str] | str = "t") -> str:
    """Canonical text: ``coef*var^e*...`` terms in graded-lex order, joined by ' + '.

    Coefficients are always written as ``num/den``; the zero polynomial is ``0``.
    """
    if isinstance(names, str):
        names = [f"{names}{i + 1}" for i in range(p.nvars)]
    if len(names) != p.nvars:
        raise ArityError("one name per variable required")
    out = []
    for exps, c in p.items():
        factors = [_fmt_coeff(c)]
        for name, e in zip(names, exps):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}")
        out.append("*".join(factors))
    return " + ".join(out) if out else "0"


_TERM = re.compile(r"^(-?\d+)/(\d+)((?:\*[A-Za-z_]\w*(?:\^\d+)?)*)$")


def parse_poly(text: str, names: Sequence[str] | str, nvars: int | None = None) -> SparsePoly:
    """Inverse of :func:`format_poly`."""
    if isinstance(names, str):
        if nvars is None:
            raise ValueError("nvars required with a name prefix")
        names = [f"{names}{i + 1}" for i in range(nvars)]
    index = {nm: i for i, nm in enumerate(names)}
    n = len(names)
    text = text.strip()
    if text == "0":
        return SparsePoly.zero(n)
    terms: dict[tuple[int, ...], object] = {}
    for chunk in text.split(" + "):
        m = _TERM.match(chunk.strip())
        if m is None:
            raise ValueError(f"malformed term {chunk!r}")
        c = Fraction(int(m.group(1)), int(m.group(2)))
        exps = [0] * n
        for factor in filter(None, m.group(3).split("*")):
            nm, _, e = factor.partition("^")
            exps[index[nm]] += int(e) if e else 1
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + c
    return SparsePoly(n, terms)
