"""Algebraic independence of initial components and the goodness verdict.

Two independent routes decide whether ^e q_1, ..., ^e q_l are algebraically
independent:

* the degree sum  sum(deg ^e q_i)  against  (dim g^e + l) / 2
* the generic rank of the Jacobian matrix of the ^e q_i

They must agree on every input; a disagreement is raised as a
:class:`StructuralError` because it can only come from a bug.

The degree sum never exceeds the bound; equality holds exactly for
independent families, and dependent families fall strictly below.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import budget, kernels, linalg
from .lie import StructuralError
from .multipoly import BadPrime, SparsePoly, exact_divide, initial_component, linear_combination, reduce_mod
from .slodowy import SliceChart, SliceRestriction, product_of

# ten primes just below 2**31: residues multiply without overflowing int64
PRIMES = (2147483647, 2147483629, 2147483587, 2147483579, 2147483563,
          2147483549, 2147483543, 2147483497, 2147483489, 2147483477)

DEFAULT_TRIALS = 8
DEFAULT_SEARCH_BUDGET = 32
CORRECTION_COEFFS = (-3, -2, -1, 1, 2, 3)

GOOD = "GoodCertified"
NOT_CERTIFIED = "NotCertifiedStandard"
LIKELY_NOT_GOOD = "LikelyNotGood"


@dataclass
class IndependenceResult:
    degree_sum: int
    bound: int
    jacobian_rank: int | None = None
    rank_method: str | None = None
    trials: int = 0

    @property
    def excess(self) -> int:
        return self.degree_sum - self.bound

    @property
    def equality(self) -> bool:
        return self.degree_sum == self.bound

    def as_dict(self) -> dict:
        return {
            "degree_sum": self.degree_sum,
            "bound": self.bound,
            "excess": self.excess,
            "equality": self.equality,
            "jacobian_rank": self.jacobian_rank,
            "rank_method": self.rank_method,
            "trials": self.trials,
        }


def degree_sum_criterion(degrees: Sequence[int], dim_ge: int, rank: int) -> IndependenceResult:
    """Compare sum(degrees) with (dim g^e + l) / 2."""
    if len(degrees) != rank:
        raise ValueError(f"expected {rank} degrees, got {len(degrees)}")
    if any(d < 1 for d in degrees):
        raise ValueError("initial degrees must be positive")
    if (dim_ge + rank) % 2:
        raise StructuralError(f"dim g^e + l = {dim_ge} + {rank} is odd")
    bound = (dim_ge + rank) // 2
    total = sum(degrees)
    if total > bound:
        raise StructuralError(f"degree sum {total} exceeds the bound {bound}")
    return IndependenceResult(total, bound)


# -- Jacobian rank ------------------------------------------------------------


def jacobian(polys: Sequence[SparsePoly]) -> list[list[SparsePoly]]:
    if not polys:
        return []
    r = polys[0].nvars
    return [[p.derivative(j) for j in range(r)] for p in polys]


def _pack(entries: Sequence[SparsePoly], prime: int):
    blocks, coeffs, offsets = [], [], [0]
    for p in entries:
        e, c = p.reduce(prime)
        blocks.append(e)
        coeffs.extend(c)
        offsets.append(len(coeffs))
    nvars = entries[0].nvars if entries else 0
    exps = np.concatenate(blocks) if blocks else np.zeros((0, nvars), dtype=np.int64)
    return exps, np.array(coeffs, dtype=np.int64), np.array(offsets, dtype=np.int64)


def modular_rank(polys: Sequence[SparsePoly], trials: int = DEFAULT_TRIALS, seed: int = 0,
                 backend: str | None = None) -> int:
    """Max over ``trials`` of the rank of the Jacobian at a random point over a random prime field.

    Never exceeds the generic rank over Q; a full-rank trial certifies full rank.
    """
    if not polys:
        return 0
    l, r = len(polys), polys[0].nvars
    if r == 0:
        return 0
    entries = [d for row in jacobian(polys) for d in row]
    best = 0
    packed: dict[int, tuple] = {}
    children = np.random.SeedSequence(seed).spawn(trials)
    for child in children:
        rng = np.random.default_rng(child)
        order = rng.permutation(len(PRIMES))
        for idx in order:
            prime = PRIMES[idx]
            if prime not in packed:
                try:
                    packed[prime] = _pack(entries, prime)
                except BadPrime:
                    packed[prime] = None
            if packed[prime] is not None:
                break
        else:
            raise ArithmeticError("every prime in the list divides a denominator")
        point = rng.integers(1, prime, size=r, dtype=np.int64)
        vals = kernels.eval_mod_p(*packed[prime], point, prime, backend=backend)
        best = max(best, kernels.rank_mod_p(vals.reshape(l, r), prime, backend=backend))
        if best == min(l, r):
            break
    return best


def symbolic_rank(rows: Sequence[Sequence[SparsePoly]]) -> int:
    """Rank over Q(t) by fraction-free (Bareiss) elimination with exact polynomial division."""
    M = [list(row) for row in rows]
    if not M:
        return 0
    nrows, ncols = len(M), len(M[0])
    prev = SparsePoly.constant(M[0][0].nvars, 1)
    r0 = 0
    for col in range(ncols):
        if r0 == nrows:
            break
        cands = [i for i in range(r0, nrows) if not M[i][col].is_zero()]
        if not cands:
            continue
        piv = min(cands, key=lambda i: len(M[i][col]))
        M[r0], M[piv] = M[piv], M[r0]
        p = M[r0][col]
        for i in range(r0 + 1, nrows):
            a = M[i][col]
            for j in range(col + 1, ncols):
                num = p * M[i][j] - a * M[r0][j]
                M[i][j] = exact_divide(num, prev) if not prev.is_constant() else num.scale(Fraction(1) / prev.constant_term())
            M[i][col] = SparsePoly.zero(p.nvars)
            budget.check()
        prev = p
        r0 += 1
    return r0


def jacobian_independence(polys: Sequence[SparsePoly], trials: int = DEFAULT_TRIALS, seed: int = 0,
                          backend: str | None = None) -> tuple[int, str]:
    """Generic Jacobian rank: modular trials first, exact symbolic elimination if short of full rank."""
    if any(p.is_zero() for p in polys):
        raise ValueError("polynomials must be nonzero")
    full = min(len(polys), polys[0].nvars) if polys else 0
    rank = modular_rank(polys, trials, seed, backend)
    if rank == full:
        return rank, "modular-probabilistic"
    return symbolic_rank(jacobian(polys)), "exact-symbolic"


# -- Hilbert series truncation -----------------------------------------------


def hilbert_coefficients(degrees: Sequence[int], cap: int) -> list[int]:
    """Coefficients of prod 1/(1 - T^(2 d_i)) up to T^cap."""
    coeffs = [0] * (cap + 1)
    coeffs[0] = 1
    for d in degrees:
        step = 2 * d
        for s in range(step, cap + 1):
            coeffs[s] += coeffs[s - step]
    return coeffs


def _exponents_of_weight(weights: Sequence[int], target: int):
    def rec(i, rem, acc):
        if i == len(weights):
            if rem == 0:
                yield tuple(acc)
            return
        for a in range(rem // weights[i] + 1):
            yield from rec(i + 1, rem - a * weights[i], acc + [a])

    yield from rec(0, target, [])


def span_dimension(polys: Sequence[SparsePoly]) -> int:
    """Exact dimension of the Q-span; a modular pass settles the full-rank case."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return 0
    monos = sorted({m for p in polys for m in p._t})
    index = {m: i for i, m in enumerate(monos)}
    prime = PRIMES[0]
    try:
        A = np.zeros((len(polys), len(monos)), dtype=np.int64)
        for i, p in enumerate(polys):
            for m, c in p._t.items():
                A[i, index[m]] = reduce_mod(c, prime)
        if kernels.rank_mod_p(A, prime) == len(polys):
            return len(polys)
    except BadPrime:
        pass
    E = linalg.qmatrix(len(polys), len(monos))
    for i, p in enumerate(polys):
        for m, c in p._t.items():
            E[i, index[m]] = c
    return linalg.rank(E)


def hilbert_truncation_check(initials: Sequence[SparsePoly], degrees: Sequence[int], cap: int) -> bool:
    """Monomials in the initials, counted by Slodowy degree up to ``cap``, span as prod 1/(1-T^(2d_i)) predicts."""
    if not initials:
        return True
    expected = hilbert_coefficients(degrees, cap)
    weights = [2 * d for d in degrees]
    cache: dict = {}
    for s in range(cap + 1):
        exps = list(_exponents_of_weight(weights, s))
        if len(exps) != expected[s]:
            raise StructuralError("monomial count disagrees with the series")
        if s == 0 or not exps:
            continue
        prods = [product_of(list(initials), e, cache) for e in exps]
        if span_dimension(prods) != expected[s]:
            return False
        budget.check()
    return True


# -- perturbation search ------------------------------------------------------


@dataclass
class Witness:
    """A generating sequence reached by a degree-preserving change of generators."""

    method: str
    initials: list[SparsePoly] = field(repr=False)
    degrees: list[int]
    trial: int


def _lower_products(degrees: Sequence[int], target: int) -> list[tuple[int, ...]]:
    """Exponent vectors over the generators of degree < target summing to degree ``target``."""
    lower = [d if d < target else 0 for d in degrees]
    out = []

    def rec(i, rem, acc):
        if i == len(lower):
            if rem == 0 and any(acc):
                out.append(tuple(acc))
            return
        if lower[i] == 0:
            rec(i + 1, rem, acc + [0])
            return
        for a in range(rem // lower[i] + 1):
            rec(i + 1, rem - a * lower[i], acc + [a])

    rec(0, target, [])
    return out


def _reduced_block(block: list[SparsePoly], decomposables: list[SparsePoly]) -> list[SparsePoly]:
    """Lifts of span(block) modulo span(decomposables) with the largest initial degrees."""
    n = block[0].nvars
    order = lambda m: (sum(m), m)  # noqa: E731
    basis: list[dict] = []
    pivots: list[tuple] = []

    def reduce(row: dict) -> dict:
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
        return row

    def insert(row: dict) -> bool:
        row = reduce(row)
        if not row:
            return False
        piv = min(row, key=order)
        for b in basis:
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
        return True

    for p in decomposables:
        insert({m: Fraction(c) for m, c in p.as_dict().items()})
    n_dec = len(basis)
    for p in block:
        if not insert({m: Fraction(c) for m, c in p.as_dict().items()}):
            raise StructuralError("a generator restricts into the span of decomposables")
    out = []
    for k in range(n_dec, len(basis)):
        out.append(SparsePoly(n, basis[k]))
    return out


def perturbation_search(restrictions: Sequence[SliceRestriction], chart: SliceChart, budget_trials: int,
                        seed: int = 0, bound: int | None = None) -> Witness | None:
    """Look for a homogeneous generating sequence whose initial components reach the bound.

    Trial 0 is the filtration-reduced sequence: each degree block of
    generators is reduced against the products of lower-degree generators
    (and against itself) so that its initial components have the largest
    degrees this family allows.  The remaining trials replace q_i by
    q_i + sum c * (product of lower generators) + sum c' * (other q_j of the
    same degree) with random small nonzero integers.
    """
    if budget_trials <= 0:
        return None
    degrees = [r.source_degree for r in restrictions]
    kappas = [r.kappa for r in restrictions]
    current = [r.initial_degree for r in restrictions]
    if bound is None:
        bound = (chart.r + len(restrictions)) // 2
    if sum(current) == bound:
        return Witness("standard", [r.initial for r in restrictions], current, 0)

    cache: dict = {}
    corrections = {}
    for d in sorted(set(degrees)):
        corrections[d] = [product_of(kappas, e, cache) for e in _lower_products(degrees, d)]
        budget.check()

    # trial 0: filtration-reduced generators
    new_kappas = list(kappas)
    for d in sorted(set(degrees)):
        idx = [i for i, di in enumerate(degrees) if di == d]
        reduced = _reduced_block([kappas[i] for i in idx], corrections[d])
        reduced.sort(key=lambda p: initial_component(p)[0])
        for i, p in zip(idx, reduced):
            new_kappas[i] = p
    witness = _try(new_kappas, bound, "filtration-reduced", 0)
    if witness is not None:
        return witness

    rng = np.random.default_rng(np.random.SeedSequence(seed).spawn(1)[0])
    for trial in range(1, budget_trials):
        new_kappas = []
        mix = _mixing(degrees, rng)
        for i, d in enumerate(degrees):
            pairs = [(1, kappas[i])]
            pairs += [(int(rng.choice(CORRECTION_COEFFS)), c) for c in corrections[d]]
            pairs += [(mix[i][j], kappas[j]) for j in range(len(degrees)) if j != i and mix[i][j]]
            new_kappas.append(linear_combination(pairs, chart.r))
        witness = _try(new_kappas, bound, "random-correction", trial)
        if witness is not None:
            return witness
        budget.check()
    return None


def _mixing(degrees: Sequence[int], rng) -> list[list[int]]:
    """Invertible integer matrix mixing generators of equal degree (identity elsewhere)."""
    l = len(degrees)
    while True:
        M = [[1 if i == j else 0 for j in range(l)] for i in range(l)]
        for i, j in itertools.permutations(range(l), 2):
            if degrees[i] == degrees[j]:
                M[i][j] = int(rng.choice(CORRECTION_COEFFS + (0,)))
        if linalg.det(linalg.qmatrix(M)) != 0:
            return M


def _try(kappas: Sequence[SparsePoly], bound: int, method: str, trial: int) -> Witness | None:
    if any(k.is_zero() for k in kappas):
        return None
    inits = [initial_component(k) for k in kappas]
    degs = [d for d, _ in inits]
    if sum(degs) == bound:
        return Witness(method, [p for _, p in inits], degs, trial)
    return None


# -- verdict ------------------------------------------------------------------


@dataclass
class GoodnessReport:
    type: str
    rank: int
    partition: str
    dim_ge: int
    labels: list[str]
    source_degrees: list[int]
    degrees: list[int]
    independence: IndependenceResult
    verdict: str
    search_trials: int
    witness: str | None
    hilbert_check: bool | None
    very_even_flag: bool
    normalization: str = "trace-form"
    timings: dict | None = None
    polys: dict | None = None

    @property
    def slodowy_degrees(self) -> list[int]:
        return [2 * d for d in self.source_degrees]

    @property
    def exit_code(self) -> int:
        if self.verdict == GOOD:
            return 0
        if self.verdict == NOT_CERTIFIED:
            return 11
        return 10


def cross_checked(initials: Sequence[SparsePoly], dim_ge: int, rank: int, trials: int, seed: int) -> IndependenceResult:
    """Degree-sum criterion and Jacobian rank for one sequence; they must agree."""
    res = degree_sum_criterion([initial_component(p)[0] for p in initials], dim_ge, rank)
    jr, method = jacobian_independence(initials, trials, seed)
    res.jacobian_rank, res.rank_method, res.trials = jr, method, trials
    if res.equality != (jr == rank):
        raise StructuralError(
            f"degree sum {res.degree_sum} vs bound {res.bound} disagrees with Jacobian rank {jr} (l = {rank})")
    return res


def goodness_verdict(restrictions: Sequence[SliceRestriction], chart: SliceChart, *, type_name: str,
                     partition: str, very_even: bool = False, trials: int = DEFAULT_TRIALS,
                     search_budget: int = DEFAULT_SEARCH_BUDGET, seed: int = 0,
                     hilbert_cap: int | None = None) -> GoodnessReport:
    """Verdict for one orbit from its restricted generators.

    GoodCertified when the standard generators, or a sequence found by
    :func:`perturbation_search`, have independent initial components.
    With the search disabled the verdict stays NotCertifiedStandard; a
    search that runs out of trials gives LikelyNotGood(trials).
    """
    rank = len(restrictions)
    source = [r.source_degree for r in restrictions]
    initials = [r.initial for r in restrictions]
    ind = cross_checked(initials, chart.r, rank, trials, seed)
    witness = None
    if ind.equality:
        verdict = GOOD
    elif search_budget <= 0:
        verdict = NOT_CERTIFIED
    else:
        found = perturbation_search(restrictions, chart, search_budget, seed, ind.bound)
        if found is None:
            verdict = f"{LIKELY_NOT_GOOD}({search_budget})"
        else:
            initials = found.initials
            ind = cross_checked(initials, chart.r, rank, trials, seed)
            if not ind.equality:
                raise StructuralError("perturbed sequence lost equality on recheck")
            verdict, witness = GOOD, f"{found.method}#{found.trial}"
    hilbert = None
    if verdict == GOOD:
        cap = 2 * max(source) if hilbert_cap is None else hilbert_cap
        hilbert = hilbert_truncation_check(initials, source, cap)
        if not hilbert:
            raise StructuralError("independent initials fail the Hilbert series check")
    return GoodnessReport(
        type=type_name,
        rank=rank,
        partition=partition,
        dim_ge=chart.r,
        labels=[r.label for r in restrictions],
        source_degrees=source,
        degrees=[initial_component(p)[0] for p in initials],
        independence=ind,
        verdict=verdict,
        search_trials=search_budget,
        witness=witness,
        hilbert_check=hilbert,
        very_even_flag=very_even,
    )
