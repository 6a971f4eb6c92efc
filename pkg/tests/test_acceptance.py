"""Acceptance criteria, one test per criterion.

Each test prints a single ``acceptance N: PASS|FAIL`` line.  The rank <= 4
sweep over all four families is computed once and shared.
"""

import os
import random
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from goodslice import budget, criterion as C, linalg
from goodslice.invariants import fundamental_invariants, pfaffian, skew_form
from goodslice.lie import ClassicalType, build_classical
from goodslice.multipoly import SparsePoly, initial_component, substitute_affine
from goodslice.nilpotent import Partition, enumerate_partitions, standard_triple
from goodslice.slodowy import ge_invariance_check, restrict_all, slice_chart

STRETCH_BUDGET = float(os.environ.get("GOODSLICE_STRETCH_BUDGET", "1800"))


def types_up_to(rank, families="ABCD"):
    return [ClassicalType(f, r) for f in families for r in range(1, rank + 1) if not (f == "D" and r < 2)]


def record(capsys, n, desc, ok, detail=""):
    line = f"acceptance {n:>2}: {'PASS' if ok else 'FAIL'}  {desc}" + (f" [{detail}]" if detail else "")
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


class Orbit:
    def __init__(self, t, lam):
        L = build_classical(t)
        T = standard_triple(L, lam)
        self.t, self.lam, self.L, self.T = t, lam, L, T
        self.chart = slice_chart(L, T)
        self.qs = fundamental_invariants(L)
        self.rs = restrict_all(self.qs, self.chart)
        self.degrees = [r.initial_degree for r in self.rs]
        self.bound = (self.chart.r + L.rank) // 2
        self.jacobian_rank, _ = C.jacobian_independence([r.initial for r in self.rs])
        self.report = C.goodness_verdict(self.rs, self.chart, type_name=str(t), partition=str(lam),
                                         very_even=T.very_even)

    @property
    def name(self):
        return f"{self.t}({self.lam})"


@pytest.fixture(scope="module")
def sweep():
    return [Orbit(t, lam) for t in types_up_to(4) for lam in enumerate_partitions(t)]


def test_1_type_a_sweep(capsys):
    t0 = time.time()
    bad = []
    for t in types_up_to(4, "A"):
        for lam in enumerate_partitions(t):
            o = Orbit(t, lam)
            if not (sum(o.degrees) == o.bound and o.jacobian_rank == t.rank and o.report.verdict == C.GOOD):
                bad.append(o.name)
    elapsed = time.time() - t0
    record(capsys, 1, "type A, n = 2..5: equality, Jacobian rank l, GoodCertified",
           not bad and elapsed < 120, f"{elapsed:.1f}s, failures {bad}")


def test_2_zero_orbit_identity(capsys, sweep):
    bad = []
    for o in sweep:
        if all(p == 1 for p in o.lam.parts):
            d = [q.degree for q in o.qs]
            if not (o.degrees == d and 2 * sum(d) == o.L.dim + o.L.rank):
                bad.append(o.name)
    record(capsys, 2, "e = 0: sum d_i = (dim g + l)/2 for A/B/C/D, rank <= 4", not bad, f"failures {bad}")


def test_3_regular_orbits(capsys, sweep):
    bad = [o.name for o in sweep if len(o.lam.parts) == 1 or (o.t.family == "D" and o.lam.parts == (o.L.N - 1, 1))
           if not (set(o.degrees) == {1} and o.report.verdict == C.GOOD)]
    checked = sum(1 for o in sweep if len(o.lam.parts) == 1 or (o.t.family == "D" and o.lam.parts == (o.L.N - 1, 1)))
    record(capsys, 3, "regular orbits: all initial degrees 1, GoodCertified",
           not bad and checked == len(types_up_to(4)), f"{checked} orbits, failures {bad}")


def test_4_slodowy_homogeneity(capsys, sweep):
    bad = [f"{o.name}:{r.label}" for o in sweep for r in o.rs
           if not r.kappa.is_homogeneous(o.chart.slodowy_weights, 2 * r.source_degree)]
    record(capsys, 4, "kappa(q_i) Slodowy-homogeneous of degree 2 d_i on the rank <= 4 sweep", not bad,
           f"{sum(len(o.rs) for o in sweep)} restrictions, failures {bad}")


def test_5_initial_components_invariant(capsys, sweep):
    bad = [f"{o.name}:{r.label}" for o in sweep for r in o.rs if not ge_invariance_check(r.initial, o.chart)]
    record(capsys, 5, "^e q_i annihilated by g^e on the rank <= 4 sweep", not bad, f"failures {bad}")


def test_6_criterion_cross_check(capsys, sweep):
    bad = [o.name for o in sweep if (sum(o.degrees) == o.bound) != (o.jacobian_rank == o.L.rank)]
    record(capsys, 6, "degree-sum equality <=> Jacobian rank l, zero mismatches", not bad,
           f"{len(sweep)} orbits, mismatches {bad}")


def test_7_inequality_direction(capsys, sweep):
    below = [f"{o.name} {sum(o.degrees)}<{o.bound}" for o in sweep if sum(o.degrees) < o.bound]
    record(capsys, 7, "sum deg ^e q_i >= (dim g^e + l)/2 on every orbit of the sweep", not below,
           f"violations {below}")


def test_7b_inequality_observed_direction(capsys, sweep):
    above = [o.name for o in sweep if sum(o.degrees) > o.bound]
    below = [o.name for o in sweep if sum(o.degrees) < o.bound]
    ok = not above and all(o.jacobian_rank < o.L.rank for o in sweep if o.name in below)
    record(capsys, "7b", "companion: sum deg ^e q_i <= bound everywhere, strict exactly for dependent families", ok,
           f"{len(below)} strict cases")


def test_8_so12_counterexample(capsys):
    t, lam = ClassicalType("D", 6), Partition.parse("5,3,2,2")
    with budget.deadline(STRETCH_BUDGET):
        o = Orbit(t, lam)
    excess = sum(o.degrees) - o.bound
    verdict_ok = o.report.verdict == f"LikelyNotGood({C.DEFAULT_SEARCH_BUDGET})"
    record(capsys, 8, "so12 (5,3,2,2): strict excess for standard generators and LikelyNotGood",
           excess > 0 and verdict_ok, f"degrees {o.degrees}, excess {excess}, verdict {o.report.verdict}")


def test_8b_so12_verdict(capsys):
    t, lam = ClassicalType("D", 6), Partition.parse("5,3,2,2")
    with budget.deadline(STRETCH_BUDGET):
        o = Orbit(t, lam)
    record(capsys, "8b", "so12 (5,3,2,2): verdict LikelyNotGood(32) after the default search",
           o.report.verdict == "LikelyNotGood(32)" and o.jacobian_rank < 6, o.report.verdict)


def _rand_poly(rng, nvars=3, terms=5):
    return SparsePoly(nvars, {tuple(rng.randint(0, 3) for _ in range(nvars)): Fraction(rng.randint(-5, 5), rng.randint(1, 4))
                              for _ in range(rng.randint(1, terms))})


def test_9_oracle_suites(capsys):
    t0 = time.time()
    rng = random.Random(2024)
    failures = []
    for _ in range(100):
        p = _rand_poly(rng)
        if p.is_zero():
            continue
        low = min(sum(e) for e, _ in p.items())
        if initial_component(p) != (low, SparsePoly(3, {e: c for e, c in p.items() if sum(e) == low})):
            failures.append("initial")
        q = _rand_poly(rng)
        i = rng.randrange(3)
        if (p * q).derivative(i) != p * q.derivative(i) + q * p.derivative(i):
            failures.append("leibniz")
        images = [_rand_poly(rng, terms=3) for _ in range(3)]
        pt = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3)]
        if substitute_affine(p, images).evaluate(pt) != p.evaluate([im.evaluate(pt) for im in images]):
            failures.append("homomorphism")
    for rank in (2, 3, 4):
        L = build_classical(ClassicalType("D", rank))
        for _ in range(20):
            x = L.from_coords([Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(L.dim)])
            S = skew_form(L, x)
            M = np.empty(S.shape, dtype=object)
            for a in range(S.shape[0]):
                for b in range(S.shape[1]):
                    M[a, b] = SparsePoly.constant(0, S[a, b])
            pf = pfaffian(M).constant_term()
            if pf * pf != linalg.det(S):
                failures.append(f"pfaffian D{rank}")
    elapsed = time.time() - t0
    record(capsys, 9, "oracles: initial component, homomorphism, Leibniz, Pf^2 = det",
           not failures and elapsed < 60, f"{elapsed:.1f}s, failures {sorted(set(failures))}")


def test_10_determinism(capsys, tmp_path):
    cmd = [sys.executable, "-m", "goodslice", "scan", "--type", "B", "--rank", "3", "--seed", "7", "--output", "json"]
    env = dict(os.environ, GOODSLICE_CACHE_DIR=str(tmp_path / "cache"))
    first = subprocess.run(cmd, capture_output=True, env=env, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, env=env, check=True).stdout
    record(capsys, 10, "two runs of scan B3 --seed 7 --output json are byte-identical",
           first == second and len(first) > 0, f"{len(first)} bytes")
