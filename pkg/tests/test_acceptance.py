"""Acceptance criteria; each test asserts its own runtime bound."""

from __future__ import annotations

import itertools
import json
import random
import subprocess
import sys
import time
from fractions import Fraction as F
from pathlib import Path

import pytest

from oracles import padic_abs, refinement_by_pairs
from ultrakit.gauge import (
    ClosedUnitBall,
    MaxFunctionals,
    OpenUnitBall,
    PAdicLattice,
    TrivialNorm,
    contains,
    eval_seminorm,
    minkowski_functional,
    solve,
    theorem_unit_ball_recovery,
    value_group_exponent,
)
from ultrakit.groups import (
    FiniteAbelianGroup,
    all_subgroups,
    balls_at_zero_are_subgroups,
    intersection,
    separated_implies_subgroup_invariance,
    subgroup_semimetric,
    topology_from_subgroup_family,
    u_separated,
)
from ultrakit.scalars import ONE, ZERO, ArchimedeanPower, Magnitude, PAdic, Trivial, abs_value, check_multiplicativity, check_q_triangle
from ultrakit.semimetric import (
    BallSpec,
    DistanceMatrix,
    Partition,
    ball,
    ball_partition,
    check_q_semimetric,
    check_sandwich,
    combine_max,
    combine_power,
    common_refinement,
    is_ultrametric,
    isosceles_check,
    metrize,
    metrize_ball_identity,
    occurring_radii,
    partition_semimetric,
    pow_transform,
    truncate,
    with_exponent,
    zero_partition,
)
from ultrakit.topology import (
    discrete_topology,
    enumerate_topologies,
    enumerate_topologies_bruteforce,
    is_dimension_zero,
    is_hausdorff,
    is_totally_separated,
    separation_axioms,
    tau0,
    topology_from_semimetrics,
)

GOLDEN = Path(__file__).parent / "golden"


class Clock:
    def __init__(self, bound: float):
        self.bound = bound
        self.start = time.perf_counter()

    def check(self):
        elapsed = time.perf_counter() - self.start
        assert elapsed < self.bound, f"took {elapsed:.2f} s, bound {self.bound} s"


# -- random inputs ------------------------------------------------------------------

def random_rational(rng: random.Random, p: int) -> F:
    a = rng.randint(-999, 999) or 1
    b = rng.randint(1, 999)
    return F(a, b) * F(p) ** rng.randint(-6, 6)


def random_partition(rng: random.Random, n: int) -> Partition:
    labels = [rng.randrange(max(1, n // 2 + 1)) for _ in range(n)]
    blocks = {}
    for x, b in enumerate(labels):
        blocks.setdefault(b, []).append(x)
    return Partition(blocks.values())


def random_metric(rng: random.Random, n: int, zero_blocks: bool = True) -> DistanceMatrix:
    """Shortest-path closure of random rational weights (a pseudometric)."""
    P = random_partition(rng, n) if zero_blocks and rng.random() < 0.5 else None
    d = [[F(0)] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        same = P is not None and P.block_of(i) == P.block_of(j)
        d[i][j] = d[j][i] = F(0) if same else F(rng.randint(1, 12), rng.randint(1, 4))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return DistanceMatrix(range(n), d)


def random_ultrametric(rng: random.Random, n: int) -> DistanceMatrix:
    clusters = [[i] for i in range(n)]
    d = [[F(0)] * n for _ in range(n)]
    h = F(0)
    while len(clusters) > 1:
        a, b = sorted(rng.sample(range(len(clusters)), 2))
        h += F(rng.randint(0, 3), rng.randint(1, 3))
        for x in clusters[a]:
            for y in clusters[b]:
                d[x][y] = d[y][x] = h
        clusters[a] += clusters.pop(b)
    return DistanceMatrix(range(n), d)


# -- 1 ---------------------------------------------------------------------------------

@pytest.mark.acceptance("1", "p-adic axioms on 10^4 seeded pairs per prime")
def test_padic_axioms():
    clock = Clock(5)
    rng = random.Random(20240601)
    applicable = 0
    for p in (2, 3, 5, 7):
        spec = PAdic(p)
        pairs = []
        for k in range(10_000):
            y = random_rational(rng, p)
            if k % 2:
                # z close to y in the p-adic sense, so the strict case applies often
                z = y + random_rational(rng, p) * F(p) ** rng.randint(0, 8)
            else:
                z = random_rational(rng, p)
            pairs.append((y, z))
        assert check_multiplicativity(spec, pairs).holds
        tri = check_q_triangle(spec, "inf", pairs)
        assert tri.holds and tri.checked == len(pairs)
        for y, z in pairs:
            ay = abs_value(spec, y)
            if abs_value(spec, y - z) < ay:
                applicable += 1
                assert ay == abs_value(spec, z)
        for y, _ in pairs[:500]:
            assert abs_value(spec, y) == Magnitude(padic_abs(y, p))
    assert applicable > 10_000
    clock.check()


# -- 2 ---------------------------------------------------------------------------------

def _balls_partition(D: DistanceMatrix) -> bool:
    for r in occurring_radii(D):
        for kind in ("closed", "open"):
            if kind == "open" and r == 0:
                continue
            balls = [frozenset(ball(D, BallSpec(x, r, kind))) for x in D.points]
            if any(a != b and a & b for a, b in itertools.combinations(balls, 2)):
                return False
    return True


@pytest.mark.acceptance("2", "ultrametric equivalences over all 729 matrices")
def test_ultrametric_equivalences():
    clock = Clock(10)
    values = [F(0), F(1, 2), F(1)]
    pairs = list(itertools.combinations(range(4), 2))
    ultra = 0
    for choice in itertools.product(values, repeat=6):
        e = [[F(0)] * 4 for _ in range(4)]
        for (i, j), v in zip(pairs, choice):
            e[i][j] = e[j][i] = v
        D = DistanceMatrix(range(4), e)
        u = is_ultrametric(D)
        assert u == isosceles_check(D).holds == _balls_partition(D)
        if u:
            ultra += 1
            for r in occurring_radii(D):
                assert set(ball_partition(D, r).blocks) == {frozenset(ball(D, BallSpec(x, r))) for x in D.points}
    assert 0 < ultra < 729
    clock.check()


# -- 3 ---------------------------------------------------------------------------------

RADIUS_GRID = [F(1, 10), F(1, 7), F(1, 5), F(1, 4), F(1, 3), F(2, 5), F(1, 2), F(2, 3), F(1), F(3, 2), F(2)]


def _family(rng: random.Random):
    n = rng.randint(1, 8)
    q = rng.choice([1, 2, 3, "inf"])
    members = []
    for _ in range(rng.randint(1, 5)):
        if rng.random() < 0.4:
            m = partition_semimetric(random_partition(rng, n), range(n))
        elif q == "inf":
            m = random_ultrametric(rng, n)
        else:
            m = pow_transform(random_metric(rng, n), F(1, q))
        # one stored exponent per family: q for finite q, 1 for ultrametrics
        members.append(with_exponent(m, 1 if q == "inf" else q))
    return q, members


def _metrized_ball_oracle(mats, x, r):
    """Intersection of the first l(r) member balls, l(r) = #{j : 1/j >= r}."""
    pts = mats[0].points
    depth = sum(1 for j in range(1, len(mats) + 1) if F(1, j) >= r)
    out = set(pts)
    for m in mats[:depth]:
        stored = r ** m.exponent  # integer exponent here, so exact
        out &= {y for y in pts if m(x, y) < stored}
    return out


@pytest.mark.acceptance("3", "metrization of 200 random families")
def test_metrization():
    rng = random.Random(7)
    for _ in range(200):
        q, mats = _family(rng)
        for m in mats:
            assert check_q_semimetric(m, q).holds
        d = metrize(mats)
        check = check_q_semimetric(d, q)
        assert check.holds and not check.inconclusive
        expected = refinement_by_pairs([zero_partition(m).blocks for m in mats], d.points)
        assert set(zero_partition(d).blocks) == expected
        assert zero_partition(d) == common_refinement([zero_partition(m) for m in mats])
        assert metrize_ball_identity(mats, RADIUS_GRID).holds
        for x in d.points:
            for r in RADIUS_GRID:
                stored = r ** d.exponent
                metrized = {y for y in d.points if d(x, y) < stored}
                assert metrized == _metrized_ball_oracle(mats, x, r)


# -- 4 ---------------------------------------------------------------------------------

@pytest.mark.acceptance("4", "Minkowski recovery in both regimes and the trivial dichotomy")
def test_minkowski_recovery():
    clock = Clock(5)
    rng = random.Random(4)

    def rat():
        return F(rng.randint(-60, 60), rng.randint(1, 24))

    # archimedean l-infinity type norms on Q^3
    norms = [MaxFunctionals(ArchimedeanPower(1), [[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
             MaxFunctionals(ArchimedeanPower(1), [[1, 2, 0], [0, 1, -1], [3, 0, 1]], [1, F(1, 2), 2])]
    samples = [tuple(rat() for _ in range(3)) for _ in range(1000)]
    for N in norms:
        assert theorem_unit_ball_recovery(N, samples).holds
        for v in samples[:200]:
            n = eval_seminorm(N, v)
            assert minkowski_functional(OpenUnitBall(N), v) == n == minkowski_functional(ClosedUnitBall(N), v)

    # PAdic(2) lattice norms: N(v) = max |(M^-1 v)_i|_2
    for basis in ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[1, 1, 0], [0, 2, 1], [F(1, 2), 0, 3]]):
        L = PAdicLattice(PAdic(2), basis)
        cols = [tuple(F(x) for x in c) for c in basis]
        inverse_rows = list(zip(*[solve(cols, tuple(F(int(i == j)) for j in range(3))) for i in range(3)]))
        N = MaxFunctionals(PAdic(2), inverse_rows)
        report = theorem_unit_ball_recovery(N, samples)
        assert report.holds and not report.notes
        for v in samples:
            n = eval_seminorm(N, v)
            nc, nb = minkowski_functional(ClosedUnitBall(N), v), minkowski_functional(OpenUnitBall(N), v)
            assert minkowski_functional(L, v) == nc == n
            assert nb == (ZERO if n.is_zero else Magnitude(2) * n)
            if n.is_zero:
                continue
            for A, value in ((L, nc), (ClosedUnitBall(N), nc), (OpenUnitBall(N), nb)):
                k = value_group_exponent(PAdic(2), value)
                assert k is not None
                # |t| = 2^k for t = 2^-k; the infimum is attained at that t
                t = F(2) ** -k
                assert contains(A, tuple(x / t for x in v))
                assert not contains(A, tuple(x / (2 * t) for x in v))

    # trivial absolute value, A = V
    A = ClosedUnitBall(TrivialNorm(Trivial(), 3))
    for v in samples[:100] + [(0, 0, 0)]:
        zero = all(x == 0 for x in v)
        assert minkowski_functional(A, v, allow_zero_scalar=True) == (ZERO if zero else ONE)
        assert minkowski_functional(A, v, allow_zero_scalar=False) == ONE
    clock.check()


# -- 5 ---------------------------------------------------------------------------------

def _all_partitions(points):
    points = list(points)
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for part in _all_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


@pytest.mark.acceptance("5", "finite topology theorems over all topologies on <= 4 points")
def test_topology_theorems():
    clock = Clock(60)
    counts = []
    for n in range(5):
        ts = enumerate_topologies(range(n))
        assert set(ts) == set(enumerate_topologies_bruteforce(range(n)))
        counts.append(len(ts))
        for T in ts:
            t0 = tau0(T)
            assert is_totally_separated(T) == is_hausdorff(t0)
            assert is_dimension_zero(t0)
            if is_totally_separated(T):
                assert is_dimension_zero(T)
        generated = set()
        parts = [Partition(p) for p in _all_partitions(range(n))] if n else []
        for P1, P2 in itertools.combinations_with_replacement(parts, 2):
            T = topology_from_semimetrics([partition_semimetric(P1, range(n)), partition_semimetric(P2, range(n))])
            generated.add(T)
            ax = separation_axioms(T)
            assert ax.regular_strict and ax.normal_strict
        assert generated <= set(ts)
    assert counts[4] == 355 and counts == [1, 1, 4, 29, 355]
    clock.check()


# -- 6 ---------------------------------------------------------------------------------

def _symmetric_sets_with_zero(G):
    orbits = {frozenset([x, G.neg(x)]) for x in G.elements if x != G.zero}
    orbits = sorted(orbits, key=sorted)
    for k in range(len(orbits) + 1):
        for chosen in itertools.combinations(orbits, k):
            yield frozenset().union({G.zero}, *chosen)


@pytest.mark.acceptance("6", "group theorems for Z12, Z2xZ4, Z2xZ2xZ2")
def test_group_theorems():
    clock = Clock(30)
    for orders in ((12,), (2, 4), (2, 2, 2)):
        G = FiniteAbelianGroup(orders)
        subs = all_subgroups(G)
        mats = [subgroup_semimetric(G, H) for H in subs]
        checked: dict = {}
        discrete = discrete_topology(G.elements)
        families = 0

        def visit(start, family, combined):
            nonlocal families
            for k in range(start, len(subs)):
                fam = family + [k]
                D = mats[k] if combined is None else combine_max([combined, mats[k]])
                families += 1
                if D not in checked:
                    checked[D] = balls_at_zero_are_subgroups(G, D).holds
                assert checked[D]
                T, nondegenerate = topology_from_subgroup_family(G, [subs[i] for i in fam])
                meet = intersection(G, [subs[i] for i in fam])
                assert nondegenerate == (meet.elements == {G.zero}) == (T == discrete)
                visit(k + 1, fam, D)

        visit(0, [], None)
        assert families == 2 ** len(subs) - 1

        for U in _symmetric_sets_with_zero(G):
            for r in range(1, G.order + 1):
                for E in itertools.combinations(G.elements, r):
                    E = frozenset(E)
                    if u_separated(G, E, frozenset(G.elements) - E, U):
                        assert separated_implies_subgroup_invariance(G, E, U).holds
    clock.check()


# -- 7 ---------------------------------------------------------------------------------

@pytest.mark.acceptance("7", "combinator contracts on 500 random matrices")
def test_combinator_contracts():
    rng = random.Random(77)
    for _ in range(500):
        n = rng.randint(1, 7)
        D = random_metric(rng, n)
        zp = zero_partition(D)
        assert zero_partition(truncate(D, F(rng.randint(1, 8), rng.randint(1, 4)))) == zp
        assert zero_partition(pow_transform(D, rng.choice([F(1, 3), F(1, 2), F(2), F(3)]))) == zp

        q = rng.choice([1, 2, 3])
        k = rng.choice([1, 2, 3])
        family = [pow_transform(random_metric(rng, n), F(1, q)) for _ in range(rng.randint(1, 4))]
        combined = combine_power(family, q * k)
        check = check_q_semimetric(combined, q)
        assert check.holds and not check.inconclusive

        metrics = [D] + [random_metric(rng, n) for _ in range(rng.randint(0, 3))]
        assert check_sandwich(metrics).holds
        l = len(metrics)
        for i, j in itertools.combinations(range(n), 2):
            top = max(m.entries[i][j] for m in metrics)
            total = sum(m.entries[i][j] for m in metrics)
            assert top <= total <= l * top


# -- 8 ---------------------------------------------------------------------------------

@pytest.mark.acceptance("8", "CLI golden determinism and exit codes")
def test_cli_golden_suite():
    cases = json.loads((GOLDEN / "cases.json").read_text())
    assert len(cases) >= 12
    assert {c["exit"] for c in cases} == {0, 1, 2, 3}
    for case in cases:
        argv = [sys.executable, "-m", "ultrakit", case["command"], "--input",
                str(GOLDEN / f"{case['name']}.json"), "--no-timing", *case["flags"]]
        runs = [subprocess.run(argv, capture_output=True) for _ in range(2)]
        assert runs[0].stdout == runs[1].stdout and runs[0].stderr == runs[1].stderr
        assert runs[0].returncode == runs[1].returncode == case["exit"], case["name"]
        assert runs[0].stdout == (GOLDEN / f"{case['name']}.out").read_bytes()
        if case["exit"] == 2:
            assert runs[0].stdout == b""
