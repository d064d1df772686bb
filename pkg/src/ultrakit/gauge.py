"""Seminorms on Q^n, balanced sets, and exact Minkowski functionals.

Balanced sets are kept symbolic (unit balls, lattices, finitely generated
hulls) and every Minkowski functional is evaluated exactly per
representation.  Vectors are tuples of Fractions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence, Union

from .errors import InputError, PreconditionError, RepresentationError
from .reports import Report
from .scalars import (
    ONE,
    PLUS_INFINITY,
    ZERO,
    ArchimedeanPower,
    Magnitude,
    Ordering,
    PAdic,
    Trivial,
    abs_value,
    as_rational,
    format_rational,
    magnitude_cmp,
    magnitude_max,
    magnitude_mul,
    padic_valuation,
    parse_q,
    parse_rational,
    power_sum_cmp,
    rational_gcd,
    spec_from_json,
    spec_to_json,
    INFINITY,
    DEFAULT_PRECISION_BITS,
)
from .semimetric import DistanceMatrix

Vector = tuple


def vector(v) -> Vector:
    try:
        return tuple(as_rational(x) for x in v)
    except TypeError:
        raise InputError(f"not a vector: {v!r}") from None


def _dot(row: Vector, v: Vector) -> Fraction:
    return sum((a * b for a, b in zip(row, v)), Fraction(0))


def _add(v: Vector, w: Vector) -> Vector:
    return tuple(a + b for a, b in zip(v, w))


def _scale(t: Fraction, v: Vector) -> Vector:
    return tuple(t * a for a in v)


def _is_zero(v: Vector) -> bool:
    return all(a == 0 for a in v)


def _matrix(rows, dim: int | None = None) -> tuple[Vector, ...]:
    rows = tuple(vector(r) for r in rows)
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise InputError("rows have different lengths")
    if dim is not None and widths and widths != {dim}:
        raise InputError(f"rows must have length {dim}")
    return rows


# -- exact linear algebra ------------------------------------------------------

def _rref(rows: Sequence[Vector]) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    width = len(m[0]) if m else 0
    for c in range(width):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Sequence[Vector]) -> int:
    return len(_rref(rows)[1]) if rows else 0


def in_span(basis: Sequence[Vector], v: Vector) -> bool:
    if _is_zero(v):
        return True
    if not basis:
        return False
    return rank(list(basis) + [v]) == rank(basis)


def solve(columns: Sequence[Vector], v: Vector) -> Vector:
    """Coordinates x with ``sum_i x_i * columns[i] = v`` for an invertible basis."""
    n = len(v)
    aug = [[columns[j][i] for j in range(n)] + [v[i]] for i in range(n)]
    red, pivots = _rref(aug)
    if pivots != list(range(n)):
        raise InputError("basis is not invertible")
    return tuple(red[i][n] for i in range(n))


def annihilator(basis: Sequence[Vector], dim: int) -> tuple[Vector, ...]:
    """A basis of the functionals vanishing on span(basis)."""
    if not basis:
        return tuple(tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim))
    red, pivots = _rref(basis)
    free = [c for c in range(dim) if c not in pivots]
    out = []
    for f in free:
        x = [Fraction(0)] * dim
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        out.append(tuple(x))
    return tuple(out)


# -- seminorm representations ------------------------------------------------

@dataclass(frozen=True)
class MaxFunctionals:
    """``N(v) = max_i weight_i * |L_i(v)|``."""

    spec: object
    rows: tuple
    weights: tuple = ()
    kind = "max"

    def __post_init__(self):
        rows = _matrix(self.rows)
        if not rows:
            raise InputError("need at least one functional")
        weights = tuple(self.weights) or (ONE,) * len(rows)
        weights = tuple(w if isinstance(w, Magnitude) else Magnitude.of(w) for w in weights)
        if len(weights) != len(rows):
            raise InputError("one weight per functional")
        if any(w.is_inf for w in weights):
            raise InputError("weights must be finite")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "weights", weights)

    @property
    def dim(self) -> int:
        return len(self.rows[0])


@dataclass(frozen=True)
class PowerSum:
    """``N(v) = (sum_i |L_i(v)| ** r) ** (1/r)`` under an archimedean spec."""

    spec: object
    rows: tuple
    r: Fraction = Fraction(1)
    kind = "power"

    def __post_init__(self):
        if not isinstance(self.spec, ArchimedeanPower):
            raise InputError("power-sum seminorms need an archimedean spec")
        rows = _matrix(self.rows)
        if not rows:
            raise InputError("need at least one functional")
        r = as_rational(self.r)
        if r <= 0:
            raise InputError("r must be positive")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "r", r)

    @property
    def dim(self) -> int:
        return len(self.rows[0])


@dataclass(frozen=True)
class TrivialNorm:
    """1 off zero, under the trivial absolute value."""

    spec: object
    dim: int
    kind = "trivial-norm"

    def __post_init__(self):
        if not isinstance(self.spec, Trivial):
            raise InputError("the trivial norm needs the trivial spec")
        if not isinstance(self.dim, int) or self.dim < 1:
            raise InputError("dimension must be >= 1")


@dataclass(frozen=True)
class QuotientBySubspace:
    """0 on span(basis), 1 elsewhere, under the trivial absolute value."""

    spec: object
    dim: int
    basis: tuple = ()
    kind = "quotient"

    def __post_init__(self):
        if not isinstance(self.spec, Trivial):
            raise InputError("quotient seminorms need the trivial spec")
        if not isinstance(self.dim, int) or self.dim < 1:
            raise InputError("dimension must be >= 1")
        object.__setattr__(self, "basis", _matrix(self.basis, self.dim))


@dataclass(frozen=True)
class Gauge:
    """``N(v) = max_i max(L_i(v), 0)``, homogeneous for nonnegative scalars only."""

    spec: object
    rows: tuple
    kind = "gauge"

    def __post_init__(self):
        if self.spec != ArchimedeanPower(1):
            raise InputError("gauges need the standard absolute value (a = 1)")
        rows = _matrix(self.rows)
        if not rows:
            raise InputError("need at least one functional")
        object.__setattr__(self, "rows", rows)

    @property
    def dim(self) -> int:
        return len(self.rows[0])


SeminormRep = Union[MaxFunctionals, PowerSum, TrivialNorm, QuotientBySubspace, Gauge]


def _check_dim(N, v: Vector) -> Vector:
    v = vector(v)
    if len(v) != N.dim:
        raise InputError(f"vector has length {len(v)}, expected {N.dim}")
    return v


def eval_seminorm(N: SeminormRep, v) -> Magnitude:
    v = _check_dim(N, v)
    if isinstance(N, MaxFunctionals):
        best = ZERO
        for row, w in zip(N.rows, N.weights):
            val = abs_value(N.spec, _dot(row, v))
            if not val.is_zero and not w.is_zero:
                best = magnitude_max(best, magnitude_mul(w, val))
        return best
    if isinstance(N, PowerSum):
        k = N.spec.a * N.r
        if k.denominator != 1:
            raise RepresentationError(
                f"a * r = {format_rational(k)} is not an integer; sum is not rational")
        total = sum((abs(_dot(row, v)) ** k.numerator for row in N.rows), Fraction(0))
        return ZERO if total == 0 else Magnitude(total, 1 / N.r)
    if isinstance(N, TrivialNorm):
        return ZERO if _is_zero(v) else ONE
    if isinstance(N, QuotientBySubspace):
        return ZERO if in_span(N.basis, v) else ONE
    if isinstance(N, Gauge):
        return Magnitude.of(max(max(_dot(row, v), Fraction(0)) for row in N.rows))
    raise InputError(f"unknown seminorm representation {type(N).__name__}")


def check_homogeneity(N: SeminormRep, samples: Iterable[tuple]) -> Report:
    """``N(t v) = |t| N(v)``; gauges are only tested on t >= 0."""
    report = Report("homogeneity")
    for t, v in samples:
        t, v = as_rational(t), vector(v)
        if isinstance(N, Gauge) and t < 0:
            continue
        report.checked += 1
        lhs = eval_seminorm(N, _scale(t, v))
        scale = Magnitude.of(abs(t)) if isinstance(N, Gauge) else abs_value(N.spec, t)
        rhs = ZERO if scale.is_zero else magnitude_mul(scale, eval_seminorm(N, v))
        if lhs != rhs:
            report.violations.append((t, v))
    return report


def check_ultranorm(N: SeminormRep, pairs: Iterable[tuple]) -> Report:
    report = Report("ultranorm")
    for v, w in pairs:
        v, w = vector(v), vector(w)
        report.checked += 1
        if eval_seminorm(N, _add(v, w)) > magnitude_max(eval_seminorm(N, v), eval_seminorm(N, w)):
            report.violations.append((v, w))
    return report


def check_shift_lemma(N: SeminormRep, pairs: Iterable[tuple]) -> Report:
    """Where ``N(v - w) < N(v)``, check ``N(v) = N(w)``."""
    report = Report("shift-lemma")
    for v, w in pairs:
        v, w = vector(v), vector(w)
        nv = eval_seminorm(N, v)
        if not eval_seminorm(N, _add(v, _scale(Fraction(-1), w))) < nv:
            continue
        report.checked += 1
        if eval_seminorm(N, w) != nv:
            report.violations.append((v, w))
    return report


def symmetrize_gauge(N: Gauge) -> MaxFunctionals:
    """``max(N(v), N(-v))``, which is ``max_i |L_i(v)|``."""
    if not isinstance(N, Gauge):
        raise InputError("symmetrize_gauge takes a gauge")
    rows = N.rows + tuple(_scale(Fraction(-1), r) for r in N.rows)
    return MaxFunctionals(N.spec, rows)


def check_gauge_subadditive(N: Gauge, pairs: Iterable[tuple]) -> Report:
    """Subadditivity of N and its symmetrization, and symmetry of the latter."""
    sym = symmetrize_gauge(N)
    report = Report("gauge-subadditive")

    def val(rep, v) -> Fraction:
        return eval_seminorm(rep, v).rational_value()

    for v, w in pairs:
        v, w = vector(v), vector(w)
        for name, rep in (("gauge", N), ("symmetrized", sym)):
            report.checked += 1
            if val(rep, _add(v, w)) > val(rep, v) + val(rep, w):
                report.violations.append((name, v, w))
        report.checked += 1
        if val(sym, _scale(Fraction(-1), v)) != val(sym, v):
            report.violations.append(("symmetry", v, w))
    return report


def _as_max_functionals(N: SeminormRep) -> MaxFunctionals:
    if isinstance(N, MaxFunctionals):
        return N
    if isinstance(N, TrivialNorm):
        return MaxFunctionals(N.spec, [[int(i == j) for j in range(N.dim)] for i in range(N.dim)])
    if isinstance(N, QuotientBySubspace):
        rows = annihilator(N.basis, N.dim)
        if not rows:
            # the subspace is everything; a zero functional keeps N = 0
            rows = (tuple(Fraction(0) for _ in range(N.dim)),)
        return MaxFunctionals(N.spec, rows)
    raise InputError(f"{N.kind} seminorms are not closed under max with functionals")


def combine_seminorms_max(reps: Sequence[SeminormRep]) -> SeminormRep:
    if not reps:
        raise InputError("need at least one seminorm")
    if len(reps) == 1:
        return reps[0]
    spec = reps[0].spec
    if any(N.spec != spec for N in reps):
        raise InputError("seminorms must share the absolute value")
    if len({N.dim for N in reps}) != 1:
        raise InputError("seminorms must share the dimension")
    parts = [_as_max_functionals(N) for N in reps]
    return MaxFunctionals(spec, [r for N in parts for r in N.rows],
                          [w for N in parts for w in N.weights])


def combine_seminorms_power(reps: Sequence[SeminormRep], r) -> PowerSum:
    """``(sum_j N_j ** r) ** (1/r)`` for power sums with the same r or single ``|L|``."""
    r = as_rational(r)
    if not reps:
        raise InputError("need at least one seminorm")
    spec = reps[0].spec
    if not isinstance(spec, ArchimedeanPower) or any(N.spec != spec for N in reps):
        raise InputError("power combination needs one shared archimedean spec")
    rows = []
    for N in reps:
        if isinstance(N, PowerSum) and N.r == r:
            rows += N.rows
        elif isinstance(N, MaxFunctionals) and len(N.rows) == 1 and N.weights[0] == ONE:
            rows += N.rows
        else:
            raise InputError("only power sums with the same r or single |L| terms combine exactly")
    return PowerSum(spec, rows, r)


def seminorm_to_semimetric(N: SeminormRep, points: Sequence) -> DistanceMatrix:
    """``d(v, w) = N(v - w)`` on the sample vectors, labelled 0, 1, ...

    The stored exponent is chosen so every entry is rational.
    """
    vecs = [_check_dim(N, p) for p in points]
    n = len(vecs)
    vals = {}
    for i, j in itertools.combinations(range(n), 2):
        vals[i, j] = eval_seminorm(N, _add(vecs[i], _scale(Fraction(-1), vecs[j])))
    exps = [m.exponent for m in vals.values() if m.is_finite]
    g = exps[0] if exps else Fraction(1)
    for e in exps[1:]:
        g = rational_gcd(g, e)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), m in vals.items():
        if m.is_finite:
            k = m.exponent / g
            rows[i][j] = rows[j][i] = m.mantissa ** k.numerator
    return DistanceMatrix(range(n), rows, 1 / g)


# -- balanced sets -------------------------------------------------------------

@dataclass(frozen=True)
class ClosedUnitBall:
    norm: SeminormRep
    kind = "closed-ball"

    def __post_init__(self):
        if isinstance(self.norm, Gauge):
            raise InputError("gauge balls are not balanced")

    @property
    def spec(self):
        return self.norm.spec

    @property
    def dim(self) -> int:
        return self.norm.dim


@dataclass(frozen=True)
class OpenUnitBall:
    norm: SeminormRep
    kind = "open-ball"

    def __post_init__(self):
        if isinstance(self.norm, Gauge):
            raise InputError("gauge balls are not balanced")

    @property
    def spec(self):
        return self.norm.spec

    @property
    def dim(self) -> int:
        return self.norm.dim


@dataclass(frozen=True)
class FiniteGenerated:
    """The balanced hull of finitely many vectors."""

    spec: object
    generators: tuple
    kind = "finite-generated"

    def __post_init__(self):
        gens = _matrix(self.generators)
        if not gens:
            raise InputError("need at least one generator")
        object.__setattr__(self, "generators", gens)

    @property
    def dim(self) -> int:
        return len(self.generators[0])


@dataclass(frozen=True)
class PAdicLattice:
    """``{sum_i x_i b_i : |x_i|_p <= 1}`` for an invertible basis b."""

    spec: object
    basis: tuple
    kind = "padic-lattice"

    def __post_init__(self):
        if not isinstance(self.spec, PAdic):
            raise InputError("lattices need a p-adic spec")
        basis = _matrix(self.basis)
        if not basis or len(basis) != len(basis[0]) or rank(basis) != len(basis):
            raise InputError("lattice basis must be square and invertible")
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, v: Vector) -> Vector:
        return solve(self.basis, v)


BalancedSetRep = Union[ClosedUnitBall, OpenUnitBall, FiniteGenerated, PAdicLattice]


def _parallel_coefficients(generators: Sequence[Vector], v: Vector) -> list[Fraction]:
    """Every c with ``v = c * e`` for some nonzero generator e."""
    out = []
    for e in generators:
        k = next((i for i, a in enumerate(e) if a != 0), None)
        if k is None:
            continue
        c = v[k] / e[k]
        if _scale(c, e) == v:
            out.append(c)
    return out


def balanced_hull_membership(E: FiniteGenerated, v) -> bool:
    v = _check_dim(E, v)
    if _is_zero(v):
        return True
    return any(abs_value(E.spec, c) <= ONE for c in _parallel_coefficients(E.generators, v))


def starlike_hull_membership(E: FiniteGenerated, v) -> bool:
    """``v = t e`` for a generator e and rational ``0 <= t <= 1``."""
    if not isinstance(E.spec, ArchimedeanPower):
        raise InputError("starlike hulls need an archimedean spec")
    v = _check_dim(E, v)
    if _is_zero(v):
        return True
    return any(0 <= c <= 1 for c in _parallel_coefficients(E.generators, v))


def contains(A: BalancedSetRep, v) -> bool:
    v = _check_dim(A, v)
    if isinstance(A, ClosedUnitBall):
        return eval_seminorm(A.norm, v) <= ONE
    if isinstance(A, OpenUnitBall):
        return eval_seminorm(A.norm, v) < ONE
    if isinstance(A, FiniteGenerated):
        return balanced_hull_membership(A, v)
    if isinstance(A, PAdicLattice):
        return all(x == 0 or padic_valuation(x, A.spec.p) >= 0 for x in A.coordinates(v))
    raise InputError(f"unknown set representation {type(A).__name__}")


class Absorbing(NamedTuple):
    absorbing: bool
    witness: Vector | None
    reason: str


def _off_lines(generators: Sequence[Vector], dim: int) -> Vector:
    """A vector on none of the lines spanned by the generators (dim >= 2)."""
    candidates = [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
    k = 1
    while True:
        for c in candidates:
            if not _parallel_coefficients(generators, c):
                return c
        candidates = [tuple(Fraction(1) if j == 0 else Fraction(k) if j == 1 else Fraction(0)
                            for j in range(dim))]
        k += 1


def is_absorbing(A: BalancedSetRep) -> Absorbing:
    dim = A.dim
    if isinstance(A, FiniteGenerated):
        nonzero = [g for g in A.generators if not _is_zero(g)]
        if dim == 1 and nonzero:
            return Absorbing(True, None, "nonzero generator spans the line")
        if dim == 1:
            return Absorbing(False, (Fraction(1),), "all generators are zero")
        return Absorbing(False, _off_lines(A.generators, dim), "hull is a finite union of lines")
    if not isinstance(A.spec, Trivial):
        # every representable seminorm is finite, and nonzero scalars shrink
        return Absorbing(True, None, "unit ball of a finite seminorm over a nontrivial field")
    # trivial absolute value: absorbing exactly when A is all of V
    N = A.norm
    strict = isinstance(A, OpenUnitBall)
    if isinstance(N, TrivialNorm):
        if strict:
            return Absorbing(False, tuple(Fraction(int(j == 0)) for j in range(dim)), "A = {0}")
        return Absorbing(True, None, "A = V")
    if isinstance(N, QuotientBySubspace):
        if not strict:
            return Absorbing(True, None, "A = V")
        missing = annihilator(N.basis, dim)
        if not missing:
            return Absorbing(True, None, "A = V")
        return Absorbing(False, missing[0], "A is a proper subspace")
    if isinstance(N, MaxFunctionals):
        for row, w in zip(N.rows, N.weights):
            if _is_zero(row):
                continue
            if (w >= ONE) if strict else (w > ONE):
                return Absorbing(False, row, "a functional with weight beyond the radius")
        return Absorbing(True, None, "A = V")
    raise InputError(f"unsupported seminorm {N.kind} under the trivial spec")


def _value_group_power(p: int, m: Magnitude, strict: bool) -> Magnitude:
    """Least ``p ** k`` at or above m (strictly above when ``strict``), exactly."""

    def above(k: int) -> bool:
        c = magnitude_cmp(Magnitude(Fraction(p) ** k), m)
        return c is Ordering.GT or (c is Ordering.EQ and not strict)

    lo, hi = 0, 0
    if above(0):
        step = 1
        while above(-step):
            step *= 2
        lo, hi = -step, 0
    else:
        step = 1
        while not above(step):
            step *= 2
        lo, hi = step // 2, step
    # invariant: not above(lo) (or lo is a lower probe), above(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if above(mid):
            hi = mid
        else:
            lo = mid
    return Magnitude(Fraction(p) ** hi)


def minkowski_functional(A: BalancedSetRep, v, allow_zero_scalar: bool = True) -> Magnitude:
    """``inf |t|`` over scalars t with ``v in t A`` (``t != 0`` unless allowed).

    The infimum is taken over the value set of the absolute value: dense
    for archimedean specs, ``{p ** k}`` for p-adic ones, ``{1}`` for the
    trivial one.
    """
    v = _check_dim(A, v)
    spec = A.spec
    if _is_zero(v):
        if allow_zero_scalar or not isinstance(spec, Trivial):
            return ZERO
        return ONE
    if isinstance(spec, Trivial):
        # every nonzero t has |t| = 1, and t A = A
        return ONE if contains(A, v) else PLUS_INFINITY
    if isinstance(A, FiniteGenerated):
        coeffs = _parallel_coefficients(A.generators, v)
        if not coeffs:
            return PLUS_INFINITY
        best = abs_value(spec, coeffs[0])
        for c in coeffs[1:]:
            val = abs_value(spec, c)
            if val < best:
                best = val
        return best
    if isinstance(A, PAdicLattice):
        best = ZERO
        for x in A.coordinates(v):
            best = magnitude_max(best, abs_value(spec, x))
        return best
    n = eval_seminorm(A.norm, v)
    if n.is_zero or isinstance(spec, ArchimedeanPower):
        # v lies in t A iff N(v) <= |t| (or < |t|); the values are dense
        return n
    return _value_group_power(spec.p, n, strict=isinstance(A, OpenUnitBall))


def value_group_exponent(spec: PAdic, m: Magnitude) -> int | None:
    """k with ``m = p ** k``, or None when m is not a nonzero group value."""
    if not m.is_finite:
        return None
    power = _value_group_power(spec.p, m, strict=False)
    if power != m:
        return None
    return padic_valuation(power.mantissa, spec.p)


def theorem_unit_ball_recovery(N: SeminormRep, samples: Iterable) -> Report:
    """Compare N with the gauges of its open and closed unit balls.

    Dense value sets: ``N = N_B = N_C``.  p-adic, N valued in the value
    group: ``N_C = N`` and ``N_B = p N``.  Always ``N <= N_C <= N_B``, and
    for discrete specs each ball is recovered as ``{N_A <= 1}``.
    """
    B, C = OpenUnitBall(N), ClosedUnitBall(N)
    report = Report("unit-ball-recovery")
    spec = N.spec
    for v in samples:
        v = vector(v)
        n = eval_seminorm(N, v)
        nb, nc = minkowski_functional(B, v), minkowski_functional(C, v)
        report.checked += 1
        if not (n <= nc <= nb):
            report.violations.append(("sandwich", v))
        if isinstance(spec, ArchimedeanPower):
            if not (n == nb == nc):
                report.violations.append(("equality", v))
        elif isinstance(spec, PAdic):
            if not n.is_zero and value_group_exponent(spec, n) is None:
                report.notes.append(f"equalities not applicable at {list(map(format_rational, v))}")
            elif nc != n or nb != (n if n.is_zero else magnitude_mul(Magnitude(spec.p), n)):
                report.violations.append(("discrete-equality", v))
            for A, na in ((B, nb), (C, nc)):
                if (na <= ONE) != contains(A, v):
                    report.violations.append(("ball-identity", A.kind, v))
    return report


def ultranorm_from_convex_balanced(A: BalancedSetRep, pairs: Iterable[tuple]) -> Report:
    """``N_A(v + w) <= max(N_A(v), N_A(w))`` for additively closed A."""
    ok = isinstance(A, PAdicLattice) or (
        isinstance(A, ClosedUnitBall) and isinstance(A.norm, MaxFunctionals)
        and not isinstance(A.spec, ArchimedeanPower))
    if not ok:
        raise PreconditionError("needs a lattice or the closed ball of a non-archimedean max-norm")
    report = Report("gauge-ultranorm")
    for v, w in pairs:
        v, w = _check_dim(A, v), _check_dim(A, w)
        report.checked += 1
        lhs = minkowski_functional(A, _add(v, w))
        if lhs > magnitude_max(minkowski_functional(A, v), minkowski_functional(A, w)):
            report.violations.append((v, w))
    return report


def check_q_convexity_ball(N: SeminormRep, q, samples: Iterable[tuple],
                           precision_bits: int = DEFAULT_PRECISION_BITS) -> Report:
    """``t1 v1 + t2 v2`` stays in the closed unit ball when ``|t1|^q + |t2|^q <= 1``."""
    q = parse_q(q)
    report = Report(f"{format_rational(q) if q != INFINITY else 'inf'}-convex-ball")
    for t1, t2, v1, v2 in samples:
        t1, t2, v1, v2 = as_rational(t1), as_rational(t2), vector(v1), vector(v2)
        if eval_seminorm(N, v1) > ONE or eval_seminorm(N, v2) > ONE:
            continue
        a1, a2 = abs_value(N.spec, t1), abs_value(N.spec, t2)
        if q == INFINITY:
            if magnitude_max(a1, a2) > ONE:
                continue
        else:
            finite = [m for m in (a1, a2) if m.is_finite]
            if finite:
                if len({m.exponent for m in finite}) != 1:
                    report.inconclusive.append((t1, t2, v1, v2))
                    continue
                e = finite[0].exponent
                mant = [m.mantissa if m.is_finite else Fraction(0) for m in (a1, a2)]
                verdict = power_sum_cmp(Fraction(1), mant, e * q, precision_bits)
                if verdict is None:
                    report.inconclusive.append((t1, t2, v1, v2))
                    continue
                if verdict is Ordering.LT:
                    continue
        report.checked += 1
        if eval_seminorm(N, _add(_scale(t1, v1), _scale(t2, v2))) > ONE:
            report.violations.append((t1, t2, v1, v2))
    return report


# -- JSON ----------------------------------------------------------------------

def _rows_json(rows) -> list:
    return [[format_rational(x) for x in r] for r in rows]


def _rows_from(data) -> list:
    if not isinstance(data, list):
        raise InputError("expected a list of rational rows")
    return [[parse_rational(str(x)) for x in r] for r in data]


def seminorm_to_json(N: SeminormRep) -> dict:
    out = {"kind": N.kind, "spec": spec_to_json(N.spec)}
    if isinstance(N, MaxFunctionals):
        out["rows"] = _rows_json(N.rows)
        out["weights"] = [w.to_json() for w in N.weights]
    elif isinstance(N, PowerSum):
        out["rows"] = _rows_json(N.rows)
        out["r"] = format_rational(N.r)
    elif isinstance(N, TrivialNorm):
        out["dim"] = N.dim
    elif isinstance(N, QuotientBySubspace):
        out["dim"] = N.dim
        out["basis"] = _rows_json(N.basis)
    elif isinstance(N, Gauge):
        out["rows"] = _rows_json(N.rows)
    return out


def seminorm_from_json(data) -> SeminormRep:
    if not isinstance(data, dict) or "kind" not in data or "spec" not in data:
        raise InputError("seminorm JSON needs 'kind' and 'spec'")
    spec = spec_from_json(data["spec"])
    kind = data["kind"]
    if kind == "max":
        weights = [Magnitude.from_json(w) for w in data.get("weights", [])]
        return MaxFunctionals(spec, _rows_from(data.get("rows")), weights)
    if kind == "power":
        return PowerSum(spec, _rows_from(data.get("rows")), parse_rational(str(data.get("r", "1"))))
    if kind == "trivial-norm":
        return TrivialNorm(spec, data.get("dim"))
    if kind == "quotient":
        return QuotientBySubspace(spec, data.get("dim"), _rows_from(data.get("basis", [])))
    if kind == "gauge":
        return Gauge(spec, _rows_from(data.get("rows")))
    raise InputError(f"unknown seminorm kind {kind!r}")


def set_to_json(A: BalancedSetRep) -> dict:
    if isinstance(A, (ClosedUnitBall, OpenUnitBall)):
        return {"kind": A.kind, "norm": seminorm_to_json(A.norm)}
    if isinstance(A, FiniteGenerated):
        return {"kind": A.kind, "spec": spec_to_json(A.spec), "generators": _rows_json(A.generators)}
    return {"kind": A.kind, "spec": spec_to_json(A.spec), "basis": _rows_json(A.basis)}


def set_from_json(data) -> BalancedSetRep:
    if not isinstance(data, dict) or "kind" not in data:
        raise InputError("set JSON needs 'kind'")
    kind = data["kind"]
    if kind in ("closed-ball", "open-ball"):
        N = seminorm_from_json(data.get("norm"))
        return ClosedUnitBall(N) if kind == "closed-ball" else OpenUnitBall(N)
    if kind == "finite-generated":
        return FiniteGenerated(spec_from_json(data.get("spec")), _rows_from(data.get("generators")))
    if kind == "padic-lattice":
        return PAdicLattice(spec_from_json(data.get("spec")), _rows_from(data.get("basis")))
    raise InputError(f"unknown set kind {kind!r}")
