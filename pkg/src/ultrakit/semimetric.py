"""Finite semimetric spaces.

A ``DistanceMatrix`` stores ``entries[i][j] = d(x_i, x_j) ** exponent``.
Keeping the power as a tag lets power transforms and power-mean
combinations stay exact; the actual distance is recovered as
``entry ** (1 / exponent)`` only when it is needed (``diameter``).

Radii passed to ball routines live in the same stored power domain.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Hashable, Iterable, NamedTuple, Sequence

from .errors import InputError, PreconditionError, RepresentationError, ResourceError
from .reports import Report
from .scalars import (
    DEFAULT_PRECISION_BITS,
    INFINITY,
    Magnitude,
    Ordering,
    ZERO,
    as_rational,
    exact_root,
    format_q,
    format_rational,
    parse_q,
    parse_rational,
    power_sum_cmp,
)

DEFAULT_MAX_POINTS = 4096
EXHAUSTIVE_COVER_LIMIT = 20


def label_key(label) -> tuple:
    """Sort key that orders ints, strings and tuples of them deterministically."""
    if isinstance(label, bool):
        return (0, int(label))
    if isinstance(label, int):
        return (0, label)
    if isinstance(label, Fraction):
        return (0, label)
    if isinstance(label, str):
        return (1, label)
    if isinstance(label, tuple):
        return (2, tuple(label_key(x) for x in label))
    return (3, repr(label))


def label_to_json(label):
    if isinstance(label, tuple):
        return [label_to_json(x) for x in label]
    if isinstance(label, Fraction):
        return format_rational(label)
    return label


def label_from_json(data):
    if isinstance(data, list):
        return tuple(label_from_json(x) for x in data)
    if isinstance(data, (int, str)) and not isinstance(data, bool):
        return data
    raise InputError(f"bad point label: {data!r}")


# -- partitions --------------------------------------------------------------

class Partition:
    """A set of nonempty, pairwise disjoint blocks; equality ignores order."""

    __slots__ = ("blocks", "_index")

    def __init__(self, blocks: Iterable[Iterable[Hashable]]):
        frozen = [frozenset(b) for b in blocks]
        index = {}
        for i, block in enumerate(frozen):
            if not block:
                raise InputError("partition blocks must be nonempty")
            for x in block:
                if x in index:
                    raise InputError(f"point {x!r} lies in two blocks")
                index[x] = i
        frozen.sort(key=lambda b: min(label_key(x) for x in b))
        self.blocks: tuple[frozenset, ...] = tuple(frozen)
        self._index = {x: i for i, b in enumerate(self.blocks) for x in b}

    @property
    def points(self) -> frozenset:
        return frozenset(self._index)

    def block_of(self, x) -> frozenset:
        return self.blocks[self._index[x]]

    def same_block(self, x, y) -> bool:
        return self._index[x] == self._index[y]

    def refines(self, other: Partition) -> bool:
        """True when every block of self sits inside a block of other."""
        return all(len({other._index[x] for x in b}) == 1 for b in self.blocks)

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return set(self.blocks) == set(other.blocks)

    def __hash__(self):
        return hash(frozenset(self.blocks))

    def __repr__(self):
        inner = ", ".join(
            "{" + ", ".join(repr(x) for x in sorted(b, key=label_key)) + "}" for b in self.blocks)
        return f"Partition([{inner}])"

    def to_json(self) -> dict:
        return {"blocks": [[label_to_json(x) for x in sorted(b, key=label_key)]
                           for b in self.blocks]}

    @classmethod
    def from_json(cls, data) -> Partition:
        if not isinstance(data, dict) or not isinstance(data.get("blocks"), list):
            raise InputError("partition JSON needs a 'blocks' list")
        return cls([label_from_json(x) for x in block] for block in data["blocks"])


def common_refinement(partitions: Sequence[Partition], points: Iterable | None = None) -> Partition:
    """Coarsest partition refining every member (the meet)."""
    if points is None:
        if not partitions:
            raise InputError("common refinement of nothing needs explicit points")
        points = partitions[0].points
    points = list(points)
    for part in partitions:
        if part.points != frozenset(points):
            raise InputError("partitions cover different point sets")
    groups: dict[tuple, list] = {}
    for x in points:
        groups.setdefault(tuple(p._index[x] for p in partitions), []).append(x)
    return Partition(groups.values())


def trivial_partition(points: Iterable) -> Partition:
    return Partition([list(points)])


def singletons(points: Iterable) -> Partition:
    return Partition([x] for x in points)


# -- distance matrices -------------------------------------------------------

@dataclass(frozen=True)
class DistanceMatrix:
    points: tuple
    entries: tuple
    exponent: Fraction = Fraction(1)

    def __post_init__(self):
        points = tuple(self.points)
        if len(set(points)) != len(points):
            raise InputError("point labels must be distinct")
        n = len(points)
        rows = tuple(tuple(as_rational(v) for v in row) for row in self.entries)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise InputError(f"entries must form a {n}x{n} matrix")
        for i in range(n):
            if rows[i][i] != 0:
                raise InputError(f"nonzero diagonal entry at {points[i]!r}")
            for j in range(i + 1, n):
                if rows[i][j] < 0:
                    raise InputError(f"negative entry at ({i}, {j})")
                if rows[i][j] != rows[j][i]:
                    raise InputError(f"asymmetric entries at ({i}, {j})")
        exponent = as_rational(self.exponent)
        if exponent <= 0:
            raise InputError("stored exponent must be positive")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "exponent", exponent)

    def __hash__(self):
        # matrices are used as cache keys; hashing Fraction entries is costly
        h = self.__dict__.get("_hash")
        if h is None:
            flat = tuple((v.numerator, v.denominator) for row in self.entries for v in row)
            h = hash((self.points, flat, self.exponent))
            object.__setattr__(self, "_hash", h)
        return h

    @classmethod
    def _trusted(cls, points: tuple, rows, exponent: Fraction) -> DistanceMatrix:
        """Build from entries already known to be valid (combinators of valid inputs)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "points", points)
        object.__setattr__(obj, "entries", tuple(map(tuple, rows)))
        object.__setattr__(obj, "exponent", exponent)
        return obj

    @classmethod
    def from_function(cls, points: Iterable, f, exponent=1) -> DistanceMatrix:
        points = tuple(points)
        return cls(points, [[f(x, y) for y in points] for x in points], exponent)

    @property
    def size(self) -> int:
        return len(self.points)

    @cached_property
    def _positions(self) -> dict:
        return {x: i for i, x in enumerate(self.points)}

    def index(self, label) -> int:
        try:
            return self._positions[label]
        except (KeyError, TypeError):
            raise InputError(f"unknown point {label!r}") from None

    def __call__(self, x, y) -> Fraction:
        """Stored entry for two labels."""
        return self.entries[self.index(x)][self.index(y)]

    def distance(self, x, y) -> Magnitude:
        """Actual distance, ``entry ** (1/exponent)``."""
        e = self(x, y)
        return ZERO if e == 0 else Magnitude(e, 1 / self.exponent)

    def to_json(self) -> dict:
        return {
            "points": [label_to_json(x) for x in self.points],
            "exponent": format_rational(self.exponent),
            "entries": [[format_rational(v) for v in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, data) -> DistanceMatrix:
        """Parse JSON; the upper triangle is authoritative."""
        if not isinstance(data, dict) or "points" not in data or "entries" not in data:
            raise InputError("matrix JSON needs 'points' and 'entries'")
        points = [label_from_json(x) for x in data["points"]]
        raw = data["entries"]
        n = len(points)
        if not isinstance(raw, list) or len(raw) != n or any(
                not isinstance(r, list) or len(r) != n for r in raw):
            raise InputError(f"entries must form a {n}x{n} matrix")
        rows = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            if parse_rational(str(raw[i][i])) != 0:
                raise InputError(f"nonzero diagonal entry at {points[i]!r}")
            for j in range(i + 1, n):
                rows[i][j] = rows[j][i] = parse_rational(str(raw[i][j]))
        return cls(points, rows, parse_rational(str(data.get("exponent", "1"))))


def _same_points(mats: Sequence[DistanceMatrix]) -> tuple:
    if not mats:
        raise InputError("need at least one matrix")
    points = mats[0].points
    for m in mats[1:]:
        if m.points != points:
            raise InputError("matrices must share the same ordered point list")
    return points


def _same_exponent(mats: Sequence[DistanceMatrix]) -> Fraction:
    exps = {m.exponent for m in mats}
    if len(exps) != 1:
        raise InputError("matrices must share a stored exponent; normalize with with_exponent")
    return exps.pop()


def with_exponent(D: DistanceMatrix, exponent) -> DistanceMatrix:
    """The same semimetric, re-stored as ``d ** exponent`` (exact or error)."""
    exponent = as_rational(exponent)
    ratio = exponent / D.exponent
    if ratio == 1:
        return D
    m, n = ratio.numerator, ratio.denominator

    def convert(v: Fraction) -> Fraction:
        root = exact_root(v, n)
        if root is None:
            raise RepresentationError(f"{format_rational(v)}^({format_rational(ratio)}) is irrational")
        return root ** m

    return DistanceMatrix(D.points, [[convert(v) for v in row] for row in D.entries], exponent)


# -- axiom checks ------------------------------------------------------------

def check_q_semimetric(D: DistanceMatrix, q=1, precision_bits: int = DEFAULT_PRECISION_BITS) -> Report:
    """Verify that ``d ** q`` satisfies the triangle inequality (max form at q = inf).

    Violations are index triples ``(x, y, z)`` with the detour through y
    shorter than the direct side ``(x, z)``; only ``x < z`` is reported.
    """
    q = parse_q(q)
    report = Report(f"{format_q(q)}-semimetric")
    e, n = D.entries, D.size
    c = None if q == INFINITY else q / D.exponent
    for x in range(n):
        for y in range(n):
            if y == x:
                continue
            for z in range(x + 1, n):
                if z == y:
                    continue
                report.checked += 1
                lhs, a, b = e[x][z], e[x][y], e[y][z]
                if lhs <= a or lhs <= b:
                    continue
                if c is None:
                    report.violations.append((x, y, z))
                    continue
                verdict = power_sum_cmp(lhs, (a, b), c, precision_bits)
                if verdict is None:
                    report.inconclusive.append((x, y, z))
                elif verdict is Ordering.GT:
                    report.violations.append((x, y, z))
    report.violations.sort()
    report.inconclusive.sort()
    return report


def check_semimetric(D: DistanceMatrix, precision_bits: int = DEFAULT_PRECISION_BITS) -> Report:
    """Ordinary triangle inequality for the actual distances."""
    report = check_q_semimetric(D, 1, precision_bits)
    report.name = "semimetric"
    return report


def is_ultrametric(D: DistanceMatrix) -> bool:
    return check_q_semimetric(D, INFINITY).holds


def isosceles_check(D: DistanceMatrix) -> Report:
    """In every triple of points the two largest sides must be equal."""
    report = Report("isosceles")
    e = D.entries
    for x, y, z in itertools.combinations(range(D.size), 3):
        report.checked += 1
        sides = sorted((e[x][y], e[y][z], e[x][z]))
        if sides[1] != sides[2]:
            report.violations.append((x, y, z))
    return report


def reverse_triangle_check(D: DistanceMatrix, q=1, precision_bits: int = DEFAULT_PRECISION_BITS) -> Report:
    """``|d(x,z)^q - d(y,z)^q| <= d(x,y)^q`` over all ordered triples."""
    q = parse_q(q)
    if q == INFINITY:
        raise InputError("the reverse triangle inequality needs a finite q")
    report = Report(f"{format_q(q)}-reverse-triangle")
    e, n, c = D.entries, D.size, q / D.exponent
    for x, y, z in itertools.product(range(n), repeat=3):
        report.checked += 1
        a, b, side = e[x][z], e[y][z], e[x][y]
        big, small = (a, b) if a >= b else (b, a)
        # |A - B| <= C  <=>  max(A, B) <= min(A, B) + C
        verdict = power_sum_cmp(big, (small, side), c, precision_bits)
        if verdict is None:
            report.inconclusive.append((x, y, z))
        elif verdict is Ordering.GT:
            report.violations.append((x, y, z))
    return report


# -- balls -------------------------------------------------------------------

@dataclass(frozen=True)
class BallSpec:
    center: Hashable
    radius: Fraction
    kind: str = "closed"

    def __post_init__(self):
        object.__setattr__(self, "radius", _check_radius(self.radius, self.kind))


def _check_radius(r, kind: str) -> Fraction:
    r = as_rational(r)
    if kind not in ("open", "closed"):
        raise InputError(f"ball kind must be 'open' or 'closed', got {kind!r}")
    if r < 0 or (kind == "open" and r == 0):
        raise InputError("open balls need radius > 0, closed balls radius >= 0")
    return r


def _ball_indices(D: DistanceMatrix, i: int, r: Fraction, kind: str) -> frozenset:
    row = D.entries[i]
    if kind == "open":
        return frozenset(j for j in range(D.size) if row[j] < r)
    return frozenset(j for j in range(D.size) if row[j] <= r)


def ball(D: DistanceMatrix, spec: BallSpec) -> frozenset:
    i = D.index(spec.center)
    return frozenset(D.points[j] for j in _ball_indices(D, i, spec.radius, spec.kind))


def open_ball(D: DistanceMatrix, center, radius) -> frozenset:
    return ball(D, BallSpec(center, radius, "open"))


def closed_ball(D: DistanceMatrix, center, radius) -> frozenset:
    return ball(D, BallSpec(center, radius, "closed"))


def occurring_radii(D: DistanceMatrix) -> list[Fraction]:
    """Distinct stored entries, plus one radius beyond all of them."""
    values = sorted({v for row in D.entries for v in row})
    return values + [values[-1] + 1]


def distinct_balls(D: DistanceMatrix, r, kind: str = "closed") -> list[frozenset]:
    """All balls of one radius, deduplicated, in order of first center."""
    r = _check_radius(r, kind)
    seen: dict[frozenset, None] = {}
    for i in range(D.size):
        seen.setdefault(_ball_indices(D, i, r, kind), None)
    return [frozenset(D.points[j] for j in b) for b in seen]


def is_partition_of(blocks: Sequence[frozenset], points: Iterable) -> bool:
    points = set(points)
    covered = set()
    for b in blocks:
        if not b or covered & b:
            return False
        covered |= b
    return covered == points


def ball_partition(D: DistanceMatrix, r, kind: str = "closed") -> Partition:
    """Partition of an ultrametric space into its radius-r balls."""
    if not is_ultrametric(D):
        raise PreconditionError("ball_partition requires an ultrametric")
    blocks = distinct_balls(D, r, kind)
    assert is_partition_of(blocks, D.points)
    return Partition(blocks)


def zero_partition(D: DistanceMatrix) -> Partition:
    """Classes of points at mutual distance zero."""
    e, n = D.entries, D.size
    seen: set[int] = set()
    blocks = []
    for i in range(n):
        if i in seen:
            continue
        cls = [j for j in range(n) if e[i][j] == 0]
        for j in cls:
            if any((e[j][k] == 0) != (k in cls) for k in range(n)):
                raise PreconditionError("distance zero is not transitive on this matrix")
        seen.update(cls)
        blocks.append([D.points[j] for j in cls])
    return Partition(blocks)


def _unions_of_blocks(ball_set: frozenset, part: Partition) -> bool:
    return all(part.block_of(x) <= ball_set for x in ball_set)


def ultrametric_ball_properties(D: DistanceMatrix) -> Report:
    """Every point of a ball is a center of it, and every ball is clopen.

    Clopen is judged in the generated topology, whose open sets are the
    unions of zero-classes.
    """
    if not is_ultrametric(D):
        raise PreconditionError("ultrametric_ball_properties requires an ultrametric")
    report = Report("ultrametric-balls")
    zeros = zero_partition(D)
    for r in occurring_radii(D):
        for kind in ("closed", "open"):
            if kind == "open" and r == 0:
                continue
            for i in range(D.size):
                b = _ball_indices(D, i, r, kind)
                for j in b:
                    report.checked += 1
                    if _ball_indices(D, j, r, kind) != b:
                        report.violations.append((kind, D.points[i], D.points[j], r))
                labels = frozenset(D.points[j] for j in b)
                if not _unions_of_blocks(labels, zeros):
                    report.violations.append((kind, D.points[i], "not clopen", r))
    return report


# -- transforms and combinators ----------------------------------------------

def truncate(D: DistanceMatrix, r0) -> DistanceMatrix:
    """Entrywise ``min(entry, r0)``, with r0 in the stored domain."""
    r0 = as_rational(r0)
    if r0 <= 0:
        raise InputError("truncation level must be positive")
    return DistanceMatrix(D.points, [[min(v, r0) for v in row] for row in D.entries], D.exponent)


def pow_transform(D: DistanceMatrix, e) -> DistanceMatrix:
    """Represent ``d ** e`` by retagging: same entries, exponent / e."""
    e = as_rational(e)
    if e <= 0:
        raise InputError("power must be positive")
    return DistanceMatrix(D.points, D.entries, D.exponent / e)


def combine_max(mats: Sequence[DistanceMatrix]) -> DistanceMatrix:
    points = _same_points(mats)
    exponent = _same_exponent(mats)
    rows = [[max(col) for col in zip(*row_group)] for row_group in zip(*(m.entries for m in mats))]
    return DistanceMatrix._trusted(points, rows, exponent)


def combine_sum(mats: Sequence[DistanceMatrix]) -> DistanceMatrix:
    """Sum of actual distances, stored with exponent 1."""
    points = _same_points(mats)
    plain = [with_exponent(m, 1) for m in mats]
    rows = [[sum(col) for col in zip(*row_group)] for row_group in zip(*(m.entries for m in plain))]
    return DistanceMatrix(points, rows, 1)


def combine_power(mats: Sequence[DistanceMatrix], r) -> DistanceMatrix:
    """``(sum_j d_j ** r) ** (1/r)``, stored exactly as the inner sum with exponent r."""
    points = _same_points(mats)
    r = as_rational(r)
    if r <= 0:
        raise InputError("power-mean exponent must be positive")
    powered = []
    for m in mats:
        k = r / m.exponent
        if k.denominator != 1:
            raise RepresentationError(
                f"r / stored exponent = {format_rational(k)} is not an integer")
        powered.append([[v ** k.numerator for v in row] for row in m.entries])
    rows = [[sum(col) for col in zip(*row_group)] for row_group in zip(*powered)]
    return DistanceMatrix(points, rows, r)


def check_sandwich(mats: Sequence[DistanceMatrix]) -> Report:
    """``max_j d_j <= sum_j d_j <= l * max_j d_j`` entrywise."""
    report = Report("sandwich")
    top = with_exponent(combine_max(mats), 1)
    total = combine_sum(mats)
    l = len(mats)
    for i, j in itertools.combinations(range(top.size), 2):
        report.checked += 1
        d, s = top.entries[i][j], total.entries[i][j]
        if not d <= s <= l * d:
            report.violations.append((i, j))
    return report


def metrize(mats: Sequence[DistanceMatrix]) -> DistanceMatrix:
    """``max_j min(d_j, 1/j)`` over the family in input order (j from 1)."""
    points = _same_points(mats)
    exponent = _same_exponent(mats)
    caps = []
    for j in range(1, len(mats) + 1):
        cap = exact_root(Fraction(1, j) ** exponent.numerator, exponent.denominator)
        if cap is None:
            raise RepresentationError(f"(1/{j})^{format_rational(exponent)} is irrational")
        caps.append(cap)
    n = len(points)
    rows = [[max(min(m.entries[x][y], cap) for m, cap in zip(mats, caps)) for y in range(n)]
            for x in range(n)]
    return DistanceMatrix(points, rows, exponent)


def metrize_ball_identity(mats: Sequence[DistanceMatrix], radii: Iterable) -> Report:
    """Check ``B_d(x, r) = intersection of B_{d_j}(x, r) for j <= l(r)`` for metrize.

    Radii are actual distances; l(r) is the largest j with ``r <= 1/j``.
    For r > 1 the metrized ball is the whole space.
    """
    d = metrize(mats)
    report = Report("metrize-balls")
    for r in radii:
        r = as_rational(r)
        stored = exact_root(r ** d.exponent.numerator, d.exponent.denominator)
        if stored is None:
            report.notes.append(f"skipped irrational radius {format_rational(r)}")
            continue
        depth = min(len(mats), math.floor(1 / r)) if r <= 1 else 0
        for i in range(d.size):
            report.checked += 1
            expected = frozenset(range(d.size))
            for m in mats[:depth]:
                expected &= _ball_indices(m, i, stored, "open")
            if _ball_indices(d, i, stored, "open") != expected:
                report.violations.append((d.points[i], r))
    return report


def restrict(D: DistanceMatrix, subset: Iterable) -> DistanceMatrix:
    wanted = set(subset)
    if not wanted:
        raise InputError("cannot restrict to the empty set")
    idx = [i for i, x in enumerate(D.points) if x in wanted]
    if len(idx) != len(wanted):
        raise InputError("subset contains unknown points")
    return DistanceMatrix([D.points[i] for i in idx],
                          [[D.entries[i][j] for j in idx] for i in idx], D.exponent)


def product_space(factors: Sequence[DistanceMatrix], max_points: int = DEFAULT_MAX_POINTS) -> DistanceMatrix:
    """Max of the lifted coordinate semimetrics on the Cartesian product."""
    if not factors:
        raise InputError("need at least one factor")
    exponent = _same_exponent(factors)
    size = math.prod(f.size for f in factors)
    if size > max_points:
        raise ResourceError(f"product has {size} points, bound is {max_points}")
    index_tuples = list(itertools.product(*(range(f.size) for f in factors)))
    points = [tuple(f.points[i] for f, i in zip(factors, t)) for t in index_tuples]
    rows = [[max(f.entries[a][b] for f, a, b in zip(factors, s, t)) for t in index_tuples]
            for s in index_tuples]
    return DistanceMatrix(points, rows, exponent)


# -- size and covering -------------------------------------------------------

def diameter(D: DistanceMatrix, subset: Iterable | None = None) -> Magnitude:
    """Largest pairwise distance; zero for empty sets and singletons."""
    idx = range(D.size) if subset is None else sorted({D.index(x) for x in subset})
    top = max((D.entries[i][j] for i in idx for j in idx), default=Fraction(0))
    return ZERO if top == 0 else Magnitude(top, 1 / D.exponent)


class Cover(NamedTuple):
    count: int
    centers: tuple
    exact: bool


def covering_number(D: DistanceMatrix, subset: Iterable | None = None, r=1,
                    kind: str = "closed", exhaustive_limit: int = EXHAUSTIVE_COVER_LIMIT) -> Cover:
    """Fewest balls (centers anywhere in the space) covering the subset.

    Exhaustive up to ``exhaustive_limit`` points; otherwise a greedy cover
    with ``exact=False``.  Greedy ties go to the lowest point index.
    """
    r = _check_radius(r, kind)
    target_idx = range(D.size) if subset is None else sorted({D.index(x) for x in subset})
    target = 0
    for i in target_idx:
        target |= 1 << i
    if target == 0:
        return Cover(0, (), True)
    masks = []
    for c in range(D.size):
        m = 0
        for j in _ball_indices(D, c, r, kind):
            m |= 1 << j
        masks.append(m & target)
    if D.size <= exhaustive_limit:
        for k in range(1, D.size + 1):
            for combo in itertools.combinations(range(D.size), k):
                acc = 0
                for c in combo:
                    acc |= masks[c]
                if acc == target:
                    return Cover(k, tuple(D.points[c] for c in combo), True)
    chosen, uncovered = [], target
    while uncovered:
        best = max(range(D.size), key=lambda c: (bin(masks[c] & uncovered).count("1"), -c))
        chosen.append(best)
        uncovered &= ~masks[best]
    return Cover(len(chosen), tuple(D.points[c] for c in chosen), False)


def _greedy_diameter_blocks(D: DistanceMatrix, t: Fraction) -> Partition:
    e, n = D.entries, D.size
    assigned = [False] * n
    blocks = []
    for i in range(n):
        if assigned[i]:
            continue
        block = [i]
        assigned[i] = True
        for j in range(i + 1, n):
            if not assigned[j] and all(e[j][b] <= t for b in block):
                block.append(j)
                assigned[j] = True
        blocks.append([D.points[b] for b in block])
    return Partition(blocks)


def diameter_cover_refinement(pairs: Sequence[tuple[DistanceMatrix, object]]) -> Partition:
    """A partition whose blocks have ``diam_j <= t_j`` for every j at once.

    Thresholds are in each matrix's stored domain.  Built as the common
    refinement of one greedy diameter cover per matrix.
    """
    mats = [m for m, _ in pairs]
    _same_points(mats)
    parts = []
    for m, t in pairs:
        t = as_rational(t)
        if t < 0:
            raise InputError("diameter thresholds must be nonnegative")
        parts.append(_greedy_diameter_blocks(m, t))
    return common_refinement(parts)


def partition_semimetric(P: Partition, points: Sequence | None = None) -> DistanceMatrix:
    """0 inside a block, 1 across blocks."""
    if points is None:
        points = sorted(P.points, key=label_key)
    elif set(points) != P.points:
        raise InputError("points do not match the partition")
    return DistanceMatrix.from_function(points, lambda x, y: 0 if P.same_block(x, y) else 1)
