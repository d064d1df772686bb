"""Finite topological spaces.

Open sets are held as bitmasks over the ordered point list; the public
surface speaks in frozensets of labels.  Most predicates go through
minimal open neighbourhoods, which exist in every finite space.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .errors import InputError, ResourceError
from .semimetric import (
    DistanceMatrix,
    Partition,
    common_refinement,
    label_from_json,
    label_key,
    label_to_json,
    partition_semimetric,
    zero_partition,
)

DEFAULT_MAX_POINTS = 6


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _masks_form_topology(n: int, masks: frozenset) -> bool:
    full = (1 << n) - 1
    if 0 not in masks or full not in masks:
        return False
    listed = list(masks)
    for a, b in itertools.combinations(listed, 2):
        if (a | b) not in masks or (a & b) not in masks:
            return False
    return True


def _close_under_unions(masks: set[int]) -> frozenset:
    closed = set(masks)
    frontier = list(closed)
    while frontier:
        new = []
        for a in frontier:
            for b in list(closed):
                u = a | b
                if u not in closed:
                    closed.add(u)
                    new.append(u)
        frontier = new
    return frozenset(closed)


def _generate(n: int, subbase: Iterable[int]) -> frozenset:
    """Smallest topology on n points containing the given sets."""
    full = (1 << n) - 1
    base = {full} | set(subbase)
    frontier = list(base)
    while frontier:
        new = []
        for a in frontier:
            for b in list(base):
                m = a & b
                if m not in base:
                    base.add(m)
                    new.append(m)
        frontier = new
    return _close_under_unions(base | {0})


class FiniteTopology:
    """A topology on an ordered point list; equality ignores nothing but order."""

    __slots__ = ("points", "masks", "__dict__")

    def __init__(self, points: Sequence, opens: Iterable[Iterable]):
        points = tuple(points)
        if len(set(points)) != len(points):
            raise InputError("point labels must be distinct")
        pos = {x: i for i, x in enumerate(points)}
        masks = set()
        for u in opens:
            m = 0
            for x in u:
                if x not in pos:
                    raise InputError(f"open set mentions unknown point {x!r}")
                m |= 1 << pos[x]
            masks.add(m)
        masks = frozenset(masks)
        if not _masks_form_topology(len(points), masks):
            raise InputError("family is not a topology on these points")
        self.points = points
        self.masks = masks

    @classmethod
    def _trusted(cls, points: Sequence, masks: frozenset) -> FiniteTopology:
        """Build from masks already known to form a topology."""
        obj = object.__new__(cls)
        obj.points = tuple(points)
        obj.masks = frozenset(masks)
        return obj

    @cached_property
    def opens(self) -> frozenset:
        return frozenset(self.labels(m) for m in self.masks)

    def __eq__(self, other):
        return (isinstance(other, FiniteTopology) and self.points == other.points
                and self.masks == other.masks)

    def __hash__(self):
        return hash((self.points, self.masks))

    def __repr__(self):
        return f"FiniteTopology({list(self.points)!r}, {len(self.masks)} opens)"

    @property
    def full(self) -> int:
        return (1 << len(self.points)) - 1

    @cached_property
    def minimal_neighbourhoods(self) -> tuple[int, ...]:
        """For each point, the intersection of all open sets containing it."""
        out = []
        for i in range(len(self.points)):
            m = self.full
            for u in self.masks:
                if u >> i & 1:
                    m &= u
            out.append(m)
        return tuple(out)

    @cached_property
    def clopen_masks(self) -> frozenset:
        return frozenset(u for u in self.masks if (self.full & ~u) in self.masks)

    def labels(self, mask: int) -> frozenset:
        return frozenset(self.points[i] for i in _bits(mask))

    def mask(self, subset: Iterable) -> int:
        pos = {x: i for i, x in enumerate(self.points)}
        m = 0
        for x in subset:
            if x not in pos:
                raise InputError(f"unknown point {x!r}")
            m |= 1 << pos[x]
        return m

    def is_open(self, subset: Iterable) -> bool:
        return self.mask(subset) in self.masks

    def is_closed(self, subset: Iterable) -> bool:
        return (self.full & ~self.mask(subset)) in self.masks

    def to_json(self) -> dict:
        order = sorted(self.opens, key=lambda u: (len(u), sorted(label_key(x) for x in u)))
        return {"points": [label_to_json(x) for x in self.points],
                "opens": [[label_to_json(x) for x in sorted(u, key=label_key)] for u in order]}

    @classmethod
    def from_json(cls, data, max_points: int = DEFAULT_MAX_POINTS) -> FiniteTopology:
        if not isinstance(data, dict) or "points" not in data or "opens" not in data:
            raise InputError("topology JSON needs 'points' and 'opens'")
        points = [label_from_json(x) for x in data["points"]]
        if len(points) > max_points:
            raise ResourceError(f"{len(points)} points exceeds the bound {max_points}")
        return cls(points, [[label_from_json(x) for x in u] for u in data["opens"]])


def is_topology(points: Sequence, family: Iterable[Iterable]) -> bool:
    pos = {x: i for i, x in enumerate(points)}
    masks = set()
    for u in family:
        m = 0
        for x in u:
            if x not in pos:
                return False
            m |= 1 << pos[x]
        masks.add(m)
    return _masks_form_topology(len(pos), frozenset(masks))


def discrete_topology(points: Sequence) -> FiniteTopology:
    n = len(points)
    return FiniteTopology._trusted(points, frozenset(range(1 << n)))


def indiscrete_topology(points: Sequence) -> FiniteTopology:
    return FiniteTopology._trusted(points, frozenset({0, (1 << len(points)) - 1}))


def generated_topology(points: Sequence, subbase: Iterable[Iterable]) -> FiniteTopology:
    pos = {x: i for i, x in enumerate(points)}
    masks = []
    for s in subbase:
        m = 0
        for x in s:
            m |= 1 << pos[x]
        masks.append(m)
    return FiniteTopology._trusted(points, _generate(len(points), masks))


def partition_topology(points: Sequence, partition: Partition) -> FiniteTopology:
    """Open sets are exactly the unions of blocks."""
    pos = {x: i for i, x in enumerate(points)}
    if set(pos) != partition.points:
        raise InputError("partition does not cover the point list")
    block_masks = [sum(1 << pos[x] for x in b) for b in partition.blocks]
    masks = set()
    for r in range(len(block_masks) + 1):
        for combo in itertools.combinations(block_masks, r):
            masks.add(sum(combo))
    return FiniteTopology._trusted(points, frozenset(masks))


def topology_from_semimetrics(mats: Sequence[DistanceMatrix]) -> FiniteTopology:
    """Topology generated by a family of semimetrics on a finite set.

    Every point has a smallest neighbourhood, its joint zero-class, so the
    result is the partition topology of the common refinement.
    """
    if not mats:
        raise InputError("need at least one semimetric")
    points = mats[0].points
    if any(m.points != points for m in mats):
        raise InputError("semimetrics must share the point list")
    meet = common_refinement([zero_partition(m) for m in mats], points)
    return partition_topology(points, meet)


def clopen_sets(T: FiniteTopology) -> frozenset:
    return frozenset(T.labels(m) for m in T.clopen_masks)


def clopen_semimetric(T: FiniteTopology, E: Iterable) -> DistanceMatrix:
    """``d_E``: 0 on pairs on the same side of E, 1 across it."""
    m = T.mask(E)
    if m not in T.clopen_masks:
        raise InputError("set is not clopen")
    inside, outside = T.labels(m), T.labels(T.full & ~m)
    blocks = [b for b in (inside, outside) if b]
    return partition_semimetric(Partition(blocks), T.points)


def tau0(T: FiniteTopology) -> FiniteTopology:
    """The topology generated by the clopen sets of T."""
    return FiniteTopology._trusted(T.points, _generate(len(T.points), T.clopen_masks))


def is_dimension_zero_at(T: FiniteTopology, x) -> bool:
    i = T.points.index(x)
    smallest = T.minimal_neighbourhoods[i]
    # every open W around x contains the smallest one, so it is the only test
    return any(c >> i & 1 and c & ~smallest == 0 for c in T.clopen_masks)


def is_dimension_zero(T: FiniteTopology) -> bool:
    """Clopen sets form a base (no separation axiom folded in)."""
    return all(is_dimension_zero_at(T, x) for x in T.points)


def is_totally_separated(T: FiniteTopology) -> bool:
    n = len(T.points)
    clopens = T.clopen_masks
    return all(any((c >> i & 1) != (c >> j & 1) for c in clopens)
               for i, j in itertools.combinations(range(n), 2))


class SeparationAxioms(NamedTuple):
    t0: bool
    t1: bool
    hausdorff: bool
    regular_strict: bool
    normal_strict: bool

    @property
    def t3(self) -> bool:
        return self.regular_strict and self.t1

    @property
    def t4(self) -> bool:
        return self.normal_strict and self.t1


def separation_axioms(T: FiniteTopology) -> SeparationAxioms:
    """Exact separation flags; regular and normal are in the strict sense.

    Every open set around x contains its minimal neighbourhood, and every
    closed set containing x contains its closure, so each axiom reduces
    to a test on pairs of points.
    """
    n = len(T.points)
    nbhd = T.minimal_neighbourhoods
    # closure of {i}: the points whose minimal neighbourhood contains i
    cl = [sum(1 << j for j in range(n) if nbhd[j] >> i & 1) for i in range(n)]
    pairs = list(itertools.combinations(range(n), 2))
    t0 = all(not (nbhd[i] >> j & 1 and nbhd[j] >> i & 1) for i, j in pairs)
    t1 = all(not (nbhd[i] >> j & 1) and not (nbhd[j] >> i & 1) for i, j in pairs)
    hausdorff = all(nbhd[i] & nbhd[j] == 0 for i, j in pairs)
    regular = all(nbhd[x] & nbhd[i] == 0
                  for i in range(n) for x in range(n) if not cl[i] >> x & 1)
    normal = all(nbhd[i] & nbhd[j] == 0 for i, j in pairs if cl[i] & cl[j] == 0)
    return SeparationAxioms(t0, t1, hausdorff, regular, normal)


def is_hausdorff(T: FiniteTopology) -> bool:
    nbhd = T.minimal_neighbourhoods
    return all(nbhd[i] & nbhd[j] == 0 for i, j in itertools.combinations(range(len(nbhd)), 2))


def connected_components(T: FiniteTopology) -> Partition:
    """Components of a finite space are the atoms of its clopen algebra."""
    blocks = {}
    for i in range(len(T.points)):
        atom = T.full
        for c in T.clopen_masks:
            atom &= c if c >> i & 1 else ~c
        blocks[atom] = T.labels(atom)
    return Partition(blocks.values())


class Embedding(NamedTuple):
    coordinates: dict
    injective: bool
    preimage_topology: FiniteTopology
    subbase_homeomorphic: bool

    def to_json(self) -> dict:
        rows = sorted(self.coordinates.items(), key=lambda kv: label_key(kv[0]))
        return {
            "injective": self.injective,
            "subbase_homeomorphic": self.subbase_homeomorphic,
            "bits": [[label_to_json(x), list(bits)] for x, bits in rows],
        }


def product_embedding(T: FiniteTopology, W: Sequence[Iterable]) -> Embedding:
    """Map each point to its membership bits over the clopen sets in W.

    The pulled-back topology from ``{0,1}^W`` is generated by the W_j and
    their complements; the map is a homeomorphism onto its image exactly
    when it is injective and that topology is T itself.
    """
    masks = []
    for w in W:
        m = T.mask(w)
        if m not in T.clopen_masks:
            raise InputError("embedding coordinates must be clopen sets")
        masks.append(m)
    coords = {x: tuple(m >> i & 1 for m in masks) for i, x in enumerate(T.points)}
    injective = len(set(coords.values())) == len(coords)
    subbase = masks + [T.full & ~m for m in masks]
    pulled = FiniteTopology._trusted(T.points, _generate(len(T.points), subbase))
    return Embedding(coords, injective, pulled, injective and pulled.masks == T.masks)


# -- enumeration ---------------------------------------------------------------

def enumerate_topologies(points: Sequence) -> list[FiniteTopology]:
    """All topologies, via their specialization preorders (Alexandrov)."""
    n = len(points)
    if n > DEFAULT_MAX_POINTS:
        raise ResourceError(f"enumeration capped at {DEFAULT_MAX_POINTS} points")
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    result = []
    for choice in range(1 << len(off)):
        up = [1 << i for i in range(n)]  # up[i]: points above i
        for k, (i, j) in enumerate(off):
            if choice >> k & 1:
                up[i] |= 1 << j
        if any(up[j] & ~up[i] for i in range(n) for j in _bits(up[i])):
            continue  # not transitive
        masks = frozenset(u for u in range(1 << n)
                          if all(up[i] & ~u == 0 for i in _bits(u)))
        result.append(FiniteTopology._trusted(points, masks))
    return result


def enumerate_topologies_bruteforce(points: Sequence) -> list[FiniteTopology]:
    """All topologies, by testing every family of subsets (n <= 4)."""
    n = len(points)
    if n > 4:
        raise ResourceError("brute-force enumeration is limited to 4 points")
    full = (1 << n) - 1
    middle = list(range(1, full))
    result = []
    for choice in range(1 << len(middle)):
        masks = frozenset([0, full] + [m for k, m in enumerate(middle) if choice >> k & 1])
        if _masks_form_topology(n, masks):
            result.append(FiniteTopology._trusted(points, masks))
    return result
