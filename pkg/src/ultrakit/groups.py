"""Finite abelian groups, subgroup semimetrics and the topologies they generate.

Elements are tuples of residues.  Internally every element has an index
(lexicographic order) and sets of elements are bitmasks over indices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, NamedTuple, Sequence

from .errors import InputError, PreconditionError, ResourceError
from .reports import Report
from .semimetric import (
    DistanceMatrix,
    Partition,
    _ball_indices,
    is_ultrametric,
    occurring_radii,
)
from .topology import FiniteTopology, _bits

DEFAULT_MAX_ORDER = 64


class FiniteAbelianGroup:
    """``Z/n1 x Z/n2 x ...`` with componentwise modular addition."""

    def __init__(self, orders: Sequence[int], max_order: int = DEFAULT_MAX_ORDER):
        orders = tuple(orders)
        if not orders:
            orders = (1,)
        for n in orders:
            if not isinstance(n, int) or isinstance(n, bool) or n < 1:
                raise InputError(f"cyclic orders must be integers >= 1, got {n!r}")
        if math.prod(orders) > max_order:
            raise ResourceError(f"group order {math.prod(orders)} exceeds the bound {max_order}")
        self.orders = orders
        self.elements = tuple(itertools.product(*(range(n) for n in orders)))
        self._index = {g: i for i, g in enumerate(self.elements)}
        n = len(self.elements)
        self.add_table = tuple(
            tuple(self._index[tuple((a + b) % m for a, b, m in zip(x, y, orders))]
                  for y in self.elements) for x in self.elements)
        self.neg_table = tuple(self._index[tuple(-a % m for a, m in zip(x, orders))]
                               for x in self.elements)
        self.full = (1 << n) - 1

    def __eq__(self, other):
        return isinstance(other, FiniteAbelianGroup) and self.orders == other.orders

    def __hash__(self):
        return hash(self.orders)

    def __repr__(self):
        return f"FiniteAbelianGroup({list(self.orders)})"

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def zero(self) -> tuple:
        return self.elements[0]

    def element(self, x) -> tuple:
        """Normalize an element given as a tuple, list or (for one factor) an int."""
        if isinstance(x, int) and not isinstance(x, bool) and len(self.orders) == 1:
            x = (x,)
        try:
            t = tuple(x)
        except TypeError:
            raise InputError(f"not a group element: {x!r}") from None
        if len(t) != len(self.orders) or not all(
                isinstance(a, int) and not isinstance(a, bool) for a in t):
            raise InputError(f"not a group element: {x!r}")
        return tuple(a % m for a, m in zip(t, self.orders))

    def index(self, x) -> int:
        return self._index[self.element(x)]

    def add(self, x, y) -> tuple:
        return self.elements[self.add_table[self.index(x)][self.index(y)]]

    def neg(self, x) -> tuple:
        return self.elements[self.neg_table[self.index(x)]]

    def sub(self, x, y) -> tuple:
        return self.add(x, self.neg(y))

    def mask(self, subset: Iterable) -> int:
        m, known = 0, self._index
        for x in subset:
            i = known.get(x) if type(x) is tuple else None
            m |= 1 << (self.index(x) if i is None else i)
        return m

    def subset(self, mask: int) -> frozenset:
        return frozenset(self.elements[i] for i in _bits(mask))

    def translate_mask(self, mask: int, a: int) -> int:
        row = self.add_table[a]
        out = 0
        for i in _bits(mask):
            out |= 1 << row[i]
        return out

    def sumset_mask(self, m1: int, m2: int) -> int:
        out = 0
        for a in _bits(m2):
            out |= self.translate_mask(m1, a)
        return out

    def neg_mask(self, mask: int) -> int:
        out = 0
        for i in _bits(mask):
            out |= 1 << self.neg_table[i]
        return out

    def to_json(self) -> dict:
        return {"orders": list(self.orders)}

    @classmethod
    def from_json(cls, data, max_order: int = DEFAULT_MAX_ORDER) -> FiniteAbelianGroup:
        if not isinstance(data, dict) or not isinstance(data.get("orders"), list):
            raise InputError("group JSON needs an 'orders' list")
        return cls(data["orders"], max_order)

    def elements_from_json(self, data) -> frozenset:
        if not isinstance(data, list):
            raise InputError("element sets are JSON lists")
        return frozenset(self.element(x) for x in data)


def element_to_json(x: tuple) -> list:
    return list(x)


def set_to_json(s: Iterable[tuple]) -> list:
    return [list(x) for x in sorted(s)]


def _is_subgroup_mask(G: FiniteAbelianGroup, mask: int) -> bool:
    if not mask & 1:
        return False
    if G.neg_mask(mask) != mask:
        return False
    return G.sumset_mask(mask, mask) == mask


@dataclass(frozen=True)
class Subgroup:
    group: FiniteAbelianGroup = field(compare=False)
    elements: frozenset

    def __post_init__(self):
        elems = frozenset(self.group.element(x) for x in self.elements)
        object.__setattr__(self, "elements", elems)
        if not _is_subgroup_mask(self.group, self.mask):
            raise InputError("set is not a subgroup")

    @cached_property
    def mask(self) -> int:
        return self.group.mask(self.elements)

    @classmethod
    def _from_mask(cls, G: FiniteAbelianGroup, mask: int) -> Subgroup:
        obj = object.__new__(cls)
        object.__setattr__(obj, "group", G)
        object.__setattr__(obj, "elements", G.subset(mask))
        obj.__dict__["mask"] = mask
        return obj

    @cached_property
    def coset_masks(self) -> tuple:
        """The coset x + H for every element index x."""
        return tuple(self.group.translate_mask(self.mask, x) for x in range(self.group.order))

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return self.group.element(x) in self.elements

    def to_json(self) -> list:
        return set_to_json(self.elements)


def _generated_mask(G: FiniteAbelianGroup, mask: int) -> int:
    """Union of the sumsets U, U+U, U+U+U, ... for U = mask with 0 and negatives."""
    u = mask | 1 | G.neg_mask(mask)
    current = u
    while True:
        nxt = G.sumset_mask(current, u)
        if nxt == current:
            return current
        current = nxt


def subgroup_generated(G: FiniteAbelianGroup, S: Iterable, notes: list | None = None) -> Subgroup:
    """Smallest subgroup containing S.

    S is first extended by 0 and its negatives; when that changes S a
    note is appended to ``notes``.
    """
    mask = G.mask(S)
    closed = mask | 1 | G.neg_mask(mask)
    if closed != mask and notes is not None:
        notes.append("generating set extended by 0 and negatives")
    return Subgroup._from_mask(G, _generated_mask(G, mask))


def all_subgroups(G: FiniteAbelianGroup) -> list[Subgroup]:
    """Every subgroup, smallest first (ties broken by element order)."""
    found = {1}
    frontier = [1]
    while frontier:
        new = []
        for h in frontier:
            for i in range(G.order):
                if not h >> i & 1:
                    k = _generated_mask(G, h | 1 << i)
                    if k not in found:
                        found.add(k)
                        new.append(k)
        frontier = new
    ordered = sorted(found, key=lambda m: (bin(m).count("1"), sorted(_bits(m))))
    return [Subgroup._from_mask(G, m) for m in ordered]


def coset_partition(G: FiniteAbelianGroup, H: Subgroup) -> Partition:
    return Partition({m: G.subset(m) for m in H.coset_masks}.values())


def subgroup_semimetric(G: FiniteAbelianGroup, H: Subgroup) -> DistanceMatrix:
    """0 when x - y lies in H, 1 otherwise."""
    n, add, neg = G.order, G.add_table, G.neg_table
    rows = [[0 if H.mask >> add[x][neg[y]] & 1 else 1 for y in range(n)] for x in range(n)]
    return DistanceMatrix(G.elements, rows)


def _check_indexed(G: FiniteAbelianGroup, D: DistanceMatrix) -> None:
    if D.points != G.elements:
        raise InputError("matrix must be indexed by the group's elements in order")


def translation_witness(G: FiniteAbelianGroup, D: DistanceMatrix):
    """First (a, x, y) with ``d(x + a, y + a) != d(x, y)``, or None."""
    _check_indexed(G, D)
    e, add, n = D.entries, G.add_table, G.order
    for a in range(n):
        row = add[a]
        for x in range(n):
            for y in range(x + 1, n):
                if e[row[x]][row[y]] != e[x][y]:
                    return G.elements[a], G.elements[x], G.elements[y]
    return None


def is_translation_invariant(G: FiniteAbelianGroup, D: DistanceMatrix) -> bool:
    return translation_witness(G, D) is None


def balls_at_zero_are_subgroups(G: FiniteAbelianGroup, D: DistanceMatrix) -> Report:
    """Balls about 0 are subgroups and every other ball is a coset of one.

    Checked for open and closed balls at every occurring radius.
    """
    if not is_translation_invariant(G, D):
        raise PreconditionError("matrix is not translation-invariant")
    if not is_ultrametric(D):
        raise PreconditionError("matrix is not a semi-ultrametric")
    report = Report("balls-at-zero")
    for r in occurring_radii(D):
        for kind in ("closed", "open"):
            if kind == "open" and r == 0:
                continue
            zero_ball = sum(1 << j for j in _ball_indices(D, 0, r, kind))
            report.checked += 1
            if not _is_subgroup_mask(G, zero_ball):
                report.violations.append((kind, r, set_to_json(G.subset(zero_ball))))
                continue
            for x in range(1, G.order):
                report.checked += 1
                b = sum(1 << j for j in _ball_indices(D, x, r, kind))
                if b != G.translate_mask(zero_ball, x):
                    report.violations.append((kind, r, list(G.elements[x])))
    return report


def intersection(G: FiniteAbelianGroup, family: Sequence[Subgroup]) -> Subgroup:
    if not family:
        raise InputError("subgroup family must be nonempty")
    m = G.full
    for H in family:
        m &= H.mask
    return Subgroup._from_mask(G, m)


@lru_cache(maxsize=4096)
def _partition_topology_masks(blocks: tuple) -> frozenset:
    masks = {0}
    for b in blocks:
        masks |= {m | b for m in masks}
    return frozenset(masks)


def topology_from_subgroup_family(G: FiniteAbelianGroup,
                                  family: Sequence[Subgroup]) -> tuple[FiniteTopology, bool]:
    """Topology generated by the subgroup semimetrics, and nondegeneracy.

    Each member's zero-classes are its cosets; the topology is the
    partition topology of their common refinement.  The family is
    nondegenerate when every pair of distinct elements is at positive
    distance for some member.
    """
    if not family:
        raise InputError("subgroup family must be nonempty")
    cosets = [H.coset_masks for H in family]
    blocks = set()
    nondegenerate = True
    for x in range(G.order):
        m = G.full
        for c in cosets:
            m &= c[x]
        blocks.add(m)
        # y lies in every coset of x exactly when d(x, y) = 0 for all members
        if m != 1 << x:
            nondegenerate = False
    opens = _partition_topology_masks(tuple(sorted(blocks)))
    return FiniteTopology._trusted(G.elements, opens), nondegenerate


def open_subgroups(G: FiniteAbelianGroup, T: FiniteTopology) -> list[Subgroup]:
    if set(T.points) != set(G.elements):
        raise InputError("topology must live on the group's elements")
    return [H for H in all_subgroups(G) if T.is_open(H.elements)]


def weakly_connected(G: FiniteAbelianGroup, T: FiniteTopology) -> bool:
    """No open subgroup other than G itself."""
    return all(len(H) == G.order for H in open_subgroups(G, T))


def u_separated(G: FiniteAbelianGroup, B: Iterable, C: Iterable, U: Iterable) -> bool:
    """``(B + U)`` misses C, for U symmetric and containing 0."""
    return _u_separated_masks(G, G.mask(B), G.mask(C), G.mask(U))


def _u_separated_masks(G: FiniteAbelianGroup, b: int, c: int, u: int) -> bool:
    if not u & 1:
        raise InputError("U must contain 0")
    if G.neg_mask(u) != u:
        raise InputError("U must be symmetric")
    return G.sumset_mask(b, u) & c == 0


def separated_implies_subgroup_invariance(G: FiniteAbelianGroup, E: Iterable, U: Iterable) -> Report:
    """For E separated from its complement by U, check ``E + <U> = E``."""
    e = G.mask(E)
    if e == 0:
        raise PreconditionError("E must be nonempty")
    if not _u_separated_masks(G, e, G.full & ~e, G.mask(U)):
        raise PreconditionError("E is not U-separated from its complement")
    H = subgroup_generated(G, U)
    report = Report("subgroup-invariance")
    for x in _bits(e):
        for h in _bits(H.mask):
            report.checked += 1
            s = G.add_table[x][h]
            if not e >> s & 1:
                report.violations.append((G.elements[x], G.elements[h]))
    return report


# -- quotients -----------------------------------------------------------------

def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def invariant_factors_from_orders(element_orders: Sequence[int]) -> tuple[int, ...]:
    """Isomorphism type of a finite abelian group from its element orders.

    For each prime p the number of elements killed by p^k fixes the
    partition of exponents of the p-part; the primary parts are then
    merged into invariant factors n1 | n2 | ... .
    """
    n = len(element_orders)
    primary: dict[int, list[int]] = {}
    for p in _prime_factors(n):
        counts = [1]
        k = 0
        while counts[-1] < p ** _valuation(n, p):
            k += 1
            counts.append(sum(1 for o in element_orders if (p ** k) % o == 0))
        # counts[k] = p^(sum of min(e_i, k)); increments give how many e_i >= k
        logs = [_valuation(c, p) for c in counts]
        at_least = [logs[k] - logs[k - 1] for k in range(1, len(logs))]
        exps = []
        for k in range(len(at_least)):
            nxt = at_least[k + 1] if k + 1 < len(at_least) else 0
            exps += [k + 1] * (at_least[k] - nxt)
        primary[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in primary.values()), default=0)
    factors = []
    for i in range(width):
        f = 1
        for p, exps in primary.items():
            if i < len(exps):
                f *= p ** exps[i]
        factors.append(f)
    return tuple(sorted(factors)) or (1,)


def _valuation(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


class Quotient(NamedTuple):
    group: FiniteAbelianGroup
    subgroup: Subgroup
    cosets: tuple
    representatives: tuple
    projection: dict
    invariant_factors: tuple

    def add(self, r1, r2) -> tuple:
        return self.projection[self.group.add(r1, r2)]

    def to_json(self) -> dict:
        return {
            "order": len(self.cosets),
            "invariant_factors": list(self.invariant_factors),
            "representatives": set_to_json(self.representatives),
        }


def quotient_group(G: FiniteAbelianGroup, H: Subgroup) -> Quotient:
    """``G / H`` presented by least coset representatives."""
    seen: dict[int, None] = {}
    for m in H.coset_masks:
        seen.setdefault(m, None)
    cosets = tuple(G.subset(m) for m in seen)
    reps = tuple(min(c) for c in cosets)
    projection = {x: r for c, r in zip(cosets, reps) for x in c}
    zero = G.zero
    orders = []
    for r in reps:
        k, acc = 1, r
        while projection[acc] != zero:
            acc = G.add(acc, r)
            k += 1
        orders.append(k)
    return Quotient(G, H, cosets, reps, projection, invariant_factors_from_orders(orders))
