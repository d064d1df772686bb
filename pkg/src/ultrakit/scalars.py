"""Exact rationals, absolute value functions on Q, and exact magnitudes.

Values of an absolute value function are kept as ``Magnitude`` objects,
``mantissa ** exponent`` with both parts rational, so that archimedean
powers such as ``|x| ** (1/2)`` never leave exact arithmetic.  Two
magnitudes are compared by raising both sides to a common integer power.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence, Union

from .errors import InputError, RepresentationError
from .reports import Report

Rational = Fraction
INFINITY = math.inf
DEFAULT_PRECISION_BITS = 256
# Integer cross-powers above this are treated as unrepresentable.
MAX_CROSS_EXPONENT = 4096


# -- rationals ---------------------------------------------------------------

def as_rational(x: object) -> Fraction:
    """Coerce ints, Fractions and ``"n/d"`` strings; floats are refused."""
    if isinstance(x, bool):
        raise InputError(f"not a rational: {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise InputError(f"not a rational: {x!r}")


def parse_rational(text: str) -> Fraction:
    try:
        if "." in text or "e" in text.lower():
            raise ValueError
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a rational literal: {text!r}") from None


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rational_gcd(a: Fraction, b: Fraction) -> Fraction:
    """Largest positive rational g with a/g and b/g both integers."""
    num = math.gcd(a.numerator * b.denominator, b.numerator * a.denominator)
    return Fraction(num, a.denominator * b.denominator)


def is_prime(p: int) -> bool:
    """Deterministic primality by trial division (inputs below 2**64)."""
    if not isinstance(p, int) or isinstance(p, bool):
        raise InputError(f"primality is defined for integers, got {p!r}")
    if p >= 1 << 64:
        raise InputError("primality check limited to 64-bit inputs")
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    for d in range(3, math.isqrt(p) + 1, 2):
        if p % d == 0:
            return False
    return True


def iroot(x: int, n: int) -> int:
    """Floor of the real n-th root of a nonnegative integer."""
    if x < 0 or n < 1:
        raise ValueError("iroot needs x >= 0 and n >= 1")
    if n == 1 or x < 2:
        return x
    if n == 2:
        return math.isqrt(x)
    guess = 1 << -(-x.bit_length() // n)
    while True:
        nxt = ((n - 1) * guess + x // guess ** (n - 1)) // n
        if nxt >= guess:
            break
        guess = nxt
    while guess ** n > x:
        guess -= 1
    while (guess + 1) ** n <= x:
        guess += 1
    return guess


def exact_root(x: Fraction, n: int) -> Fraction | None:
    """The rational n-th root of ``x >= 0`` if there is one."""
    if n == 1:
        return x
    a, b = iroot(x.numerator, n), iroot(x.denominator, n)
    if a ** n == x.numerator and b ** n == x.denominator:
        return Fraction(a, b)
    return None


# -- ordering ----------------------------------------------------------------

class Ordering(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


_BY_SIGN = (Ordering.EQ, Ordering.GT, Ordering.LT)


def _sign(x) -> Ordering:
    return _BY_SIGN[(x > 0) - (x < 0)]


def _root_floor(y: Fraction, n: int, bits: int) -> int:
    """floor(2**bits * y**(1/n)) for rational y >= 0."""
    scaled = (y.numerator << (bits * n)) // y.denominator
    return iroot(scaled, n)


def power_sum_cmp(
    lhs: Fraction,
    rhs: Sequence[Fraction],
    exponent: Fraction,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> Ordering | None:
    """Sign of ``lhs**c - sum(r**c for r in rhs)`` for nonnegative rationals.

    Integer ``c`` is plain rational arithmetic.  Otherwise equality is
    decided exactly: positive real radicals whose pairwise ratios are
    irrational are linearly independent over Q, so equality forces every
    ``(r/lhs)**c`` to be rational with those ratios summing to one.  With
    equality excluded, the sign comes from integer floor roots at
    ``precision_bits``; ``None`` means the brackets still overlap.
    """
    c = Fraction(exponent)
    if c <= 0:
        raise InputError("exponent must be positive")
    terms = [Fraction(r) for r in rhs if r != 0]
    lhs = Fraction(lhs)
    if lhs < 0 or any(r < 0 for r in terms):
        raise InputError("power_sum_cmp takes nonnegative values")
    if lhs == 0:
        return Ordering.LT if terms else Ordering.EQ
    if not terms:
        return Ordering.GT
    m, n = c.numerator, c.denominator
    if n == 1:
        return _sign(lhs ** m - sum(r ** m for r in terms))
    if len(terms) == 1:
        return _sign(lhs - terms[0])

    ratios = []
    for r in terms:
        root = exact_root(r / lhs, n)
        if root is None:
            break
        ratios.append(root ** m)
    else:
        return _sign(1 - sum(ratios))

    lo_l = _root_floor(lhs ** m, n, precision_bits)
    lows = [_root_floor(r ** m, n, precision_bits) for r in terms]
    lo_r, hi_r = sum(lows), sum(lows) + len(lows)
    if lo_l + 1 <= lo_r:
        return Ordering.LT
    if lo_l >= hi_r:
        return Ordering.GT
    return None


# -- magnitudes --------------------------------------------------------------

class Magnitude:
    """A nonnegative extended real: zero, ``mantissa ** exponent``, or +inf.

    Equality and ordering are exact; ``Magnitude(9, Fraction(1, 2))`` equals
    ``Magnitude(3)``.
    """

    __slots__ = ("kind", "mantissa", "exponent")

    def __init__(self, mantissa, exponent=1, *, _kind: str = "finite"):
        object.__setattr__(self, "kind", _kind)
        if _kind != "finite":
            object.__setattr__(self, "mantissa", None)
            object.__setattr__(self, "exponent", None)
            return
        m, e = as_rational(mantissa), as_rational(exponent)
        if m <= 0:
            raise InputError("finite magnitude needs a positive mantissa")
        if e <= 0:
            raise InputError("finite magnitude needs a positive exponent")
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "exponent", e)

    def __setattr__(self, name, value):
        raise AttributeError("Magnitude is immutable")

    @classmethod
    def _trusted(cls, mantissa: Fraction, exponent: Fraction) -> Magnitude:
        """Skip validation for values already known to be positive rationals."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "kind", "finite")
        object.__setattr__(obj, "mantissa", mantissa)
        object.__setattr__(obj, "exponent", exponent)
        return obj

    @classmethod
    def zero(cls) -> Magnitude:
        return ZERO

    @classmethod
    def inf(cls) -> Magnitude:
        return PLUS_INFINITY

    @classmethod
    def of(cls, x) -> Magnitude:
        """Embed a nonnegative rational."""
        x = as_rational(x)
        if x < 0:
            raise InputError("magnitudes are nonnegative")
        return ZERO if x == 0 else cls(x)

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    @property
    def is_inf(self) -> bool:
        return self.kind == "inf"

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def canonical(self) -> tuple[Fraction, Fraction] | str:
        """Unique form ``(base, e)`` where base is not a perfect power."""
        if not self.is_finite:
            return self.kind
        base, e = self.mantissa, self.exponent
        if base == 1:
            return (Fraction(1), Fraction(1))
        bits = max(base.numerator.bit_length(), base.denominator.bit_length())
        k = 2
        while k <= bits:
            root = exact_root(base, k)
            if root is not None:
                base, e = root, e * k
                bits = max(base.numerator.bit_length(), base.denominator.bit_length())
            else:
                k += 1
        return (base, e)

    def rational_value(self) -> Fraction | None:
        """The value as a rational, when it is one."""
        if self.is_zero:
            return Fraction(0)
        if self.is_inf:
            return None
        base, e = self.canonical()
        if e.denominator == 1:
            return base ** e.numerator
        return None

    def __eq__(self, other):
        if not isinstance(other, Magnitude):
            return NotImplemented
        return magnitude_cmp(self, other) is Ordering.EQ

    def __lt__(self, other):
        if not isinstance(other, Magnitude):
            return NotImplemented
        return magnitude_cmp(self, other) is Ordering.LT

    def __le__(self, other):
        if not isinstance(other, Magnitude):
            return NotImplemented
        return magnitude_cmp(self, other) is not Ordering.GT

    def __gt__(self, other):
        if not isinstance(other, Magnitude):
            return NotImplemented
        return magnitude_cmp(self, other) is Ordering.GT

    def __ge__(self, other):
        if not isinstance(other, Magnitude):
            return NotImplemented
        return magnitude_cmp(self, other) is not Ordering.LT

    def __hash__(self):
        return hash(self.canonical())

    def __mul__(self, other):
        if not isinstance(other, Magnitude):
            return NotImplemented
        return magnitude_mul(self, other)

    def __pow__(self, e):
        return magnitude_pow(self, e)

    def __repr__(self):
        if not self.is_finite:
            return f"Magnitude.{self.kind}()"
        if self.exponent == 1:
            return f"Magnitude({format_rational(self.mantissa)})"
        return f"Magnitude({format_rational(self.mantissa)}, {format_rational(self.exponent)})"

    def to_json(self):
        if self.is_zero:
            return "0"
        if self.is_inf:
            return "inf"
        return {"mantissa": format_rational(self.mantissa),
                "exponent": format_rational(self.exponent)}

    @classmethod
    def from_json(cls, data) -> Magnitude:
        if data == "0":
            return ZERO
        if data == "inf":
            return PLUS_INFINITY
        if isinstance(data, dict) and set(data) == {"mantissa", "exponent"}:
            return cls(parse_rational(data["mantissa"]), parse_rational(data["exponent"]))
        raise InputError(f"bad magnitude: {data!r}")


ZERO = Magnitude(0, _kind="zero")
PLUS_INFINITY = Magnitude(0, _kind="inf")
ONE = Magnitude(1)


_RANK = {"zero": 0, "finite": 1, "inf": 2}


def magnitude_cmp(m1: Magnitude, m2: Magnitude) -> Ordering:
    """Exact total order; finite values compared by cross-exponentiation."""
    rank1, rank2 = _RANK[m1.kind], _RANK[m2.kind]
    if rank1 != rank2 or rank1 != 1:
        return _sign(rank1 - rank2)
    a, e1, b, e2 = m1.mantissa, m1.exponent, m2.mantissa, m2.exponent
    if e1 == e2:
        return _sign(a - b)
    # exponents are positive, so the side of 1 decides unless both agree
    sa, sb = _sign(a - 1), _sign(b - 1)
    if sa != sb:
        return _sign(sa - sb)
    if sa == 0:
        return Ordering.EQ
    p1, p2 = e1.numerator * e2.denominator, e2.numerator * e1.denominator
    g = math.gcd(p1, p2)
    p1, p2 = p1 // g, p2 // g
    if max(p1, p2) > MAX_CROSS_EXPONENT:
        # try again on the canonical forms, which have the smallest exponents
        (a, e1), (b, e2) = m1.canonical(), m2.canonical()
        p1, p2 = e1.numerator * e2.denominator, e2.numerator * e1.denominator
        g = math.gcd(p1, p2)
        p1, p2 = p1 // g, p2 // g
    return _sign(a ** p1 - b ** p2)


def magnitude_mul(m1: Magnitude, m2: Magnitude) -> Magnitude:
    """Exact product, rewriting both factors over a common exponent."""
    if m1.is_zero or m2.is_zero:
        if m1.is_inf or m2.is_inf:
            raise RepresentationError("0 * inf is undefined")
        return ZERO
    if m1.is_inf or m2.is_inf:
        return PLUS_INFINITY
    e1, e2 = m1.exponent, m2.exponent
    if e1 == e2:
        return Magnitude._trusted(m1.mantissa * m2.mantissa, e1)
    g = rational_gcd(e1, e2)
    k1, k2 = int(e1 / g), int(e2 / g)
    if max(k1, k2) > MAX_CROSS_EXPONENT:
        (b1, e1), (b2, e2) = m1.canonical(), m2.canonical()
        g = rational_gcd(e1, e2)
        k1, k2 = int(e1 / g), int(e2 / g)
        if max(k1, k2) > MAX_CROSS_EXPONENT:
            raise RepresentationError(
                f"exponents {m1.exponent} and {m2.exponent} are incommensurable at this size")
        return Magnitude(b1 ** k1 * b2 ** k2, g)
    return Magnitude(m1.mantissa ** k1 * m2.mantissa ** k2, g)


def magnitude_max(m1: Magnitude, m2: Magnitude) -> Magnitude:
    return m2 if magnitude_cmp(m1, m2) is Ordering.LT else m1


def magnitude_pow(m: Magnitude, e) -> Magnitude:
    e = as_rational(e)
    if e <= 0:
        raise InputError("magnitude_pow needs a positive exponent")
    if not m.is_finite:
        return m
    return Magnitude(m.mantissa, m.exponent * e)


# -- exponents ---------------------------------------------------------------

QExponent = Union[Fraction, float]


def parse_q(q) -> QExponent:
    """A positive rational exponent, or ``math.inf`` for the max regime."""
    if q == "inf" or q == "∞" or (isinstance(q, float) and math.isinf(q) and q > 0):
        return INFINITY
    q = as_rational(q)
    if q <= 0:
        raise InputError(f"q must be positive, got {format_rational(q)}")
    return q


def format_q(q: QExponent) -> str:
    return "inf" if q == INFINITY else format_rational(q)


# -- absolute value functions ------------------------------------------------

@dataclass(frozen=True)
class Trivial:
    kind = "trivial"


@dataclass(frozen=True)
class PAdic:
    p: int

    kind = "padic"

    def __post_init__(self):
        if not is_prime(self.p):
            raise InputError(f"{self.p} is not prime")


@dataclass(frozen=True)
class ArchimedeanPower:
    """``x -> |x|**a`` for the usual absolute value, ``0 < a <= 1``."""

    a: Fraction = Fraction(1)

    kind = "arch"

    def __post_init__(self):
        a = as_rational(self.a)
        if not 0 < a <= 1:
            raise InputError("archimedean power needs 0 < a <= 1")
        object.__setattr__(self, "a", a)


AbsoluteValueSpec = Union[Trivial, PAdic, ArchimedeanPower]


def spec_to_json(spec: AbsoluteValueSpec) -> dict:
    if isinstance(spec, PAdic):
        return {"kind": "padic", "p": spec.p}
    if isinstance(spec, ArchimedeanPower):
        return {"kind": "arch", "a": format_rational(spec.a)}
    return {"kind": "trivial"}


def spec_from_json(data) -> AbsoluteValueSpec:
    if not isinstance(data, dict):
        raise InputError(f"bad absolute value spec: {data!r}")
    kind = data.get("kind")
    if kind == "trivial":
        return Trivial()
    if kind == "padic":
        p = data.get("p")
        if not isinstance(p, int) or isinstance(p, bool):
            raise InputError("padic spec needs an integer p")
        return PAdic(p)
    if kind == "arch":
        return ArchimedeanPower(parse_rational(str(data.get("a", "1"))))
    raise InputError(f"unknown absolute value kind: {kind!r}")


def padic_valuation(x, p: int) -> int | float:
    """Exponent of p in x; ``math.inf`` for zero."""
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    x = as_rational(x)
    if x == 0:
        return INFINITY
    return _valuation(x, p)


def _valuation(x: Fraction, p: int) -> int:
    v = 0
    num, den = abs(x.numerator), x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


_ONE_EXP = Fraction(1)


def abs_value(spec: AbsoluteValueSpec, x) -> Magnitude:
    x = as_rational(x)
    if x == 0:
        return ZERO
    if isinstance(spec, PAdic):
        v = _valuation(x, spec.p)
        m = Fraction(1, spec.p ** v) if v >= 0 else Fraction(spec.p ** -v)
        return Magnitude._trusted(m, _ONE_EXP)
    if isinstance(spec, ArchimedeanPower):
        return Magnitude(abs(x), spec.a)
    return ONE


def check_multiplicativity(spec: AbsoluteValueSpec, pairs: Iterable[tuple]) -> Report:
    report = Report("multiplicativity")
    for x, y in pairs:
        x, y = as_rational(x), as_rational(y)
        report.checked += 1
        if abs_value(spec, x * y) != abs_value(spec, x) * abs_value(spec, y):
            report.violations.append((x, y))
    return report


def check_q_triangle(
    spec: AbsoluteValueSpec,
    q,
    pairs: Iterable[tuple],
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> Report:
    """Check ``|x+y|**q <= |x|**q + |y|**q`` (the max inequality for q = inf)."""
    q = parse_q(q)
    report = Report(f"{format_q(q)}-triangle")
    for x, y in pairs:
        x, y = as_rational(x), as_rational(y)
        report.checked += 1
        ax, ay, axy = abs_value(spec, x), abs_value(spec, y), abs_value(spec, x + y)
        if axy <= magnitude_max(ax, ay):
            continue  # the max inequality implies every finite q
        if q == INFINITY:
            report.violations.append((x, y))
            continue
        # within one spec all nonzero values share the exponent e
        e = next(m.exponent for m in (ax, ay, axy) if m.is_finite)
        mant = [m.mantissa if m.is_finite else Fraction(0) for m in (axy, ax, ay)]
        verdict = power_sum_cmp(mant[0], mant[1:], e * q, precision_bits)
        if verdict is None:
            report.inconclusive.append((x, y))
        elif verdict is Ordering.GT:
            report.violations.append((x, y))
    return report


class ArchimedeanInfo(NamedTuple):
    archimedean: bool
    witness: int | None
    checked_up_to: int


def is_archimedean(spec: AbsoluteValueSpec, n_check: int = 1000) -> ArchimedeanInfo:
    """Archimedean iff ``|n * 1|`` is unbounded; witnesses are small integers."""
    if isinstance(spec, ArchimedeanPower):
        assert abs_value(spec, 2) > ONE
        return ArchimedeanInfo(True, 2, 2)
    for n in range(1, n_check + 1):
        if abs_value(spec, n) > ONE:
            raise AssertionError(f"|{n}| > 1 for a non-archimedean spec {spec}")
    return ArchimedeanInfo(False, None, n_check)


class DiscreteInfo(NamedTuple):
    discrete: bool
    rho1: Magnitude | None


def _sample_rationals(bound: int = 30) -> list[Fraction]:
    return sorted({Fraction(n, d) for n in range(-bound, bound + 1)
                   for d in range(1, bound + 1) if n})


def is_discrete(spec: AbsoluteValueSpec, samples: Iterable | None = None) -> DiscreteInfo:
    """Discreteness, with the largest value below one (``rho1``) if nontrivial.

    For p-adic specs every sampled nonzero value is verified to be an
    integer power of ``rho1``.
    """
    if isinstance(spec, ArchimedeanPower):
        return DiscreteInfo(False, None)
    if isinstance(spec, Trivial):
        return DiscreteInfo(True, None)
    rho1 = Magnitude(Fraction(1, spec.p))
    for x in (_sample_rationals() if samples is None else samples):
        m = abs_value(spec, x)
        if m.is_zero:
            continue
        v = m.mantissa
        while v > 1 and v.denominator == 1 and v.numerator % spec.p == 0:
            v /= spec.p
        while v < 1 and v.numerator == 1 and v.denominator % spec.p == 0:
            v *= spec.p
        if v != 1:
            raise AssertionError(f"{m!r} is not a power of {rho1!r}")
    return DiscreteInfo(True, rho1)


def nonequivalence_witness(spec1: AbsoluteValueSpec, spec2: AbsoluteValueSpec,
                           search: int = 100) -> Fraction | None:
    """An x with |x|_1 and |x|_2 on different sides of 1, if one is small."""
    for n in range(2, search + 1):
        x = Fraction(n)
        if magnitude_cmp(abs_value(spec1, x), ONE) != magnitude_cmp(abs_value(spec2, x), ONE):
            return x
    return None


def equivalent(spec1: AbsoluteValueSpec, spec2: AbsoluteValueSpec,
               samples: Iterable | None = None) -> Fraction | None:
    """The a > 0 with ``|x|_2 = |x|_1 ** a`` for all x, or None."""
    if type(spec1) is not type(spec2):
        a = None
    elif isinstance(spec1, PAdic):
        a = Fraction(1) if spec1.p == spec2.p else None
    elif isinstance(spec1, ArchimedeanPower):
        a = spec2.a / spec1.a
    else:
        a = Fraction(1)
    if a is None:
        if nonequivalence_witness(spec1, spec2) is None:
            raise AssertionError(f"no witness separating {spec1} and {spec2}")
        return None
    for x in (_sample_rationals(12) if samples is None else samples):
        m1, m2 = abs_value(spec1, x), abs_value(spec2, x)
        if m2 != (m1 if m1.is_zero else m1 ** a):
            raise AssertionError(f"equivalence exponent {a} fails at {x}")
    return a
