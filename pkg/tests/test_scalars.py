from __future__ import annotations

import math
import random
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import padic_abs, valuation_by_search
from ultrakit.errors import InputError
from ultrakit.scalars import (
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
    check_multiplicativity,
    check_q_triangle,
    equivalent,
    format_rational,
    is_archimedean,
    is_discrete,
    is_prime,
    magnitude_cmp,
    magnitude_max,
    magnitude_mul,
    magnitude_pow,
    nonequivalence_witness,
    padic_valuation,
    parse_q,
    parse_rational,
    power_sum_cmp,
    spec_from_json,
    spec_to_json,
)

rationals = st.fractions(max_denominator=10**6).filter(lambda x: abs(x) < 10**9)
nonzero = rationals.filter(lambda x: x != 0)
specs = st.sampled_from([Trivial(), PAdic(2), PAdic(3), PAdic(5), PAdic(7),
                         ArchimedeanPower(1), ArchimedeanPower(F(1, 2)), ArchimedeanPower(F(2, 3))])


# -- rationals -----------------------------------------------------------------

def test_parse_and_format():
    assert parse_rational("3/6") == F(1, 2)
    assert parse_rational("-4") == -4
    assert format_rational(F(4, 2)) == "2"
    assert format_rational(F(-1, 3)) == "-1/3"
    for bad in ("1/0", "abc", "1.5", ""):
        with pytest.raises(InputError):
            parse_rational(bad)


def test_floats_and_bools_refused():
    with pytest.raises(InputError):
        as_rational(0.5)
    with pytest.raises(InputError):
        as_rational(True)


def test_primality_matches_sieve():
    sieve = [True] * 2000
    sieve[0] = sieve[1] = False
    for i in range(2, 2000):
        if sieve[i]:
            for j in range(i * i, 2000, i):
                sieve[j] = False
    assert [n for n in range(2000) if is_prime(n)] == [n for n in range(2000) if sieve[n]]


# -- valuations and absolute values --------------------------------------------

def test_valuation_examples():
    assert padic_valuation(12, 2) == valuation_by_search(F(12), 2) == 2
    assert padic_valuation(0, 5) == math.inf
    assert padic_valuation(F(1, 6), 2) == valuation_by_search(F(1, 6), 2) == -1
    with pytest.raises(InputError):
        padic_valuation(3, 4)


@given(nonzero, st.sampled_from([2, 3, 5, 7, 11]))
def test_valuation_against_search_oracle(x, p):
    assert padic_valuation(x, p) == valuation_by_search(x, p)


@given(nonzero, nonzero, st.sampled_from([2, 3, 5]))
def test_valuation_additive(x, y, p):
    assert padic_valuation(x * y, p) == padic_valuation(x, p) + padic_valuation(y, p)


def test_abs_value_examples():
    assert abs_value(PAdic(2), 12) == Magnitude(F(1, 4))
    assert abs_value(PAdic(2), 12).mantissa == F(1, 4)
    assert abs_value(Trivial(), -7) == ONE
    m = abs_value(ArchimedeanPower(F(1, 2)), 9)
    assert (m.mantissa, m.exponent) == (9, F(1, 2))
    assert m == Magnitude(3)


@given(specs, rationals)
def test_abs_value_symmetric_and_unit(spec, x):
    assert abs_value(spec, -x) == abs_value(spec, x)
    assert abs_value(spec, 1) == ONE
    assert abs_value(spec, x).is_zero == (x == 0)


@given(nonzero, st.sampled_from([2, 3, 5, 7]))
def test_padic_abs_against_oracle(x, p):
    assert abs_value(PAdic(p), x).rational_value() == padic_abs(x, p)


def test_multiplicativity_examples():
    assert check_multiplicativity(PAdic(3), [(6, 9)]).holds
    assert abs_value(PAdic(3), 54) == Magnitude(F(1, 27))
    assert check_multiplicativity(Trivial(), [(2, 3), (F(-1, 5), 7)]).holds
    assert check_multiplicativity(ArchimedeanPower(1), [(-2, 5)]).holds


@given(specs, st.lists(st.tuples(rationals, rationals), max_size=10))
def test_multiplicativity_property(spec, pairs):
    assert check_multiplicativity(spec, pairs).holds


def test_q_triangle_examples():
    assert check_q_triangle(PAdic(5), "inf", [(F(1, 5), 2)]).holds
    assert abs_value(PAdic(5), F(11, 5)) == Magnitude(5)
    r = check_q_triangle(ArchimedeanPower(1), "inf", [(1, 1)])
    assert r.violations == [(1, 1)]
    assert check_q_triangle(ArchimedeanPower(1), 1, [(-3, 3)]).holds
    with pytest.raises(InputError):
        check_q_triangle(PAdic(2), 0, [(1, 1)])


@given(st.sampled_from([Trivial(), PAdic(2), PAdic(3), PAdic(7)]),
       st.lists(st.tuples(rationals, rationals), max_size=10))
def test_non_archimedean_ultrametric(spec, pairs):
    assert check_q_triangle(spec, "inf", pairs).holds


@given(st.sampled_from([F(1), F(1, 2), F(1, 3), F(2, 3)]),
       st.lists(st.tuples(rationals, rationals), max_size=6))
@settings(max_examples=50)
def test_archimedean_power_is_a_q_absolute_value(a, pairs):
    # |x|^a satisfies the (1/a)-triangle inequality, hence every q <= 1/a
    spec = ArchimedeanPower(a)
    assert check_q_triangle(spec, 1 / a, pairs).holds
    assert check_q_triangle(spec, F(1, 2) / a, pairs).holds


def test_archimedean_fails_beyond_its_regime():
    r = check_q_triangle(ArchimedeanPower(1), 2, [(1, 1)])
    assert r.violations == [(1, 1)]


@given(nonzero, nonzero, st.sampled_from([2, 3, 5]))
def test_strict_case_of_ultrametric_inequality(y, z, p):
    spec = PAdic(p)
    if abs_value(spec, y - z) < abs_value(spec, y):
        assert abs_value(spec, y) == abs_value(spec, z)


# -- magnitudes ------------------------------------------------------------------

def test_magnitude_examples():
    assert magnitude_cmp(Magnitude(9, F(1, 2)), Magnitude(3)) is Ordering.EQ
    assert magnitude_cmp(ZERO, ONE) is Ordering.LT
    assert magnitude_cmp(Magnitude(F(1, 4)), Magnitude(F(1, 2))) is Ordering.LT
    assert magnitude_mul(Magnitude(F(1, 2)), Magnitude(F(1, 4))) == Magnitude(F(1, 8))
    assert magnitude_pow(Magnitude(2), 3) == Magnitude(8)
    assert magnitude_pow(Magnitude(2), 3).exponent == 3
    assert magnitude_max(ZERO, Magnitude(5)) == Magnitude(5)
    assert PLUS_INFINITY > Magnitude(10**100)
    assert ZERO < Magnitude(F(1, 10**100))


def _mp(m: Magnitude):
    if m.is_zero:
        return mpmath.mpf(0)
    if m.is_inf:
        return mpmath.inf
    return mpmath.power(mpmath.mpf(m.mantissa.numerator) / m.mantissa.denominator,
                        mpmath.mpf(m.exponent.numerator) / m.exponent.denominator)


magnitudes = st.one_of(
    st.just(ZERO), st.just(PLUS_INFINITY),
    st.builds(Magnitude,
              st.fractions(min_value=F(1, 20), max_value=50, max_denominator=20).filter(lambda x: x > 0),
              st.fractions(min_value=F(1, 6), max_value=4, max_denominator=6).filter(lambda x: x > 0)))


@given(magnitudes, magnitudes)
def test_magnitude_order_matches_high_precision(m1, m2):
    with mpmath.workdps(80):
        a, b = _mp(m1), _mp(m2)
        c = magnitude_cmp(m1, m2)
        if c is Ordering.EQ:
            assert a == b or abs(a - b) < mpmath.mpf(10) ** -60 * max(abs(a), 1)
        else:
            assert (a < b) == (c is Ordering.LT)


@given(magnitudes, magnitudes)
def test_magnitude_mul_matches_high_precision(m1, m2):
    if {m1.kind, m2.kind} == {"zero", "inf"}:
        return
    with mpmath.workdps(80):
        prod = _mp(m1 * m2)
        ref = _mp(m1) * _mp(m2)
        if mpmath.isinf(ref):
            assert mpmath.isinf(prod)
        else:
            assert abs(prod - ref) <= mpmath.mpf(10) ** -60 * max(abs(ref), 1)


@given(magnitudes)
def test_hash_consistent_with_equality(m):
    if m.is_finite:
        twin = Magnitude(m.mantissa ** 2, m.exponent / 2)
        assert twin == m and hash(twin) == hash(m)


@given(magnitudes)
def test_magnitude_json_round_trip(m):
    assert Magnitude.from_json(m.to_json()) == m


# -- power sums ------------------------------------------------------------------

def test_power_sum_exact_equalities():
    # 2 = 1^(1/2)*... : sqrt(4) = sqrt(1) + sqrt(1)
    assert power_sum_cmp(F(4), [F(1), F(1)], F(1, 2)) is Ordering.EQ
    assert power_sum_cmp(F(2), [F(1), F(1)], F(1, 2)) is Ordering.LT
    # sqrt(8) = sqrt(2) + sqrt(2)
    assert power_sum_cmp(F(8), [F(2), F(2)], F(1, 2)) is Ordering.EQ
    assert power_sum_cmp(F(3), [F(1), F(1)], 2) is Ordering.GT


@given(st.lists(st.fractions(min_value=0, max_value=20, max_denominator=9), min_size=1, max_size=3),
       st.fractions(min_value=0, max_value=30, max_denominator=9),
       st.sampled_from([F(1, 2), F(1, 3), F(2, 3), F(3, 2), F(5, 2)]))
@settings(max_examples=200)
def test_power_sum_against_high_precision(rhs, lhs, c):
    verdict = power_sum_cmp(lhs, rhs, c)
    with mpmath.workdps(100):
        f = lambda x: mpmath.power(mpmath.mpf(x.numerator) / x.denominator,  # noqa: E731
                                   mpmath.mpf(c.numerator) / c.denominator)
        diff = f(lhs) - sum(f(r) for r in rhs)
    if verdict is Ordering.EQ:
        assert abs(diff) < mpmath.mpf(10) ** -80
    elif verdict is not None:
        assert (diff > 0) == (verdict is Ordering.GT)
        assert abs(diff) > 0


# -- classification ------------------------------------------------------------

def test_archimedean_classification():
    assert is_archimedean(ArchimedeanPower(1)) == (True, 2, 2)
    info = is_archimedean(PAdic(7))
    assert not info.archimedean and info.checked_up_to == 1000
    assert all(padic_abs(F(n), 7) <= 1 for n in range(1, 1001))
    assert not is_archimedean(Trivial()).archimedean


def test_discrete_classification():
    assert is_discrete(PAdic(2)) == (True, Magnitude(F(1, 2)))
    assert is_discrete(ArchimedeanPower(F(1, 3))) == (False, None)
    assert is_discrete(Trivial()) == (True, None)


def test_equivalence():
    assert equivalent(ArchimedeanPower(1), ArchimedeanPower(F(1, 2))) == F(1, 2)
    assert equivalent(PAdic(2), PAdic(3)) is None
    assert nonequivalence_witness(PAdic(2), PAdic(3)) == 2
    assert equivalent(Trivial(), Trivial()) == 1
    assert equivalent(PAdic(5), PAdic(5)) == 1
    assert equivalent(Trivial(), PAdic(5)) is None
    assert equivalent(PAdic(5), ArchimedeanPower(1)) is None


def test_equivalence_exponent_verified_on_random_rationals():
    rng = random.Random(7)
    a = equivalent(ArchimedeanPower(F(2, 3)), ArchimedeanPower(F(1, 3)))
    for _ in range(200):
        x = F(rng.randint(-999, 999), rng.randint(1, 999))
        m1 = abs_value(ArchimedeanPower(F(2, 3)), x)
        m2 = abs_value(ArchimedeanPower(F(1, 3)), x)
        assert m2 == (m1 if m1.is_zero else m1 ** a)


def test_spec_json_and_validation():
    for spec in (Trivial(), PAdic(13), ArchimedeanPower(F(1, 3))):
        assert spec_from_json(spec_to_json(spec)) == spec
    with pytest.raises(InputError):
        PAdic(9)
    with pytest.raises(InputError):
        ArchimedeanPower(F(3, 2))
    with pytest.raises(InputError):
        spec_from_json({"kind": "real"})


def test_parse_q():
    assert parse_q("inf") == math.inf
    assert parse_q("3/2") == F(3, 2)
    with pytest.raises(InputError):
        parse_q("-1")
