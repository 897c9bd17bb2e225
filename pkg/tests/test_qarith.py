import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtwist.qarith import (LocScalar, NotDivisibleError, ONE, QPoly, QRat, Q,
                           cyclotomic, divide_by_cyclotomic_product,
                           divide_exact, is_unit, locscalar_to_qrat,
                           q_binomial, q_factorial,
                           q_factorial_cyclotomic_exponents, q_int,
                           random_locscalar)


# ---------------------------------------------------------------------------
# q-analogs
# ---------------------------------------------------------------------------

def test_q_int_examples():
    assert q_int(0) == QPoly()
    assert q_int(1) == ONE
    assert q_int(3) == QPoly([1, 1, 1])


def test_q_int_negative_rejected():
    with pytest.raises(ValueError):
        q_int(-1)


def test_q_binomial_examples():
    for n in range(6):
        assert q_binomial(n, 0) == ONE
    assert q_binomial(2, 1) == QPoly([1, 1])
    assert q_binomial(4, 2) == QPoly([1, 1, 2, 1, 1])


def test_q_binomial_range_errors():
    with pytest.raises(ValueError):
        q_binomial(2, 3)
    with pytest.raises(ValueError):
        q_binomial(-1, 0)


@pytest.mark.parametrize("n", range(13))
def test_pascal_recurrences(n):
    for k in range(1, n):
        b = q_binomial(n, k)
        assert b == q_binomial(n - 1, k - 1) + q_binomial(n - 1, k).shifted(k)
        assert b == q_binomial(n - 1, k - 1).shifted(n - k) + q_binomial(n - 1, k)


@pytest.mark.parametrize("n", range(13))
def test_binomial_is_factorial_quotient(n):
    for k in range(n + 1):
        quo = QRat(q_factorial(n)) / QRat(q_factorial(k) * q_factorial(n - k))
        assert quo.is_polynomial()
        assert quo.num == q_binomial(n, k)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_factorial_frobenius_substitution(p):
    # q -> q^p carries the factorial to the factorial of the substituted analogs
    for n in range(13):
        prod = ONE
        for j in range(1, n + 1):
            prod = prod * q_int(j).stretch(p)
        assert q_factorial(n).stretch(p) == prod


def test_specialization_at_one():
    for n in range(9):
        assert q_int(n).at_one() == n
        for k in range(n + 1):
            import math
            assert q_binomial(n, k).at_one() == math.comb(n, k)


# ---------------------------------------------------------------------------
# cyclotomic machinery
# ---------------------------------------------------------------------------

def test_cyclotomic_basics():
    assert cyclotomic(1) == QPoly([-1, 1])
    assert cyclotomic(2) == QPoly([1, 1])
    assert cyclotomic(6) == QPoly([1, -1, 1])
    assert q_int(6) == cyclotomic(2) * cyclotomic(3) * cyclotomic(6)


def test_factorial_cyclotomic_exponents():
    exps = q_factorial_cyclotomic_exponents(6)
    prod = ONE
    for d, e in exps.items():
        prod = prod * cyclotomic(d) ** e
    assert prod == q_factorial(6)

    exps_p = q_factorial_cyclotomic_exponents(3, 2)   # (3)_{q^2}!
    prod = ONE
    for d, e in exps_p.items():
        prod = prod * cyclotomic(d) ** e
    assert prod == q_factorial(3).stretch(2)


def test_divide_by_cyclotomic_product():
    z = LocScalar(q_factorial(4) * QPoly([0, 5]))
    out = divide_by_cyclotomic_product(z, q_factorial_cyclotomic_exponents(4))
    assert out == LocScalar(QPoly([0, 5]))
    # non-dividing factors move to the denominator, already reduced
    w = divide_by_cyclotomic_product(LocScalar(ONE), {2: 1})
    assert w.num == ONE and w.den == q_int(2)


# ---------------------------------------------------------------------------
# localization
# ---------------------------------------------------------------------------

def test_canonical_form():
    a = LocScalar(QPoly([2, 2]), QPoly([4]))
    assert (a.num, a.den) == (QPoly([1, 1]), QPoly([2]))
    assert a == LocScalar(QPoly([-1, -1]), QPoly([-2]))
    c = LocScalar(q_int(2) * q_int(3), q_int(3) * QPoly(5))
    assert (c.num, c.den) == (q_int(2), QPoly([5]))


def test_is_unit_examples():
    assert is_unit(LocScalar(Q), 2)
    assert is_unit(LocScalar(Q), 5)
    assert not is_unit(LocScalar(q_int(2)), 2)
    assert is_unit(LocScalar(q_int(2)), 3)
    assert not is_unit(LocScalar(QPoly()), 3)


def test_divide_exact_by_p():
    # phi((2)_q) - ((2)_q)^2 = -2q at p = 2
    phi2 = q_int(2).stretch(2)
    diff = LocScalar(phi2 - q_int(2) * q_int(2))
    assert diff == LocScalar(QPoly([0, -2]))
    assert divide_exact(diff, 2) == LocScalar(QPoly([0, -1]))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_divide_exact_by_q_analog(p):
    # (p^2)_q = (p)_q * (p)_{q^p}
    z = LocScalar(q_int(p * p))
    assert divide_exact(z, q_int(p)) == LocScalar(q_int(p).stretch(p))


def test_divide_exact_not_divisible():
    with pytest.raises(NotDivisibleError):
        divide_exact(LocScalar(ONE), 3)
    with pytest.raises(NotDivisibleError) as err:
        divide_exact(LocScalar(QPoly([1, 2])), 2)
    assert err.value.witness is not None


@pytest.mark.parametrize("p", [2, 3])
def test_divide_roundtrip_random(p):
    rng = random.Random(2024 + p)
    for _ in range(60):
        z = random_locscalar(rng, p)
        assert divide_exact(LocScalar(z.num * p, z.den), p) == z
        zq = z * q_int(p)
        assert divide_exact(zq, q_int(p)) == z


def test_fraction_field_agreement_random():
    rng = random.Random(99)
    for _ in range(300):
        z1, z2 = random_locscalar(rng, 3), random_locscalar(rng, 3)
        r1, r2 = locscalar_to_qrat(z1), locscalar_to_qrat(z2)
        assert (z1 + z2).num == (r1 + r2).num
        assert (z1 * z2).num == (r1 * r2).num
        assert (z1 - z2).den == (r1 - r2).den


def test_evaluation_matches_fractions():
    rng = random.Random(5)
    for _ in range(100):
        z1, z2 = random_locscalar(rng, 2), random_locscalar(rng, 2)
        s = z1 + z2
        m = z1 * z2
        for pt in (2, 3, -2):
            d1, d2 = z1.den.eval_int(pt), z2.den.eval_int(pt)
            if 0 in (d1, d2, s.den.eval_int(pt), m.den.eval_int(pt)):
                continue
            f1 = Fraction(z1.num.eval_int(pt), d1)
            f2 = Fraction(z2.num.eval_int(pt), d2)
            assert Fraction(s.num.eval_int(pt), s.den.eval_int(pt)) == f1 + f2
            assert Fraction(m.num.eval_int(pt), m.den.eval_int(pt)) == f1 * f2


# ---------------------------------------------------------------------------
# ring axioms, property-based
# ---------------------------------------------------------------------------

small_polys = st.lists(st.integers(-20, 20), max_size=6).map(QPoly)


@given(small_polys, small_polys, small_polys)
@settings(max_examples=60, deadline=None)
def test_qpoly_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(small_polys, st.integers(1, 4))
@settings(max_examples=40, deadline=None)
def test_stretch_multiplicative(a, k):
    assert (a * a).stretch(k) == a.stretch(k) * a.stretch(k)


small_scalars = st.builds(
    LocScalar,
    st.lists(st.integers(-9, 9), max_size=4).map(QPoly),
    st.lists(st.integers(-9, 9), min_size=1, max_size=4).map(QPoly).filter(bool))


@given(small_scalars, small_scalars, small_scalars)
@settings(max_examples=50, deadline=None)
def test_fraction_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if not c.is_zero():
        assert (a / c) * c == a


def test_qpoly_serialization_roundtrip():
    a = QPoly([1, -2, 0, 10 ** 30])
    assert QPoly.from_json(a.to_json()) == a
    z = LocScalar(QPoly([1, 1]), QPoly([3]))
    assert LocScalar.from_json(z.to_json()) == z


def test_q_minus_one_rewrite():
    assert QPoly([1, 1]).to_q_minus_one() == (2, 1)
    assert q_int(4).to_q_minus_one()[0] == 4
    # full reconstruction
    f = QPoly([3, -1, 4, 2])
    ts = f.to_q_minus_one()
    back = QPoly()
    t = QPoly([-1, 1])
    for b, c in enumerate(ts):
        back = back + t ** b * c
    assert back == f
