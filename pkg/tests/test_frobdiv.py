import pytest

from qtwist.qarith import (LocScalar, ONE, QPoly, QRat, Q, is_unit,
                           q_factorial, q_int)
from qtwist.coordring import CoordPoly, SIDE_A, SIDE_APRIME
from qtwist.divpow import DPElem, XiPoly, to_twisted_basis
from qtwist.frobdiv import (FrobCoeffTable, coeff_a, coeff_b, delta_dp,
                            divided_frobenius, envelope_basis_check,
                            leading_coeff_product, level_minus_one_ctx,
                            level_zero_ctx, phi_dp, phi_level_zero,
                            symmetric_delta_xi, symmetric_phi_xi,
                            u_apply, u_closed_formula, u_consistency_check,
                            u_of_divided_power, u_of_twisted_power,
                            v_basis_triangular)

x = CoordPoly.x()


# ---------------------------------------------------------------------------
# coefficient families
# ---------------------------------------------------------------------------

def test_coeff_a_examples():
    assert coeff_a(0, 0, 2) == ONE
    assert coeff_a(1, 1, 2) == q_int(2)
    for p in (2, 3, 5):
        assert coeff_a(1, p, p) == ONE


def test_coeff_a_vanishes_below_diagonal():
    for p in (2, 3):
        for n in range(5):
            for i in range(n):
                assert coeff_a(n, i, p).is_zero()


def test_coeff_a_out_of_range():
    with pytest.raises(ValueError):
        coeff_a(1, 3, 2)


def test_coeff_b_examples():
    assert coeff_b(1, 1, 2) == LocScalar(ONE)
    assert coeff_b(1, 2, 2) == LocScalar(ONE)
    assert coeff_b(2, 2, 2) == LocScalar(Q)
    assert coeff_b(2, 3, 2) == LocScalar(q_int(3))


@pytest.mark.parametrize("p", [2, 3])
def test_coeff_b_matches_field_oracle(p):
    for n in range(4):
        den = QRat(q_factorial(n).stretch(p) * q_int(p) ** n)
        for i in range(n, p * n + 1):
            oracle = QRat(q_factorial(i) * coeff_a(n, i, p)) / den
            got = coeff_b(n, i, p)
            assert QRat(got.num, got.den) == oracle


@pytest.mark.parametrize("p", [2, 3, 5])
def test_top_coefficient_product_and_unit(p):
    for n in range(5):
        top = coeff_b(n, p * n, p)
        assert top == leading_coeff_product(n, p)
        if n:
            assert is_unit(top, p)


def test_table_validate():
    assert FrobCoeffTable(2, 6).validate()
    rows = list(FrobCoeffTable(2, 2).rows())
    assert rows[0] == {"n": 0, "i": 0, "a": ONE, "b": LocScalar(ONE),
                       "unit_at_top": True}


# ---------------------------------------------------------------------------
# divided Frobenius
# ---------------------------------------------------------------------------

def test_divided_frobenius_examples():
    ctx = level_minus_one_ctx(2, SIDE_APRIME)
    assert divided_frobenius(DPElem.one(ctx)) == DPElem.one(level_zero_ctx(2))
    img = divided_frobenius(DPElem.basis(ctx, 1))
    assert img == DPElem(level_zero_ctx(2), {1: x, 2: CoordPoly(1)})
    w = DPElem.basis(ctx, 1)
    assert divided_frobenius(w * w) == img * img


def test_divided_frobenius_against_polynomial_square():
    # (2)_q [F](w) is the image of (x + xi)^2 - x^2 under xi^(n) -> (n)_q! xi^[n]
    ctx0 = level_zero_ctx(2)
    img = divided_frobenius(DPElem.basis(level_minus_one_ctx(2, SIDE_APRIME), 1))
    lhs = img * q_int(2)
    xi = XiPoly.gen()
    xpol = XiPoly((x,))
    square = (xpol + xi) ** 2 - xpol ** 2
    rhs = DPElem(ctx0, {})
    for n, c in to_twisted_basis(square, ctx0).items():
        rhs = rhs + DPElem.basis(ctx0, n, c * q_factorial(n))
    assert lhs == rhs


def test_divided_frobenius_is_semilinear():
    ctx = level_minus_one_ctx(3, SIDE_APRIME)
    xp = CoordPoly.x(SIDE_APRIME)
    img_plain = divided_frobenius(DPElem.basis(ctx, 1))
    img_scaled = divided_frobenius(DPElem.basis(ctx, 1, xp))
    assert img_scaled == img_plain * (x ** 3)


@pytest.mark.parametrize("p", [2, 3])
def test_divided_frobenius_multiplicative(p):
    ctx = level_minus_one_ctx(p, SIDE_APRIME, cap=max(4 * p, 16))
    for n1 in range(4):
        for n2 in range(4 - n1):
            u, v = DPElem.basis(ctx, n1), DPElem.basis(ctx, n2)
            assert divided_frobenius(u * v) == divided_frobenius(u) * divided_frobenius(v)


# ---------------------------------------------------------------------------
# Frobenius lift and delta on level -1
# ---------------------------------------------------------------------------

def test_phi_dp_examples():
    ctx = level_minus_one_ctx(2)
    assert phi_dp(DPElem.one(ctx)) == DPElem.one(ctx)
    ph = phi_dp(DPElem.basis(ctx, 1))
    assert ph == DPElem(ctx, {1: q_int(2) * x, 2: CoordPoly(q_int(2) ** 2)})


def test_phi_level_zero_example():
    ctx0 = level_zero_ctx(2)
    ph = phi_level_zero(DPElem.basis(ctx0, 1))
    assert ph == DPElem(ctx0, {1: q_int(2) * x, 2: CoordPoly(q_int(2))})


def test_delta_dp_examples():
    ctx = level_minus_one_ctx(2)
    assert delta_dp(DPElem.one(ctx)).is_zero()
    assert delta_dp(DPElem.basis(ctx, 0, CoordPoly(Q))).is_zero()
    d = delta_dp(DPElem.basis(ctx, 1))
    assert d == DPElem(ctx, {1: x, 2: CoordPoly(Q)})


@pytest.mark.parametrize("p", [2, 3])
def test_phi_dp_multiplicative_small(p):
    ctx = level_minus_one_ctx(p, cap=max(4 * p, 16))
    for n1 in range(3):
        for n2 in range(3):
            u, v = DPElem.basis(ctx, n1), DPElem.basis(ctx, n2)
            assert phi_dp(u * v) == phi_dp(u) * phi_dp(v)


# ---------------------------------------------------------------------------
# the polynomial-ring delta
# ---------------------------------------------------------------------------

def test_symmetric_delta_xi_examples():
    xi = XiPoly.gen()
    assert symmetric_delta_xi(xi, 2) == XiPoly((CoordPoly(()), x))
    xpol = XiPoly((x,))
    for p in (2, 3, 5):
        assert symmetric_delta_xi(xpol + xi, p).is_zero()
        assert symmetric_phi_xi(xi, p) == (xpol + xi) ** p - xpol ** p


def test_symmetric_delta_xi_p3_formula():
    # delta(xi) = (1/3)(C(3,1) x^2 xi + C(3,2) x xi^2) = x^2 xi + x xi^2
    got = symmetric_delta_xi(XiPoly.gen(), 3)
    assert got == XiPoly((CoordPoly(()), x ** 2, x))


def test_blowup_intertwines_lifts():
    # xi^(n) at twist q^2 maps to (n)_{q^2}! (2)_q^n w[n]; squares commute
    from qtwist.divpow import DPContext, Y_STANDARD
    p = 2
    std = DPContext(p, 0, Y_STANDARD, SIDE_A, p)
    lvl = level_minus_one_ctx(p)

    def blow(f):
        out = DPElem(lvl, {})
        for n, c in to_twisted_basis(f, std).items():
            out = out + DPElem.basis(
                lvl, n, c * (q_factorial(n).stretch(p) * q_int(p) ** n))
        return out

    for n in range(4):
        f = XiPoly.gen() ** n
        assert blow(symmetric_phi_xi(f, p)) == phi_dp(blow(f))


# ---------------------------------------------------------------------------
# envelope congruences
# ---------------------------------------------------------------------------

def test_envelope_p2():
    rep = envelope_basis_check(2, 2)
    assert rep["ok"]
    assert rep["rows"][0]["c"] == "1"
    assert rep["rows"][1]["c"] == "q"
    assert rep["rows"][1]["phi_valuation"] == 4
    assert rep["rows"][1]["power_valuation"] == 1


def test_envelope_p3():
    rep = envelope_basis_check(1, 3)
    assert rep["ok"]
    assert rep["rows"][1]["phi_valuation"] == 9
    assert rep["rows"][1]["power_valuation"] == 1


def test_v_basis_triangular_small():
    assert v_basis_triangular(4, 2) == []
    assert v_basis_triangular(9, 3) == []


def test_v_basis_element_values():
    from qtwist.frobdiv import v_basis_element
    assert v_basis_element(0, 2) == DPElem.one(level_minus_one_ctx(2, cap=16))
    v3 = v_basis_element(3, 2)       # w * delta(w)
    assert max(v3.support()) == 3
    assert is_unit(v3.coeff(3).coeff(0), 2)


# ---------------------------------------------------------------------------
# the diagonal map
# ---------------------------------------------------------------------------

def test_u_p2_closed_value():
    u2 = u_of_divided_power(2, 2)
    assert u2.terms == {(2, 0): LocScalar(ONE), (1, 1): LocScalar(QPoly(-1))}
    assert u_closed_formula(2) == u2


def test_u_kills_divided_frobenius_p2():
    ctx = level_minus_one_ctx(2, SIDE_APRIME)
    img = u_apply(divided_frobenius(DPElem.basis(ctx, 1)))
    assert img.is_zero()


@pytest.mark.parametrize("p", [2, 3])
def test_u_factorial_cleared(p):
    cleared = u_of_divided_power(p, p) * q_factorial(p)
    assert cleared == u_of_twisted_power(p, p)


@pytest.mark.parametrize("p", [2, 3])
def test_u_consistency_report(p):
    rep = u_consistency_check(p)
    assert rep["ok"]
    assert [c["id"] for c in rep["checks"]] == [
        "closed-formula-matches", "factorial-cleared-identity",
        "kills-divided-frobenius"]


def test_u_respects_multiplication():
    # u is a ring map: compare products through the divided images
    p = 2
    ctx0 = level_zero_ctx(p)
    a, b = DPElem.basis(ctx0, 1), DPElem.basis(ctx0, 2)
    lhs = u_apply(a * b)
    rhs = u_apply(a) * u_apply(b)
    assert lhs == rhs
