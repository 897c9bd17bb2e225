import itertools

import pytest

from qtwist.qarith import QPoly, Q, q_factorial, q_int
from qtwist.coordring import CoordPoly, SIDE_A, SIDE_APRIME
from qtwist.divpow import (DegreeCapError, DPContext, DPElem, XiPoly, Y_GENERIC,
                           Y_LEVEL, Y_STANDARD, blowup, dp_structure_terms,
                           frobenius_base_change, to_twisted_basis,
                           twisted_power_expand, twisted_power_mul)

x = CoordPoly.x()


def ctx_level(p, m, **kw):
    return DPContext(p, m, Y_LEVEL, **kw)


def test_twisted_power_expand_basics():
    ctx = ctx_level(2, 0)
    assert twisted_power_expand(0, ctx) == XiPoly((CoordPoly(1),))
    assert twisted_power_expand(1, ctx) == XiPoly.gen()
    ctxg = DPContext(2, 0, Y_GENERIC)
    t2 = twisted_power_expand(2, ctxg)
    # xi^2 + y*xi with the generic symbol in the coefficient slot
    assert t2.coeff(2) == CoordPoly(1)
    assert t2.coeff(1) == CoordPoly.x()
    assert t2.coeff(0).is_zero()


def test_twisted_power_expand_level():
    # at level 0 the i-th factor is xi + (1 - q^i) x
    ctx = ctx_level(3, 0)
    t2 = twisted_power_expand(2, ctx)
    assert t2.coeff(1) == QPoly([1, -1]) * x
    t3 = twisted_power_expand(3, ctx)
    prod = XiPoly.gen() * (XiPoly.gen() + XiPoly((QPoly([1, -1]) * x,))) \
        * (XiPoly.gen() + XiPoly((QPoly([1, 0, -1]) * x,)))
    assert t3 == prod


@pytest.mark.parametrize("p,m,mode", [
    (2, 0, Y_LEVEL), (2, 1, Y_LEVEL), (3, 1, Y_LEVEL),
    (2, 1, Y_STANDARD), (2, 0, Y_GENERIC),
])
def test_twisted_power_mul_against_expansion(p, m, mode):
    ctx = DPContext(p, m, mode)
    for n1, n2 in [(1, 1), (2, 1), (2, 2), (3, 2)]:
        direct = twisted_power_expand(n1, ctx) * twisted_power_expand(n2, ctx)
        recombined = XiPoly((), ctx.side)
        for idx, c in twisted_power_mul(n1, n2, ctx).items():
            recombined = recombined + XiPoly((c,), ctx.side) * twisted_power_expand(idx, ctx)
        assert direct == recombined


def test_twisted_power_mul_closed_values():
    ctx = DPContext(2, 0, Y_GENERIC)
    out = twisted_power_mul(1, 1, ctx)
    assert out[2] == CoordPoly(1)
    assert out[1] == -CoordPoly.x()            # -y
    out = twisted_power_mul(2, 1, ctx)
    assert out[3] == CoordPoly(1)
    assert out[2] == -(q_int(2) * CoordPoly.x())   # -(1+q) y


def test_dp_identity_and_examples():
    ctx = ctx_level(2, 1)
    one = DPElem.one(ctx)
    w = DPElem.basis(ctx, 1)
    assert one * w == w
    ww = w * w
    assert ww.coeff(2) == CoordPoly(q_int(2).stretch(2))
    assert ww.coeff(1) == QPoly([-1, 1]) * x
    ctx0 = ctx_level(2, 0)
    xi = DPElem.basis(ctx0, 1)
    xx = xi * xi
    assert xx.coeff(2) == CoordPoly(q_int(2))
    assert xx.coeff(1) == QPoly([-1, 1]) * x


@pytest.mark.parametrize("p,m", [(2, 0), (2, 1), (3, 1), (5, 2)])
def test_dp_mul_associative_commutative(p, m):
    ctx = ctx_level(p, m)
    for a, b, c in itertools.product(range(3), repeat=3):
        u, v, w = (DPElem.basis(ctx, t) for t in (a, b, c))
        assert u * v == v * u
        assert (u * v) * w == u * (v * w)


@pytest.mark.parametrize("p,m", [(2, 0), (2, 1), (3, 1)])
def test_factorial_map_is_ring_hom(p, m):
    # pushing xi^(n) -> (n)_Q! xi^[n] through both products agrees
    ctx = ctx_level(p, m)
    k = ctx.twist
    for n1 in range(5):
        for n2 in range(5 - n1):
            lhs = DPElem(ctx, {})
            for idx, c in twisted_power_mul(n1, n2, ctx).items():
                lhs = lhs + DPElem.basis(ctx, idx, CoordPoly(q_factorial(idx).stretch(k))) * c
            rhs = (DPElem.basis(ctx, n1, CoordPoly(q_factorial(n1).stretch(k)))
                   * DPElem.basis(ctx, n2, CoordPoly(q_factorial(n2).stretch(k))))
            assert lhs == rhs


def test_generic_structure_constants_are_integral():
    ctx = DPContext(2, 0, Y_GENERIC)
    for n1 in range(7):
        for n2 in range(7):
            for idx, c in dp_structure_terms(ctx, n1, n2):
                for s in c.coeffs:
                    assert s.is_polynomial()


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (2, 2)])
def test_blowup_examples(p, m):
    src = DPContext(p, m, Y_STANDARD)
    tgt = DPContext(p, m, Y_LEVEL)
    z = q_int(p ** m)
    assert blowup(DPElem.one(src), z, tgt) == DPElem.one(tgt)
    b2 = blowup(DPElem.basis(src, 2), z, tgt)
    assert b2 == DPElem.basis(tgt, 2, CoordPoly(q_int(p ** m) ** 2))
    a, b = DPElem.basis(src, 1), DPElem.basis(src, 1)
    assert blowup(a * b, z, tgt) == blowup(a, z, tgt) * blowup(b, z, tgt)


def test_blowup_rejects_mismatched_parameters():
    src = DPContext(2, 1, Y_STANDARD)
    tgt = DPContext(2, 1, Y_LEVEL)
    with pytest.raises(ValueError):
        blowup(DPElem.basis(src, 1), Q, tgt)


def test_frobenius_base_change():
    ctx = ctx_level(2, 1)
    e = DPElem.basis(ctx, 1, x)
    moved = frobenius_base_change(e)
    assert moved.ctx.side == SIDE_APRIME and moved.ctx.qexp == 2
    assert moved.coeff(1) == CoordPoly.x(SIDE_APRIME)
    # coefficient Frobenius applies on scalars
    e2 = DPElem.basis(ctx, 1, CoordPoly(Q))
    assert frobenius_base_change(e2).coeff(1) == CoordPoly(QPoly([0, 0, 1]), SIDE_APRIME)
    a, b = DPElem.basis(ctx, 2), DPElem.basis(ctx, 1)
    assert frobenius_base_change(a * b) == frobenius_base_change(a) * frobenius_base_change(b)


def test_to_twisted_basis_roundtrip():
    ctx = ctx_level(2, 1, qexp=1)
    f = XiPoly.gen() ** 3 + XiPoly((x ** 2,)) * XiPoly.gen() + XiPoly((CoordPoly(5),))
    coeffs = to_twisted_basis(f, ctx)
    back = XiPoly((), SIDE_A)
    for idx, c in coeffs.items():
        back = back + XiPoly((c,), SIDE_A) * twisted_power_expand(idx, ctx)
    assert back == f


def test_degree_cap_enforced():
    ctx = DPContext(2, 1, cap=4)
    with pytest.raises(DegreeCapError):
        DPElem.basis(ctx, 5)
    e = DPElem.basis(ctx, 3)
    with pytest.raises(DegreeCapError):
        e * e


def test_dpelem_serialization():
    ctx = ctx_level(3, 1)
    e = DPElem(ctx, {0: x, 2: CoordPoly(q_int(3))})
    back = DPElem.from_json(e.to_json())
    assert back == e
    assert back.ctx == ctx
