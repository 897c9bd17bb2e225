import random

import pytest

from qtwist.qarith import LocScalar, QPoly, Q, q_int, random_locscalar
from qtwist.coordring import CoordPoly, q_derivative
from qtwist.divpow import DPContext, DPElem
from qtwist.diffcalc import (TwistedDiffOp, comult, op_apply, op_compose,
                             pairing, taylor)

x = CoordPoly.x()


def gen(p, m, n):
    return TwistedDiffOp.generator(p, m, n)


def rand_op(rng, p, m, support=3, deg=2):
    terms = {n: CoordPoly([random_locscalar(rng, p, 1, 4) for _ in range(deg + 1)])
             for n in range(support + 1) if rng.random() < 0.8}
    return TwistedDiffOp(p, m, terms)


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (2, 2)])
def test_apply_examples(p, m):
    k = p ** m
    f = x ** 2 + Q * x
    assert op_apply(gen(p, m, 0), f) == f
    assert op_apply(gen(p, m, 1), x) == CoordPoly(q_int(k))
    assert op_apply(gen(p, m, 2), x ** 2) == CoordPoly(
        q_int(k) ** 2 * q_int(2).stretch(k))


def test_compose_generators():
    for p, m in [(2, 1), (3, 2)]:
        assert op_compose(gen(p, m, 1), gen(p, m, 1)) == gen(p, m, 2)
        assert op_compose(gen(p, m, 2), gen(p, m, 3)) == gen(p, m, 5)


def test_compose_with_coordinate():
    p, m = 2, 1
    k = p ** m
    c = op_compose(gen(p, m, 1), TwistedDiffOp.scalar(p, m, x))
    assert c.coeff(0) == CoordPoly(q_int(k))
    assert c.coeff(1) == QPoly((0,) * k + (1,)) * x


def test_zero_order_ops_multiply():
    p, m = 3, 1
    f = x ** 2 + 1
    g = 2 * x
    got = op_compose(TwistedDiffOp.scalar(p, m, f), TwistedDiffOp.scalar(p, m, g))
    assert got == TwistedDiffOp.scalar(p, m, f * g)


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1)])
def test_action_respects_composition(p, m):
    rng = random.Random(13 * p + m)
    for _ in range(15):
        a, b = rand_op(rng, p, m), rand_op(rng, p, m)
        f = CoordPoly.monomial(1, rng.randint(0, 8))
        assert op_apply(op_compose(a, b), f) == op_apply(a, op_apply(b, f))


def test_compose_associative_random():
    rng = random.Random(4)
    p, m = 2, 1
    for _ in range(8):
        a, b, c = (rand_op(rng, p, m, 3, 2) for _ in range(3))
        assert op_compose(op_compose(a, b), c) == op_compose(a, op_compose(b, c))


# ---------------------------------------------------------------------------
# Taylor expansions
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (2, 2)])
def test_taylor_examples(p, m):
    t = taylor(x, 3, p, m)
    assert t.coeff(0) == x
    assert t.coeff(1) == CoordPoly(q_int(p ** m))
    assert t.support() == [0, 1]
    assert taylor(CoordPoly(1), 3, p, m) == DPElem.one(t.ctx)


def test_taylor_square_is_product():
    p, m, N = 2, 1, 4
    assert taylor(x * x, N, p, m) == (taylor(x, N, p, m) * taylor(x, N, p, m)).truncate(N)


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1)])
def test_taylor_multiplicative_random(p, m):
    rng = random.Random(17 * p + m)
    N = 5
    for _ in range(25):
        f = CoordPoly([random_locscalar(rng, p, 1, 4) for _ in range(5)])
        g = CoordPoly([random_locscalar(rng, p, 1, 4) for _ in range(5)])
        assert taylor(f * g, N, p, m) == (taylor(f, N, p, m) * taylor(g, N, p, m)).truncate(N)


# ---------------------------------------------------------------------------
# comultiplication and duality
# ---------------------------------------------------------------------------

def test_comult_examples():
    ctx = DPContext(2, 1)
    assert comult(DPElem.one(ctx), 3, 3) == {(0, 0): CoordPoly(1)}
    assert comult(DPElem.basis(ctx, 1), 3, 3) == {
        (0, 1): CoordPoly(1), (1, 0): CoordPoly(1)}
    assert comult(DPElem.basis(ctx, 2), 1, 1) == {(1, 1): CoordPoly(1)}


def test_pairing_examples():
    ctx = DPContext(2, 1)
    assert pairing(gen(2, 1, 2), DPElem.basis(ctx, 2)) == CoordPoly(1)
    assert pairing(gen(2, 1, 2), DPElem.basis(ctx, 1)).is_zero()
    e = DPElem(ctx, {1: x, 3: CoordPoly(2)})
    d = TwistedDiffOp(2, 1, {1: x, 3: CoordPoly(1)})
    assert pairing(d, e) == x * x + 2


def test_pairing_dual_to_comult():
    p, m = 2, 1
    ctx = DPContext(p, m)
    for n1 in range(3):
        for n2 in range(3):
            comp = op_compose(gen(p, m, n1), gen(p, m, n2))
            for i in range(6):
                e = DPElem.basis(ctx, i)
                rhs = CoordPoly(())
                for (i1, i2), c in comult(e, 5, 5).items():
                    rhs = rhs + c * pairing(gen(p, m, n1), DPElem.basis(ctx, i1)) \
                        * pairing(gen(p, m, n2), DPElem.basis(ctx, i2))
                assert pairing(comp, e) == rhs


def test_level_embedding_on_monomials():
    # the generator acts as (p^m)_q^n times the iterated twisted derivative
    for p, m in [(2, 1), (3, 1), (2, 2)]:
        k = p ** m
        mult = LocScalar(q_int(k))
        for n in range(4):
            for d in range(6):
                f = CoordPoly.monomial(1, d)
                oracle = f
                for _ in range(n):
                    oracle = q_derivative(oracle, k)
                assert op_apply(gen(p, m, n), f) == oracle * mult ** n
