"""Twisted powers and twisted divided-power algebras.

A context fixes a prime p, a level parameter m >= 0, a twist mode and a
side.  The underlying twist variable is Q := q^(qexp * p^m) where qexp
is 1 on side A and may become p after base change.  The twist parameter
y is, per mode:

* ``"level"``     y = (1 - q^qexp) x      (divided powers of level -m)
* ``"standard"``  y = (1 - Q) x           (ordinary twist at Q)
* ``"generic"``   y is its own symbol; coefficients are read as
                  polynomials in y instead of x.

Basis symbols are written xi^[n] below; they multiply by

    xi^[n1] xi^[n2] =
        sum_i (-1)^i Q^(i(i-1)/2) C(n1, i)_Q C(n1+n2-i, n1)_Q y^i xi^[n1+n2-i]

over 0 <= i <= min(n1, n2).  For concrete modes the constants are taken
from this closed form; for generic y they are recomputed independently in
Q(q) by clearing q-factorials out of products of twisted powers, with an
integrality assertion (the two routes agreeing is part of the test suite).

The divided powers are formal basis symbols: the algebra is never embedded
in a polynomial ring, since the q-factorials are not invertible here.
"""

from __future__ import annotations

from functools import lru_cache

from .qarith import (LocScalar, ONE, QPoly, QRat, q_binomial, q_binomial_pow,
                     q_factorial, q_int_pow)
from .coordring import (CoordPoly, SIDE_A, SIDE_APRIME, SideMismatchError,
                        pullback_map)

DEFAULT_DEGREE_CAP = 16

Y_GENERIC = "generic"
Y_LEVEL = "level"
Y_STANDARD = "standard"


class DegreeCapError(ValueError):
    """A divided-power index exceeded the configured cap."""


class IntegralityError(ArithmeticError):
    """A structure constant failed to normalize into the base ring."""


class DPContext:
    """Parameters of a twisted divided-power algebra."""

    __slots__ = ("p", "m", "y_mode", "side", "qexp", "cap")

    def __init__(self, p, m=0, y_mode=Y_LEVEL, side=SIDE_A, qexp=1,
                 cap=DEFAULT_DEGREE_CAP):
        if p not in (2, 3, 5, 7):
            raise ValueError("desk-scale contexts support p in {2, 3, 5, 7}")
        if not 0 <= m <= 3:
            raise ValueError("level parameter m must be in 0..3")
        if y_mode not in (Y_GENERIC, Y_LEVEL, Y_STANDARD):
            raise ValueError(f"unknown y_mode {y_mode!r}")
        if side not in (SIDE_A, SIDE_APRIME):
            raise SideMismatchError(f"unknown side {side!r}")
        self.p = p
        self.m = m
        self.y_mode = y_mode
        self.side = side
        self.qexp = qexp
        self.cap = cap

    @property
    def twist(self):
        """Exponent k with twist variable q^k."""
        return self.qexp * self.p ** self.m

    def y_scale(self):
        """The scalar c with y = c*x, or None in generic mode."""
        if self.y_mode == Y_GENERIC:
            return None
        if self.y_mode == Y_LEVEL:
            return ONE - QPoly((0,) * self.qexp + (1,))
        return ONE - QPoly((0,) * self.twist + (1,))

    def y_coordpoly(self):
        """y as a CoordPoly (the bare symbol in generic mode)."""
        c = self.y_scale()
        if c is None:
            return CoordPoly.x(self.side)
        return CoordPoly.monomial(c, 1, self.side)

    def __eq__(self, other):
        if not isinstance(other, DPContext):
            return NotImplemented
        return (self.p, self.m, self.y_mode, self.side, self.qexp) == \
               (other.p, other.m, other.y_mode, other.side, other.qexp)

    def __hash__(self):
        return hash((self.p, self.m, self.y_mode, self.side, self.qexp))

    def __repr__(self):
        return (f"DPContext(p={self.p}, m={self.m}, y_mode={self.y_mode!r}, "
                f"side={self.side!r}, qexp={self.qexp})")

    def to_json(self):
        return {"p": self.p, "m": self.m, "y_mode": self.y_mode,
                "side": self.side, "qexp": self.qexp, "cap": self.cap}

    @classmethod
    def from_json(cls, data):
        return cls(data["p"], data["m"], data["y_mode"], data["side"],
                   data.get("qexp", 1), data.get("cap", DEFAULT_DEGREE_CAP))


# ---------------------------------------------------------------------------
# polynomials in xi over A (monomial basis)
# ---------------------------------------------------------------------------

class XiPoly:
    """Polynomial in xi with CoordPoly coefficients (monomial basis)."""

    __slots__ = ("side", "coeffs")

    def __init__(self, coeffs=(), side=SIDE_A):
        if isinstance(coeffs, CoordPoly):
            side, coeffs = coeffs.side, (coeffs,)
        cs = [c if isinstance(c, CoordPoly) else CoordPoly(c, side) for c in coeffs]
        for c in cs:
            if c.side != side:
                raise SideMismatchError("mixed sides in XiPoly")
        while cs and cs[-1].is_zero():
            cs.pop()
        self.side = side
        self.coeffs = tuple(cs)

    @classmethod
    def gen(cls, side=SIDE_A):
        return cls((CoordPoly((), side), CoordPoly(1, side)), side)

    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def coeff(self, d):
        if 0 <= d < len(self.coeffs):
            return self.coeffs[d]
        return CoordPoly((), self.side)

    def __eq__(self, other):
        if not isinstance(other, XiPoly):
            return NotImplemented
        return self.side == other.side and self.coeffs == other.coeffs

    def __add__(self, other):
        if isinstance(other, (int, QPoly, LocScalar)):
            other = CoordPoly(other, self.side)
        if isinstance(other, CoordPoly):
            other = XiPoly((other,), self.side)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return XiPoly(out, self.side)

    def __neg__(self):
        return XiPoly(tuple(-c for c in self.coeffs), self.side)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, QPoly, LocScalar, CoordPoly)):
            return XiPoly(tuple(c * other for c in self.coeffs), self.side)
        if not isinstance(other, XiPoly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return XiPoly((), self.side)
        out = [CoordPoly((), self.side)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return XiPoly(out, self.side)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = XiPoly((CoordPoly(1, self.side),), self.side)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def map_coeffs(self, fn):
        return XiPoly(tuple(fn(c) for c in self.coeffs), self.side)

    def subst(self, value, embed):
        """Evaluate at xi = value, embedding coefficients with ``embed``.

        Horner scheme; returns None for the zero polynomial (the caller
        supplies its own zero since the target ring is not known here).
        """
        acc = None
        for c in reversed(self.coeffs):
            e = embed(c)
            acc = e if acc is None else value * acc + e
        return acc

    def __repr__(self):
        parts = [f"({c})*xi^{d}" for d, c in enumerate(self.coeffs) if not c.is_zero()]
        return " + ".join(parts) or "0"


def twisted_power_expand(n, ctx):
    """The n-th twisted power expanded in the monomial basis of A[xi].

    Product over 0 <= i < n of (xi + q_int(i, Q) * y), with Q and y from
    the context.
    """
    if n < 0:
        raise ValueError("twisted power index must be >= 0")
    out = XiPoly((CoordPoly(1, ctx.side),), ctx.side)
    xi = XiPoly.gen(ctx.side)
    y = ctx.y_coordpoly()
    for i in range(n):
        out = out * (xi + XiPoly((y * q_int_pow(i, ctx.twist),), ctx.side))
    return out


def to_twisted_basis(f, ctx):
    """Coefficients of f in the twisted-power basis, by back-substitution.

    The twisted powers are monic of strictly increasing degree, so the
    change of basis is triangular.
    """
    rem = f
    out = {}
    for d in range(f.degree, -1, -1):
        c = rem.coeff(d)
        if c.is_zero():
            continue
        out[d] = c
        rem = rem - XiPoly((c,), ctx.side) * twisted_power_expand(d, ctx)
    assert rem.is_zero()
    return out


@lru_cache(maxsize=None)
def _struct_consts_closed(n1, n2, k):
    """Structure constants from the closed form, as pairs (i, QPoly).

    The y-power and the sign are left out: entry i carries
    Q^(i(i-1)/2) C(n1, i)_Q C(n1+n2-i, n1)_Q with Q = q^k.
    """
    out = []
    for i in range(min(n1, n2) + 1):
        g = (q_binomial_pow(n1, i, k) * q_binomial_pow(n1 + n2 - i, n1, k)
             ).shifted(k * (i * (i - 1) // 2))
        out.append((i, g))
    return tuple(out)


@lru_cache(maxsize=None)
def _struct_consts_oracle(n1, n2):
    """Structure constants recomputed in Q(q), at twist q.

    Expands the product of twisted powers by the alternating-sum rule and
    divides by the factorials that turn twisted powers into divided ones.
    Raises IntegralityError if a constant fails to be a polynomial.
    """
    denom = QRat(q_factorial(n1) * q_factorial(n2))
    out = []
    for i in range(min(n1, n2) + 1):
        scalar = QRat(q_factorial(i) * q_binomial(n1, i) * q_binomial(n2, i)
                      ).num.shifted(i * (i - 1) // 2)
        c = QRat(scalar * q_factorial(n1 + n2 - i)) / denom
        if not c.is_polynomial():
            raise IntegralityError(
                f"structure constant ({n1},{n2},{i}) is not integral: {c}")
        out.append((i, c.num))
    return tuple(out)


def dp_structure_terms(ctx, n1, n2):
    """Terms of the product of basis elements n1 and n2.

    Yields (index, CoordPoly coefficient) pairs; uses the closed form for
    concrete y and the field oracle for generic y.
    """
    if ctx.y_mode == Y_GENERIC:
        consts = tuple((i, g.stretch(ctx.twist))
                       for i, g in _struct_consts_oracle(n1, n2))
        c = None
    else:
        consts = _struct_consts_closed(n1, n2, ctx.twist)
        c = ctx.y_scale()
    for i, g in consts:
        sign = -1 if i % 2 else 1
        scal = g * sign if c is None else g * sign * c ** i
        yield n1 + n2 - i, CoordPoly.monomial(scal, i, ctx.side)


def twisted_power_mul(n1, n2, ctx):
    """Product of twisted powers on the twisted-power basis.

    Coefficient of index n1+n2-i is
    (-1)^i (i)_Q! Q^(i(i-1)/2) C(n1,i)_Q C(n2,i)_Q y^i.
    """
    out = {}
    k = ctx.twist
    y = ctx.y_coordpoly()
    for i in range(min(n1, n2) + 1):
        sign = -1 if i % 2 else 1
        scal = (q_factorial(i).stretch(k) * q_binomial_pow(n1, i, k)
                * q_binomial_pow(n2, i, k)).shifted(k * (i * (i - 1) // 2)) * sign
        coeff = y ** i * scal
        if not coeff.is_zero():
            out[n1 + n2 - i] = coeff
    return out


class DPElem:
    """Finitely supported combination of divided-power basis symbols."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms=None):
        self.ctx = ctx
        out = {}
        for n, c in (terms or {}).items():
            if not isinstance(c, CoordPoly):
                c = CoordPoly(c, ctx.side)
            if c.side != ctx.side:
                raise SideMismatchError("coefficient side does not match context")
            if c.is_zero():
                continue
            if n > ctx.cap:
                raise DegreeCapError(
                    f"divided-power index {n} exceeds cap {ctx.cap}")
            out[n] = c
        self.terms = out

    @classmethod
    def one(cls, ctx):
        return cls(ctx, {0: CoordPoly(1, ctx.side)})

    @classmethod
    def basis(cls, ctx, n, coeff=1):
        return cls(ctx, {n: CoordPoly(coeff, ctx.side)})

    def is_zero(self):
        return not self.terms

    def support(self):
        return sorted(self.terms)

    def coeff(self, n):
        return self.terms.get(n, CoordPoly((), self.ctx.side))

    def _check(self, other):
        if self.ctx != other.ctx:
            raise ValueError(f"context mismatch: {self.ctx} vs {other.ctx}")

    def __eq__(self, other):
        if not isinstance(other, DPElem):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for n, c in other.terms.items():
            acc = out.get(n)
            s = c if acc is None else acc + c
            if s.is_zero():
                out.pop(n, None)
            else:
                out[n] = s
        return DPElem(self.ctx, out)

    def __neg__(self):
        return DPElem(self.ctx, {n: -c for n, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, QPoly, LocScalar, CoordPoly)):
            if not isinstance(other, CoordPoly):
                other = CoordPoly(other, self.ctx.side)
            return DPElem(self.ctx,
                          {n: c * other for n, c in self.terms.items()})
        if not isinstance(other, DPElem):
            return NotImplemented
        return dp_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n):
        # repeated multiplication: keeps intermediate support minimal,
        # and the single multiplication kernel is the audited one
        out = DPElem.one(self.ctx)
        for _ in range(n):
            out = out * self
        return out

    def truncate(self, cap):
        """Drop basis indices above cap (reduction mod the filtration)."""
        return DPElem(self.ctx, {n: c for n, c in self.terms.items() if n <= cap})

    def map_coeffs(self, fn):
        return DPElem(self.ctx, {n: fn(c) for n, c in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "DPElem(0)"
        sym = "w" if self.ctx.y_mode == Y_LEVEL and self.ctx.m > 0 else "xi"
        return " + ".join(f"({c})*{sym}[{n}]"
                          for n, c in sorted(self.terms.items()))

    def to_json(self):
        return {"ctx": self.ctx.to_json(),
                "terms": {str(n): c.to_json() for n, c in self.terms.items()}}

    @classmethod
    def from_json(cls, data):
        ctx = DPContext.from_json(data["ctx"])
        return cls(ctx, {int(n): CoordPoly.from_json(c)
                         for n, c in data["terms"].items()})


def dp_mul(u, v):
    """Product in the divided-power algebra, bilinear over the basis rule."""
    u._check(v)
    ctx = u.ctx
    out = {}
    for n1, c1 in u.terms.items():
        for n2, c2 in v.terms.items():
            c12 = c1 * c2
            for n, s in dp_structure_terms(ctx, n1, n2):
                acc = out.get(n)
                t = c12 * s
                out[n] = t if acc is None else acc + t
    return DPElem(ctx, out)


def blowup(e, z, target_ctx):
    """Rescale the twist parameter: basis index n picks up z^n.

    Sends an element with twist parameter z*y to the algebra with twist
    parameter y; contexts must share the twist variable and side, and the
    parameters must satisfy y_src = z * y_tgt.
    """
    src = e.ctx
    if not isinstance(z, CoordPoly):
        z = CoordPoly(z, src.side)
    if z.degree > 0:
        raise ValueError("blow-up factor must be a scalar")
    if (src.twist, src.side) != (target_ctx.twist, target_ctx.side):
        raise ValueError("blow-up requires matching twist variable and side")
    if src.y_mode != Y_GENERIC and target_ctx.y_mode != Y_GENERIC:
        if e.ctx.y_coordpoly() != z * target_ctx.y_coordpoly():
            raise ValueError("blow-up factor does not relate the twist parameters")
    out = {}
    for n, c in e.terms.items():
        out[n] = c * z ** n
    return DPElem(target_ctx, out)


def frobenius_base_change(e):
    """Semilinear base change to the pullback side.

    Sends the basis to itself, applies the coefficient pullback, and
    replaces the twist variable q by q^p (qexp 1 -> p).
    """
    ctx = e.ctx
    if ctx.side != SIDE_A or ctx.qexp != 1:
        raise SideMismatchError("base change starts from side A at qexp 1")
    new_ctx = DPContext(ctx.p, ctx.m, ctx.y_mode, SIDE_APRIME, ctx.p, ctx.cap)
    return DPElem(new_ctx,
                  {n: pullback_map(c, ctx.p) for n, c in e.terms.items()})
