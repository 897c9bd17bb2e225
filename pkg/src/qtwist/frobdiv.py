"""The divided Frobenius on level -1 divided powers and its coefficients.

Two families of scalars drive everything here:

    a(n, i) = sum_{j=0..n} (-1)^(n-j) q^(p(n-j)(n-j-1)/2) C(n,j)_{q^p} C(pj,i)_q
    b(n, i) = (i)_q! / ((n)_{q^p}! (p)_q^n) * a(n, i)

with a(n, i) a polynomial and b(n, i) a member of the localization at
(p, q-1) for n <= i <= pn.  The divided Frobenius maps the level -1
basis element of index n over A' to

    sum_{i=n..pn} b(n, i) x^(pn-i) xi^[i]

over A, semilinearly over the relative Frobenius.  The induced lift of
Frobenius on the level -1 algebra itself sends index n to

    sum_{i=n..pn} (p)_q^i phi(b(n, i)) x^(pn-i) w[i]

and the quotient (phi(e) - e^p)/p is an exact operation.  The top
coefficient b(n, pn) equals the double product of (kp - j)_q over
1 <= k <= n, 1 <= j <= p-1, a unit.

b(n, i) is computed without any generic gcd: the factorial prefactor is
tracked as a vector of cyclotomic exponents and cancelled against a(n, i)
by exact trial division (cyclotomics are irreducible over Q, so whatever
fails to divide is exactly the reduced denominator).
"""

from __future__ import annotations

from functools import lru_cache

from .qarith import (LocScalar, ONE, QPoly, cyclotomic,
                     divide_by_cyclotomic_product, divide_exact, is_unit,
                     q_binomial, q_binomial_pow, q_factorial,
                     q_factorial_cyclotomic_exponents, q_int)
from .coordring import (BiCoordPoly, CoordPoly, SIDE_A, SIDE_APRIME, phi_abs,
                        rel_frobenius, tensor_diagonal_generator,
                        tensor_embed_left)
from .divpow import (DPContext, DPElem, XiPoly, Y_LEVEL, blowup,
                     frobenius_base_change, twisted_power_expand)


class MembershipError(ArithmeticError):
    """A coefficient claimed to lie in the localization failed the check."""


# ---------------------------------------------------------------------------
# coefficient families
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def coeff_a(n, i, p):
    """The polynomial a(n, i); zero for i < n (checked in tests)."""
    if n < 0 or i < 0 or i > p * n:
        raise ValueError(f"coeff_a out of range: n={n}, i={i}, p={p}")
    acc = QPoly()
    for j in range(n + 1):
        if p * j < i:
            continue
        term = (q_binomial_pow(n, j, p) * q_binomial(p * j, i)
                ).shifted(p * (n - j) * (n - j - 1) // 2)
        acc = acc + term if (n - j) % 2 == 0 else acc - term
    return acc


@lru_cache(maxsize=None)
def _factorial_prefactor_exponents(n, p):
    """Cyclotomic exponents of (n)_{q^p}! (p)_q^n (p prime)."""
    out = dict(q_factorial_cyclotomic_exponents(n, p))
    out[p] = out.get(p, 0) + n
    return out


@lru_cache(maxsize=None)
def coeff_b(n, i, p):
    """The scalar b(n, i) as a LocScalar; raises MembershipError if it
    fails to lie in the localization at (p, q-1)."""
    if not (n <= i <= p * n):
        raise ValueError(f"coeff_b out of range: n={n}, i={i}, p={p}")
    num_exp = q_factorial_cyclotomic_exponents(i)
    den_exp = _factorial_prefactor_exponents(n, p)
    net = dict(num_exp)
    for d, e in den_exp.items():
        net[d] = net.get(d, 0) - e
    num = coeff_a(n, i, p)
    to_divide = {}
    for d, e in net.items():
        if e > 0:
            num = num * cyclotomic(d) ** e
        elif e < 0:
            to_divide[d] = -e
    b = divide_by_cyclotomic_product(LocScalar(num), to_divide)
    if not b.in_localization(p):
        raise MembershipError(
            f"b({n},{i}) has non-unit denominator {b.den} at p={p}")
    return b


def leading_coeff_product(n, p):
    """The closed product form of b(n, pn): prod (kp - j)_q, a unit."""
    out = ONE
    for k in range(1, n + 1):
        for j in range(1, p):
            out = out * q_int(k * p - j)
    return LocScalar(out)


class FrobCoeffTable:
    """Lazily filled table of (a, b) coefficient pairs for one prime.

    Backed by the memoized module functions; fills are idempotent, so
    concurrent readers may share a table.
    """

    def __init__(self, p, n_max):
        self.p = p
        self.n_max = n_max

    def rows(self):
        for n in range(self.n_max + 1):
            for i in range(n, self.p * n + 1) if n else [0]:
                a = coeff_a(n, i, self.p)
                b = coeff_b(n, i, self.p) if n <= i else None
                unit = is_unit(b, self.p) if (b is not None and i == self.p * n) else None
                yield {"n": n, "i": i, "a": a, "b": b, "unit_at_top": unit}

    def validate(self):
        """Check membership, the defining identity, and the top coefficient.

        Every value is pinned by cross-multiplication against its defining
        fraction: b * (n)_{q^p}! (p)_q^n = (i)_q! a(n, i), checked with
        plain polynomial products, independent of the reduction pipeline.
        """
        p = self.p
        for n in range(self.n_max + 1):
            prefactor = q_factorial(n).stretch(p) * q_int(p) ** n
            for i in range(n, p * n + 1):
                b = coeff_b(n, i, p)           # raises on membership failure
                lhs = b.num * prefactor
                rhs = b.den * q_factorial(i) * coeff_a(n, i, p)
                if lhs != rhs:
                    raise MembershipError(
                        f"b({n},{i}) fails its defining identity")
            top = coeff_b(n, p * n, p)
            if top != leading_coeff_product(n, p):
                raise MembershipError(f"b({n},{p * n}) != closed product")
            if n and not is_unit(top, p):
                raise MembershipError(f"b({n},{p * n}) is not a unit")
        return True


# ---------------------------------------------------------------------------
# the divided Frobenius and the induced structure on level -1
# ---------------------------------------------------------------------------

def level_minus_one_ctx(p, side=SIDE_A, cap=None):
    kw = {} if cap is None else {"cap": cap}
    return DPContext(p, 1, Y_LEVEL, side, 1, **kw)


def level_zero_ctx(p, side=SIDE_A, cap=None):
    kw = {} if cap is None else {"cap": cap}
    return DPContext(p, 0, Y_LEVEL, side, 1, **kw)


def divided_frobenius(e):
    """Divided Frobenius: level -1 over A' to level 0 over A.

    Index n maps to sum_{i=n..pn} b(n,i) x^(pn-i) xi^[i]; coefficients go
    through the relative Frobenius.
    """
    ctx = e.ctx
    if ctx.m != 1 or ctx.side != SIDE_APRIME or ctx.y_mode != Y_LEVEL or ctx.qexp != 1:
        raise ValueError("divided_frobenius expects level -1 over A'")
    p = ctx.p
    out_ctx = level_zero_ctx(p, cap=ctx.cap)
    out = DPElem(out_ctx, {})
    for n, g in e.terms.items():
        fg = rel_frobenius(g, p)
        img = DPElem(out_ctx,
                     {i: CoordPoly.monomial(coeff_b(n, i, p), p * n - i)
                      for i in range(n, p * n + 1)})
        out = out + img * fg
    return out


def phi_dp(e):
    """Frobenius lift on the level -1 algebra (same algebra, semilinear)."""
    ctx = e.ctx
    if ctx.m != 1 or ctx.y_mode != Y_LEVEL or ctx.qexp != 1:
        raise ValueError("phi_dp expects a level -1 context")
    p = ctx.p
    pq = q_int(p)
    out = DPElem(ctx, {})
    for n, g in e.terms.items():
        img = DPElem(
            ctx,
            {i: CoordPoly.monomial(
                coeff_b(n, i, p).subs_qpow(p) * pq ** i, p * n - i, ctx.side)
             for i in range(n, p * n + 1)})
        out = out + img * phi_abs(g, p)
    return out


def delta_dp(e):
    """(phi(e) - e^p)/p with exact division of every coefficient."""
    p = e.ctx.p
    diff = phi_dp(e) - e ** p
    return diff.map_coeffs(
        lambda c: c.map_coeffs(lambda s: divide_exact(s, p)))


def symmetric_phi_xi(f, p):
    """Frobenius lift on A[xi] fixing x + xi up to p-th power.

    Applies the coefficient Frobenius and substitutes
    xi -> (x + xi)^p - x^p.
    """
    side = f.side
    x = XiPoly((CoordPoly.x(side),), side)
    xi = XiPoly.gen(side)
    image = (x + xi) ** p - x ** p
    acc = XiPoly((), side)
    power = XiPoly((CoordPoly(1, side),), side)
    for c in f.coeffs:
        acc = acc + power * phi_abs(c, p)
        power = power * image
    return acc


def symmetric_delta_xi(f, p):
    """delta on A[xi] extending delta of A with x + xi of rank one."""
    diff = symmetric_phi_xi(f, p) - f ** p
    return diff.map_coeffs(lambda c: c.map_coeffs(lambda s: divide_exact(s, p)))


def phi_level_zero(e):
    """Frobenius lift on level 0 divided powers over A.

    Composite of the semilinear base change, the blow-up by (p)_q into
    level -1 over A', and the divided Frobenius; the generator maps to
    (p)_q times the level -1 generator along the way.
    """
    ctx = e.ctx
    if ctx.m != 0 or ctx.side != SIDE_A or ctx.y_mode != Y_LEVEL or ctx.qexp != 1:
        raise ValueError("phi_level_zero expects level 0 over A")
    moved = frobenius_base_change(e)
    tgt = level_minus_one_ctx(ctx.p, SIDE_APRIME, cap=ctx.cap)
    blown = blowup(moved, q_int(ctx.p), tgt)
    return divided_frobenius(blown)


# ---------------------------------------------------------------------------
# envelope basis congruences
# ---------------------------------------------------------------------------

def _p_valuation(fr, p):
    if fr == 0:
        return None
    v = 0
    num, den = fr.numerator, fr.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


@lru_cache(maxsize=None)
def delta_iterates(p, r_max, cap=None):
    """(w, delta(w), ..., delta^r_max(w)) on level -1 over A."""
    ctx = level_minus_one_ctx(p, cap=cap)
    out = [DPElem.basis(ctx, 1)]
    for _ in range(r_max):
        out.append(delta_dp(out[-1]))
    return tuple(out)

def envelope_basis_check(r_max, p, cap=None, val_cap=32):
    """Congruences delta^r(w) = c_r w[p^r] + lower terms, c_r a unit.

    Also records, at q = 1, the p-adic valuations of the top coefficients
    of phi(w[p^r]) and (w[p^r])^p (expected p^(r+1) and 1); these rows
    are only produced while p^(r+1) <= val_cap, since they need the
    coefficient table up to index p^r.  Returns a report dict; raises
    nothing, failures are flagged in the rows.
    """
    if cap is None:
        cap = max(p ** r_max, min(p ** (r_max + 1), val_cap), 16)
    ctx = level_minus_one_ctx(p, cap=cap)
    iterates = delta_iterates(p, r_max, cap=cap)
    rows = []
    ok = True
    for r, elem in enumerate(iterates):
        target = p ** r
        support_ok = all(n <= target for n in elem.support())
        c = elem.coeff(target)
        constant_ok = c.degree <= 0
        c0 = c.coeff(0)
        unit_ok = is_unit(c0, p)
        row = {"r": r, "congruent": support_ok and constant_ok,
               "c": str(c0), "c_unit": unit_ok}
        if p ** (r + 1) <= min(cap, val_cap):
            basis = DPElem.basis(ctx, target)
            top_phi = phi_dp(basis).coeff(p ** (r + 1)).coeff(0)
            top_pow = (basis ** p).coeff(p ** (r + 1)).coeff(0)
            vphi = _p_valuation(top_phi.at_one(), p)
            vpow = _p_valuation(top_pow.at_one(), p)
            row["phi_valuation"] = vphi
            row["power_valuation"] = vpow
            row["valuations_ok"] = (vphi == p ** (r + 1) and vpow == 1)
            ok = ok and row["valuations_ok"]
        ok = ok and row["congruent"] and row["c_unit"]
        rows.append(row)
    return {"p": p, "r_max": r_max, "ok": ok, "rows": rows}


def v_basis_element(n, p, cap=None):
    """v_n: product of (delta^r(w))^(digit r of n in base p)."""
    digits = []
    t = n
    while t:
        digits.append(t % p)
        t //= p
    if cap is None:
        cap = max(n, 16)
    iterates = delta_iterates(p, max(len(digits) - 1, 0), cap=cap)
    out = DPElem.one(iterates[0].ctx)
    for r, a in enumerate(digits):
        out = out * iterates[r] ** a
    return out


def v_basis_triangular(n_max, p):
    """Check the v-basis change is triangular with unit diagonal.

    Powers of the delta-iterates are shared across all n up to n_max.
    """
    cap = max(n_max, 16)
    r_top = 0
    while p ** (r_top + 1) <= n_max:
        r_top += 1
    iterates = delta_iterates(p, r_top, cap)
    powers = [[DPElem.one(it.ctx), it] for it in iterates]

    def power(r, a):
        row = powers[r]
        while len(row) <= a:
            row.append(row[-1] * row[1])
        return row[a]

    failures = []
    for n in range(n_max + 1):
        v = None
        t, r = n, 0
        while t:
            a = t % p
            if a:
                w = power(r, a)
                v = w if v is None else v * w
            t //= p
            r += 1
        if v is None:
            v = DPElem.one(iterates[0].ctx)
        if any(k > n for k in v.support()):
            failures.append((n, "support"))
            continue
        lead = v.coeff(n)
        if lead.degree > 0 or not is_unit(lead.coeff(0), p):
            failures.append((n, "diagonal"))
    return failures


# ---------------------------------------------------------------------------
# the map into A tensor_{A'} A
# ---------------------------------------------------------------------------

def u_of_twisted_power(n, p):
    """Image of the n-th twisted power under xi -> 1 tensor x - x tensor 1."""
    ctx = level_zero_ctx(p, cap=max(n, 16))
    expansion = twisted_power_expand(n, ctx)
    gen = tensor_diagonal_generator(p)
    img = expansion.subst(gen, lambda c: tensor_embed_left(c, p))
    return img if img is not None else BiCoordPoly(p)


@lru_cache(maxsize=None)
def u_of_divided_power(n, p):
    """Image of the n-th divided power, by clearing the q-factorial.

    The target is free over the base, so the divided image is the unique
    solution of (n)_q! * u = image of the twisted power; every coefficient
    must land in the localization (MembershipError otherwise).
    """
    img = u_of_twisted_power(n, p)
    factors = q_factorial_cyclotomic_exponents(n)

    def div(c):
        out = divide_by_cyclotomic_product(c, factors)
        if not out.in_localization(p):
            raise MembershipError(
                f"u on divided power {n} leaves the localization: {out.den}")
        return out

    return img.map_coeffs(div)


def u_closed_formula(p):
    """Closed form of the image of the p-th divided power.

    x^p picks up (1-q) (h)_{q^p} / (p-1)_q! with h = (p-1)/2 for odd p
    (coefficient 1 at p = 2), and x1^i x2^(p-i) picks up
    (-1)^i q^(i(i-1)/2) / ((i)_q! (p-i)_q!).
    """
    terms = {}
    if p == 2:
        terms[(2, 0)] = LocScalar(ONE)
    else:
        num = QPoly([1, -1]) * q_int(p * (p - 1) // 2)   # (1-q)(p(p-1)/2)_q
        facs = dict(q_factorial_cyclotomic_exponents(p))
        terms[(p, 0)] = divide_by_cyclotomic_product(LocScalar(num), facs)
    for i in range(1, p):
        sign = -1 if i % 2 else 1
        num = QPoly((0,) * (i * (i - 1) // 2) + (sign,))
        facs = dict(q_factorial_cyclotomic_exponents(i))
        for d, e in q_factorial_cyclotomic_exponents(p - i).items():
            facs[d] = facs.get(d, 0) + e
        terms[(i, p - i)] = divide_by_cyclotomic_product(LocScalar(num), facs)
    return BiCoordPoly(p, terms)


def u_apply(e):
    """Extend the diagonal map to a level 0 divided-power element over A."""
    ctx = e.ctx
    if ctx.m != 0 or ctx.side != SIDE_A or ctx.y_mode != Y_LEVEL:
        raise ValueError("u_apply expects level 0 over A")
    p = ctx.p
    out = BiCoordPoly(p)
    for n, c in e.terms.items():
        out = out + tensor_embed_left(c, p) * u_of_divided_power(n, p)
    return out


def u_consistency_check(p, n_cap=None):
    """Exercise the diagonal map against its defining identities.

    (a) the closed formula for the p-th divided image matches the
        factorial-cleared computation and has coefficients in the
        localization;
    (b) (p)_q! times the divided image equals the twisted-power image;
    (c) the composite with the divided Frobenius kills every positive
        basis element up to n_cap (default p).
    """
    if n_cap is None:
        n_cap = p
    report = {"p": p, "checks": []}
    closed = u_closed_formula(p)
    computed = u_of_divided_power(p, p)
    in_r = all(c.in_localization(p) for c in closed.terms.values())
    report["checks"].append({
        "id": "closed-formula-matches",
        "ok": closed == computed and in_r,
        "detail": f"{len(closed.terms)} coefficients, all in localization: {in_r}",
    })
    cleared = computed * q_factorial(p)
    direct = u_of_twisted_power(p, p)
    report["checks"].append({
        "id": "factorial-cleared-identity",
        "ok": cleared == direct,
        "detail": "factorial times divided image vs twisted-power image",
    })
    ctx = level_minus_one_ctx(p, SIDE_APRIME, cap=max(p * n_cap, 16))
    killed = []
    for n in range(1, n_cap + 1):
        img = u_apply(divided_frobenius(DPElem.basis(ctx, n)))
        killed.append(img.is_zero())
    report["checks"].append({
        "id": "kills-divided-frobenius",
        "ok": all(killed),
        "detail": f"indices 1..{n_cap}: {killed}",
    })
    report["ok"] = all(c["ok"] for c in report["checks"])
    return report
