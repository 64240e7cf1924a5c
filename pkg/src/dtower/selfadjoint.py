"""Constructors and normalizers for self-adjoint operators.

These are the building blocks of every tower decomposition.  The closed
forms for orders 1-3 match the printed shapes; the general-order
constructor symmetrizes an arbitrary operator, which agrees with the
explicit coefficient cascade wherever both are defined.
"""

from __future__ import annotations

import random
from fractions import Fraction

import sympy

from .diffop import DiffOperator, adjoint, is_self_adjoint, op_mul
from .qx import Poly, RatFunc


def make_order1(a1: RatFunc) -> DiffOperator:
    """a1*Dx + a1'/2."""
    a1 = RatFunc._coerce(a1)
    if a1.is_zero():
        raise ValueError("leading coefficient must be nonzero")
    return DiffOperator([a1.derivative() / 2, a1])


def make_order2(a2: RatFunc, a0: RatFunc) -> DiffOperator:
    """a2*Dx^2 + a2'*Dx + a0."""
    a2 = RatFunc._coerce(a2)
    a0 = RatFunc._coerce(a0)
    if a2.is_zero():
        raise ValueError("leading coefficient must be nonzero")
    return DiffOperator([a0, a2.derivative(), a2])


def make_order3(a3: RatFunc, a1: RatFunc) -> DiffOperator:
    """a3*Dx^3 + (3/2)*a3'*Dx^2 + a1*Dx + a1'/2 - a3'''/4."""
    a3 = RatFunc._coerce(a3)
    a1 = RatFunc._coerce(a1)
    if a3.is_zero():
        raise ValueError("leading coefficient must be nonzero")
    a3ppp = a3.derivative().derivative().derivative()
    return DiffOperator([
        a1.derivative() / 2 - a3ppp / 4,
        a1,
        a3.derivative() * Fraction(3, 2),
        a3,
    ])


def symmetrize(P: DiffOperator) -> DiffOperator:
    """(P + adjoint(P)) / 2; self-adjoint, same order when lc survives."""
    return (P + adjoint(P)) / RatFunc.const(2)


def random_self_adjoint(order: int, coeff_degree: int, seed: int) -> DiffOperator:
    """Deterministic random self-adjoint operator.

    Integer polynomial coefficients drawn from [-9, 9]; the leading
    coefficient has degree exactly coeff_degree.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    rng = random.Random(seed)

    def rand_poly(deg, exact=False):
        while True:
            cs = [rng.randint(-9, 9) for _ in range(deg + 1)]
            if exact:
                while cs[-1] == 0:
                    cs[-1] = rng.randint(-9, 9)
            p = Poly(cs)
            if not p.is_zero():
                return p

    coeffs = [RatFunc(rand_poly(coeff_degree)) for _ in range(order)]
    coeffs.append(RatFunc(rand_poly(coeff_degree, exact=True)))
    return symmetrize(DiffOperator(coeffs))


def right_normalize_self_adjoint(L: DiffOperator):
    """A rational f with L*f self-adjoint, or None.

    The self-adjoint shape forces coefficient q-1 of an order-q operator
    to be (q/2) times the derivative of the leading coefficient.  Written
    for L*f this is a first-order condition f'/f = g with g rational; f
    is rational exactly when g is a logarithmic derivative of a rational
    function, which is decided through the squarefree/partial-fraction
    structure of g.  The candidate is then verified in full.
    """
    q = L.order
    if q < 1:
        raise ValueError("order >= 1 required")
    aq = L.lc()
    aqm1 = L[q - 1]
    # f'/f = (aq' - (2/q) a_{q-1}) / aq
    g = (aq.derivative() - aqm1 * Fraction(2, q)) / aq
    f = _rational_antilog(g)
    if f is None:
        return None
    if not is_self_adjoint(op_mul(L, DiffOperator([f]))):
        return None
    return f


def _rational_antilog(g: RatFunc):
    """Rational f with f'/f = g, or None if no such f exists."""
    if g.is_zero():
        return RatFunc.const(1)
    num, den = g.num, g.den
    if den.degree == 0:
        return None  # nonzero polynomial part integrates to a non-log
    if num.degree >= den.degree:
        return None
    # denominator must be squarefree
    if den.gcd(den.derivative()).degree > 0:
        return None
    factors = _factor_over_q(den)
    f = RatFunc.const(1)
    for fac in factors:
        # residue against this factor: e = (num * (den/fac)^{-1} mod fac) / fac' mod fac
        cof = den / fac
        inv_cof = _inverse_mod(cof, fac)
        if inv_cof is None:
            return None
        u = (num * inv_cof) % fac
        inv_dfac = _inverse_mod(fac.derivative() % fac, fac)
        if inv_dfac is None:
            return None
        e = (u * inv_dfac) % fac
        if e.degree > 0:
            return None
        ev = e[0] if not e.is_zero() else Fraction(0)
        if ev.denominator != 1:
            return None
        f = f * RatFunc(fac) ** int(ev)
    return f


def _factor_over_q(p: Poly):
    """Monic irreducible factors of p over Q (multiplicity dropped)."""
    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x ** i
               for i, c in enumerate(p.cs))
    _, facs = sympy.factor_list(sympy.Poly(expr, x))
    out = []
    for fac, _mult in facs:
        cs = [Fraction(c.p, c.q) for c in reversed(sympy.Poly(fac, x).all_coeffs())]
        out.append(Poly(cs).monic())
    return out


def _inverse_mod(a: Poly, m: Poly):
    """Inverse of a modulo m in Q[x], or None if gcd(a, m) != 1."""
    a = a % m
    if a.is_zero():
        return None
    r0, r1 = m, a
    s0, s1 = Poly(), Poly.const(1)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if r0.degree != 0:
        return None
    return (s0 / r0.lc()) % m
