"""Rational solutions of L(y) = 0 by indicial analysis and exact linear algebra.

Local exponents at every irreducible factor of the cleared leading
coefficient bound the denominator of any rational solution; the indicial
polynomial at infinity of the conjugated operator bounds the numerator
degree.  Non-rational singular points are handled by computing the
indicial polynomial with coefficients in Q[x]/(f), so the automatic
bounds cover them too; explicit override bounds force a pure bounded
search instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy

from .diffop import DiffOperator, op_mul
from .linalg import int_kernel
from .qx import Poly, RatFunc
from .selfadjoint import _factor_over_q
from .series import UnivariateSeries

INFINITY = "infinity"


@dataclass(frozen=True)
class IndicialData:
    point: object  # Fraction for a finite point, or INFINITY
    polynomial: Poly  # indicial polynomial in the exponent variable
    integer_roots: tuple

    def __post_init__(self):
        object.__setattr__(self, "integer_roots",
                           tuple(sorted(self.integer_roots)))


@dataclass(frozen=True)
class SolutionBounds:
    numerator_degree: int
    denominator: Poly

    def __post_init__(self):
        if self.numerator_degree < 0:
            raise ValueError("numerator degree must be nonnegative")
        if self.denominator.is_zero():
            raise ValueError("denominator must be nonzero")


@dataclass(frozen=True)
class RationalSolutionSet:
    basis: tuple  # RatFunc basis, content-normalized numerators
    bounds: SolutionBounds
    bounded_search: bool  # True when caller-supplied bounds were used

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)


def _falling_poly(i: int) -> Poly:
    """falling(s, i) = s (s-1) ... (s-i+1) as a polynomial in s."""
    out = Poly.const(1)
    for t in range(i):
        out = out * Poly([Fraction(-t), Fraction(1)])
    return out


def _integer_roots(p: Poly):
    """Sorted integer roots of a nonzero rational-coefficient polynomial."""
    if p.is_zero():
        raise ValueError("zero polynomial has every root")
    s = sympy.Symbol("s")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * s ** i
               for i, c in enumerate(p.cs))
    roots = sympy.Poly(expr, s).ground_roots()
    out = [int(r) for r in roots if r.is_integer]
    return sorted(out)


def _multiplicity(a: Poly, f: Poly):
    """(k, b) with a = f^k * b and f not dividing b."""
    k = 0
    b = a
    while not b.is_zero():
        q, r = b.divmod(f)
        if not r.is_zero():
            break
        b = q
        k += 1
    return k, b


def _indicial_components(L: DiffOperator, f: Poly):
    """Indicial polynomial at the roots of irreducible f.

    Returns the list of its Q[x]/(f)-coefficients (per power of the
    exponent variable), each reduced modulo f.
    """
    polys, _den = L.cleared()
    fp = f.derivative() % f
    local = []
    v = None
    for i, a in enumerate(polys):
        if a.is_zero():
            local.append(None)
            continue
        k, b = _multiplicity(a, f)
        local.append((k, b))
        if v is None or k - i < v:
            v = k - i
    n = L.order
    comps = [Poly() for _ in range(n + 1)]
    for i, entry in enumerate(local):
        if entry is None:
            continue
        k, b = entry
        if k - i != v:
            continue
        lead = b % f
        for _ in range(k):
            lead = (lead * fp) % f
        fall = _falling_poly(i)
        for j in range(fall.degree + 1):
            cj = fall[j]
            if cj:
                comps[j] = comps[j] + lead * cj
    return comps


def _integer_exponents_at_factor(L: DiffOperator, f: Poly):
    """Integer local exponents shared by all roots of irreducible f."""
    comps = _indicial_components(L, f)
    g = Poly()
    deg_f = max(f.degree, 1)
    for t in range(deg_f):
        cs = [comps[j][t] if t <= comps[j].degree else Fraction(0)
              for j in range(len(comps))]
        pt = Poly(cs)
        if pt.is_zero():
            continue
        g = pt if g.is_zero() else g.gcd(pt)
    if g.is_zero():
        return []
    return _integer_roots(g)


def indicial_at(L: DiffOperator, p) -> IndicialData:
    """Indicial polynomial and integer exponents at a finite point or infinity."""
    if L.is_zero() or L.order < 1:
        raise ValueError("operator of order >= 1 required")
    if p == INFINITY or p == float("inf"):
        polys, _den = L.cleared()
        w = max(a.degree - i for i, a in enumerate(polys) if not a.is_zero())
        ind = Poly()
        for i, a in enumerate(polys):
            if not a.is_zero() and a.degree - i == w:
                ind = ind + _falling_poly(i) * a.lc()
        return IndicialData(INFINITY, ind, tuple(_integer_roots(ind)))
    p = Fraction(p)
    f = Poly([-p, Fraction(1)])
    comps = _indicial_components(L, f)
    ind = Poly([c[0] if not c.is_zero() else Fraction(0) for c in comps])
    return IndicialData(p, ind, tuple(_integer_roots(ind)))


def _automatic_bounds(L: DiffOperator) -> SolutionBounds:
    polys, _den = L.cleared()
    lead = polys[-1]
    den = Poly.const(1)
    if lead.degree > 0:
        for f in _factor_over_q(lead):
            roots = _integer_exponents_at_factor(L, f)
            neg = [r for r in roots if r < 0]
            if neg:
                den = den * f ** (-min(neg))
    M = op_mul(L, DiffOperator([RatFunc(Poly.const(1), den)]))
    inf = indicial_at(M, INFINITY)
    cands = [r for r in inf.integer_roots if r >= 0]
    num_deg = max(cands) if cands else 0
    return SolutionBounds(num_deg, den)


def _apply_to_ratfunc(L: DiffOperator, y: RatFunc) -> RatFunc:
    out = RatFunc.const(0)
    cur = y
    for i in range(L.order + 1):
        ai = L[i]
        if ai:
            out = out + ai * cur
        cur = cur.derivative()
    return out


def _polynomial_solutions(M: DiffOperator, deg: int):
    """Basis of polynomial solutions of M of degree <= deg."""
    polys, _den = M.cleared()
    from math import gcd
    lcm = 1
    for a in polys:
        c, _z = a.int_primitive()
        if c:
            lcm = lcm * c.denominator // gcd(lcm, c.denominator)
    zs = []
    for a in polys:
        c, z = a.int_primitive()
        m = c.numerator * (lcm // c.denominator) if c else 0
        zs.append([m * e for e in z])
    width = deg + max((len(z) for z in zs if z), default=1)
    rows = [[0] * (deg + 1) for _ in range(width)]
    for k in range(deg + 1):
        fall = 1
        for i, z in enumerate(zs):
            if i > k:
                break
            if i:
                fall *= k - i + 1
            if not z:
                continue
            for e, coeff in enumerate(z):
                if coeff:
                    rows[k - i + e][k] += fall * coeff
    kernel = int_kernel(rows)
    out = []
    for v in kernel:
        p = Poly([Fraction(c) for c in v])
        if not p.is_zero():
            out.append(p)
    return out


def rational_solutions(L: DiffOperator,
                       override_bounds: SolutionBounds = None) -> RationalSolutionSet:
    """Basis of rational solutions of L(y) = 0.

    With no override the search is complete within automatic indicial
    bounds; with explicit bounds the result is a sound bounded search.
    Every returned solution is verified by exact substitution.
    """
    if L.is_zero() or L.order < 1:
        raise ValueError("operator of order >= 1 required")
    if override_bounds is None:
        bounds = _automatic_bounds(L)
        bounded = False
    else:
        bounds = override_bounds
        bounded = True
    den = bounds.denominator
    M = op_mul(L, DiffOperator([RatFunc(Poly.const(1), den)]))
    basis = []
    for p in _polynomial_solutions(M, bounds.numerator_degree):
        y = RatFunc(p, den)
        if not _apply_to_ratfunc(L, y).is_zero():
            raise ArithmeticError("candidate failed exact verification")
        c, z = y.num.int_primitive()
        y = y / RatFunc.const(c) if c else y
        basis.append(y)
    return RationalSolutionSet(tuple(basis), bounds, bounded)


def hadamard_product(s: UnivariateSeries, t: UnivariateSeries) -> UnivariateSeries:
    """Coefficient-wise product, truncated to the shorter series."""
    n = min(s.n, t.n)
    return UnivariateSeries([a * b for a, b in zip(s.coeffs[:n], t.coeffs[:n])], n)
