"""Diagonals of trivariate rational functions and ODE guessing from series.

Two independent diagonal methods cross-validate each other: a truncated
trivariate expansion computed slice by slice in the last variable, and a
closed multinomial sum available for the six-monomial denominator
template.  Guessing solves one exact homogeneous system for an
annihilating operator of bounded order and degree and verifies it on
held-out terms.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

import sympy

from .diffop import DiffOperator, apply_to_series
from .linalg import int_kernel
from .qx import Poly, RatFunc
from .series import UnivariateSeries
from .systems import primitive_normalized

DEFAULT_GUESS_MARGIN = 20


class TrivariateRational:
    """num/den with integer-coefficient polynomials in x, y, z.

    Polynomials are sparse dicts {(i, j, k): coefficient}; the
    denominator must have a nonzero constant term so the function
    expands at the origin.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: dict, den: dict):
        self.num = {e: int(c) for e, c in num.items() if c}
        self.den = {e: int(c) for e, c in den.items() if c}
        if not self.den.get((0, 0, 0)):
            raise ValueError("denominator must be nonzero at the origin")

    @classmethod
    def parse(cls, num_text: str, den_text: str) -> "TrivariateRational":
        return cls(_parse_trivariate(num_text), _parse_trivariate(den_text))

    def __str__(self):
        return f"({_format_trivariate(self.num)})/({_format_trivariate(self.den)})"


def _parse_trivariate(text: str) -> dict:
    x, y, z = sympy.symbols("x y z")
    expr = sympy.sympify(text, locals={"x": x, "y": y, "z": z})
    poly = sympy.Poly(sympy.expand(expr), x, y, z)
    out = {}
    for exps, coeff in poly.terms():
        if coeff.q != 1:
            raise ValueError("integer coefficients required")
        out[tuple(int(e) for e in exps)] = int(coeff)
    return out


def _format_trivariate(p: dict) -> str:
    def mono(e):
        parts = []
        for v, d in zip("xyz", e):
            if d == 1:
                parts.append(v)
            elif d > 1:
                parts.append(f"{v}^{d}")
        return "*".join(parts)

    terms = []
    for e in sorted(p, key=lambda e: (sum(e), e)):
        c = p[e]
        m = mono(e)
        if not m:
            terms.append(str(c))
        elif c == 1:
            terms.append(m)
        elif c == -1:
            terms.append(f"-{m}")
        else:
            terms.append(f"{c}*{m}")
    text = " + ".join(terms) if terms else "0"
    return text.replace("+ -", "- ")


def diag_series_expand(R: TrivariateRational, n: int) -> UnivariateSeries:
    """Diagonal coefficients c_M = [x^M y^M z^M] R for M < n.

    The full coefficient array s of R satisfies the convolution
    d0*s(i,j,k) = num(i,j,k) - sum over other denominator terms of
    coeff*s(i-a, j-b, k-c); it is computed one z-slice at a time, keeping
    only as many slices as the denominator's z-degree requires.
    """
    if n < 0:
        raise ValueError("n >= 0 required")
    if n == 0:
        return UnivariateSeries([], 0)
    d0 = R.den[(0, 0, 0)]
    terms = [(e, c) for e, c in R.den.items() if e != (0, 0, 0)]
    zmax = max((e[2] for e, _ in terms), default=0)
    exact = abs(d0) == 1
    inv = d0 if exact else Fraction(1, d0)
    # in-slice terms (z-shift 0) are resolved cell by cell in lexicographic
    # (i, j) order; their x/y shifts always point at finished cells
    deep = [(e, c) for e, c in terms if e[2] > 0]
    flat = [(e[0], e[1], c) for e, c in terms if e[2] == 0]
    slices = []  # slices[-1] is z-degree k-1, etc.
    diag = []
    for k in range(n):
        cur = [[0] * n for _ in range(n)]
        for (a, b, c), coeff in deep:
            if c > k:
                continue
            src = slices[-c]
            for i in range(a, n):
                row = cur[i]
                srow = src[i - a]
                for j in range(b, n):
                    v = srow[j - b]
                    if v:
                        row[j] -= coeff * v
        for (i, j, kk), coeff in R.num.items():
            if kk == k and i < n and j < n:
                cur[i][j] += coeff
        for i in range(n):
            row = cur[i]
            for j in range(n):
                v = row[j]
                for a, b, coeff in flat:
                    if a <= i and b <= j:
                        w = cur[i - a][j - b]
                        if w:
                            v -= coeff * w
                row[j] = v if exact and inv == 1 else \
                    (-v if exact else v * inv)
        diag.append(cur[k][k])
        slices.append(cur)
        if len(slices) > zmax:
            slices.pop(0)
    return UnivariateSeries(diag, n)


# exponent pattern of the six-monomial denominator template
_TEMPLATE = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 2), (2, 0, 2))


def diag_series_multinomial(R: TrivariateRational, n: int) -> UnivariateSeries:
    """Diagonal via the closed multinomial sum for num/(d0 - six monomials).

    Writes the function as (num/d0) / (1 - P) with P supported on
    x, y, z, x*y, y*z^2, x^2*z^2 and sums multinomial terms whose
    x-, y- and z-degrees all equal M.  Raises on any other support.
    """
    if len(R.num) > 1 or (R.num and set(R.num) != {(0, 0, 0)}):
        raise ValueError("template requires a constant numerator")
    extra = set(R.den) - set(_TEMPLATE) - {(0, 0, 0)}
    if extra:
        raise ValueError(f"denominator support outside the template: {sorted(extra)}")
    d0 = R.den[(0, 0, 0)]
    scale = Fraction(R.num.get((0, 0, 0), 0), d0)
    t = [Fraction(-R.den.get(e, 0), d0) for e in _TEMPLATE]
    diag = []
    for M in range(n):
        acc = Fraction(0)
        for m6 in range(M // 2 + 1):
            for m5 in range((M - 2 * m6) // 2 + 1):
                m3 = M - 2 * m5 - 2 * m6
                for m1 in range(M - 2 * m6 + 1):
                    m4 = M - m1 - 2 * m6
                    m2 = m1 + 2 * m6 - m5
                    if m2 < 0:
                        continue
                    ms = (m1, m2, m3, m4, m5, m6)
                    prod = Fraction(1)
                    for tv, m in zip(t, ms):
                        if m:
                            if not tv:
                                prod = Fraction(0)
                                break
                            prod *= tv ** m
                    if not prod:
                        continue
                    mult = factorial(sum(ms))
                    for m in ms:
                        mult //= factorial(m)
                    acc += mult * prod
        diag.append(scale * acc)
    return UnivariateSeries(diag, n)


def _falling(k: int, i: int) -> int:
    out = 1
    for t in range(i):
        out *= k - t
    return out


def required_terms(order: int, degree: int,
                   margin: int = DEFAULT_GUESS_MARGIN) -> int:
    return (order + 1) * (degree + 1) + margin


def guess_operator(s: UnivariateSeries, order: int, degree: int,
                   margin: int = DEFAULT_GUESS_MARGIN):
    """Operator annihilating s with the given order bound and x-degree
    bound in the x^j * theta^i ansatz, or None.

    The ansatz sum u_ij x^j theta^i acts on x^k as k^i x^(k+j), which is
    the normalization under which holonomic guessing degree counts are
    usually quoted.  The linear system uses all but the last `margin`
    terms; any solution is then checked to annihilate the full
    truncation including the held-out terms.  Output is primitive with
    positive leading content.
    """
    if order < 1 or degree < 0 or margin < 1:
        raise ValueError("need order >= 1, degree >= 0, margin >= 1")
    need = required_terms(order, degree, margin)
    if s.n < need:
        raise ValueError(
            f"insufficient series terms: have {s.n}, need at least {need}")
    n_use = s.n - margin
    from math import gcd
    denlcm = 1
    for c in s.coeffs:
        denlcm = denlcm * c.denominator // gcd(denlcm, c.denominator)
    cz = [int(c * denlcm) for c in s.coeffs]
    cols = [(i, j) for i in range(order + 1) for j in range(degree + 1)]
    rows = []
    for t in range(n_use):
        row = []
        for i, j in cols:
            k = t - j
            if 0 <= k and cz[k]:
                row.append(k ** i * cz[k])
            else:
                row.append(0)
        rows.append(row)
    kernel = int_kernel(rows)
    from .diffop import ThetaExpr, from_theta
    for v in kernel:
        terms = {}
        for col, (i, j) in enumerate(cols):
            if v[col]:
                terms[(j, i)] = Fraction(v[col])
        L = from_theta(ThetaExpr(terms))
        if L.is_zero() or L.order < 1:
            continue
        if apply_to_series(L, s).is_zero():
            return primitive_normalized(_strip_common_factor(L))
    return None


def _strip_common_factor(L: DiffOperator) -> DiffOperator:
    """Divide out a polynomial factor common to every coefficient.

    The theta ansatz tends to produce operators of the form g(x) * L0;
    dividing by g on the left keeps the solution space and the order.
    """
    polys, den = L.cleared()
    g = None
    for p in polys:
        if p.is_zero():
            continue
        g = p if g is None else g.gcd(p)
        if g.degree == 0:
            return L
    if g is None or g.degree == 0:
        return L
    return DiffOperator([RatFunc(p / g, den) for p in polys])


def read_series_file(path: str) -> UnivariateSeries:
    """One exact rational per line, in index order; '#' starts a comment."""
    coeffs = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                coeffs.append(Fraction(line))
    return UnivariateSeries(coeffs, len(coeffs))


def write_series_file(path: str, s: UnivariateSeries, header: str = ""):
    with open(path, "w") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        for c in s.coeffs:
            fh.write(f"{c}\n")
