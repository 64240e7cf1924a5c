"""Exact arithmetic over Q, Q[x] and Q(x).

Poly is a dense univariate polynomial with Fraction coefficients, lowest
degree first.  RatFunc is a normalized quotient of two Polys: the
denominator is monic and coprime to the numerator, so structural equality
decides mathematical equality.  QxMatrix provides the small exact linear
algebra needed by the operator layers; the heavy elimination kernels live
in linalg.py and work on cleared integer polynomials.
"""

from __future__ import annotations

from fractions import Fraction

from . import _intpoly as zp

QQ = Fraction


def _to_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"cannot coerce {type(c).__name__} to a rational")


class Poly:
    """Dense polynomial over Q, coefficients lowest degree first."""

    __slots__ = ("cs",)

    def __init__(self, coeffs=()):
        cs = [_to_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.cs = tuple(cs)

    # -- constructors -------------------------------------------------

    @classmethod
    def const(cls, c):
        return cls([c])

    @classmethod
    def x(cls):
        return cls([0, 1])

    @classmethod
    def from_ints(cls, ints):
        return cls(list(ints))

    # -- structure ----------------------------------------------------

    @property
    def degree(self):
        return len(self.cs) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.cs

    def lc(self):
        return self.cs[-1] if self.cs else Fraction(0)

    def __getitem__(self, i):
        return self.cs[i] if 0 <= i < len(self.cs) else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return isinstance(other, Poly) and self.cs == other.cs

    def __hash__(self):
        return hash(self.cs)

    def __bool__(self):
        return bool(self.cs)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        a, b = self.cs, other.cs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.cs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _to_fraction(other)
            return Poly([a * c for a in self.cs])
        if self.is_zero() or other.is_zero():
            return Poly()
        ca, za = self.int_primitive()
        cb, zb = other.int_primitive()
        prod = zp.zmul(za, zb)
        scale = ca * cb
        return Poly([scale * c for c in prod])

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative polynomial power")
        out, base = Poly.const(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.cs)
        db, lb = other.degree, other.lc()
        q = [Fraction(0)] * max(len(rem) - db, 0)
        while len(rem) - 1 >= db and any(rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < db:
                break
            c = rem[-1] / lb
            k = len(rem) - 1 - db
            q[k] = c
            for j, bj in enumerate(other.cs):
                rem[k + j] -= c * bj
            rem.pop()
        return Poly(q), Poly(rem)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _to_fraction(other)
            return Poly([a / c for a in self.cs])
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def __mod__(self, other):
        return self.divmod(other)[1]

    # -- calculus and helpers -----------------------------------------

    def derivative(self):
        return Poly([i * self.cs[i] for i in range(1, len(self.cs))])

    def eval(self, x):
        acc = Fraction(0)
        x = _to_fraction(x) if not isinstance(x, Fraction) else x
        for c in reversed(self.cs):
            acc = acc * x + c
        return acc

    def shifted(self, x0):
        """p(x0 + t) as a polynomial in t."""
        x0 = _to_fraction(x0)
        # Horner: res = res * (t + x0) + c, highest coefficient first
        res = []
        for c in reversed(self.cs):
            new = [Fraction(0)] * (len(res) + 1)
            for j, rc in enumerate(res):
                new[j] += rc * x0
                new[j + 1] += rc
            new[0] += c
            res = new
        return Poly(res)

    def monic(self):
        if self.is_zero():
            return self
        l = self.lc()
        return Poly([c / l for c in self.cs])

    def int_primitive(self):
        """(content, zcoeffs) with self = content * Poly(zcoeffs), zcoeffs primitive ints."""
        if self.is_zero():
            return Fraction(0), []
        den = 1
        for c in self.cs:
            den = den * c.denominator // _gcd(den, c.denominator)
        ints = [int(c * den) for c in self.cs]
        g, prim = zp.zprimitive(ints)
        return Fraction(g, den), prim

    def gcd(self, other):
        if self.is_zero():
            return other.monic()
        if other.is_zero():
            return self.monic()
        _, za = self.int_primitive()
        _, zb = other.int_primitive()
        g = zp.zgcd(za, zb)
        return Poly.from_ints(g).monic()

    def squarefree_part(self):
        if self.degree < 1:
            return self.monic()
        return (self / self.gcd(self.derivative())).monic()

    # -- printing -----------------------------------------------------

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i in range(len(self.cs) - 1, -1, -1):
            c = self.cs[i]
            if c == 0:
                continue
            if i == 0:
                term = str(c)
            else:
                xpow = "x" if i == 1 else f"x^{i}"
                if c == 1:
                    term = xpow
                elif c == -1:
                    term = f"-{xpow}"
                else:
                    term = f"{c}*{xpow}"
            parts.append(term)
        out = parts[0]
        for t in parts[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    __repr__ = __str__


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


class RatFunc:
    """Normalized rational function: monic denominator, coprime to numerator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, (int, Fraction, str)):
            num = Poly.const(_to_fraction(num))
        if den is None:
            den = Poly.const(1)
        elif isinstance(den, (int, Fraction, str)):
            den = Poly.const(_to_fraction(den))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = Poly(), Poly.const(1)
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num / g, den / g
            l = den.lc()
            if l != 1:
                num, den = num / l, den / l
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------

    @classmethod
    def x(cls):
        return cls(Poly.x())

    @classmethod
    def const(cls, c):
        return cls(Poly.const(c))

    @classmethod
    def _raw(cls, num, den):
        obj = object.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    # -- structure ----------------------------------------------------

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den.degree == 0

    def is_constant(self):
        return self.num.degree <= 0 and self.den.degree == 0

    def as_fraction(self):
        if not self.is_constant():
            raise ValueError("rational function is not a constant")
        return self.num[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc.const(other)
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.is_zero()

    # -- arithmetic ---------------------------------------------------

    @staticmethod
    def _coerce(v):
        if isinstance(v, RatFunc):
            return v
        if isinstance(v, Poly):
            return RatFunc(v)
        if isinstance(v, (int, Fraction, str)):
            return RatFunc.const(_to_fraction(v))
        return NotImplemented

    def __add__(self, other):
        other = RatFunc._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        other = RatFunc._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = RatFunc._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RatFunc._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RatFunc._coerce(other) / self

    def __pow__(self, n):
        if n < 0:
            return RatFunc.const(1) / self ** (-n)
        return RatFunc(self.num ** n, self.den ** n)

    def inverse(self):
        return RatFunc.const(1) / self

    def derivative(self):
        n, d = self.num, self.den
        return RatFunc(n.derivative() * d - n * d.derivative(), d * d)

    def eval(self, x):
        d = self.den.eval(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return self.num.eval(x) / d

    def __str__(self):
        if self.den.degree == 0:
            return str(self.num)
        ns = str(self.num)
        if self.num.degree > 0:
            ns = f"({ns})"
        return f"{ns}/({self.den})"

    __repr__ = __str__


class QxMatrix:
    """Rectangular matrix over Q(x)."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = [[RatFunc._coerce(e) for e in row] for row in rows]
        if rows:
            w = len(rows[0])
            if any(len(r) != w for r in rows):
                raise ValueError("ragged matrix")
        self.rows = rows

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0]) if self.rows else 0

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def transpose(self):
        return QxMatrix([[self.rows[i][j] for i in range(self.nrows)]
                         for j in range(self.ncols)])

    def __eq__(self, other):
        return isinstance(other, QxMatrix) and self.rows == other.rows

    def __mul__(self, other):
        if isinstance(other, QxMatrix):
            if self.ncols != other.nrows:
                raise ValueError("dimension mismatch")
            return QxMatrix([[sum((self.rows[i][k] * other.rows[k][j]
                                   for k in range(self.ncols)), RatFunc.const(0))
                              for j in range(other.ncols)]
                             for i in range(self.nrows)])
        return QxMatrix([[e * other for e in row] for row in self.rows])

    def mul_vector(self, v):
        return [sum((self.rows[i][k] * v[k] for k in range(self.ncols)),
                    RatFunc.const(0)) for i in range(self.nrows)]


def nullspace(M: QxMatrix):
    """Basis of the right kernel of M over Q(x), entries normalized.

    Gauss-Jordan over the fraction field; sizes here are small (the heavy
    cleared-denominator kernels are in linalg.py).
    """
    rows = [list(r) for r in M.rows]
    ncols = M.ncols
    pivots = []  # (row index in echelon list, column)
    echelon = []
    for r in rows:
        r = list(r)
        for ei, (_, pc) in enumerate(pivots):
            if r[pc]:
                factor = r[pc]
                er = echelon[ei]
                r = [a - factor * b for a, b in zip(r, er)]
        pc = next((j for j, a in enumerate(r) if a), None)
        if pc is None:
            continue
        inv = r[pc].inverse()
        r = [a * inv for a in r]
        echelon.append(r)
        pivots.append((len(echelon) - 1, pc))
    # back-substitute to reduced form
    for ei in range(len(echelon) - 1, -1, -1):
        _, pc = pivots[ei]
        for fj in range(ei):
            f = echelon[fj][pc]
            if f:
                echelon[fj] = [a - f * b for a, b in zip(echelon[fj], echelon[ei])]
    pivot_cols = {pc for _, pc in pivots}
    basis = []
    for j in range(ncols):
        if j in pivot_cols:
            continue
        v = [RatFunc.const(0)] * ncols
        v[j] = RatFunc.const(1)
        for ei, (_, pc) in enumerate(pivots):
            v[pc] = -echelon[ei][j]
        basis.append(v)
    return basis


def solve_linear(M: QxMatrix, b):
    """Solution of M * u = b over Q(x) for square nonsingular M.

    Gauss-Jordan over the fraction field; raises ArithmeticError when M
    is singular.  Sizes here are small (system dimensions), the heavy
    integer kernels live in linalg.py.
    """
    n = M.nrows
    if M.ncols != n or len(b) != n:
        raise ValueError("square matrix and matching vector required")
    rows = [list(M.rows[i]) + [RatFunc._coerce(b[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col]), None)
        if piv is None:
            raise ArithmeticError("singular matrix in solve_linear")
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = rows[col][col].inverse()
        rows[col] = [e * inv for e in rows[col]]
        for r in range(n):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [a - f * c for a, c in zip(rows[r], rows[col])]
    return [rows[i][n] for i in range(n)]
