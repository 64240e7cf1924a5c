"""The operator algebra Q(x)<Dx>.

Operators are stored densely as RatFunc coefficients of powers of Dx.
Multiplication follows the Leibniz rule Dx * a = a * Dx + a'.

The adjoint here carries a parity sign:

    adjoint(sum a_i Dx^i) = (-1)^(ord L) * sum (-Dx)^i o a_i

With this convention both a1*Dx + a1'/2 (order one) and
a2*Dx^2 + a2'*Dx + a0 (order two) are self-adjoint, the map is an
involution, anti-multiplicative, and additive on operators whose orders
share one parity.  The plain formal adjoint (no sign) is kept private for
internal use (left division).  Do not change the sign convention to make
a failing identity pass; every identity in the test-suite is stated under
this convention.
"""

from __future__ import annotations

from fractions import Fraction

from .qx import Poly, RatFunc, _to_fraction
from .series import UnivariateSeries, ratfunc_series

_ZERO = RatFunc.const(0)
_ONE = RatFunc.const(1)


class DiffOperator:
    """sum coeffs[i] * Dx^i with RatFunc coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [RatFunc._coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def from_ratfunc(cls, f):
        return cls([f])

    @classmethod
    def const(cls, c):
        return cls([RatFunc.const(c)])

    @classmethod
    def Dx(cls, k=1):
        return cls([_ZERO] * k + [_ONE])

    @classmethod
    def x(cls):
        return cls([RatFunc.x()])

    @classmethod
    def theta(cls):
        return cls([_ZERO, RatFunc.x()])

    # -- structure ----------------------------------------------------

    @property
    def order(self):
        return len(self.coeffs) - 1  # -1 for the zero operator

    def is_zero(self):
        return not self.coeffs

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else _ZERO

    def lc(self):
        return self.coeffs[-1] if self.coeffs else _ZERO

    def __eq__(self, other):
        other = _coerce_op(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        other = _coerce_op(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return DiffOperator([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return DiffOperator([-c for c in self.coeffs])

    def __sub__(self, other):
        other = _coerce_op(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        """Noncommutative product; scalars multiply coefficientwise."""
        if isinstance(other, (int, Fraction, RatFunc, Poly)):
            f = RatFunc._coerce(other)
            return DiffOperator([c * f for c in self.coeffs])
        other = _coerce_op(other)
        if other is NotImplemented:
            return NotImplemented
        return op_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = RatFunc._coerce(other)
            return DiffOperator([c * f for c in self.coeffs])
        if isinstance(other, (RatFunc, Poly)):
            # function times operator = order-0 operator times self
            return op_mul(DiffOperator([RatFunc._coerce(other)]), self)
        return NotImplemented

    def __truediv__(self, other):
        f = RatFunc._coerce(other)
        if f is NotImplemented or isinstance(other, DiffOperator):
            raise TypeError("operators divide only by order-0 quantities")
        return DiffOperator([c / f for c in self.coeffs])

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative operator power")
        out = DiffOperator.const(1)
        for _ in range(n):
            out = op_mul(out, self)
        return out

    # -- printing -----------------------------------------------------

    def cleared(self):
        """(polynomial coefficient list, common denominator Poly).

        The coefficients are primitive integer polynomials times the
        returned overall rational content: L = (content/den) * sum p_i Dx^i.
        """
        den = Poly.const(1)
        for c in self.coeffs:
            g = den.gcd(c.den)
            den = den * (c.den / g)
        polys = [c.num * (den / c.den) for c in self.coeffs]
        return polys, den

    def __str__(self):
        if self.is_zero():
            return "0"
        polys, den = self.cleared()
        # pull out a common integer content for readability
        from math import gcd as _g
        nums, dens = [], []
        for p in polys:
            for c in p.cs:
                nums.append(abs(c.numerator))
                dens.append(c.denominator)
        ld = 1
        for d in dens:
            ld = ld * d // _g(ld, d)
        gn = 0
        for n in nums:
            gn = _g(gn, n * ld)
        scale = Fraction(gn, ld) if gn else Fraction(1)
        parts = []
        for i in range(len(polys) - 1, -1, -1):
            p = polys[i] / scale if scale != 1 else polys[i]
            if p.is_zero():
                continue
            if i == 0:
                term = str(p) if p.degree <= 0 and p.lc() >= 0 else f"({p})"
            else:
                d = "Dx" if i == 1 else f"Dx^{i}"
                if p == Poly.const(1):
                    term = d
                else:
                    term = f"({p})*{d}"
            parts.append(term)
        body = " + ".join(parts)
        prefix = ""
        if scale != 1 or den.degree > 0:
            prefix = f"({scale})" if den.degree == 0 else f"({scale})/({den})"
            return f"{prefix} * ({body})" if prefix else body
        return body

    __repr__ = __str__


def _coerce_op(v):
    if isinstance(v, DiffOperator):
        return v
    if isinstance(v, (int, Fraction)):
        return DiffOperator.const(v)
    if isinstance(v, (RatFunc, Poly)):
        return DiffOperator([RatFunc._coerce(v)])
    return NotImplemented


def op_mul(A: DiffOperator, B: DiffOperator) -> DiffOperator:
    """Product in Q(x)<Dx> via Dx * a = a * Dx + a'."""
    if A.is_zero() or B.is_zero():
        return DiffOperator.zero()
    # D^k * B computed incrementally
    dkB = list(B.coeffs)
    out = [_ZERO] * (A.order + B.order + 1)
    for i, ai in enumerate(A.coeffs):
        if i > 0:
            # apply one more Dx: coefficients shift up and differentiate
            new = [_ZERO] * (len(dkB) + 1)
            for j, c in enumerate(dkB):
                if c:
                    new[j + 1] = new[j + 1] + c
                    d = c.derivative()
                    if d:
                        new[j] = new[j] + d
            dkB = new
        if ai:
            for j, c in enumerate(dkB):
                if c:
                    out[j] = out[j] + ai * c
    return DiffOperator(out)


def formal_adjoint(L: DiffOperator) -> DiffOperator:
    """Plain formal adjoint sum (-Dx)^i o a_i (no parity sign)."""
    out = DiffOperator.zero()
    D = DiffOperator.Dx()
    power = DiffOperator.const(1)  # (-D)^i
    for i, ai in enumerate(L.coeffs):
        if i > 0:
            power = op_mul(-D, power)
        if ai:
            out = out + op_mul(power, DiffOperator([ai]))
    return out


def adjoint(L: DiffOperator) -> DiffOperator:
    """Parity-signed adjoint: (-1)^ord times the formal adjoint."""
    if L.is_zero():
        return L
    A = formal_adjoint(L)
    return A if L.order % 2 == 0 else -A


def is_self_adjoint(L: DiffOperator) -> bool:
    return adjoint(L) == L


def right_divide(A: DiffOperator, B: DiffOperator):
    """(Q, R) with A = Q*B + R and ord R < ord B."""
    if B.is_zero():
        raise ZeroDivisionError("euclidean division by the zero operator")
    Q = DiffOperator.zero()
    R = A
    while not R.is_zero() and R.order >= B.order:
        t = DiffOperator([_ZERO] * (R.order - B.order) + [R.lc() / B.lc()])
        Q = Q + t
        R = R - op_mul(t, B)
    return Q, R


def left_divide(A: DiffOperator, B: DiffOperator):
    """(Q, R) with A = B*Q + R and ord R < ord B.

    Implemented through the formal adjoint: a(A) = a(Q) a(B) + a(R).
    """
    if B.is_zero():
        raise ZeroDivisionError("euclidean division by the zero operator")
    q, r = right_divide(formal_adjoint(A), formal_adjoint(B))
    return formal_adjoint(q), formal_adjoint(r)


def apply_to_series(L: DiffOperator, s: UnivariateSeries, n=None) -> UnivariateSeries:
    """First coefficients of L(s); exact.

    Differentiation costs precision, so the result carries
    min(n, len(s) - ord L) coefficients.
    """
    if L.is_zero():
        m = len(s) if n is None else min(n, len(s))
        return UnivariateSeries([], m)
    avail = len(s) - max(L.order, 0)
    m = avail if n is None else min(n, avail)
    if m < 0:
        raise ValueError("series too short for the operator order")
    out = UnivariateSeries([], m)
    d = s
    for i, ai in enumerate(L.coeffs):
        if i > 0:
            d = d.derivative()
        if not ai.is_zero():
            out = out + (ratfunc_series(ai, m) * d.truncate(m))
    return out


def wronskian_logderiv(L: DiffOperator) -> RatFunc:
    """(log W)' = -a_{n-1}/a_n for the Wronskian W of L."""
    if L.order < 1:
        raise ValueError("operator of order >= 1 required")
    return -(L[L.order - 1] / L.lc())


# ---------------------------------------------------------------------------
# theta form, theta = x*Dx
# ---------------------------------------------------------------------------


def _stirling2(n):
    """Rows of Stirling numbers of the second kind up to n."""
    rows = [[1]]
    for m in range(1, n + 1):
        prev = rows[-1]
        row = [0] * (m + 1)
        for k in range(1, m + 1):
            row[k] = (prev[k - 1] if k - 1 < len(prev) else 0) + \
                     k * (prev[k] if k < len(prev) else 0)
        rows.append(row)
    return rows


def _stirling1_signed(n):
    """Rows of signed Stirling numbers of the first kind up to n."""
    rows = [[1]]
    for m in range(1, n + 1):
        prev = rows[-1]
        row = [0] * (m + 1)
        for k in range(m + 1):
            row[k] = (prev[k - 1] if 0 <= k - 1 < len(prev) else 0) - \
                     (m - 1) * (prev[k] if k < len(prev) else 0)
        rows.append(row)
    return rows


class ThetaExpr:
    """Bivariate expansion sum c * x^j * theta^k (j may be negative)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for (j, k), c in (terms or {}).items():
            c = _to_fraction(c)
            if c:
                clean[(int(j), int(k))] = c
        self.terms = dict(sorted(clean.items()))

    def __eq__(self, other):
        return isinstance(other, ThetaExpr) and self.terms == other.terms

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (j, k), c in self.terms.items():
            factors = []
            if c != 1 or (j == 0 and k == 0):
                factors.append(str(c))
            if j:
                factors.append("x" if j == 1 else f"x^{j}")
            if k:
                factors.append("theta" if k == 1 else f"theta^{k}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    __repr__ = __str__


def from_theta(e: ThetaExpr) -> DiffOperator:
    """Expand theta^k = sum S(k,m) x^m Dx^m."""
    if not e.terms:
        return DiffOperator.zero()
    kmax = max(k for (_, k) in e.terms)
    S = _stirling2(kmax)
    x = RatFunc.x()
    coeffs = {}
    for (j, k), c in e.terms.items():
        for m in range(k + 1):
            s = S[k][m]
            if s:
                coeffs[m] = coeffs.get(m, _ZERO) + c * s * x ** (j + m)
    n = max(coeffs) + 1
    return DiffOperator([coeffs.get(i, _ZERO) for i in range(n)])


def to_theta(L: DiffOperator) -> ThetaExpr:
    """Inverse of from_theta via x^i Dx^i = theta(theta-1)...(theta-i+1).

    Requires every a_i * x^{-i} to be a Laurent polynomial; raises
    otherwise (such operators have no finite theta expansion).
    """
    if L.is_zero():
        return ThetaExpr()
    s1 = _stirling1_signed(L.order)
    terms = {}
    for i, ai in enumerate(L.coeffs):
        if ai.is_zero():
            continue
        den = ai.den
        # denominator must be a power of x
        dd = den.degree
        if any(den[j] != 0 for j in range(dd)):
            raise ValueError("operator has no finite theta-form expansion")
        shift = -i - dd
        for j in range(ai.num.degree + 1):
            c = ai.num[j]
            if not c:
                continue
            for k in range(i + 1):
                s = s1[i][k]
                if s:
                    key = (j + shift, k)
                    terms[key] = terms.get(key, Fraction(0)) + c * s
    return ThetaExpr(terms)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------


class OperatorSyntaxError(ValueError):
    pass


class _Parser:
    """Recursive-descent parser evaluating directly in the algebra.

    Grammar: expr := term (('+'|'-') term)*
             term := factor (('*'|'/') factor | implicit-nothing)*
             factor := ('-'|'+') factor | atom ('^' int)?
             atom := INT | 'x' | 'Dx' | 'theta' | '(' expr ')'
    Division is only by order-0 operators.
    """

    def __init__(self, text):
        self.toks = self._lex(text)
        self.pos = 0

    @staticmethod
    def _lex(text):
        toks = []
        i, n = 0, len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                toks.append(("int", int(text[i:j])))
                i = j
            elif text.startswith("Dx", i):
                toks.append(("Dx", None))
                i += 2
            elif text.startswith("theta", i):
                toks.append(("theta", None))
                i += 5
            elif ch == "x":
                toks.append(("x", None))
                i += 1
            elif ch in "+-*/^()":
                toks.append((ch, None))
                i += 1
            else:
                raise OperatorSyntaxError(f"unexpected character {ch!r} at position {i}")
        toks.append(("end", None))
        return toks

    def _peek(self):
        return self.toks[self.pos][0]

    def _next(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def parse(self):
        v = self.expr()
        if self._peek() != "end":
            raise OperatorSyntaxError(f"trailing input near token {self.pos}")
        return v

    def expr(self):
        v = self.term()
        while self._peek() in "+-":
            op, _ = self._next()
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.factor()
        while self._peek() in "*/":
            op, _ = self._next()
            w = self.factor()
            if op == "*":
                v = op_mul(v, w)
            else:
                if w.order != 0:
                    raise OperatorSyntaxError("division only by order-0 expressions")
                v = v / w[0]
        return v

    def factor(self):
        t = self._peek()
        if t in "+-":
            self._next()
            v = self.factor()
            return v if t == "+" else -v
        v = self.atom()
        if self._peek() == "^":
            self._next()
            kind, val = self._next()
            neg = False
            if kind in "+-":
                neg = kind == "-"
                kind, val = self._next()
            if kind != "int":
                raise OperatorSyntaxError("exponent must be an integer literal")
            if neg:
                if v.order != 0:
                    raise OperatorSyntaxError("negative power of a non-order-0 expression")
                return DiffOperator([v[0] ** (-val)])
            return v ** val
        return v

    def atom(self):
        kind, val = self._next()
        if kind == "int":
            return DiffOperator.const(val)
        if kind == "x":
            return DiffOperator.x()
        if kind == "Dx":
            return DiffOperator.Dx()
        if kind == "theta":
            return DiffOperator.theta()
        if kind == "(":
            v = self.expr()
            kind, _ = self._next()
            if kind != ")":
                raise OperatorSyntaxError("unbalanced parenthesis")
            return v
        raise OperatorSyntaxError(f"unexpected token {kind!r}")


def parse_operator(text: str) -> DiffOperator:
    return _Parser(text).parse()


def parse_ratfunc(text: str) -> RatFunc:
    op = parse_operator(text)
    if op.order > 0:
        raise OperatorSyntaxError("expected an order-0 (rational function) expression")
    return op[0] if not op.is_zero() else RatFunc.const(0)
