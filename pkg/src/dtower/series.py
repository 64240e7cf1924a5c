"""Truncated exact power series over Q."""

from __future__ import annotations

from fractions import Fraction

from .qx import Poly, RatFunc, _to_fraction


class UnivariateSeries:
    """Coefficients c_0..c_{n-1} with an explicit truncation order n."""

    __slots__ = ("coeffs", "n")

    def __init__(self, coeffs, n=None):
        coeffs = [_to_fraction(c) for c in coeffs]
        if n is None:
            n = len(coeffs)
        if len(coeffs) < n:
            coeffs = coeffs + [Fraction(0)] * (n - len(coeffs))
        self.coeffs = tuple(coeffs[:n])
        self.n = n

    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self):
        return self.n

    def __eq__(self, other):
        return (isinstance(other, UnivariateSeries)
                and self.n == other.n and self.coeffs == other.coeffs)

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def truncate(self, n):
        return UnivariateSeries(list(self.coeffs[:n]), min(n, self.n))

    def __add__(self, other):
        n = min(self.n, other.n)
        return UnivariateSeries([self[i] + other[i] for i in range(n)], n)

    def __sub__(self, other):
        n = min(self.n, other.n)
        return UnivariateSeries([self[i] - other[i] for i in range(n)], n)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _to_fraction(other)
            return UnivariateSeries([a * c for a in self.coeffs], self.n)
        n = min(self.n, other.n)
        out = [Fraction(0)] * n
        for i, a in enumerate(self.coeffs[:n]):
            if a:
                for j in range(n - i):
                    b = other[j]
                    if b:
                        out[i + j] += a * b
        return UnivariateSeries(out, n)

    __rmul__ = __mul__

    def derivative(self):
        if self.n == 0:
            return self
        return UnivariateSeries(
            [i * self.coeffs[i] for i in range(1, self.n)], self.n - 1)

    def __str__(self):
        return " + ".join(f"{c}*x^{i}" for i, c in enumerate(self.coeffs) if c) or "0"

    __repr__ = __str__


def poly_series(p: Poly, n: int) -> UnivariateSeries:
    return UnivariateSeries([p[i] for i in range(n)], n)


def ratfunc_series(f: RatFunc, n: int) -> UnivariateSeries:
    """Taylor expansion of f at 0; requires the denominator nonzero at 0."""
    d0 = f.den[0]
    if d0 == 0:
        raise ZeroDivisionError("coefficient denominator vanishes at 0")
    inv = [Fraction(0)] * n
    if n > 0:
        inv[0] = 1 / d0
        for k in range(1, n):
            s = Fraction(0)
            for j in range(1, min(k, f.den.degree) + 1):
                s += f.den[j] * inv[k - j]
            inv[k] = -s / d0
    return poly_series(f.num, n) * UnivariateSeries(inv, n)


def geometric_series(n: int) -> UnivariateSeries:
    return UnivariateSeries([Fraction(1)] * n, n)
