"""Diagonals of trivariate rational functions and ODE guessing."""

import math
import random
from fractions import Fraction

import pytest

from dtower.diagonal import (TrivariateRational, diag_series_expand,
                             diag_series_multinomial, guess_operator,
                             read_series_file, required_terms,
                             write_series_file)
from dtower.diffop import apply_to_series, parse_operator
from dtower.fixtures import load
from dtower.series import UnivariateSeries, geometric_series


def _central(n):
    return [math.factorial(3 * m) // math.factorial(m) ** 3 for m in range(n)]


# ---------------------------------------------------------------------------
# expansion method
# ---------------------------------------------------------------------------


def test_expand_central_coefficients():
    R = TrivariateRational.parse("1", "1 - x - y - z")
    s = diag_series_expand(R, 4)
    assert [int(c) for c in s.coeffs] == [1, 6, 90, 1680]
    assert _central(4) == [1, 6, 90, 1680]


def test_expand_univariate_degenerate():
    R = TrivariateRational.parse("1", "1 - x")
    s = diag_series_expand(R, 5)
    assert [int(c) for c in s.coeffs] == [1, 0, 0, 0, 0]


def test_expand_bundled_rational_function():
    R = load("generic").payload
    s = diag_series_expand(R, 4)
    assert [int(c) for c in s.coeffs] == [1, 616, 947175, 1812651820]


def test_expand_rejects_vanishing_denominator():
    with pytest.raises(ValueError):
        TrivariateRational.parse("1", "x + y")


# ---------------------------------------------------------------------------
# multinomial closed form
# ---------------------------------------------------------------------------


def test_multinomial_first_values():
    R = load("generic").payload
    s = diag_series_multinomial(R, 3)
    assert int(s[1]) == 616
    assert int(s[2]) == 947175


def test_methods_agree_on_bundled_function():
    R = load("generic").payload
    a = diag_series_expand(R, 12)
    b = diag_series_multinomial(R, 12)
    assert a == b


def test_methods_agree_on_random_instances():
    """Both methods on 20 random six-monomial denominators, 10 terms."""
    rng = random.Random(80)
    for _ in range(20):
        c = [rng.randint(1, 9) for _ in range(6)]
        den = (f"1 - {c[0]}*x - {c[1]}*y - {c[2]}*z + {c[3]}*x*y "
               f"+ {c[4]}*y*z**2 + {c[5]}*x**2*z**2")
        R = TrivariateRational.parse("1", den)
        assert diag_series_expand(R, 10) == diag_series_multinomial(R, 10)


def test_multinomial_template_mismatch_rejected():
    R = TrivariateRational.parse("1", "1 - x - y - z - x*z")
    with pytest.raises(ValueError):
        diag_series_multinomial(R, 3)


def test_integrality_of_diagonal():
    R = load("generic").payload
    s = diag_series_expand(R, 30)
    assert all(c.denominator == 1 for c in s.coeffs)


# ---------------------------------------------------------------------------
# guessing
# ---------------------------------------------------------------------------


def test_guess_geometric():
    L = guess_operator(geometric_series(40), 1, 1)
    assert L is not None
    want = parse_operator("(1-x)*Dx - 1")
    # up to scalar
    assert L == want or L == -want


def test_guess_binomial_power():
    n = 40
    c = [Fraction(1)]
    for k in range(n - 1):
        c.append(c[-1] * 3 * (3 * k + 1) / (k + 1))
    s = UnivariateSeries(c, n)
    L = guess_operator(s, 1, 1)
    assert L is not None
    want = parse_operator("(9*x - 1)*Dx + 3")
    assert L == want or L == -want


def test_guess_soundness_margin_checked():
    R = load("generic").payload
    s = diag_series_expand(R, 40)
    # no order-1 degree-1 operator annihilates this diagonal
    assert guess_operator(s, 1, 1) is None


def test_guess_insufficient_terms_reported():
    with pytest.raises(ValueError) as err:
        guess_operator(geometric_series(5), 2, 2)
    assert str(required_terms(2, 2)) in str(err.value)


def test_guess_output_primitive_normalized():
    L = guess_operator(geometric_series(40), 1, 1)
    # integer polynomial coefficients with positive leading content
    for i in range(L.order + 1):
        assert L[i].den.degree == 0
    assert L.lc().num.lc() > 0


# ---------------------------------------------------------------------------
# series files
# ---------------------------------------------------------------------------


def test_series_file_roundtrip(tmp_path):
    path = str(tmp_path / "series.txt")
    s = UnivariateSeries([Fraction(1), Fraction(-3, 7), Fraction(2)])
    write_series_file(path, s, header="three terms")
    got = read_series_file(path)
    assert got == s
