"""Bundled data corpus: parsing and pinned metadata."""

import pytest

from dtower.diffop import from_theta, to_theta
from dtower.fixtures import NOT_PRINTED, Fixture, available, load


def test_e2_operator():
    f = load("E2")
    L = f.payload
    assert L.order == 7
    # theta form round-trips and the cleared coefficients stay low degree
    assert from_theta(to_theta(L)) == L
    for i in range(8):
        num = L[i].num
        assert L[i].den.degree == 0
        assert num.degree <= L.order + 2


def test_3f2_operator():
    L = load("3F2").payload
    assert L.order == 3
    assert from_theta(to_theta(L)) == L


def test_p43_pins():
    p = load("p43").payload
    assert p.degree == 43
    assert p.lc() == 697115132002046172480720076800000


def test_p10_pins():
    p = load("p10").payload
    assert p.degree == 10
    assert p[0] == -1453000612770


def test_all_polynomials_parse_with_pins():
    for name in ("p10", "p12", "p21", "p22", "p28", "p43"):
        f = load(name)
        assert f.kind == "polynomial"
        assert f.payload.degree == int(name[1:])


def test_generic_rational_function():
    f = load("generic")
    assert f.kind == "trivariate"
    R = f.payload
    assert R.den[(0, 0, 0)] == 1
    assert R.den[(1, 0, 0)] == -3
    assert R.den[(0, 1, 0)] == -5
    assert R.den[(0, 0, 1)] == -7
    assert R.den[(1, 1, 0)] == 1
    assert R.den[(0, 1, 2)] == 2
    assert R.den[(2, 0, 2)] == 3


def test_not_printed_names_recorded():
    assert set(NOT_PRINTED) == {"p70", "q70", "p81", "p93", "p123", "p164"}
    for name in NOT_PRINTED:
        f = load(name)
        assert f.kind == "not-printed" and f.payload is None


def test_unknown_name_rejected():
    with pytest.raises(KeyError):
        load("no-such-fixture")


def test_available_lists_everything():
    names = available()
    for want in ("E2", "3F2", "generic", "p43", "p70"):
        assert want in names
