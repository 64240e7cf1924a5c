"""Constructors, recognizers and normalizers for self-adjoint operators."""

import random

import pytest

from conftest import rand_ratfunc
from dtower.diffop import (DiffOperator, adjoint, is_self_adjoint, op_mul,
                           parse_operator)
from dtower.qx import Poly, RatFunc
from dtower.selfadjoint import (make_order1, make_order2, make_order3,
                                random_self_adjoint,
                                right_normalize_self_adjoint, symmetrize)

X = RatFunc.x()
ONE = RatFunc.const(1)


def test_make_order1_unit():
    assert make_order1(ONE) == DiffOperator.Dx()


def test_make_order1_halfshift():
    assert make_order1(X) == parse_operator("x*Dx + 1/2")


def test_make_order1_rational_coefficient():
    a1 = RatFunc(Poly.from_ints([1]), Poly.from_ints([1, -1]))
    assert is_self_adjoint(make_order1(a1))


def test_make_order1_zero_rejected():
    with pytest.raises(ValueError):
        make_order1(RatFunc.const(0))


def test_make_order2_basic():
    assert make_order2(ONE, X) == parse_operator("Dx^2 + x")


def test_make_order2_shapes():
    assert is_self_adjoint(make_order2(X * X + 1, RatFunc.const(0)))
    assert is_self_adjoint(make_order2(X, ONE / X))


def test_make_order2_zero_rejected():
    with pytest.raises(ValueError):
        make_order2(RatFunc.const(0), X)


def test_make_order3_basic():
    assert make_order3(ONE, RatFunc.const(0)) == DiffOperator.Dx(3)


def test_make_order3_printed_shape():
    # a3=1, a1=x gives Dx^3 + x*Dx + 1/2
    assert make_order3(ONE, X) == parse_operator("Dx^3 + x*Dx + 1/2")


def test_make_order3_self_adjoint():
    assert is_self_adjoint(make_order3(X, ONE))


def test_symmetrize_euler():
    assert symmetrize(DiffOperator.theta()) == parse_operator("x*Dx + 1/2")


def test_symmetrize_order4():
    P = parse_operator("Dx^4 + x*Dx")
    S = symmetrize(P)
    assert is_self_adjoint(S) and S.order == 4


def test_symmetrize_fixed_point_and_idempotent():
    rng = random.Random(20)
    for order in (1, 2, 3, 4):
        U = random_self_adjoint(order, 2, rng.randrange(1 << 30))
        assert symmetrize(U) == U
        S = symmetrize(parse_operator("Dx^%d + x^2*Dx" % order))
        assert symmetrize(S) == S


def test_constructors_match_symmetrize():
    """Order-1/2/3 constructors agree with symmetrizing an operator that
    shares their free coefficients."""
    rng = random.Random(21)
    for _ in range(50):
        a_top = rand_ratfunc(rng, 2, 1)
        a_low = rand_ratfunc(rng, 2, 1)
        # order 1: only the a1 Dx part matters
        U1 = make_order1(a_top)
        assert symmetrize(DiffOperator([RatFunc.const(0), a_top])) == U1
        # order 2: symmetrize adds a2''/2 to the constant term, so feed
        # it a0 - a2''/2 to land on make_order2(a2, a0)
        from fractions import Fraction
        U2 = make_order2(a_top, a_low)
        half = RatFunc.const(Fraction(1, 2))
        a0_base = a_low - half * a_top.derivative().derivative()
        assert symmetrize(DiffOperator([a0_base, RatFunc.const(0), a_top])) == U2
        # order 3: symmetrize adds (3/2) a3'' to the Dx coefficient
        U3 = make_order3(a_top, a_low)
        a1_base = a_low - RatFunc.const(Fraction(3, 2)) * a_top.derivative().derivative()
        base = DiffOperator([RatFunc.const(0), a1_base, RatFunc.const(0), a_top])
        assert symmetrize(base) == U3


def test_general_self_adjoint_shape_small_orders():
    """The explicit top-of-cascade coefficients of a general self-adjoint
    operator: a_{q-1} = (q/2) a_q' for every order q <= 7."""
    from fractions import Fraction
    rng = random.Random(22)
    for q in range(1, 8):
        U = random_self_adjoint(q, 2, rng.randrange(1 << 30))
        assert is_self_adjoint(U)
        assert U[q - 1] == U[q].derivative() * Fraction(q, 2)


def test_random_self_adjoint_deterministic():
    a = random_self_adjoint(1, 2, 7)
    b = random_self_adjoint(1, 2, 7)
    assert a == b and a.order == 1 and is_self_adjoint(a)
    assert a.lc().num.degree == 2 or a.lc().den.degree > 0


def test_random_self_adjoint_orders():
    for order, deg, seed in ((2, 1, 1), (4, 2, 3)):
        U = random_self_adjoint(order, deg, seed)
        assert U.order == order and is_self_adjoint(U)


def test_right_normalize_recovers_scaled_unit():
    # L = (x*Dx + 1/2) * x^2: some f with L*f self-adjoint must exist
    L = op_mul(make_order1(X), DiffOperator([X * X]))
    f = right_normalize_self_adjoint(L)
    assert f is not None
    assert is_self_adjoint(op_mul(L, DiffOperator([f])))


def test_right_normalize_constant_case():
    f = right_normalize_self_adjoint(DiffOperator.Dx(2))
    assert f is not None and f.is_constant()


def test_right_normalize_roundtrip_random():
    rng = random.Random(23)
    hits = 0
    for _ in range(10):
        U = random_self_adjoint(rng.choice((1, 2)), 1, rng.randrange(1 << 30))
        f = rand_ratfunc(rng, 1, 1)
        L = op_mul(U, DiffOperator([f]))
        g = right_normalize_self_adjoint(L)
        if g is None:
            continue
        hits += 1
        norm = op_mul(L, DiffOperator([g]))
        assert is_self_adjoint(norm)
        # normalized operator is U up to a constant factor
        ratio = norm.lc() / U.lc()
        assert ratio.is_constant()
        assert norm == op_mul(DiffOperator([ratio]), U)
    assert hits >= 5


def test_right_normalize_none_when_impossible():
    # an operator whose self-adjoint right-normalization condition fails
    rng = random.Random(24)
    found_none = False
    for _ in range(20):
        L = parse_operator("Dx^3 + x*Dx^2 + %d" % rng.randint(1, 9))
        if right_normalize_self_adjoint(L) is None:
            found_none = True
            break
    assert found_none
