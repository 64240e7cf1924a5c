"""Companion systems, symmetric/exterior powers, cyclic operators,
antisymmetric/symplectic system generators."""

import random
from fractions import Fraction

import pytest

from dtower.diffop import (DiffOperator, adjoint, apply_to_series,
                           is_self_adjoint, op_mul, parse_operator)
from dtower.homomorphisms import check_intertwiner
from dtower.qx import Poly, QxMatrix, RatFunc
from dtower.ratsol import rational_solutions
from dtower.selfadjoint import make_order1, make_order2, random_self_adjoint
from dtower.series import UnivariateSeries
from dtower.systems import (CompanionSystem, DimensionCapError, companion,
                            cyclic_matrix, cyclic_operator, ext_square,
                            invariant_form, invariant_intertwiner,
                            is_antisymmetric, is_infinitesimally_symplectic,
                            kolchin_orthogonal_system,
                            kolchin_symplectic_system, sym_power, sym_square,
                            symplectic_J)
from dtower.tower import Decomposition, build

D = DiffOperator.Dx()
ONE = RatFunc.const(1)
ZERO = RatFunc.const(0)
X = RatFunc.x()


# ---------------------------------------------------------------------------
# companion
# ---------------------------------------------------------------------------


def test_companion_dx2():
    S = companion(DiffOperator.Dx(2))
    assert S.A.rows[0] == [ZERO, ONE]
    assert S.A.rows[1] == [ZERO, ZERO]


def test_companion_with_potential():
    S = companion(parse_operator("Dx^2 + x"))
    assert S.A.rows[1] == [-X, ZERO]


def test_companion_e2_shape():
    from dtower.fixtures import load
    S = companion(load("E2").payload)
    assert S.dim == 7
    # subdiagonal of ones, rational last row
    for i in range(6):
        assert S.A.rows[i][i + 1] == ONE


# ---------------------------------------------------------------------------
# series-solution oracle for powers
# ---------------------------------------------------------------------------


def _series_solutions(L, n, offset=0):
    """Power-series solutions with unit leading coefficients at distinct
    valuations (requires lc and trailing coefficient nonzero at 0)."""
    order = L.order
    coeffs = [L[i] for i in range(order + 1)]
    sols = []
    for v in range(order):
        c = [Fraction(0)] * n
        c[v] = Fraction(1)
        for k in range(n):
            # adjust c[k] so that the (k - order)-th output coefficient dies
            t = k - order
            if k <= v or t < 0:
                continue
            # solve for c[k] from the recurrence given lower coefficients
            s = UnivariateSeries(c[:k] + [Fraction(0)] * (n - k), n)
            img = apply_to_series(L, s, t + 1)
            # coefficient of x^t in L(x^k) = lc(0) * k(k-1)...(k-order+1) + ...
            probe = UnivariateSeries([Fraction(0)] * k + [Fraction(1)], k + 1)
            lead = apply_to_series(L, probe, t + 1)[t]
            if lead == 0:
                raise ArithmeticError("resonant exponent; try another operator")
            c[k] = -img[t] / lead
        sols.append(UnivariateSeries(c, n))
    return sols


def _check_annihilates(L, s):
    assert apply_to_series(L, s).is_zero()


def test_sym_square_dx2():
    S, full, drop = sym_square(DiffOperator.Dx(2))
    assert S == DiffOperator.Dx(3)
    assert full == 3 and not drop


def test_ext_square_dx2():
    S, full, drop = ext_square(DiffOperator.Dx(2))
    assert S == D
    assert full == 1 and not drop


def test_sym_square_annihilates_solution_products():
    rng = random.Random(60)
    L = parse_operator("Dx^2 + (x+2)*Dx + 1")
    S, full, drop = sym_square(L)
    assert full == 3
    n = 40 + S.order
    y1, y2 = _series_solutions(L, n)
    _check_annihilates(S, y1 * y1)
    _check_annihilates(S, y1 * y2)
    _check_annihilates(S, y2 * y2)


def test_sym_square_order3_oracle():
    L = parse_operator("Dx^3 + x*Dx + 3")
    S, full, drop = sym_square(L)
    assert full == 6
    n = 40 + S.order
    sols = _series_solutions(L, n)
    for i in range(3):
        for j in range(i, 3):
            _check_annihilates(S, sols[i] * sols[j])


def test_ext_square_annihilates_series_wronskian():
    L = parse_operator("Dx^3 + x*Dx + 3")
    E, full, drop = ext_square(L)
    assert full == 3
    n = 40 + E.order
    sols = _series_solutions(L, n)
    for i in range(3):
        for j in range(i + 1, 3):
            w = sols[i] * sols[j].derivative() - sols[i].derivative() * sols[j]
            _check_annihilates(E, w)


def test_ext_square_self_adjoint_order2_rational_solution():
    # exterior square of a2 Dx^2 + a2' Dx + a0 is order 1 with solution 1/a2
    a2 = X * X + 1
    L = make_order2(RatFunc(a2.num), X)
    E, full, drop = ext_square(L)
    assert E.order == 1
    sols = rational_solutions(E)
    assert len(sols.basis) == 1
    y = sols.basis[0]
    assert (y * RatFunc(a2.num)).is_constant()


def test_ext_square_order4_self_adjoint_drops():
    # order-four self-adjoint: exterior square drops from 6 to 5
    U = random_self_adjoint(4, 1, 11)
    E, full, drop = ext_square(U)
    assert full == 6 and E.order == 5 and drop


def test_sym_power_small():
    assert sym_power(DiffOperator.Dx(2), 2) == DiffOperator.Dx(3)
    assert sym_power(DiffOperator.Dx(2), 3) == DiffOperator.Dx(4)


def test_sym_power_generic_order2_m4():
    L = parse_operator("Dx^2 + (x+2)*Dx + 1")
    assert sym_power(L, 4).order == 5


def test_dimension_cap_guard():
    with pytest.raises(DimensionCapError):
        sym_power(parse_operator("Dx^3 + x*Dx + 3"), 2, max_dim=3)


# ---------------------------------------------------------------------------
# cyclic operators
# ---------------------------------------------------------------------------


def test_cyclic_operator_nilpotent():
    A = QxMatrix([[ZERO, ONE], [ZERO, ZERO]])
    S = CompanionSystem(A)
    assert cyclic_operator(S, [ONE, ZERO]) == DiffOperator.Dx(2)


def test_cyclic_operator_antisymmetric_2x2():
    a = X
    A = QxMatrix([[ZERO, a], [-a, ZERO]])
    L = cyclic_operator(CompanionSystem(A), [ONE, ZERO])
    assert L.order == 2
    E, full, drop = ext_square(L)
    assert E.order == 1


def test_cyclic_operator_random_antisymmetric_4x4():
    S = kolchin_orthogonal_system(4, 1, 9)
    L = cyclic_operator(S)
    assert L.order == 4


def test_cyclic_matrix_rows_follow_recursion():
    S = kolchin_orthogonal_system(3, 1, 1)
    P = cyclic_matrix(S)
    assert P.nrows == 3 and P.ncols == 3
    # row k+1 = row_k' + row_k A
    for k in range(2):
        row = P.rows[k]
        nxt = [row[j].derivative() for j in range(3)]
        for i in range(3):
            for j in range(3):
                nxt[j] = nxt[j] + row[i] * S.A.rows[i][j]
        assert P.rows[k + 1] == nxt


# ---------------------------------------------------------------------------
# system generators
# ---------------------------------------------------------------------------


def test_orthogonal_generator_antisymmetric():
    for q, deg, seed in ((2, 1, 0), (4, 1, 5), (5, 2, 3)):
        S = kolchin_orthogonal_system(q, deg, seed)
        assert S.dim == q
        assert is_antisymmetric(S.A)


def test_symplectic_generator_identity():
    for p, deg, seed in ((1, 0, 0), (2, 1, 2), (3, 0, 1)):
        S = kolchin_symplectic_system(p, deg, seed)
        assert S.dim == 2 * p
        assert is_infinitesimally_symplectic(S.A, p)


def test_symplectic_J_shape():
    J = symplectic_J(1)
    assert J.rows[0] == [ZERO, ONE]
    assert J.rows[1] == [-ONE, ZERO]


def test_generators_deterministic():
    assert kolchin_orthogonal_system(4, 1, 5).A.rows == \
        kolchin_orthogonal_system(4, 1, 5).A.rows


# ---------------------------------------------------------------------------
# invariant bilinear form and the intertwiner it induces
# ---------------------------------------------------------------------------


def test_invariant_form_kinds():
    S = kolchin_orthogonal_system(4, 1, 0)
    F = invariant_form(S)
    assert all(F.rows[i][j] == (ONE if i == j else ZERO)
               for i in range(4) for j in range(4))
    Sp = kolchin_symplectic_system(2, 1, 0)
    assert invariant_form(Sp).rows == symplectic_J(2).rows


def test_invariant_intertwiner_orthogonal():
    S = kolchin_orthogonal_system(4, 1, 0)
    L, Xw = invariant_intertwiner(S)
    assert L.order == 4 and Xw.order == 3
    assert check_intertwiner(L, Xw)


def test_invariant_intertwiner_symplectic():
    S = kolchin_symplectic_system(2, 1, 0)
    L, Xw = invariant_intertwiner(S)
    assert L.order == 4 and Xw.order == 2
    assert check_intertwiner(L, Xw)


# ---------------------------------------------------------------------------
# rational-solution laws for towers (sampled; the gate runs 20 each)
# ---------------------------------------------------------------------------


def test_tower_sym_square_law_order1():
    rng = random.Random(61)
    dec = Decomposition(
        units=[random_self_adjoint(1, 1, rng.randrange(1 << 30)) for _ in range(2)],
        r=ONE)
    L = build(dec).top
    S, full, drop = sym_square(L)
    sols = rational_solutions(S)
    want = dec.units[0].lc().inverse()
    assert any((y / want).is_constant() for y in sols.basis)


def test_tower_ext_square_law_order2():
    rng = random.Random(62)
    dec = Decomposition(
        units=[random_self_adjoint(2, 1, rng.randrange(1 << 30)) for _ in range(2)],
        r=ONE)
    L = build(dec).top
    E, full, drop = ext_square(L)
    sols = rational_solutions(E)
    want = dec.units[0].lc().inverse()
    assert any((y / want).is_constant() for y in sols.basis)


def test_adjoint_square_governed_by_leftmost_unit():
    rng = random.Random(63)
    dec = Decomposition(
        units=[random_self_adjoint(1, 1, rng.randrange(1 << 30)) for _ in range(2)],
        r=ONE)
    L = build(dec).top
    S, _, _ = sym_square(adjoint(L))
    sols = rational_solutions(S)
    want = dec.units[-1].lc().inverse()
    assert any((y / want).is_constant() for y in sols.basis)
