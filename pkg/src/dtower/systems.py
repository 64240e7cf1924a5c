"""Companion systems, symmetric/exterior powers, cyclic-vector operators
and Kolchin reduced-form generators.

All power computations run a single dependence search: iterate the
row functional c_{k+1} = c_k' + c_k * B in the relevant module and stop
at the first linear dependence, which directly exhibits any drop of
order as an early dependence.
"""

from __future__ import annotations

import random
from itertools import combinations

from .diffop import DiffOperator, op_mul, right_divide
from .linalg import first_dependence
from .qx import Poly, QxMatrix, RatFunc

DEFAULT_DIM_CAP = 36

_ZERO = RatFunc.const(0)


class DimensionCapError(ValueError):
    pass


class CompanionSystem:
    """First-order system Y' = A * Y with a provenance note."""

    __slots__ = ("A", "note")

    def __init__(self, A: QxMatrix, note: str = ""):
        if A.nrows != A.ncols:
            raise ValueError("system matrix must be square")
        self.A = A
        self.note = note

    @property
    def dim(self):
        return self.A.nrows


def companion(L: DiffOperator) -> CompanionSystem:
    """Companion system of L: subdiagonal of ones, last row from coefficients."""
    n = L.order
    if n < 1:
        raise ValueError("order >= 1 required")
    lc = L.lc()
    rows = []
    for i in range(n):
        row = [_ZERO] * n
        if i < n - 1:
            row[i + 1] = RatFunc.const(1)
        else:
            for j in range(n):
                row[j] = -(L[j] / lc)
        rows.append(row)
    return CompanionSystem(QxMatrix(rows), note=f"companion of order-{n} operator")


def primitive_normalized(L: DiffOperator) -> DiffOperator:
    """Scalar gauge fix: polynomial coefficients, primitive, positive leading content."""
    if L.is_zero():
        return L
    polys, _den = L.cleared()
    num_lcm = 1
    from math import gcd
    ints = []
    for p in polys:
        c, z = p.int_primitive()
        ints.append((c, z))
        num_lcm = num_lcm * c.denominator // gcd(num_lcm, c.denominator)
    g = 0
    for c, _ in ints:
        if c:
            g = gcd(g, abs(c.numerator * (num_lcm // c.denominator)))
    coeffs = []
    for c, z in ints:
        if not c:
            coeffs.append(_ZERO)
        else:
            k = c.numerator * (num_lcm // c.denominator) // g
            coeffs.append(RatFunc(Poly.from_ints(z) * k))
    out = DiffOperator(coeffs)
    if out.lc().num.lc() < 0:
        out = -out
    return out


def _dependence_to_operator(dep) -> DiffOperator:
    return primitive_normalized(DiffOperator(dep))


def cyclic_operator(S: CompanionSystem, c=None) -> DiffOperator:
    """Minimal scalar operator annihilating c . Y over solutions of Y' = A Y."""
    n = S.dim
    if c is None:
        c = [RatFunc.const(1)] + [_ZERO] * (n - 1)
    c = [RatFunc._coerce(e) for e in c]
    if all(e.is_zero() for e in c):
        raise ValueError("cyclic form must be nonzero")
    A = S.A

    def rows():
        cur = list(c)
        while True:
            yield cur
            nxt = [cur[j].derivative() for j in range(n)]
            for i in range(n):
                ci = cur[i]
                if ci.is_zero():
                    continue
                for j in range(n):
                    a = A.rows[i][j]
                    if a:
                        nxt[j] = nxt[j] + ci * a
            cur = nxt

    _, dep = first_dependence(rows(), n)
    return _dependence_to_operator(dep)


def _sym_basis(n, m):
    """Exponent vectors of degree-m monomials in n variables, fixed order."""
    basis = []

    def rec(prefix, rem, slots):
        if slots == 1:
            basis.append(tuple(prefix + [rem]))
            return
        for k in range(rem, -1, -1):
            rec(prefix + [k], rem - k, slots - 1)

    rec([], m, n)
    return basis


def _sym_rows(L, m):
    """Row iterator for derivatives of the generic m-fold product."""
    n = L.order
    lc = L.lc()
    last_row = [-(L[j] / lc) for j in range(n)]
    basis = _sym_basis(n, m)
    index = {b: i for i, b in enumerate(basis)}
    start = tuple([m] + [0] * (n - 1))
    state = {start: RatFunc.const(1)}
    while True:
        row = [_ZERO] * len(basis)
        for mono, coeff in state.items():
            row[index[mono]] = coeff
        yield row
        nxt = {}

        def acc(mono, c):
            if mono in nxt:
                nxt[mono] = nxt[mono] + c
            else:
                nxt[mono] = c

        for mono, coeff in state.items():
            dc = coeff.derivative()
            if dc:
                acc(mono, dc)
            for i in range(n):
                ai = mono[i]
                if not ai:
                    continue
                down = list(mono)
                down[i] -= 1
                if i < n - 1:
                    up = list(down)
                    up[i + 1] += 1
                    acc(tuple(up), coeff * ai)
                else:
                    for j in range(n):
                        aj = last_row[j]
                        if aj:
                            up = list(down)
                            up[j] += 1
                            acc(tuple(up), coeff * ai * aj)
        state = {k: v for k, v in nxt.items() if v}


def _ext2_rows(L):
    """Row iterator for derivatives of the generic Wronskian bilinear."""
    n = L.order
    lc = L.lc()
    last_row = [-(L[j] / lc) for j in range(n)]
    basis = list(combinations(range(n), 2))
    index = {b: i for i, b in enumerate(basis)}
    state = {(0, 1): RatFunc.const(1)}
    while True:
        row = [_ZERO] * len(basis)
        for pair, coeff in state.items():
            row[index[pair]] = coeff
        yield row
        nxt = {}

        def acc(i, j, c):
            if i == j or c.is_zero():
                return
            if i > j:
                i, j, c = j, i, -c
            key = (i, j)
            if key in nxt:
                nxt[key] = nxt[key] + c
            else:
                nxt[key] = c

        def images(i):
            # v_i' as [(target index, coefficient)]
            if i < n - 1:
                return [(i + 1, RatFunc.const(1))]
            return [(j, last_row[j]) for j in range(n) if last_row[j]]

        for (i, j), coeff in state.items():
            dc = coeff.derivative()
            if dc:
                acc(i, j, dc)
            for t, a in images(i):
                acc(t, j, coeff * a)
            for t, a in images(j):
                acc(i, t, coeff * a)
        state = {k: v for k, v in nxt.items() if v}


def _min_operator(rows, dim):
    order, dep = first_dependence(rows, dim)
    return _dependence_to_operator(dep), order


def sym_power(L: DiffOperator, m: int, max_dim: int = DEFAULT_DIM_CAP) -> DiffOperator:
    """Minimal annihilator of m-fold products of solutions of L."""
    n = L.order
    if n < 1 or m < 1:
        raise ValueError("need ord L >= 1 and m >= 1")
    from math import comb
    dim = comb(n + m - 1, m)
    if dim > max_dim:
        raise DimensionCapError(
            f"symmetric power module dimension {dim} exceeds the cap {max_dim}; "
            "pass max_dim to override")
    op, _ = _min_operator(_sym_rows(L, m), dim)
    return op


def sym_square(L: DiffOperator, max_dim: int = DEFAULT_DIM_CAP):
    """(operator, full_dim, drop) for products of two solutions."""
    n = L.order
    if n < 2:
        raise ValueError("order >= 2 required")
    full = n * (n + 1) // 2
    if full > max_dim:
        raise DimensionCapError(
            f"symmetric square dimension {full} exceeds the cap {max_dim}")
    op, order = _min_operator(_sym_rows(L, 2), full)
    return op, full, order < full


def ext_square(L: DiffOperator, max_dim: int = DEFAULT_DIM_CAP):
    """(operator, full_dim, drop) for Wronskian-type bilinears."""
    n = L.order
    if n < 2:
        raise ValueError("order >= 2 required")
    full = n * (n - 1) // 2
    if full > max_dim:
        raise DimensionCapError(
            f"exterior square dimension {full} exceeds the cap {max_dim}")
    op, order = _min_operator(_ext2_rows(L), full)
    return op, full, order < full


# ---------------------------------------------------------------------------
# Kolchin reduced forms
# ---------------------------------------------------------------------------


def _rand_poly(rng, degree):
    return Poly([rng.randint(-3, 3) for _ in range(degree + 1)])


def kolchin_orthogonal_system(q: int, degree: int, seed: int) -> CompanionSystem:
    """Antisymmetric q x q system with random polynomial entries."""
    if q < 2:
        raise ValueError("q >= 2 required")
    rng = random.Random(seed)
    rows = [[_ZERO] * q for _ in range(q)]
    for i in range(q):
        for j in range(i + 1, q):
            a = RatFunc(_rand_poly(rng, degree))
            rows[i][j] = a
            rows[j][i] = -a
    return CompanionSystem(QxMatrix(rows), note=f"antisymmetric {q}x{q} seed={seed}")


def symplectic_J(p: int) -> QxMatrix:
    one = RatFunc.const(1)
    rows = [[_ZERO] * (2 * p) for _ in range(2 * p)]
    for i in range(p):
        rows[i][p + i] = one
        rows[p + i][i] = -one
    return QxMatrix(rows)


def kolchin_symplectic_system(p: int, degree: int, seed: int) -> CompanionSystem:
    """J * A with A symmetric 2p x 2p; infinitesimally symplectic."""
    if p < 1:
        raise ValueError("p >= 1 required")
    rng = random.Random(seed)
    n = 2 * p
    rows = [[_ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            a = RatFunc(_rand_poly(rng, degree))
            rows[i][j] = a
            rows[j][i] = a
    JA = symplectic_J(p) * QxMatrix(rows)
    return CompanionSystem(JA, note=f"symplectic 2p={n} seed={seed}")


def is_infinitesimally_symplectic(M: QxMatrix, p: int) -> bool:
    """M^T J + J M = 0."""
    J = symplectic_J(p)
    prod1 = M.transpose() * J
    prod2 = J * M
    return all((prod1.rows[i][j] + prod2.rows[i][j]).is_zero()
               for i in range(2 * p) for j in range(2 * p))


def is_antisymmetric(M: QxMatrix) -> bool:
    return all((M.rows[i][j] + M.rows[j][i]).is_zero()
               for i in range(M.nrows) for j in range(M.ncols))


def cyclic_matrix(S: CompanionSystem, c=None) -> "QxMatrix":
    """Matrix P whose rows express y, y', ..., y^(n-1) in terms of Y.

    Row 0 is the cyclic form c, and each next row is the derivative of
    the previous functional along Y' = A*Y, so (y, y', ..., y^(n-1))^T
    = P*Y for y = c . Y.
    """
    n = S.dim
    A = S.A
    if c is None:
        c = [RatFunc.const(1)] + [_ZERO] * (n - 1)
    c = [RatFunc._coerce(e) for e in c]
    rows = []
    cur = list(c)
    for _ in range(n):
        rows.append(list(cur))
        nxt = [cur[j].derivative() for j in range(n)]
        for i in range(n):
            if cur[i]:
                for j in range(n):
                    a = A.rows[i][j]
                    if a:
                        nxt[j] = nxt[j] + cur[i] * a
        cur = nxt
    return QxMatrix(rows)


def invariant_form(S: CompanionSystem) -> QxMatrix:
    """Constant bilinear form Y1^T * F * Y2 preserved by Y' = A*Y.

    For antisymmetric A the identity works; for an infinitesimally
    symplectic A the symplectic form J works.  Raises for other systems.
    """
    n = S.dim
    if is_antisymmetric(S.A):
        one = RatFunc.const(1)
        return QxMatrix([[one if i == j else _ZERO for j in range(n)]
                         for i in range(n)])
    if n % 2 == 0 and is_infinitesimally_symplectic(S.A, n // 2):
        return symplectic_J(n // 2)
    raise ValueError("no invariant bilinear form known for this system")


def invariant_intertwiner(S: CompanionSystem, form: QxMatrix = None, c=None):
    """(L, X): cyclic scalar operator of the system and a verified
    intertwiner of L built from the system's constant bilinear form.

    With P = cyclic_matrix(S) the form pulls back to G = P^-T * F * P^-1
    on (y, y', ..., y^(n-1)); matching the top derivative of the constant
    bilinear against the bilinear concomitant of L gives the candidate
    X = (1/lc(L)) * sum_j G[n-1][j] * Dx^j, which is checked exactly.
    """
    from .qx import solve_linear
    n = S.dim
    if form is None:
        form = invariant_form(S)
    L = cyclic_operator(S, c)
    if L.order != n:
        raise ValueError("cyclic form is not cyclic: scalar order below the "
                         "system dimension")
    P = cyclic_matrix(S, c)
    e = [_ZERO] * n
    e[n - 1] = RatFunc.const(1)
    u = solve_linear(P, e)                       # u = P^-1 e_{n-1}
    w = form.transpose().mul_vector(u)           # w = F^T u
    v = solve_linear(P.transpose(), w)           # v = P^-T F^T P^-1 e_{n-1}
    lc = L.lc()
    coeffs = [vj / lc for vj in v]
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    X = DiffOperator(coeffs)
    from .homomorphisms import check_intertwiner
    if X.is_zero() or not check_intertwiner(L, X):
        raise ArithmeticError("bilinear-form candidate failed the exact "
                              "intertwiner check")
    return L, X
