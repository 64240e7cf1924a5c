"""Intertwiner search and operator equivalences.

An intertwiner of L is an operator X with adjoint(X)*L = adjoint(L)*X.
The search is a bounded linear ansatz: fix the order, a numerator degree
and a candidate denominator (by default an escalating power of the
leading coefficient of L), assemble the exact linear system over Q and
return a verified basis of its solution space.  An empty result is a
sound "not found within bounds", never a nonexistence proof.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diffop import DiffOperator, adjoint, formal_adjoint, op_mul, right_divide
from .linalg import first_dependence, int_kernel
from .qx import Poly, RatFunc


@dataclass(frozen=True)
class AnsatzBounds:
    order: int
    numerator_degree: int
    denominator: Poly = None  # None -> lc(L)^k with k escalating 1, 2, 3

    def __post_init__(self):
        if self.order < 0 or self.numerator_degree < 0:
            raise ValueError("ansatz bounds must be nonnegative")


def check_intertwiner(L: DiffOperator, X: DiffOperator) -> bool:
    return op_mul(adjoint(X), L) == op_mul(adjoint(L), X)


def _cleared_lc(L: DiffOperator) -> Poly:
    polys, _ = L.cleared()
    _, z = polys[-1].int_primitive()
    return Poly.from_ints(z)


def _search_with_denominator(L, order, num_deg, den: Poly):
    """Verified basis of intertwiners (sum_j u_ij x^j / den) Dx^i.

    The parity-signed adjoint is not additive across mixed Dx-parities,
    so the linear system is assembled with the plain formal adjoint and
    an overall sign for the assumed parity of X; both signs are tried
    and every candidate is verified exactly.
    """
    out = []
    seen = set()
    for sign in (1, -1):
        for X in _search_signed(L, order, num_deg, den, sign):
            if X.coeffs not in seen:
                seen.add(X.coeffs)
                out.append(X)
    return out


def _dx_left(M: DiffOperator) -> DiffOperator:
    """Dx * M by one Leibniz step."""
    n = M.order
    coeffs = [M[0].derivative()]
    for k in range(1, n + 2):
        c = M[k].derivative() if k <= n else RatFunc.const(0)
        coeffs.append(c + M[k - 1])
    return DiffOperator(coeffs)


def _search_signed(L, order, num_deg, den: Poly, sign: int):
    """Basis elements are E_ij = (x^j / den) * Dx^i; their residues
    sign*formal_adjoint(E)*L - adjoint(L)*E are built incrementally:
    the i index only shifts coefficients (right factor Dx^i) or applies
    one Leibniz step (left factor Dx), so a single operator product per
    x-power j suffices."""
    basis_ops = []
    den_rf = RatFunc(Poly.const(1), den) if den.degree > 0 or den.lc() != 1 \
        else RatFunc.const(1)
    adL = adjoint(L)
    residues = []
    x = RatFunc.x()
    for j in range(num_deg + 1):
        f = x ** j * den_rf
        f_op = DiffOperator([f])
        # adjoint(L) * f, then * Dx^i = coefficient shift
        W = op_mul(adL, f_op)
        # formal_adjoint(E_ij) = (-1)^i Dx^i * f, so its product with L
        # is (-1)^i Dx^i * (f * L)
        G = DiffOperator([f * L[k] for k in range(L.order + 1)])
        for i in range(order + 1):
            E = DiffOperator([RatFunc.const(0)] * i + [f])
            basis_ops.append(E)
            shifted_W = DiffOperator([RatFunc.const(0)] * i + list(W.coeffs))
            sgn = sign if i % 2 == 0 else -sign
            residues.append(sgn * G - shifted_W)
            if i < order:
                G = _dx_left(G)
    # assemble equations: coefficient of x^a in Dx^b of sum u_s * residue_s = 0
    cleared = []
    glob_den = Poly.const(1)
    for R in residues:
        polys, dnm = R.cleared()
        cleared.append((polys, dnm))
        g = glob_den.gcd(dnm)
        glob_den = glob_den * (dnm / g)
    max_ord = max((len(polys) for polys, _ in cleared), default=0)
    cols = []
    max_deg = 0
    for polys, dnm in cleared:
        mult = glob_den / dnm
        scaled = [p * mult for p in polys]
        for p in scaled:
            max_deg = max(max_deg, p.degree)
        cols.append(scaled)
    rows = []
    for b in range(max_ord):
        for a in range(max_deg + 1):
            row = []
            denmul = 1
            entries = []
            for scaled in cols:
                c = scaled[b][a] if b < len(scaled) else 0
                entries.append(c)
            # clear rational entries to integers
            from math import gcd
            ld = 1
            for e in entries:
                if e:
                    ld = ld * e.denominator // gcd(ld, e.denominator)
            row = [int(e * ld) for e in entries]
            if any(row):
                rows.append(row)
    if not rows:
        kernel = [[1 if s == t else 0 for s in range(len(basis_ops))]
                  for t in range(len(basis_ops))]
    else:
        kernel = int_kernel(rows)
    out = []
    for v in kernel:
        X = DiffOperator.zero()
        for c, E in zip(v, basis_ops):
            if c:
                X = X + E * RatFunc.const(c)
        if X.is_zero():
            continue
        # solutions of the signed system with the opposite parity satisfy
        # -adjoint(X)*L = adjoint(L)*X instead; keep only true intertwiners
        if check_intertwiner(L, X):
            out.append(X)
    return out


def intertwiner_search(L: DiffOperator, bounds: AnsatzBounds):
    """Basis of intertwiners of L within the ansatz bounds (sound, incomplete)."""
    if L.is_zero():
        raise ValueError("operator must be nonzero")
    if bounds.denominator is not None:
        return _search_with_denominator(
            L, bounds.order, bounds.numerator_degree, bounds.denominator)
    lc = _cleared_lc(L)
    den = Poly.const(1)
    for _k in (1, 2, 3):
        den = den * lc
        found = _search_with_denominator(
            L, bounds.order, bounds.numerator_degree + den.degree, den)
        if found:
            return found
    return []


def transform_solutions(L: DiffOperator, T: DiffOperator):
    """(Ltilde, cofactor) with Ltilde * T = cofactor * L.

    Ltilde is the minimal annihilator of T(y) for y in sol(L), computed in
    the quotient module Q(x)<Dx>/<L> by iterating Dx on T mod L and taking
    the first linear dependence.
    """
    n = L.order
    if n < 1:
        raise ValueError("ord L >= 1 required")
    if T.is_zero():
        raise ValueError("transform operator must be nonzero")
    _, T0 = right_divide(T, L)
    if T0.is_zero():
        raise ValueError("transform operator is 0 modulo L: degenerate")
    lc = L.lc()
    fold = [-(L[j] / lc) for j in range(n)]

    def rows():
        cur = [T0[j] for j in range(n)]
        while True:
            yield cur
            top = cur[n - 1]
            nxt = [cur[j].derivative() for j in range(n)]
            for j in range(n):
                if j > 0:
                    nxt[j] = nxt[j] + cur[j - 1]
                if top:
                    nxt[j] = nxt[j] + top * fold[j]
            cur = nxt

    from .systems import primitive_normalized
    _, dep = first_dependence(rows(), n)
    Ltilde = primitive_normalized(DiffOperator(dep))
    prod = op_mul(Ltilde, T)
    cofactor, rem = right_divide(prod, L)
    if not rem.is_zero():
        raise ArithmeticError("defining identity Ltilde*T = cofactor*L failed")
    return Ltilde, cofactor


def sym_power_equivalent(L2: DiffOperator, m: int, n: int = 1) -> DiffOperator:
    """Equivalent of the m-th symmetric power of an order-2 operator,
    transformed by Dx^n."""
    if L2.order != 2:
        raise ValueError("base operator must have order 2")
    if m < 2:
        raise ValueError("m >= 2 required")
    from .systems import sym_power
    S = sym_power(L2, m)
    Ltilde, _ = transform_solutions(S, DiffOperator.Dx(n))
    return Ltilde
