"""Towers of intertwiners and canonical decompositions.

An operator built from self-adjoint units U_1..U_N and a right factor
r(x) through the recursion

    L_[k] = U_k * L_[k-1] + L_[k-2],   L_[0] = r,  L_[-1] = 0

expands to a Fibonacci-patterned sum of descending-index products of the
units, times r.  Extraction inverts the construction by successive
euclidean right divisions, certifying each quotient self-adjoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .diffop import (DiffOperator, adjoint, is_self_adjoint, op_mul,
                     right_divide)
from .qx import RatFunc


class TowerError(ValueError):
    pass


class InvalidIntertwinerError(TowerError):
    pass


class ReducibleTowerError(TowerError):
    pass


@dataclass(frozen=True)
class Decomposition:
    """Self-adjoint units U_1..U_N (rightmost first) and right factor r."""

    units: tuple
    r: RatFunc

    def __init__(self, units, r):
        units = tuple(units)
        r = RatFunc._coerce(r)
        if r.is_zero():
            raise TowerError("right factor r must be nonzero")
        parities = set()
        for i, u in enumerate(units):
            if u.order < 1:
                raise TowerError(f"unit {i + 1} has order {u.order}; units need order >= 1")
            if not is_self_adjoint(u):
                raise TowerError(f"unit {i + 1} is not self-adjoint")
            parities.add(u.order % 2)
        if len(parities) > 1:
            raise TowerError("unit orders must all share one parity")
        object.__setattr__(self, "units", units)
        object.__setattr__(self, "r", r)

    @property
    def n(self):
        return len(self.units)

    def orders(self):
        return [u.order for u in self.units]


@dataclass
class TowerTrace:
    """Operators L_[0..N] plus per-step certificates."""

    operators: list            # operators[k] = L_[k], k = 0..N
    units: list                # quotients U_1..U_N
    r: RatFunc
    step_self_adjoint: list = field(default_factory=list)
    remainder_orders: list = field(default_factory=list)

    @property
    def top(self):
        return self.operators[-1]

    @property
    def first_intertwiner(self):
        if len(self.operators) < 2:
            raise TowerError("tower of height 0 has no intertwiner")
        return self.operators[-2]


def build(dec: Decomposition) -> TowerTrace:
    """Run the recursion; L_[N-1] is the first intertwiner for free."""
    r_op = DiffOperator([dec.r])
    ops = [r_op]
    prev2 = DiffOperator.zero()
    for u in dec.units:
        ops.append(op_mul(u, ops[-1]) + prev2)
        prev2 = ops[-2]
    return TowerTrace(
        operators=ops,
        units=list(dec.units),
        r=dec.r,
        step_self_adjoint=[True] * dec.n,
        remainder_orders=[op.order for op in ops[:-1]],
    )


def expand_terms(dec: Decomposition):
    """Index patterns of the canonical sum: L_[N] = (sum of products) * r.

    Each pattern is a tuple of descending 1-based unit indices; the empty
    tuple is the constant term 1.  Term counts follow the Fibonacci
    sequence 1, 1, 2, 3, 5, 8, 13, 21, ...
    """
    n = len(dec.units)
    prev2, prev = [()], [(1,)]
    if n == 0:
        return prev2
    for k in range(2, n + 1):
        cur = [(k,) + t for t in prev] + prev2
        prev2, prev = prev, cur
    return prev


def evaluate_terms(dec: Decomposition, patterns=None) -> DiffOperator:
    """Materialize the canonical sum times r as an operator."""
    if patterns is None:
        patterns = expand_terms(dec)
    total = DiffOperator.zero()
    for pat in patterns:
        prod = DiffOperator.const(1)
        for idx in pat:
            prod = op_mul(prod, dec.units[idx - 1])
        total = total + prod
    return op_mul(total, DiffOperator([dec.r]))


def extract(L: DiffOperator, first_intertwiner: DiffOperator):
    """Recover (Decomposition, TowerTrace) from L and its first intertwiner.

    Successive right divisions walk down the tower; every quotient must be
    exactly self-adjoint and the remainder must not vanish before reaching
    order 0.
    """
    X = first_intertwiner
    if X.is_zero() or L.is_zero():
        raise TowerError("operator and intertwiner must be nonzero")
    if X.order >= L.order:
        raise TowerError("intertwiner must have order below the operator")
    if op_mul(adjoint(X), L) != op_mul(adjoint(L), X):
        raise InvalidIntertwinerError(
            "adjoint(X)*L != adjoint(L)*X: not an intertwiner")
    ops_desc = [L, X]
    units_desc = []
    flags = []
    rem_orders = []
    A, B = L, X
    while B.order > 0:
        Q, R = right_divide(A, B)
        if not is_self_adjoint(Q):
            raise InvalidIntertwinerError(
                f"quotient at step {len(units_desc) + 1} is not self-adjoint; "
                "invalid intertwiner")
        if R.is_zero():
            raise ReducibleTowerError(
                "remainder vanished before reaching order 0: reducible tower")
        units_desc.append(Q)
        flags.append(True)
        rem_orders.append(R.order)
        ops_desc.append(R)
        A, B = B, R
    # final step: divide the order->1 operator by the order-0 remainder r
    Q, R = right_divide(A, B)
    if not R.is_zero():
        raise TowerError("tower recursion did not terminate cleanly")
    if not is_self_adjoint(Q):
        raise InvalidIntertwinerError("final quotient is not self-adjoint")
    units_desc.append(Q)
    flags.append(True)
    rem_orders.append(-1)
    r = B[0]
    dec = Decomposition(units=list(reversed(units_desc)), r=r)
    trace = TowerTrace(
        operators=list(reversed(ops_desc)),
        units=list(dec.units),
        r=r,
        step_self_adjoint=flags,
        remainder_orders=rem_orders,
    )
    return dec, trace


def verify_intertwining_chain(trace: TowerTrace):
    """(ok, failing_index): checks adjoint(L_[k-1])*L_[k] = adjoint(L_[k])*L_[k-1]."""
    ops = trace.operators
    for k in range(1, len(ops)):
        lhs = op_mul(adjoint(ops[k - 1]), ops[k])
        rhs = op_mul(adjoint(ops[k]), ops[k - 1])
        if lhs != rhs:
            return False, k
    return True, None


def _conjugated_units(dec: Decomposition):
    """V_k units of the adjoint tower: V_{N+1-j} = r^s * U_j * r^s, s = (-1)^(j+1)."""
    n = dec.n
    r_op = DiffOperator([dec.r])
    rinv_op = DiffOperator([dec.r.inverse()])
    units = []
    for k in range(1, n + 1):
        j = n + 1 - k
        w = r_op if j % 2 == 1 else rinv_op
        units.append(op_mul(op_mul(w, dec.units[j - 1]), w))
    return units


def adjoint_decomposition(dec: Decomposition) -> Decomposition:
    """Decomposition whose build equals adjoint(build(dec).top)."""
    rho = dec.r if dec.n % 2 == 0 else dec.r.inverse()
    return Decomposition(units=_conjugated_units(dec), r=rho)


def inversion_check(dec: Decomposition) -> Fraction:
    """Verify the two inversion relations; return the constant -(-1)^N.

    With M_[k] the stages of the adjoint tower, the relations are
      M_[N-1]^(N) * L_[N-1]  =  M_[N-2]^(N-1) * L_[N]          - (-1)^N
      L_[N-1] * M_[N-1]^(N)  =  adjoint(M_[N-2]^(N-1)) * adjoint(L_[N]) - (-1)^N
    """
    n = dec.n
    if n < 2:
        raise TowerError("inversion relations need N >= 2")
    trace = build(dec)
    L_top, L_prev = trace.top, trace.first_intertwiner
    M_trace = build(adjoint_decomposition(dec))
    M_prev = M_trace.operators[n - 1]
    sub = Decomposition(units=dec.units[:-1], r=dec.r)
    Om = build(adjoint_decomposition(sub)).operators[n - 2]
    c = Fraction(-((-1) ** n))
    want = DiffOperator.const(c)
    if op_mul(M_prev, L_prev) - op_mul(Om, L_top) != want:
        raise ArithmeticError("first inversion relation failed")
    if op_mul(L_prev, M_prev) - op_mul(adjoint(Om), adjoint(L_top)) != want:
        raise ArithmeticError("second inversion relation failed")
    return c


@dataclass(frozen=True)
class Family:
    kind: str          # "Orthogonal" or "Symplectic"
    q: int             # total order
    generic: bool      # all units order 1 (orthogonal) or order 2 (symplectic)

    def __str__(self):
        g = "generic" if self.generic else "non-generic"
        return f"{self.kind}({self.q}), {g}"


def classify_family(dec: Decomposition) -> Family:
    """Odd unit orders -> Orthogonal(q); even -> Symplectic(q)."""
    orders = dec.orders()
    if not orders:
        raise TowerError("empty decomposition has no family")
    parity = orders[0] % 2
    q = sum(orders)
    if parity == 1:
        return Family("Orthogonal", q, all(o == 1 for o in orders))
    return Family("Symplectic", q, all(o == 2 for o in orders))


def build_bracket_form(Ln: DiffOperator, Lm: DiffOperator, a: RatFunc,
                       lam) -> DiffOperator:
    """Lm * a * Ln + lam/a, with both intertwining relations verified."""
    a = RatFunc._coerce(a)
    if a.is_zero():
        raise TowerError("bracket function a must be nonzero")
    if not is_self_adjoint(Ln) or not is_self_adjoint(Lm):
        raise TowerError("bracket form requires self-adjoint operators")
    lam = RatFunc._coerce(lam)
    a_op = DiffOperator([a])
    M = op_mul(op_mul(Lm, a_op), Ln) + DiffOperator([lam / a])
    # intertwinings: Ln*a*M = adjoint(M)*a*Ln and M*a*Lm = Lm*a*adjoint(M)
    lhs1 = op_mul(op_mul(Ln, a_op), M)
    rhs1 = op_mul(op_mul(adjoint(M), a_op), Ln)
    if lhs1 != rhs1:
        raise ArithmeticError("bracket-form intertwining (first) failed")
    lhs2 = op_mul(op_mul(M, a_op), Lm)
    rhs2 = op_mul(op_mul(Lm, a_op), adjoint(M))
    if lhs2 != rhs2:
        raise ArithmeticError("bracket-form intertwining (second) failed")
    return M


def decomposition_document(dec: Decomposition, trace: TowerTrace = None) -> str:
    """Stable key-value rendering of a decomposition for the CLI."""
    if trace is None:
        trace = build(dec)
    fam = classify_family(dec)
    chain_ok, chain_fail = verify_intertwining_chain(trace)
    lines = [
        f"units: {dec.n}",
        f"orders: {' '.join(str(o) for o in dec.orders())}",
        f"family: {fam.kind}({fam.q})",
        f"generic: {str(fam.generic).lower()}",
        f"fibonacci_terms: {len(expand_terms(dec))}",
        f"r: {dec.r}",
    ]
    for i, u in enumerate(dec.units, start=1):
        lines.append(f"U{i}: {u}")
        lines.append(f"U{i}_self_adjoint: {str(is_self_adjoint(u)).lower()}")
    lines.append(f"operator: {trace.top}")
    lines.append(f"intertwining_chain: {str(chain_ok).lower()}"
                 + ("" if chain_ok else f" (fails at {chain_fail})"))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# identity suite
# ---------------------------------------------------------------------------


def verify_identity_suite(M, N, P, Q, r) -> dict:
    """Exact operator identities over self-adjoint M, N, P, Q and r(x).

    Returns {name: bool}; all should be True for same-parity inputs.
    """
    r = RatFunc._coerce(r)
    r_op = DiffOperator([r])
    rinv = DiffOperator([r.inverse()])
    one = DiffOperator.const(1)

    def m(*ops):
        out = ops[0]
        for o in ops[1:]:
            out = op_mul(out, o)
        return out

    MNP = m(M, N, P) + M + P
    PNM = m(P, N, M) + M + P
    NP1 = m(N, P) + one
    PN1 = m(P, N) + one
    NM1 = m(N, M) + one
    MN1 = m(M, N) + one
    big_MNPQ = m(M, N, P, Q) + m(M, Q) + m(P, Q) + m(M, N) + one
    big_QPNM = m(Q, P, N, M) + m(Q, M) + m(Q, P) + m(N, M) + one
    QPN = m(Q, P, N) + Q + N
    NPQ = m(N, P, Q) + Q + N

    out = {}
    out["adjoint_two_term"] = adjoint(NP1) == PN1
    out["adjoint_three_term"] = adjoint(MNP) == PNM
    out["identity1"] = m(r_op, PN1, MNP, r_op) == m(r_op, PNM, NP1, r_op)
    out["identity2"] = m(MNP, r_op, rinv, NM1) == m(MN1, rinv, r_op, PNM)
    out["identity3"] = m(big_MNPQ, PNM) == m(MNP, big_QPNM)
    out["identity4"] = m(QPN, big_MNPQ) == m(big_QPNM, NPQ)
    out["inverse_modulo"] = (
        m(rinv, NM1, NP1, r_op)
        == one + m(rinv, N, MNP, r_op))
    out["inverse_modulo_adjoint"] = (
        m(NP1, r_op, rinv, NM1)
        == one + m(N, rinv, r_op, PNM))
    out["inverse_modulo_4"] = (
        m(rinv, PNM, NPQ, r_op)
        == -one + m(rinv, PN1, big_MNPQ, r_op))
    out["inverse_modulo_4_adjoint"] = (
        m(NPQ, r_op, rinv, PNM)
        == -one + m(NP1, rinv, r_op, big_QPNM))
    return out
