"""Exact linear-algebra kernels.

Two workhorses live here:

- int_kernel: exact rational right-kernel basis of an integer matrix.
  Elimination runs modulo word-size primes (numpy), the exact answer is
  recovered by CRT + rational reconstruction and then verified against the
  original matrix with big-integer arithmetic, so the result is certified
  regardless of how it was found.

- first_dependence: incremental fraction-free echelon over Q(x) that
  consumes rows one at a time and reports the first row that is linearly
  dependent on its predecessors, together with exact dependence
  coefficients.  This single kernel drives symmetric/exterior powers,
  cyclic-vector operators and solution transforms.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

import numpy as np

from . import _intpoly as zp
from .qx import Poly, RatFunc

# primes just under 2^30 so numpy int64 products cannot overflow
_PRIMES = [
    1073741789, 1073741783, 1073741741, 1073741723, 1073741719,
    1073741717, 1073741689, 1073741671, 1073741663, 1073741651,
    1073741621, 1073741567, 1073741561, 1073741527, 1073741503,
    1073741477, 1073741467, 1073741441, 1073741419, 1073741399,
    1073741387, 1073741381, 1073741371, 1073741329, 1073741311,
    1073741309, 1073741287, 1073741237, 1073741213, 1073741197,
    1073741189, 1073741173, 1073741101, 1073741077, 1073741047,
    1073740963, 1073740951, 1073740933, 1073740909, 1073740879,
    1073740853, 1073740847, 1073740819, 1073740807, 1073740793,
    1073740783, 1073740781, 1073740697, 1073740693, 1073740691,
    1073740649, 1073740609, 1073740571, 1073740567, 1073740543,
    1073740541, 1073740537, 1073740529, 1073740523, 1073740517,
    1073740501, 1073740489, 1073740477, 1073740463, 1073740439,
    1073740403, 1073740391, 1073740379, 1073740249, 1073740201,
    1073740189, 1073740183, 1073740177, 1073740163, 1073740147,
    1073740139, 1073740133, 1073740127, 1073740123, 1073740079,
    1073740067, 1073740061, 1073740049, 1073740013, 1073739983,
    1073739949, 1073739937, 1073739917, 1073739911, 1073739893,
    1073739883, 1073739881, 1073739859, 1073739853, 1073739817,
    1073739767, 1073739749, 1073739739, 1073739721, 1073739683,
    1073739679, 1073739649, 1073739631, 1073739619, 1073739617,
    1073739599, 1073739577, 1073739559, 1073739523, 1073739493,
    1073739473, 1073739451, 1073739449, 1073739437, 1073739421,
    1073739379, 1073739367, 1073739361, 1073739353, 1073739347,
]

_MAX_PRIMES = 4000


def _prime_stream():
    """Descending primes below 2^30; the precomputed list, then more."""
    yield from _PRIMES
    import sympy
    p = _PRIMES[-1]
    for _ in range(_MAX_PRIMES - len(_PRIMES)):
        p = int(sympy.prevprime(p))
        yield p


def _mod_rref(rows_mod, ncols, p):
    """Reduced row echelon form mod p; returns (pivot_cols, rref rows)."""
    R = np.array(rows_mod, dtype=np.int64) % p
    if R.size == 0:
        return [], R
    nrows = R.shape[0]
    pivots = []
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        sub = R[row:, col]
        nz = np.nonzero(sub)[0]
        if len(nz) == 0:
            continue
        pr = row + int(nz[0])
        if pr != row:
            R[[row, pr]] = R[[pr, row]]
        inv = pow(int(R[row, col]), -1, p)
        R[row] = (R[row] * inv) % p
        colvals = R[:, col].copy()
        colvals[row] = 0
        R = (R - np.outer(colvals, R[row])) % p
        pivots.append(col)
        row += 1
    return pivots, R[:len(pivots)]


def _rat_recon(r, m):
    """Rational n/d with n = r*d mod m and |n|, d <= sqrt(m/2), or None."""
    a0, a1 = m, r % m
    s0, s1 = 0, 1
    bound = isqrt(m // 2)
    while a1 > bound:
        q = a0 // a1
        a0, a1 = a1, a0 - q * a1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or gcd(a1, abs(s1)) != 1:
        return None
    if s1 < 0:
        return Fraction(-a1, -s1)
    return Fraction(a1, s1)


def _crt_pair(r1, m1, r2, m2):
    inv = pow(m1 % m2, -1, m2)
    t = ((r2 - r1) * inv) % m2
    return r1 + m1 * t, m1 * m2


def int_kernel(rows):
    """Exact basis of the rational right kernel of an integer matrix.

    rows: list of equal-length lists of Python ints.  Returns a list of
    basis vectors of Fractions, one per free column, each verified exactly
    against the input.
    """
    if not rows:
        return []
    ncols = len(rows[0])
    primes = _prime_stream()
    p = next(primes)
    rows_mod = [[e % p for e in row] for row in rows]
    pivots, rref = _mod_rref(rows_mod, ncols, p)
    # residue data per prime; resolve unlucky primes by majority pivot set
    combined = [[int(v) for v in r] for r in rref]
    modulus = p
    while True:
        candidate = _try_lift(rows, ncols, pivots, combined, modulus)
        if candidate is not None:
            return candidate
        try:
            p = next(primes)
        except StopIteration:
            raise ArithmeticError("modular kernel lift failed: prime pool exhausted")
        rows_mod = [[e % p for e in row] for row in rows]
        piv2, rref2 = _mod_rref(rows_mod, ncols, p)
        if piv2 != pivots:
            # one of the primes is unlucky; the one seeing higher rank wins
            if len(piv2) > len(pivots):
                pivots, combined, modulus = piv2, [[int(v) for v in r] for r in rref2], p
            continue
        combined = [
            [_crt_pair(a, modulus, int(b), p)[0] for a, b in zip(ra, rb)]
            for ra, rb in zip(combined, rref2)
        ]
        modulus *= p


def _try_lift(rows, ncols, pivots, combined, modulus):
    pivset = set(pivots)
    free_cols = [j for j in range(ncols) if j not in pivset]
    basis = []
    for j in free_cols:
        v = [Fraction(0)] * ncols
        v[j] = Fraction(1)
        for pi, pc in enumerate(pivots):
            q = _rat_recon((-combined[pi][j]) % modulus, modulus)
            if q is None:
                return None
            v[pc] = q
        basis.append(v)
    # exact verification with cleared denominators
    for v in basis:
        den = 1
        for e in v:
            den = den * e.denominator // gcd(den, e.denominator)
        w = [int(e * den) for e in v]
        for row in rows:
            if sum(a * b for a, b in zip(row, w)) != 0:
                return None
    return basis


# ---------------------------------------------------------------------------
# first linear dependence over Q(x)
# ---------------------------------------------------------------------------


def _clear_row(row):
    """RatFunc row -> (integer-poly vector, scale) with scale * cleared = row."""
    den = Poly.const(1)
    for e in row:
        g = den.gcd(e.den)
        den = den * (e.den / g)
    fracs = []
    for e in row:
        p = e.num * (den / e.den)
        c, ints = p.int_primitive()
        fracs.append((c, ints))
    # single rational content for the whole vector
    nums = [c.numerator for c, _ in fracs if c != 0]
    dens = [c.denominator for c, _ in fracs if c != 0]
    if not nums:
        return [[] for _ in row], RatFunc.const(1)
    gn = 0
    for n in nums:
        gn = gcd(gn, abs(n))
    ld = 1
    for d in dens:
        ld = ld * d // gcd(ld, d)
    vec = []
    for c, ints in fracs:
        if c == 0:
            vec.append([])
        else:
            k = c * ld / gn  # integer by construction
            vec.append(zp.zscale(ints, int(k)))
    gp = zp.zvec_content(vec)
    if gp and not (len(gp) == 1 and gp[0] == 1):
        vec = [zp.zdivexact(a, gp) if a else [] for a in vec]
    else:
        gp = [1]
    # row = (gn / ld) * gp(x) / den(x) * vec
    scale = RatFunc(Poly.from_ints(gp) * Fraction(gn, ld), den)
    return vec, scale


class _Echelon:
    """Fraction-free incremental echelon with dependence tracking."""

    def __init__(self, dim):
        self.dim = dim
        self.pivrows = []  # list of (pivcol, vec, comb) with zpoly entries
        self.scales = []   # per consumed row: RatFunc with row_k = scale_k * cleared_k

    def add_row(self, row):
        """Consume one RatFunc row; return dependence coeffs or None.

        The returned list c_0..c_k (RatFunc) satisfies sum c_j * row_j = 0
        with c_k != 0, rows numbered in the order they were added.
        """
        k = len(self.scales)
        vec, scale = _clear_row(row)
        self.scales.append(scale)
        comb = [[] for _ in range(k)] + [[1]]
        for pivcol, pvec, pcomb in self.pivrows:
            f = vec[pivcol]
            if not f:
                continue
            pv = pvec[pivcol]
            vec = [zp.zsub(zp.zmul(pv, a), zp.zmul(f, b))
                   for a, b in zip(vec, pvec)]
            pc = pcomb + [[]] * (len(comb) - len(pcomb))
            comb = [zp.zsub(zp.zmul(pv, a), zp.zmul(f, b))
                    for a, b in zip(comb, pc)]
            g = zp.zvec_content(vec + comb)
            if g and not (len(g) == 1 and g[0] == 1):
                vec = [zp.zdivexact(a, g) if a else [] for a in vec]
                comb = [zp.zdivexact(a, g) if a else [] for a in comb]
        if all(not a for a in vec):
            # cleared_j = row_j / scale_j, so coefficients on the original
            # rows are comb_j / scale_j
            return [
                RatFunc(Poly.from_ints(c)) / s if c else RatFunc.const(0)
                for c, s in zip(comb, self.scales)
            ]
        # deterministic pivot: smallest degree, ties by column index
        pivcol = min((j for j, a in enumerate(vec) if a),
                     key=lambda j: (len(vec[j]), j))
        self.pivrows.append((pivcol, vec, comb))
        return None


def first_dependence(rows, dim, max_rows=None, method="auto"):
    """First linear dependence among an iterable of Q(x) rows.

    Returns (k, coeffs) where row_k is the first row dependent on rows
    0..k-1 and coeffs has length k+1.  Raises if no dependence appears
    within max_rows (default dim + 1) rows.

    The default method finds the dependence by modular evaluation and
    interpolation and verifies it exactly, falling back to the exact
    fraction-free echelon; method="exact" forces the echelon.
    """
    if max_rows is None:
        max_rows = dim + 1
    if method == "exact":
        return _first_dependence_exact(rows, dim, max_rows)
    return _first_dependence_modular(rows, dim, max_rows)


def _first_dependence_exact(rows, dim, max_rows):
    ech = _Echelon(dim)
    for k, row in enumerate(rows):
        if k >= max_rows:
            break
        dep = ech.add_row(list(row))
        if dep is not None:
            return k, dep
    raise ArithmeticError("no linear dependence found within the row budget")


def _first_dependence_modular(rows, dim, max_rows):
    """Detector at a random modular evaluation flags candidate dependent
    rows; candidates are lifted by interpolation of Cramer minors and
    verified exactly, so a false flag just reseeds the detector."""
    import random as _random

    from itertools import chain

    rng = _random.Random(0x5eed)
    detector = _ScalarDetector(_PRIMES[0], rng.randrange(1 << 24))
    cleared = []
    consumed = []
    reseeds = 0
    it = iter(rows)
    for k, row in enumerate(it):
        if k >= max_rows:
            break
        row = list(row)
        consumed.append(row)
        vec, scale = _clear_row(row)
        cleared.append((vec, scale))
        while detector.add(vec):
            J = [detector.pivots[i] for i in range(len(cleared) - 1)]
            cand = _lift_polynomial_dependence([v for v, _ in cleared], J)
            if cand is not None:
                coeffs = [
                    RatFunc(Poly.from_ints(c)) / s if c else RatFunc.const(0)
                    for c, (_, s) in zip(cand, cleared)
                ]
                return k, coeffs
            # false flag (unlucky evaluation): reseed and rebuild
            reseeds += 1
            if reseeds > 4:
                return _first_dependence_exact(chain(consumed, it), dim, max_rows)
            detector = _ScalarDetector(
                _PRIMES[reseeds], rng.randrange(1 << 24))
            for v, _ in cleared[:-1]:
                if detector.add(v):
                    # stored prefix already collapses under the new seed:
                    # give up on detection shortcuts and go exact
                    return _first_dependence_exact(chain(consumed, it),
                                                  dim, max_rows)
    raise ArithmeticError("no linear dependence found within the row budget")


# ---------------------------------------------------------------------------
# modular fast path for first_dependence
# ---------------------------------------------------------------------------


def _zeval_mod(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


class _ScalarDetector:
    """Incremental rank tracker of cleared rows evaluated at x=a mod p.

    A row whose evaluation lies in the span of its predecessors is a
    candidate first dependent row (never a false negative: a truly
    dependent row is dependent under every evaluation)."""

    def __init__(self, p, a):
        self.p, self.a = p, a
        self.rows = []
        self.pivots = []

    def add(self, vec) -> bool:
        """True when the evaluated row is dependent on the stored ones."""
        p, a = self.p, self.a
        v = np.array([_zeval_mod(e, a, p) for e in vec], dtype=np.int64)
        for pv, rowv in zip(self.pivots, self.rows):
            f = v[pv]
            if f:
                v = (v - f * rowv) % p
        nz = np.nonzero(v)[0]
        if len(nz) == 0:
            return True
        pv = int(nz[0])
        inv = pow(int(v[pv]), -1, p)
        self.rows.append((v * inv) % p)
        self.pivots.append(pv)
        return False


def _batch_dependence_values(E, p):
    """Cramer data per evaluation point.

    E: int64 array (P, m, r) holding rows 0..r (m = r+1) of the pivot-column
    submatrix at P points.  Returns (C, dead): C[t] = (c_0..c_r)(point t)
    with c_i = (-1)-scaled Cramer minors normalized so c_r = det(rows 0..r-1),
    dead marks points where pivot-free elimination broke down."""
    P, m, r = E.shape
    det = np.ones(P, dtype=np.int64)
    dead = np.zeros(P, dtype=bool)
    if r == 0:
        C = np.zeros((P, 1), dtype=np.int64)
        C[:, 0] = 1
        return C, dead
    # solve M^T lam = row_r with M = rows 0..r-1; augmented Gauss-Jordan
    A = np.concatenate(
        [np.swapaxes(E[:, :r, :], 1, 2) % p, (E[:, r, :] % p)[:, :, None]],
        axis=2).astype(np.int64)
    for k in range(r):
        piv = A[:, k, k]
        dead |= (piv == 0)
        det = (det * np.where(piv, piv, 1)) % p
        inv = np.array([pow(int(v), -1, p) if v else 1 for v in piv],
                       dtype=np.int64)
        A[:, k, :] = (A[:, k, :] * inv[:, None]) % p
        col = A[:, :, k].copy()
        col[:, k] = 0
        A = (A - col[:, :, None] * A[:, k, :][:, None, :]) % p
    lam = A[:, :, r]
    C = np.empty((P, m), dtype=np.int64)
    C[:, :r] = (-(lam * det[:, None])) % p
    C[:, r] = det
    return C, dead


def _newton_consecutive(V, offset, p):
    """Coefficients (lowest first) of the polys interpolating V.

    V: (npts, m) values at consecutive integer nodes offset..offset+npts-1.
    Returns an int64 array (npts, m) of coefficients mod p."""
    F = (V % p).astype(np.int64)
    npts = F.shape[0]
    for j in range(1, npts):
        inv = pow(j, -1, p)
        F[j:] = ((F[j:] - F[j - 1:-1]) * inv) % p
    C = np.zeros_like(F)
    C[0] = F[npts - 1]
    deg = 0
    for k in range(npts - 2, -1, -1):
        xk = offset + k
        shifted = np.zeros_like(C)
        shifted[1:deg + 2] = C[:deg + 1]
        C = (shifted - xk * C) % p
        C[0] = (C[0] + F[k]) % p
        deg += 1
    return C


def _eval_batch(vecs, J, pts, p):
    """int64 array (len(pts), len(vecs), len(J)) of entry evaluations."""
    P = len(pts)
    x = np.array(pts, dtype=np.int64)
    E = np.zeros((P, len(vecs), len(J)), dtype=np.int64)
    for i, vec in enumerate(vecs):
        for jj, col in enumerate(J):
            poly = vec[col]
            if not poly:
                continue
            acc = np.zeros(P, dtype=np.int64)
            for c in reversed(poly):
                acc = (acc * x + (c % p)) % p
            E[:, i, jj] = acc
    return E


def _hadamard_bits(vecs, J):
    total = 8
    for vec in vecs:
        mx = 0
        ln = 1
        for col in J:
            poly = vec[col]
            if poly:
                mx = max(mx, max(abs(c) for c in poly))
                ln = max(ln, len(poly))
        total += max(mx.bit_length(), 1) + (ln * len(J)).bit_length()
    return total


def _lift_polynomial_dependence(vecs, J):
    """Exact primitive dependence c with sum c_i * vecs_i = 0, or None.

    vecs: integer-poly row vectors 0..r where rows 0..r-1 are independent
    with pivot columns J and row r is believed dependent.  The Cramer
    minors are interpolated from modular evaluations at consecutive
    nodes, CRT-combined, content-stripped and verified exactly."""
    m = len(vecs)
    r = m - 1
    ncols = len(vecs[0])
    D = sum(max((len(vec[col]) - 1 for col in J if vec[col]), default=0)
            for vec in vecs)
    npts = D + 1
    bound_bits = _hadamard_bits(vecs, J)
    primes = _prime_stream()
    combined = None
    modulus = 1
    prev_balanced = None
    skipped = 0
    while True:
        try:
            p = next(primes)
        except StopIteration:
            return None
        if p <= npts + 8:
            return None
        C = None
        for offset in (0, npts + 3, 2 * npts + 11):
            pts = list(range(offset, offset + npts))
            E = _eval_batch(vecs, J, pts, p)
            vals, dead = _batch_dependence_values(E, p)
            if not dead.any():
                C = _newton_consecutive(vals, offset, p)
                break
        if C is None:
            skipped += 1
            if skipped > 8:
                return None
            continue
        rows_int = [[int(C[t, i]) for t in range(npts)] for i in range(m)]
        if combined is None:
            combined = rows_int
            modulus = p
        else:
            inv = pow(modulus % p, -1, p)
            for i in range(m):
                ci = combined[i]
                ri = rows_int[i]
                for t in range(npts):
                    a = ci[t]
                    tt = ((ri[t] - a) * inv) % p
                    ci[t] = a + modulus * tt
            modulus *= p
        half = modulus // 2
        balanced = [[c - modulus if c > half else c for c in ci]
                    for ci in combined]
        if balanced == prev_balanced or modulus.bit_length() > bound_bits:
            cand = [zp.znorm(ci) for ci in balanced]
            g = zp.zvec_content(cand)
            if g and not (len(g) == 1 and g[0] == 1):
                cand = [zp.zdivexact(a, g) if a else [] for a in cand]
            if cand[r] and cand[r][-1] < 0:
                cand = [zp.zneg(a) for a in cand]
            ok = True
            for col in range(ncols):
                acc = []
                for i in range(m):
                    if cand[i] and vecs[i][col]:
                        acc = zp.zadd(acc, zp.zmul(cand[i], vecs[i][col]))
                if acc:
                    ok = False
                    break
            if ok and cand[r]:
                return cand
            if modulus.bit_length() > 2 * bound_bits:
                return None
        prev_balanced = balanced
