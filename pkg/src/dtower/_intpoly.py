"""Dense integer polynomials as plain lists, lowest degree first.

This is the arithmetic engine underneath the public Q[x] types.  Everything
here assumes normalized input (no trailing zero coefficients) and returns
normalized output.  Multiplication switches to Kronecker substitution via
gmpy2.pack for large operands, which is what keeps the elimination kernels
usable at the sizes the power-module computations reach.
"""

from math import gcd as _igcd

import gmpy2

_KARA_CUTOFF = 900  # len(a)*len(b) above which Kronecker packing wins


def znorm(a):
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return a[:n] if n != len(a) else a


def zadd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return znorm(out)


def zsub(a, b):
    out = list(a)
    if len(b) > len(out):
        out.extend([0] * (len(b) - len(out)))
    for i, c in enumerate(b):
        out[i] -= c
    return znorm(out)


def zneg(a):
    return [-c for c in a]


def zscale(a, k):
    if k == 0:
        return []
    return [c * k for c in a]


def _zmul_school(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return znorm(out)


def _pack_signed(a, nbits):
    pos = [c if c > 0 else 0 for c in a]
    neg = [-c if c < 0 else 0 for c in a]
    return gmpy2.pack(pos, nbits) - gmpy2.pack(neg, nbits)


def _zmul_kronecker(a, b):
    amax = max(abs(c) for c in a)
    bmax = max(abs(c) for c in b)
    bound = amax * bmax * min(len(a), len(b))
    nbits = bound.bit_length() + 2
    prod = _pack_signed(a, nbits) * _pack_signed(b, nbits)
    n = len(a) + len(b) - 1
    half = 1 << (nbits - 1)
    offset = gmpy2.pack([half] * n, nbits)
    digits = gmpy2.unpack(prod + offset, nbits)
    return znorm([int(d) - half for d in digits[:n]])


def zmul(a, b):
    if not a or not b:
        return []
    if len(a) * len(b) <= _KARA_CUTOFF:
        return _zmul_school(a, b)
    return _zmul_kronecker(a, b)


def zmul_xk(a, k):
    if not a:
        return []
    return [0] * k + list(a)


def _unpack_balanced(g, nbits, n):
    """Digits d_0..d_{n-1} in (-2^(nbits-1), 2^(nbits-1)] with
    g = sum d_i 2^(nbits*i), assuming such a representation exists."""
    half = 1 << (nbits - 1)
    offset = gmpy2.pack([half] * n, nbits)
    digits = gmpy2.unpack(g + offset, nbits)
    return znorm([int(d) - half for d in digits[:n]])


def _zdiv_kronecker(a, b):
    """Exact-quotient attempt via evaluation at a power of two; None when
    the reconstruction does not verify (caller falls back)."""
    dq = len(a) - len(b)
    amax = max(abs(c) for c in a)
    bmax = max(abs(c) for c in b)
    nbits = max(amax.bit_length(), bmax.bit_length()) + len(b) + 4
    for _ in range(3):
        A = _pack_signed(a, nbits)
        B = _pack_signed(b, nbits)
        if not B:
            nbits *= 2
            continue
        q, r = divmod(A, B)
        if r:
            # a(2^nbits) not divisible: the division cannot be exact
            return "inexact"
        neg = q < 0
        if neg:
            q = -q
        cand = _unpack_balanced(q, nbits, dq + 1)
        if neg:
            cand = zneg(cand)
        if zmul(cand, b) == znorm(list(a)):
            return cand
        nbits *= 2
    return None


def zdivexact(a, b):
    """Quotient of an exact division a = q*b in Z[x]."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return []
    if len(a) - len(b) < 0:
        raise ArithmeticError("inexact polynomial division")
    if len(a) * len(b) > _KARA_CUTOFF:
        res = _zdiv_kronecker(a, b)
        if res == "inexact":
            raise ArithmeticError("inexact polynomial division")
        if res is not None:
            return res
    rem = list(a)
    db, lb = len(b) - 1, b[-1]
    dq = len(a) - 1 - db
    if dq < 0:
        raise ArithmeticError("inexact polynomial division")
    q = [0] * (dq + 1)
    for k in range(dq, -1, -1):
        c = rem[k + db]
        if c % lb:
            raise ArithmeticError("inexact polynomial division")
        c //= lb
        q[k] = c
        if c:
            for j, bj in enumerate(b):
                rem[k + j] -= c * bj
    if any(rem):
        raise ArithmeticError("inexact polynomial division")
    return znorm(q)


def ztry_divexact(a, b):
    try:
        return zdivexact(a, b)
    except ArithmeticError:
        return None


def zcontent(a):
    g = 0
    for c in a:
        g = _igcd(g, abs(c))
        if g == 1:
            return 1
    return g


def zprimitive(a):
    """(content-with-sign, primitive part); leading coefficient made positive."""
    if not a:
        return 0, []
    g = zcontent(a)
    if a[-1] < 0:
        g = -g
    return g, [c // g for c in a]


def zderiv(a):
    return znorm([i * a[i] for i in range(1, len(a))])


def zeval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _zreconstruct(g, xi):
    """Balanced base-xi digits of the integer g, as a polynomial."""
    out = []
    half = xi // 2
    while g:
        d = g % xi
        if d > half:
            d -= xi
        out.append(d)
        g = (g - d) // xi
    return znorm(out)


def _zgcd_heu(a, b):
    """Heuristic gcd of primitive a, b; None if it fails to stabilize.

    Evaluation points are powers of two so both the evaluation and the
    balanced-digit reconstruction reduce to gmpy2 pack/unpack; every
    candidate is still verified by exact division.
    """
    amax = max(abs(c) for c in a)
    bmax = max(abs(c) for c in b)
    # near the classical 2*min+4 evaluation point, but large enough that
    # both operands pack into nbits-wide digits
    nbits = max((2 * min(amax, bmax) + 4).bit_length(),
                amax.bit_length() + 2, bmax.bit_length() + 2)
    for _ in range(8):
        ga, gb = _pack_signed(a, nbits), _pack_signed(b, nbits)
        if ga and gb:
            g = int(gmpy2.gcd(ga, gb))
            n = g.bit_length() // nbits + 2
            h = _unpack_balanced(g, nbits, n)
            _, h = zprimitive(h)
            if h and ztry_divexact(a, h) is not None and ztry_divexact(b, h) is not None:
                return h
        nbits += nbits // 2 + 2
    return None


def _zpseudo_rem(a, b):
    db = len(b) - 1
    lb = b[-1]
    rem = list(a)
    while rem and len(rem) - 1 >= db:
        c = rem[-1]
        k = len(rem) - 1 - db
        rem = [lb * r for r in rem]
        for j, bj in enumerate(b):
            rem[k + j] -= c * bj
        rem = list(znorm(rem))
    return rem


def _zgcd_prs(a, b):
    """Primitive PRS gcd of primitive a, b (robust fallback)."""
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _zpseudo_rem(a, b)
        a, b = b, zprimitive(r)[1]
    return zprimitive(a)[1]


def zgcd(a, b):
    if not a:
        return zprimitive(b)[1] if b else []
    if not b:
        return zprimitive(a)[1]
    ca, pa = zprimitive(a)
    cb, pb = zprimitive(b)
    cg = _igcd(abs(ca), abs(cb))
    if len(pa) == 1 or len(pb) == 1:
        g = [1]
    else:
        g = _zgcd_heu(pa, pb)
        if g is None:
            g = _zgcd_prs(pa, pb)
    if cg != 1:
        g = zscale(g, cg)
    return g


def zvec_content(vec):
    """Gcd of all entries of a vector of integer polynomials."""
    g = []
    for a in vec:
        if a:
            g = zgcd(g, a)
            if len(g) == 1 and abs(g[0]) == 1:
                return [1]
    return g if g else []
