"""Dense recursive integer polynomials, used internally for gcd computations.

A polynomial at level ``u`` is a list of level ``u - 1`` coefficients, highest
degree first, with no leading zeros.  Level ``-1`` elements are Python ints.
"""

from __future__ import annotations

import math
import random

# Large prime for the modular coprimality filter.
_PRIME = (1 << 61) - 1
_rng = random.Random(0x5EED)


def is_zero(f, u):
    return f == 0 if u < 0 else not f


def one(u):
    f = 1
    for _ in range(u + 1):
        f = [f]
    return f


def degree(f):
    return len(f) - 1


def _strip(f):
    i = 0
    while i < len(f) and (f[i] == 0 or f[i] == []):
        i += 1
    return f[i:] if i else f


def add(f, g, u):
    if u < 0:
        return f + g
    df, dg = len(f), len(g)
    if df < dg:
        f, g, df, dg = g, f, dg, df
    k = df - dg
    out = f[:k] + [add(a, b, u - 1) for a, b in zip(f[k:], g)]
    return _strip(out)


def neg(f, u):
    if u < 0:
        return -f
    return [neg(c, u - 1) for c in f]


def sub(f, g, u):
    return add(f, neg(g, u), u)


def mul(f, g, u):
    if u < 0:
        return f * g
    if not f or not g:
        return []
    out = [0 if u == 0 else [] for _ in range(len(f) + len(g) - 1)]
    for i, a in enumerate(f):
        if is_zero(a, u - 1):
            continue
        for j, b in enumerate(g):
            if is_zero(b, u - 1):
                continue
            out[i + j] = add(out[i + j], mul(a, b, u - 1), u - 1)
    return _strip(out)


def mul_ground(f, c, u):
    """Multiply a level-``u`` polynomial by a level-``u - 1`` element."""
    if u < 0:
        return f * c
    return _strip([mul(a, c, u - 1) for a in f])


def power(f, n, u):
    result = one(u)
    while n:
        if n & 1:
            result = mul(result, f, u)
        n >>= 1
        if n:
            f = mul(f, f, u)
    return result


def _shift(f, j, u):
    # f * x^j
    return f + [0 if u == 0 else [] for _ in range(j)] if f else f


def exquo(f, g, u):
    """Exact quotient ``f / g``; raises ArithmeticError if not exact."""
    if u < 0:
        q, r = divmod(f, g)
        if r:
            raise ArithmeticError("inexact division")
        return q
    if not g:
        raise ZeroDivisionError("division by zero polynomial")
    if not f:
        return []
    dg = degree(g)
    if degree(f) < dg:
        raise ArithmeticError("inexact division")
    q = [0 if u == 0 else [] for _ in range(degree(f) - dg + 1)]
    r = f
    lc = g[0]
    while r and degree(r) >= dg:
        c = exquo(r[0], lc, u - 1)
        j = degree(r) - dg
        q[len(q) - 1 - j] = c
        r = sub(r, _shift(mul_ground(g, c, u), j, u), u)
    if r:
        raise ArithmeticError("inexact division")
    return _strip(q)


def exquo_ground(f, c, u):
    if u < 0:
        return exquo(f, c, u)
    return [exquo(a, c, u - 1) for a in f]


def prem(f, g, u):
    """Pseudo-remainder of ``f`` by ``g`` in the main variable."""
    df, dg = degree(f), degree(g)
    if df < dg:
        return f
    n = df - dg + 1
    lc_g = g[0]
    r = f
    while r and degree(r) >= dg:
        j = degree(r) - dg
        r = sub(mul_ground(r, lc_g, u), _shift(mul_ground(g, r[0], u), j, u), u)
        n -= 1
    return mul_ground(r, power_ground(lc_g, n, u - 1), u)


def power_ground(c, n, u):
    return c ** n if u < 0 else power(c, n, u)


def leading_sign(f, u):
    while u >= 0:
        if not f:
            return 0
        f = f[0]
        u -= 1
    return (f > 0) - (f < 0)


def content(f, u):
    """Gcd of the coefficients of ``f`` (a level ``u - 1`` element)."""
    if u == 0:
        g = 0
        for c in f:
            g = math.gcd(g, c)
            if g == 1:
                break
        return g
    g = []
    for c in f:
        g = gcd(g, c, u - 1)
        if g == one(u - 1):
            break
    return g


def primitive(f, u):
    c = content(f, u)
    if is_zero(c, u - 1):
        return c, f
    if u == 0:
        return c, [a // c for a in f]
    return c, exquo_ground(f, c, u)


def _normal_sign(f, u):
    return neg(f, u) if leading_sign(f, u) < 0 else f


def gcd(f, g, u):
    """Gcd over Z[x_0, ..., x_u] with positive leading coefficient."""
    if u < 0:
        return math.gcd(f, g)
    if not f:
        return _normal_sign(g, u)
    if not g:
        return _normal_sign(f, u)
    cf, pf = primitive(f, u)
    cg, pg = primitive(g, u)
    c = gcd(cf, cg, u - 1)
    if degree(pf) < degree(pg):
        pf, pg = pg, pf
    if degree(pg) == 0 or _coprime_image(pf, pg, u):
        h = one(u)
    else:
        h = _subresultant_gcd(pf, pg, u)
    return _normal_sign(mul_ground(h, c, u), u)


def _subresultant_gcd(a, b, u):
    # Primitive inputs, deg a >= deg b > 0.  Sub-resultant PRS.
    g = h = one(u - 1)
    while True:
        delta = degree(a) - degree(b)
        r = prem(a, b, u)
        if not r:
            return primitive(b, u)[1]
        if degree(r) == 0:
            return one(u)
        a, b = b, exquo_ground(r, mul(g, power_ground(h, delta, u - 1), u - 1), u)
        g = a[0]
        if delta == 1:
            h = g
        elif delta > 1:
            h = exquo(power_ground(g, delta, u - 1), power_ground(h, delta - 1, u - 1), u - 1)


def _eval_mod(c, u, point):
    # Evaluate a level-u element at ``point`` (length u + 1) modulo _PRIME.
    if u < 0:
        return c % _PRIME
    x = point[0]
    acc = 0
    for a in c:
        acc = (acc * x + _eval_mod(a, u - 1, point[1:])) % _PRIME
    return acc


def _gcd_degree_mod(f, g):
    while g:
        f, g = g, _rem_mod(f, g)
    return len(f) - 1


def _rem_mod(f, g):
    f = list(f)
    inv = pow(g[0], _PRIME - 2, _PRIME)
    dg = len(g) - 1
    while len(f) - 1 >= dg and f:
        c = f[0] * inv % _PRIME
        for i in range(len(g)):
            f[i] = (f[i] - c * g[i]) % _PRIME
        while f and f[0] == 0:
            f.pop(0)
    return f


def _coprime_image(f, g, u, tries=2):
    """True when an evaluation image proves gcd(f, g) has degree 0 in x_0.

    Sound for primitive inputs: if the image gcd is constant (and leading
    coefficients survive the evaluation) the true gcd is a unit.
    """
    for _ in range(tries):
        point = [_rng.randrange(1, _PRIME) for _ in range(u)]
        fi = [_eval_mod(c, u - 1, point) for c in f]
        gi = [_eval_mod(c, u - 1, point) for c in g]
        if fi[0] == 0 or gi[0] == 0:
            continue
        return _gcd_degree_mod(_strip(fi), _strip(gi)) == 0
    return False


def from_terms(terms, u):
    """Build from ``{exponent tuple: int}`` with len(exponent) == u + 1."""
    if u < 0:
        return sum(terms.values()) if terms else 0
    groups = {}
    for exp, c in terms.items():
        groups.setdefault(exp[0], {})[exp[1:]] = c
    if not groups:
        return []
    top = max(groups)
    out = []
    for d in range(top, -1, -1):
        out.append(from_terms(groups[d], u - 1) if d in groups else (0 if u == 0 else []))
    return _strip(out)


def to_terms(f, u, prefix=()):
    if u < 0:
        return {prefix: f} if f else {}
    out = {}
    d = degree(f)
    for i, c in enumerate(f):
        out.update(to_terms(c, u - 1, prefix + (d - i,)))
    return out
