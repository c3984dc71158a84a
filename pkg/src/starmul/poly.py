"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from starmul import _dense

Coeff = Union[int, Fraction]
Exponent = tuple


def _coerce(c) -> Coeff:
    if isinstance(c, bool):
        raise TypeError("booleans are not polynomial coefficients")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, str):
        return _coerce(Fraction(c))
    raise TypeError(f"unsupported coefficient {c!r}")


def grlex_key(exp: Exponent):
    """Sort key of the graded lexicographic order (larger is leading)."""
    return (sum(exp), exp)


def _print_key(exp: Exponent):
    # ascending total degree; inside a degree, lexicographically larger first
    return (sum(exp), tuple(-e for e in exp))


class MultiPoly:
    """Polynomial over Q in a fixed, ordered tuple of variables.

    Values are immutable.  ``terms`` maps exponent tuples to nonzero
    coefficients (ints or Fractions).
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[Exponent, object] | None = None):
        self.vars = tuple(vars)
        clean = {}
        n = len(self.vars)
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != n or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for variables {self.vars}")
            c = _coerce(c)
            if c:
                clean[exp] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, vars, terms):
        p = cls.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, vars: Sequence[str], c=1) -> MultiPoly:
        vars = tuple(vars)
        c = _coerce(c)
        return cls._raw(vars, {(0,) * len(vars): c} if c else {})

    @classmethod
    def var(cls, vars: Sequence[str], name: str) -> MultiPoly:
        vars = tuple(vars)
        if name not in vars:
            raise ValueError(f"unknown variable {name!r}; expected one of {vars}")
        exp = tuple(1 if v == name else 0 for v in vars)
        return cls._raw(vars, {exp: 1})

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_value(self) -> Coeff:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()), 0)

    # -- structure --------------------------------------------------------

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, name: str) -> int:
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def leading_exponent(self) -> Exponent:
        return max(self.terms, key=grlex_key)

    def leading_coeff(self) -> Coeff:
        return self.terms[self.leading_exponent()] if self.terms else 0

    def variables_used(self) -> set[str]:
        used = set()
        for exp in self.terms:
            for v, e in zip(self.vars, exp):
                if e:
                    used.add(v)
        return used

    def content(self) -> Fraction:
        """Positive rational c with self / c primitive over Z."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            if isinstance(c, Fraction):
                num = math.gcd(num, c.numerator)
                den = den * c.denominator // math.gcd(den, c.denominator)
            else:
                num = math.gcd(num, c)
        return Fraction(num, den)

    def with_vars(self, vars: Sequence[str]) -> MultiPoly:
        """Re-express over a variable tuple containing every used variable."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        pos = []
        for v in self.vars:
            pos.append(vars.index(v) if v in vars else None)
        out = {}
        for exp, c in self.terms.items():
            new = [0] * len(vars)
            for p, e in zip(pos, exp):
                if e:
                    if p is None:
                        raise ValueError("polynomial uses a variable missing from the target")
                    new[p] = e
            out[tuple(new)] = c
        return MultiPoly._raw(vars, out)

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: MultiPoly):
        if other.vars != self.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def _lift(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.const(self.vars, other)

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp, 0) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return MultiPoly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                c = _coerce(other)
            except TypeError:
                return NotImplemented
            return self.scale(c)
        self._check(other)
        if len(self.terms) > len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = {}
        get = out.get
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = get(e, 0) + ca * cb
        return MultiPoly._raw(self.vars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c) -> MultiPoly:
        c = _coerce(c)
        if not c:
            return MultiPoly._raw(self.vars, {})
        return MultiPoly._raw(self.vars, {e: _coerce(v * c) for e, v in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = MultiPoly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def diff(self, name: str) -> MultiPoly:
        if name not in self.vars:
            raise ValueError(f"unknown coordinate {name!r}")
        i = self.vars.index(name)
        out = {}
        for exp, c in self.terms.items():
            if exp[i]:
                new = exp[:i] + (exp[i] - 1,) + exp[i + 1:]
                out[new] = c * exp[i]
        return MultiPoly._raw(self.vars, out)

    def exquo(self, other: MultiPoly) -> MultiPoly:
        """Exact quotient; raises ArithmeticError when ``other`` does not divide."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if other.is_constant():
            return self.scale(Fraction(1) / Fraction(other.constant_value()))
        rem = dict(self.terms)
        lead_e = other.leading_exponent()
        lead_c = Fraction(other.terms[lead_e])
        quot = {}
        while rem:
            e = max(rem, key=grlex_key)
            q_e = tuple(a - b for a, b in zip(e, lead_e))
            if any(x < 0 for x in q_e):
                raise ArithmeticError("inexact polynomial division")
            q_c = _coerce(rem[e] / lead_c)
            quot[q_e] = q_c
            for oe, oc in other.terms.items():
                t = tuple(a + b for a, b in zip(q_e, oe))
                v = rem.get(t, 0) - q_c * oc
                if v:
                    rem[t] = _coerce(v)
                else:
                    rem.pop(t, None)
        return MultiPoly._raw(self.vars, quot)

    # -- evaluation and substitution -------------------------------------

    def evaluate(self, point):
        """Evaluate at ``point`` (a mapping name -> value, or a sequence)."""
        if isinstance(point, Mapping):
            vals = [point[v] for v in self.vars]
        else:
            vals = list(point)
        total = 0
        for exp, c in self.terms.items():
            t = c
            for x, e in zip(vals, exp):
                if e:
                    t = t * x ** e
            total = total + t
        return total

    def compose(self, mapping: Mapping[str, object], vars: Sequence[str]) -> MultiPoly:
        """Substitute polynomials (over ``vars``) for every variable."""
        vars = tuple(vars)
        images = [mapping[v] for v in self.vars]
        images = [m if isinstance(m, MultiPoly) else MultiPoly.const(vars, m) for m in images]
        total = MultiPoly.const(vars, 0)
        cache = {}
        for exp, c in self.terms.items():
            t = MultiPoly.const(vars, c)
            for i, e in enumerate(exp):
                if e:
                    key = (i, e)
                    if key not in cache:
                        cache[key] = images[i] ** e
                    t = t * cache[key]
            total = total + t
        return total

    # -- comparison / display --------------------------------------------

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.vars == other.vars and self.terms == other.terms
        try:
            c = _coerce(other)
        except TypeError:
            return NotImplemented
        return self.is_constant() and self.constant_value() == c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self):
        """Terms in display order (ascending degree)."""
        return sorted(self.terms.items(), key=lambda t: _print_key(t[0]))

    def monomial_str(self, exp: Exponent) -> str:
        parts = []
        for v, e in zip(self.vars, exp):
            if e == 1:
                parts.append(v)
            elif e:
                parts.append(f"{v}^{e}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for i, (exp, c) in enumerate(self.sorted_terms()):
            mono = self.monomial_str(exp)
            neg = c < 0
            a = -c if neg else c
            if mono:
                body = mono if a == 1 else f"{a}*{mono}"
            else:
                body = str(a)
            if i == 0:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)

    def __repr__(self):
        return f"MultiPoly({self.vars!r}, {str(self)!r})"


def integer_scale(p: MultiPoly) -> tuple[MultiPoly, Fraction]:
    """Return (q, c) with p = c * q, q having coprime integer coefficients."""
    c = p.content()
    if not c:
        return p, Fraction(1)
    if c == 1:
        return p, c
    return p.scale(1 / c), c


def monomial_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    exps = list(p.terms) + list(q.terms)
    low = tuple(min(col) for col in zip(*exps))
    return MultiPoly._raw(p.vars, {low: 1})


def poly_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Primitive integer gcd with positive leading coefficient (grlex).

    The gcd of the coefficient contents is not included; gcd(0, 0) = 0.
    """
    p._check(q)
    if p.is_zero() and q.is_zero():
        return p
    if p.is_zero():
        return _normalize_gcd(q)
    if q.is_zero():
        return _normalize_gcd(p)
    if p.is_constant() or q.is_constant():
        return MultiPoly.const(p.vars, 1)
    if p.is_monomial() or q.is_monomial():
        return monomial_gcd(p, q)
    if _coprime_by_images(p, q):
        return MultiPoly.const(p.vars, 1)
    used = sorted(p.variables_used() | q.variables_used(), key=p.vars.index)
    # the variable of lowest combined degree goes innermost
    used.sort(key=lambda v: -(p.degree(v) + q.degree(v)))
    idx = [p.vars.index(v) for v in used]
    u = len(used) - 1

    def dense(poly):
        ip, _ = integer_scale(poly)
        terms = {tuple(e[i] for i in idx): int(c) for e, c in ip.terms.items()}
        return _dense.from_terms(terms, u)

    g = _dense.gcd(dense(p), dense(q), u)
    terms = {}
    for e, c in _dense.to_terms(g, u).items():
        full = [0] * len(p.vars)
        for i, x in zip(idx, e):
            full[i] = x
        terms[tuple(full)] = c
    return _normalize_gcd(MultiPoly._raw(p.vars, terms))


def _univariate_image(p: MultiPoly, i: int, point, prime: int):
    coeffs = {}
    for exp, c in p.terms.items():
        if isinstance(c, Fraction):
            c = c.numerator * pow(c.denominator, prime - 2, prime)
        t = c % prime
        for j, e in enumerate(exp):
            if j != i and e:
                t = t * pow(point[j], e, prime) % prime
        coeffs[exp[i]] = (coeffs.get(exp[i], 0) + t) % prime
    top = max(coeffs)
    return [coeffs.get(d, 0) for d in range(top, -1, -1)]


def _coprime_by_images(p: MultiPoly, q: MultiPoly) -> bool:
    """Cheap sufficient test that gcd(p, q) is a constant.

    For every variable shared by p and q, a random evaluation of the other
    variables modulo a prime that keeps both leading coefficients must give
    coprime univariate images; the true gcd then has degree 0 in it.
    """
    prime = _dense._PRIME
    shared = p.variables_used() & q.variables_used()
    for v in shared:
        i = p.vars.index(v)
        point = [_dense._rng.randrange(1, prime) for _ in p.vars]
        fi = _univariate_image(p, i, point, prime)
        gi = _univariate_image(q, i, point, prime)
        if len(fi) - 1 != p.degree(v) or len(gi) - 1 != q.degree(v):
            return False
        if fi[0] == 0 or gi[0] == 0:
            return False
        if _dense._gcd_degree_mod(fi, gi) != 0:
            return False
    return True


def _normalize_gcd(p: MultiPoly) -> MultiPoly:
    p, _ = integer_scale(p)
    return -p if p.leading_coeff() < 0 else p


def lcm_of(polys: Iterable[MultiPoly]) -> MultiPoly:
    polys = list(polys)
    acc = MultiPoly.const(polys[0].vars, 1)
    for p in polys:
        g = poly_gcd(acc, p)
        acc = _normalize_gcd((acc * p).exquo(g))
    return acc
