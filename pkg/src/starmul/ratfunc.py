"""Multivariate rational functions over Q in canonical form.

A canonical rational function ``num / den`` has integer coefficients, the
numerator and denominator are coprime as polynomials, the combined integer
content is 1, and the grlex-leading coefficient of the denominator is
positive.  Two canonical values are equal iff they are structurally equal.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from starmul.poly import MultiPoly, _coerce, poly_gcd


class RationalFunction:
    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        if den is None:
            den = MultiPoly.const(num.vars, 1)
        canon = normalize(num, den)
        self.num = canon.num
        self.den = canon.den
        self._hash = None

    @classmethod
    def _make(cls, num, den):
        r = cls.__new__(cls)
        r.num = num
        r.den = den
        r._hash = None
        return r

    @property
    def vars(self) -> tuple:
        return self.num.vars

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("rational function is not constant")
        return Fraction(self.num.constant_value()) / Fraction(self.den.constant_value())

    def variables_used(self) -> set:
        return self.num.variables_used() | self.den.variables_used()

    # -- arithmetic -------------------------------------------------------

    def _lift(self, other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, MultiPoly):
            return RationalFunction(other)
        return RationalFunction.const(self.vars, other)

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        a, b, c, d = self.num, self.den, other.num, other.den
        if b == d:
            return normalize(a + c, b)
        if b.is_constant() and d.is_constant():
            return normalize(a * d + c * b, b * d)
        g = poly_gcd(b, d)
        b1, d1 = b.exquo(g), d.exquo(g)
        return normalize(a * d1 + c * b1, b1 * d)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._make(-self.num, self.den)

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RationalFunction.const(self.vars, 0)
        a, b, c, d = self.num, self.den, other.num, other.den
        g1 = poly_gcd(a, d)
        g2 = poly_gcd(c, b)
        if not g1.is_constant():
            a, d = a.exquo(g1), d.exquo(g1)
        if not g2.is_constant():
            c, b = c.exquo(g2), b.exquo(g2)
        return _rescale(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if self.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return _rescale(self.den, self.num)

    def __truediv__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("integer exponent required")
        if n < 0:
            return self.inverse() ** (-n)
        return _rescale(self.num ** n, self.den ** n)

    def partial(self, name: str) -> RationalFunction:
        """Partial derivative with respect to the coordinate ``name``."""
        if name not in self.vars:
            raise ValueError(f"unknown coordinate {name!r}")
        dn = self.num.diff(name)
        if self.den.is_constant():
            return _rescale(dn, self.den)
        dd = self.den.diff(name)
        return normalize(dn * self.den - self.num * dd, self.den * self.den)

    # -- evaluation -------------------------------------------------------

    def evaluate(self, point):
        """Evaluate at a point given as a mapping or a sequence of values.

        Exact for Fraction/int inputs, floating for float/complex inputs.
        """
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the point")
        n = self.num.evaluate(point)
        if isinstance(d, int) and isinstance(n, int):
            return Fraction(n, d)
        return n / d

    def with_vars(self, vars: Sequence[str]) -> RationalFunction:
        # the grlex leading sign depends on variable order, so rescale
        return _rescale(self.num.with_vars(vars), self.den.with_vars(vars))

    # -- comparison / display --------------------------------------------

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, MultiPoly):
            return self.den == 1 and self.num == other
        try:
            c = _coerce(other)
        except TypeError:
            return NotImplemented
        return self.is_constant() and self.constant_value() == c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        n = str(self.num)
        if len(self.num.terms) > 1:
            n = f"({n})"
        d = str(self.den)
        if not _bare_denominator(self.den):
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RationalFunction({str(self)!r}, vars={self.vars!r})"

    @classmethod
    def const(cls, vars: Sequence[str], c) -> RationalFunction:
        c = Fraction(c)
        return cls._make(MultiPoly.const(vars, c.numerator), MultiPoly.const(vars, c.denominator))

    @classmethod
    def var(cls, vars: Sequence[str], name: str) -> RationalFunction:
        return cls._make(MultiPoly.var(vars, name), MultiPoly.const(vars, 1))


def _bare_denominator(den: MultiPoly) -> bool:
    if den.is_constant():
        return True
    if not den.is_monomial():
        return False
    exp, c = next(iter(den.terms.items()))
    return c == 1 and sum(1 for e in exp if e) == 1


def _rescale(num: MultiPoly, den: MultiPoly) -> RationalFunction:
    """Canonical scaling for an already coprime pair."""
    if den.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if num.is_zero():
        vars = num.vars
        return RationalFunction._make(MultiPoly.const(vars, 0), MultiPoly.const(vars, 1))
    cn = num.content()
    cd = den.content()
    pn = num.scale(1 / cn) if cn != 1 else num
    pd = den.scale(1 / cd) if cd != 1 else den
    ratio = cn / cd
    if pd.leading_coeff() < 0:
        pd, ratio = -pd, -ratio
    out_num = pn.scale(ratio.numerator) if ratio.numerator != 1 else pn
    out_den = pd.scale(ratio.denominator) if ratio.denominator != 1 else pd
    return RationalFunction._make(out_num, out_den)


def normalize(num: MultiPoly, den: MultiPoly) -> RationalFunction:
    """Unique canonical representative of ``num / den``."""
    if num.vars != den.vars:
        raise ValueError(f"variable mismatch: {num.vars} vs {den.vars}")
    if den.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if num.is_zero():
        return _rescale(num, den)
    g = poly_gcd(num, den)
    if not g.is_constant():
        num, den = num.exquo(g), den.exquo(g)
    return _rescale(num, den)


def partial(f: RationalFunction, coord: str) -> RationalFunction:
    return f.partial(coord)


class Chart:
    """A closed, ordered set of coordinate names and constructors over it."""

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence[str]):
        coords = tuple(coords)
        if len(set(coords)) != len(coords):
            raise ValueError(f"duplicate coordinate names in {coords}")
        if "mu" in coords:
            raise ValueError("'mu' is reserved for the polynomial parameter")
        self.coords = coords

    def __eq__(self, other):
        return isinstance(other, Chart) and other.coords == self.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"Chart({self.coords!r})"

    @property
    def n(self) -> int:
        return len(self.coords)

    def var(self, name: str) -> RationalFunction:
        return RationalFunction.var(self.coords, name)

    def symbols(self) -> tuple:
        return tuple(self.var(c) for c in self.coords)

    def const(self, c) -> RationalFunction:
        return RationalFunction.const(self.coords, c)

    @property
    def zero(self) -> RationalFunction:
        return self.const(0)

    @property
    def one(self) -> RationalFunction:
        return self.const(1)

    def coerce(self, value) -> RationalFunction:
        if isinstance(value, RationalFunction):
            if value.vars != self.coords:
                raise ValueError(f"expression over {value.vars} used in chart {self.coords}")
            return value
        if isinstance(value, MultiPoly):
            if value.vars != self.coords:
                raise ValueError(f"expression over {value.vars} used in chart {self.coords}")
            return RationalFunction(value)
        return self.const(value)

    def poly(self, terms: Mapping) -> RationalFunction:
        return RationalFunction(MultiPoly(self.coords, terms))
