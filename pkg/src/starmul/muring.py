"""The quotient ring of mu-polynomials modulo a monic polynomial Z.

Elements are polynomials in a formal parameter ``mu`` whose coefficients are
rational functions of the chart coordinates.  The star product of two
residues is the remainder of their ordinary product after division by Z.
The same remainder is obtained by substituting the companion matrix C of Z
for ``mu`` and applying the result to the first basis column.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from starmul import matrix as mx
from starmul.ratfunc import RationalFunction

NOT_REDUCED = "reduce operands first"
MU_NOT_UNIT = "μ is not a unit (Z₀ vanishes identically)"


def _rf(vars, c) -> RationalFunction:
    if isinstance(c, RationalFunction):
        if c.vars != tuple(vars):
            raise ValueError(f"coefficient over {c.vars} used with chart {tuple(vars)}")
        return c
    return RationalFunction.const(vars, c)


class MuPoly:
    """Polynomial in mu; ``coeffs[i]`` is the coefficient of mu^i."""

    __slots__ = ("vars", "coeffs")

    def __init__(self, vars: Sequence[str], coeffs: Iterable = ()):
        vars = tuple(vars)
        cs = [_rf(vars, c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.vars = vars
        self.coeffs = tuple(cs)

    @classmethod
    def mu(cls, vars) -> MuPoly:
        return cls(vars, [0, 1])

    @classmethod
    def one(cls, vars) -> MuPoly:
        return cls(vars, [1])

    @classmethod
    def monomial(cls, vars, r: int, c=1) -> MuPoly:
        return cls(vars, [0] * r + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> RationalFunction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return RationalFunction.const(self.vars, 0)

    def padded(self, m: int) -> tuple:
        if len(self.coeffs) > m:
            raise ValueError(NOT_REDUCED)
        return self.coeffs + tuple(RationalFunction.const(self.vars, 0) for _ in range(m - len(self.coeffs)))

    def _other(self, other) -> MuPoly:
        if isinstance(other, MuPoly):
            if other.vars != self.vars:
                raise ValueError(f"chart mismatch: {self.vars} vs {other.vars}")
            return other
        return MuPoly(self.vars, [other])

    def __add__(self, other):
        other = self._other(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return MuPoly(self.vars, [self.coeff(i) + other.coeff(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return MuPoly(self.vars, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        other = self._other(other)
        if self.is_zero() or other.is_zero():
            return MuPoly(self.vars)
        out = [RationalFunction.const(self.vars, 0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return MuPoly(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = MuPoly.one(self.vars)
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c) -> MuPoly:
        c = _rf(self.vars, c)
        return MuPoly(self.vars, [c * a for a in self.coeffs])

    def partial(self, name: str) -> MuPoly:
        return MuPoly(self.vars, [c.partial(name) for c in self.coeffs])

    def __eq__(self, other):
        if isinstance(other, MuPoly):
            return self.vars == other.vars and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, self.coeffs))

    def evaluate(self, point) -> list:
        """Coefficient values at a chart point."""
        return [c.evaluate(point) for c in self.coeffs]

    def value_at(self, point, lam):
        """Numeric value of the polynomial at mu = lam over a chart point."""
        acc = 0
        for c in reversed(self.evaluate(point)):
            acc = acc * lam + c
        return acc

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            mono = "" if i == 0 else ("mu" if i == 1 else f"mu^{i}")
            if not mono:
                parts.append(str(c))
                continue
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                s = str(c)
                if not _is_atom(c):
                    s = f"({s})"
                parts.append(f"{s}*{mono}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return f"MuPoly({str(self)!r})"


def _is_atom(c: RationalFunction) -> bool:
    if not c.is_polynomial() or c.den != 1:
        return False
    if len(c.num.terms) != 1:
        return False
    return True


@dataclass(frozen=True)
class MonicZ:
    """Monic Z = lower[0] + lower[1] mu + ... + lower[m-1] mu^(m-1) + mu^m."""

    lower: tuple

    def __post_init__(self):
        if not self.lower:
            raise ValueError("Z must have positive degree")
        vars = self.lower[0].vars
        object.__setattr__(self, "lower", tuple(_rf(vars, c) for c in self.lower))

    @classmethod
    def from_coeffs(cls, vars, lower) -> MonicZ:
        return cls(tuple(_rf(vars, c) for c in lower))

    @classmethod
    def from_mupoly(cls, p: MuPoly) -> MonicZ:
        if p.degree < 1 or p.coeffs[-1] != 1:
            raise ValueError("Z must be monic of positive degree")
        return cls(p.coeffs[:-1])

    @property
    def m(self) -> int:
        return len(self.lower)

    @property
    def vars(self) -> tuple:
        return self.lower[0].vars

    def as_mupoly(self) -> MuPoly:
        return MuPoly(self.vars, self.lower + (RationalFunction.const(self.vars, 1),))

    def __str__(self):
        return str(self.as_mupoly())


@dataclass(frozen=True)
class SolutionVec:
    """Column [V_0, ..., V_{m-1}] of a candidate solution."""

    entries: tuple

    @classmethod
    def from_mupoly(cls, p: MuPoly, m: int) -> SolutionVec:
        return cls(p.padded(m))

    @classmethod
    def of(cls, vars, entries) -> SolutionVec:
        return cls(tuple(_rf(vars, e) for e in entries))

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def vars(self) -> tuple:
        return self.entries[0].vars

    def to_mupoly(self) -> MuPoly:
        return MuPoly(self.vars, self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __str__(self):
        return "(" + ", ".join(str(e) for e in self.entries) + ")"


@dataclass(frozen=True)
class CompanionMatrix:
    z: MonicZ
    entries: tuple

    @property
    def m(self) -> int:
        return self.z.m


def _as_mupoly(v, z: MonicZ) -> MuPoly:
    if isinstance(v, SolutionVec):
        return v.to_mupoly()
    if isinstance(v, MuPoly):
        return v
    raise TypeError(f"expected MuPoly or SolutionVec, got {type(v).__name__}")


def divmod_mu(p: MuPoly, z: MonicZ) -> tuple[MuPoly, MuPoly]:
    """Euclidean division by the monic Z: p = q*Z + r with deg r < m."""
    m = z.m
    r = list(p.coeffs)
    if len(r) <= m:
        return MuPoly(p.vars), p
    q = [RationalFunction.const(p.vars, 0)] * (len(r) - m)
    for d in range(len(r) - 1, m - 1, -1):
        c = r[d]
        if c.is_zero():
            continue
        q[d - m] = c
        r[d] = RationalFunction.const(p.vars, 0)
        for i, zi in enumerate(z.lower):
            if not zi.is_zero():
                r[d - m + i] = r[d - m + i] - c * zi
    return MuPoly(p.vars, q), MuPoly(p.vars, r[:m])


def reduce(p: MuPoly, z: MonicZ) -> MuPoly:
    return divmod_mu(p, z)[1]


def companion(z: MonicZ) -> CompanionMatrix:
    m = z.m
    zero = RationalFunction.const(z.vars, 0)
    one = RationalFunction.const(z.vars, 1)
    rows = []
    for i in range(m):
        row = []
        for j in range(m):
            if j == m - 1:
                row.append(-z.lower[i])
            elif i == j + 1:
                row.append(one)
            else:
                row.append(zero)
        rows.append(tuple(row))
    return CompanionMatrix(z, tuple(rows))


def _companion_shift(v: Sequence, z: MonicZ) -> list:
    # C v without forming C: shift down, then subtract v[m-1] * Z_lower.
    last = v[-1]
    out = [RationalFunction.const(z.vars, 0)] + list(v[:-1])
    if not last.is_zero():
        out = [o - last * zi for o, zi in zip(out, z.lower)]
    return out


def eval_at_companion(p: MuPoly, z: MonicZ) -> SolutionVec:
    """P(C) e_1, i.e. the residue of P in column form."""
    zero = RationalFunction.const(z.vars, 0)
    e = [zero] * z.m
    e[0] = RationalFunction.const(z.vars, 1)
    acc = [zero] * z.m
    cmat = companion(z).entries
    for c in p.coeffs:
        if not c.is_zero():
            acc = [a + c * x for a, x in zip(acc, e)]
        e = list(mx.matvec(cmat, e))
    return SolutionVec(tuple(acc))


def at_companion(p: MuPoly, z: MonicZ):
    """The full matrix P(C) = sum p_i C^i."""
    cmat = companion(z).entries
    zero = RationalFunction.const(z.vars, 0)
    one = RationalFunction.const(z.vars, 1)
    power = mx.identity(z.m, zero, one)
    acc = mx.zeros(z.m, z.m, zero)
    for c in p.coeffs:
        if not c.is_zero():
            acc = mx.add(acc, mx.scale(power, c))
        power = mx.matmul(cmat, power)
    return acc


def _check_reduced(*ps: MuPoly, z: MonicZ):
    for p in ps:
        if p.degree >= z.m:
            raise ValueError(NOT_REDUCED)


def star_mul_matrix(v, w, z: MonicZ) -> MuPoly:
    """Matrix route V_C W_C e_1 = V(C) w."""
    v, w = _as_mupoly(v, z), _as_mupoly(w, z)
    _check_reduced(v, w, z=z)
    acc = [RationalFunction.const(z.vars, 0)] * z.m
    col = list(w.padded(z.m))
    for c in v.coeffs:
        if not c.is_zero():
            acc = [a + c * x for a, x in zip(acc, col)]
        col = _companion_shift(col, z)
    return MuPoly(z.vars, acc)


def star_mul(v, w, z: MonicZ, check: bool = False) -> MuPoly:
    """Residue of the product v*w modulo Z.

    With ``check`` the companion-matrix route is computed too and must agree.
    """
    v, w = _as_mupoly(v, z), _as_mupoly(w, z)
    _check_reduced(v, w, z=z)
    out = reduce(v * w, z)
    if check:
        alt = star_mul_matrix(v, w, z)
        if alt != out:
            raise AssertionError(f"division and companion routes disagree: {out} vs {alt}")
    return out


def mu_residue(z: MonicZ) -> MuPoly:
    return reduce(MuPoly.mu(z.vars), z)


def mu_inverse(z: MonicZ) -> MuPoly:
    """-(1/Z_0)(Z_1 + Z_2 mu + ... + mu^(m-1)); star product with mu is 1."""
    z0 = z.lower[0]
    if z0.is_zero():
        raise ValueError(MU_NOT_UNIT)
    tail = list(z.lower[1:]) + [RationalFunction.const(z.vars, 1)]
    f = -z0.inverse()
    return MuPoly(z.vars, [f * c for c in tail])


def star_pow(v, r: int, z: MonicZ, check: bool = False) -> MuPoly:
    """r-th star power.  Negative exponents are defined for the base mu only."""
    v = _as_mupoly(v, z)
    _check_reduced(v, z=z)
    if r == 0:
        return reduce(MuPoly.one(z.vars), z)
    if r < 0:
        if v != mu_residue(z):
            raise ValueError("negative star powers are defined only for the base mu")
        base, r = mu_inverse(z), -r
    else:
        base = v
    out = base
    for _ in range(r - 1):
        out = star_mul(out, base, z, check=check)
    if check and base == mu_residue(z) and base is v:
        col = [RationalFunction.const(z.vars, 0)] * z.m
        col[0] = RationalFunction.const(z.vars, 1)
        for _ in range(r):
            col = _companion_shift(col, z)
        if MuPoly(z.vars, col) != out:
            raise AssertionError("C^r e_1 disagrees with repeated star product")
    return out


def unit_inverse(v, z: MonicZ) -> MuPoly:
    """Inverse of a general unit of the quotient ring, solving V(C) x = e_1.

    Provided for convenience only; nothing is claimed about whether the
    inverse of a solution is again a solution.
    """
    v = _as_mupoly(v, z)
    _check_reduced(v, z=z)
    vc = at_companion(v, z)
    inv = mx.inverse(vc)
    return MuPoly(z.vars, [row[0] for row in inv])


def evaluate_z_at_matrix(z: MonicZ, c):
    """Z_0 I + Z_1 C + ... + C^m for a square matrix C."""
    m = len(c)
    zero = RationalFunction.const(z.vars, 0)
    one = RationalFunction.const(z.vars, 1)
    power = mx.identity(m, zero, one)
    acc = mx.zeros(m, m, zero)
    for zi in z.lower:
        acc = mx.add(acc, mx.scale(power, zi))
        power = mx.matmul(power, c)
    return mx.add(acc, power)
