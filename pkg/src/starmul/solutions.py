"""Exact solution generators: star powers, the two-dimensional general solution,
idempotents, direct sums and block-diagonal X tensors."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from starmul import matrix as mx
from starmul.muring import MonicZ, MuPoly, SolutionVec, reduce, star_mul, star_pow
from starmul.ratfunc import Chart, RationalFunction
from starmul.system import (
    SystemSpec,
    TensorPoly,
    XTensor,
    admits_multiplication,
    verify_solution,
)


@dataclass(frozen=True)
class GeneratedFamily:
    sys: SystemSpec
    members: tuple  # (label, SolutionVec)

    def __post_init__(self):
        for label, v in self.members:
            if not verify_solution(self.sys, v):
                raise AssertionError(f"generated member {label} is not a solution")

    def __getitem__(self, label):
        for name, v in self.members:
            if name == label:
                return v
        raise KeyError(label)


def _require_admissible(sys: SystemSpec):
    if not admits_multiplication(sys):
        raise ValueError("system does not admit the star product")


def mu_power_table(sys: SystemSpec, r_min: int, r_max: int) -> GeneratedFamily:
    """Star powers mu^r for r_min <= r <= r_max, each verified."""
    _require_admissible(sys)
    if r_min > r_max:
        raise ValueError("empty exponent range")
    mu = reduce(MuPoly.mu(sys.coords), sys.z)
    members = []
    for r in range(r_min, r_max + 1):
        members.append((f"mu^{r}", SolutionVec.from_mupoly(star_pow(mu, r, sys.z), sys.m)))
    return GeneratedFamily(sys, tuple(members))


def power_series_solution(sys: SystemSpec, coeffs: Sequence) -> SolutionVec:
    """sum_r a_r mu^r for a finite coefficient list."""
    mu = reduce(MuPoly.mu(sys.coords), sys.z)
    acc = MuPoly(sys.coords)
    power = reduce(MuPoly.one(sys.coords), sys.z)
    for i, a in enumerate(coeffs):
        if i:
            power = star_mul(power, mu, sys.z)
        if a:
            acc = acc + power.scale(a)
    return SolutionVec.from_mupoly(acc, sys.m)


EIGEN_CHART = ("x", "y")


def _univariate(coeffs: Sequence, var: RationalFunction) -> RationalFunction:
    acc = var * 0
    for c in reversed(list(coeffs)):
        acc = acc * var + Fraction(c)
    return acc


def general_solution_221(phi: Sequence, psi: Sequence) -> SolutionVec:
    """V_0 = (x phi(y) - y psi(x))/(x - y), V_1 = (psi(x) - phi(y))/(x - y).

    ``phi`` and ``psi`` are ascending coefficient lists.  The chart is the
    eigenvalue chart, where x and y are the two roots of Z.
    """
    ch = Chart(EIGEN_CHART)
    x, y = ch.symbols()
    p, q = _univariate(phi, y), _univariate(psi, x)
    d = x - y
    return SolutionVec(((x * p - y * q) / d, (q - p) / d))


def eigenvalue_pair(sys: SystemSpec, lambdas=None) -> tuple:
    if sys.m != 2:
        raise ValueError("idempotent pair is defined for m = 2")
    if lambdas is None:
        if sys.n < 2:
            raise ValueError("need two eigenvalue functions")
        l1, l2 = sys.chart.var(sys.coords[0]), sys.chart.var(sys.coords[1])
    else:
        l1, l2 = (sys.chart.coerce(v) for v in lambdas)
    zp = sys.z.as_mupoly()
    for lam in (l1, l2):
        val = sys.chart.zero
        for c in reversed(zp.coeffs):
            val = val * lam + c
        if not val.is_zero():
            raise ValueError(f"{lam} is not a root of Z")
    return l1, l2


def idempotents_m2(sys: SystemSpec, lambdas=None) -> tuple[SolutionVec, SolutionVec]:
    """The pair (l1, -1)/(l1 - l2) and (-l2, 1)/(l1 - l2)."""
    l1, l2 = eigenvalue_pair(sys, lambdas)
    d = l1 - l2
    if d.is_zero():
        raise ValueError("eigenvalues coincide")
    one = sys.chart.one
    return SolutionVec((l1 / d, -one / d)), SolutionVec((-l2 / d, one / d))


def direct_sum(sa: SystemSpec, sb: SystemSpec, name: str = "") -> SystemSpec:
    """Block-diagonal A (+) A~ on the product chart with Z = Z Z~."""
    clash = set(sa.coords) & set(sb.coords)
    if clash:
        raise ValueError(f"coordinate name clash: {sorted(clash)}")
    coords = sa.coords + sb.coords
    za = MuPoly(coords, [c.with_vars(coords) for c in sa.z.as_mupoly().coeffs])
    zb = MuPoly(coords, [c.with_vars(coords) for c in sb.z.as_mupoly().coeffs])
    z = MonicZ.from_mupoly(za * zb)
    zero = RationalFunction.const(coords, 0)
    na, nb = sa.n, sb.n
    mats = []
    for i in range(max(sa.k, sb.k) + 1):
        rows = []
        for r in range(na + nb):
            row = []
            for c in range(na + nb):
                if r < na and c < na and i <= sa.k:
                    row.append(sa.a.mats[i][r][c].with_vars(coords))
                elif r >= na and c >= na and i <= sb.k:
                    row.append(sb.a.mats[i][r - na][c - na].with_vars(coords))
                else:
                    row.append(zero)
            rows.append(tuple(row))
        mats.append(tuple(rows))
    return SystemSpec(coords, z, TensorPoly(tuple(mats)), name or f"{sa.name}+{sb.name}")


def lift_trivial(sys: SystemSpec, p: Sequence) -> SolutionVec:
    """A constant-coefficient mu-polynomial, reduced modulo the system's Z."""
    poly = MuPoly(sys.coords, [Fraction(c) for c in p])
    return SolutionVec.from_mupoly(reduce(poly, sys.z), sys.m)


def diagonal_block_X(block_sizes: Sequence[int], block_functions: Sequence, coords: Sequence[str]) -> XTensor:
    """X = diag(f_1 I, ..., f_s I) where f_a depends only on block a's coordinates."""
    ch = Chart(coords)
    if sum(block_sizes) != ch.n or any(s <= 0 for s in block_sizes):
        raise ValueError("block sizes must be positive and sum to the dimension")
    if len(block_sizes) != len(block_functions):
        raise ValueError("one function per block is required")
    diag = []
    start = 0
    for size, f in zip(block_sizes, block_functions):
        f = ch.coerce(f)
        own = set(ch.coords[start : start + size])
        outside = f.variables_used() - own
        if outside:
            raise ValueError(f"block function {f} depends on {sorted(outside)} outside its block")
        diag.extend([f] * size)
        start += size
    n = ch.n
    return XTensor(tuple(tuple(diag[i] if i == j else ch.zero for j in range(n)) for i in range(n)))


def invert_X(x: XTensor) -> XTensor:
    try:
        return XTensor(mx.inverse(x.entries))
    except ZeroDivisionError:
        raise ValueError("X is singular") from None
