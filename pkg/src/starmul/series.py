"""Numeric evaluation of star power series sum_r a_r C^r e_1 at chart points.

Two routes are provided.  Direct summation iterates the companion matrix.
The spectral route uses the left eigenvectors (1, l, l^2, ...) of C and their
derivatives (a confluent Vandermonde matrix W with W C = J W), so that
f(C) e_1 solves W p = (f^(d)(l) / d!) blockwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from starmul.muring import MonicZ
from starmul.system import _companion_numeric

ROOT_RESIDUAL = 1e-10
CLUSTER_TOL = 1e-8
REAL_TOL = 1e-10
ROUTE_TOL = 1e-9
GAP_TOL = 1e-6
FD_STEP = 1e-6
FD_TOL = 1e-6

STRICT = "strict"
RELAXED = "relaxed"
UNPROVED = "unproved regime"


# -- series specifications ------------------------------------------------


@dataclass(frozen=True)
class SeriesSpec:
    """Coefficients a_r of a scalar power series.

    kind: ``exp``, ``sin``, ``cos``, ``geometric`` (a_r = ratio^r) or
    ``explicit`` (a finite list, zero beyond its end).
    """

    kind: str
    coeffs: tuple = ()
    ratio: Fraction | float = 1

    def __post_init__(self):
        if self.kind not in ("exp", "sin", "cos", "geometric", "explicit"):
            raise ValueError(f"unknown series kind {self.kind!r}")
        if self.kind == "explicit" and not self.coeffs:
            raise ValueError("explicit series needs coefficients")

    @property
    def radius(self) -> float:
        if self.kind == "geometric":
            return math.inf if self.ratio == 0 else 1 / abs(float(self.ratio))
        return math.inf

    def coefficient(self, r: int):
        """Exact a_r."""
        if self.kind == "exp":
            return Fraction(1, math.factorial(r))
        if self.kind == "sin":
            return Fraction(0) if r % 2 == 0 else Fraction((-1) ** (r // 2), math.factorial(r))
        if self.kind == "cos":
            return Fraction(0) if r % 2 else Fraction((-1) ** (r // 2), math.factorial(r))
        if self.kind == "geometric":
            return Fraction(self.ratio) ** r
        return Fraction(self.coeffs[r]) if r < len(self.coeffs) else Fraction(0)

    def _stepper(self):
        # (factor(r) so that u_r = factor(r) C u_{r-1}, weight(r) with a_r C^r e_1 = weight(r) u_r)
        if self.kind in ("exp", "sin", "cos"):
            if self.kind == "exp":
                weight = lambda r: 1.0
            elif self.kind == "sin":
                weight = lambda r: 0.0 if r % 2 == 0 else float((-1) ** (r // 2))
            else:
                weight = lambda r: 0.0 if r % 2 else float((-1) ** (r // 2))
            return (lambda r: 1.0 / r), weight
        if self.kind == "geometric":
            rho = float(self.ratio)
            return (lambda r: rho), (lambda r: 1.0)
        cs = [float(Fraction(c)) for c in self.coeffs]
        return (lambda r: 1.0), (lambda r: cs[r] if r < len(cs) else 0.0)

    def derivative(self, lam: complex, d: int) -> complex:
        """f^(d)(lam) / d! for the sum function f."""
        if self.kind == "exp":
            return np.exp(lam) / math.factorial(d)
        if self.kind in ("sin", "cos"):
            shift = d + (1 if self.kind == "cos" else 0)
            val = (np.sin(lam), np.cos(lam), -np.sin(lam), -np.cos(lam))[shift % 4]
            return val / math.factorial(d)
        if self.kind == "geometric":
            rho = complex(self.ratio)
            return rho ** d / (1 - rho * lam) ** (d + 1)
        acc = 0j
        for r, c in enumerate(self.coeffs):
            if r >= d:
                acc += float(Fraction(c)) * math.comb(r, d) * lam ** (r - d)
        return acc

    def finite_length(self) -> int | None:
        return len(self.coeffs) if self.kind == "explicit" else None


# -- roots ------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumAtPoint:
    point: tuple
    eigenvalues: tuple  # (complex value, multiplicity)
    jordan_ok: bool

    @property
    def pattern(self) -> tuple:
        return tuple(sorted(m for _, m in self.eigenvalues))

    def flat(self) -> list:
        out = []
        for lam, k in self.eigenvalues:
            out.extend([lam] * k)
        return out

    def min_gap(self) -> float:
        vals = [lam for lam, _ in self.eigenvalues]
        if len(vals) < 2:
            return math.inf
        return min(abs(a - b) for i, a in enumerate(vals) for b in vals[i + 1 :])


def z_coefficients(z: MonicZ, point) -> list:
    """Lower coefficients at a point, exact when the point is rational."""
    out = []
    for zi in z.lower:
        try:
            out.append(zi.evaluate(point))
        except ZeroDivisionError:
            raise ValueError("denominator vanishes at the point") from None
    return out


def _poly_eval(coeffs_desc, x):
    acc = 0
    for c in coeffs_desc:
        acc = acc * x + c
    return acc


def aberth(coeffs_desc: Sequence[complex], max_iter: int = 200, tol: float = 1e-15) -> np.ndarray:
    """All roots of a polynomial (highest degree first) by Aberth-Ehrlich iteration."""
    c = np.asarray(coeffs_desc, dtype=complex)
    c = c / c[0]
    n = len(c) - 1
    if n == 0:
        return np.zeros(0, dtype=complex)
    if n == 1:
        return np.array([-c[1]])
    dc = np.polyder(c)
    radius = 1 + np.max(np.abs(c[1:]))
    # spread initial guesses off the real axis to break symmetry
    ang = 2 * np.pi * np.arange(n) / n + 0.4
    z = 0.5 * radius * np.exp(1j * ang) - c[1] / n
    for _ in range(max_iter):
        p = np.polyval(c, z)
        dp = np.polyval(dc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1)
            s = np.sum(1 / diff, axis=1) - 1  # remove the diagonal 1/1
            w = ratio / (1 - ratio * s)
        w = np.where(np.isfinite(w), w, 0)
        z = z - w
        if np.all(np.abs(w) <= tol * (1 + np.abs(z))):
            break
    return z


def _polish(c_desc, z, steps=3):
    dc = np.polyder(c_desc)
    for _ in range(steps):
        d = np.polyval(dc, z)
        p = np.polyval(c_desc, z)
        ok = d != 0
        z = np.where(ok, z - np.where(ok, p / np.where(ok, d, 1), 0), z)
    return z


# exact square-free decomposition over Q, for exact multiplicities


def _qp_trim(p):
    while len(p) > 1 and p[0] == 0:
        p = p[1:]
    return p


def _qp_rem(a, b):
    a = list(a)
    while len(a) >= len(b) and any(a):
        f = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= f * b[i]
        a.pop(0)
    return _qp_trim(a) if a else [Fraction(0)]


def _qp_monic(p):
    return [c / p[0] for c in p]


def _qp_gcd(a, b):
    a, b = _qp_trim(a), _qp_trim(b)
    while len(b) > 1 or b[0] != 0:
        a, b = b, _qp_rem(a, b)
    return _qp_monic(a)


def _qp_div(a, b):
    a = list(a)
    q = []
    while len(a) >= len(b):
        f = a[0] / b[0]
        q.append(f)
        for i in range(len(b)):
            a[i] -= f * b[i]
        a.pop(0)
    return q


def _qp_der(p):
    n = len(p) - 1
    return [c * (n - i) for i, c in enumerate(p[:-1])] or [Fraction(0)]


def squarefree_factors(p_desc: Sequence[Fraction]) -> list:
    """Yun's algorithm: [(factor, multiplicity)] with pairwise coprime square-free factors."""
    p = _qp_monic(_qp_trim([Fraction(c) for c in p_desc]))
    if len(p) == 1:
        return []
    dp = _qp_der(p)
    a = _qp_gcd(p, dp)
    b = _qp_div(p, a)
    c = _qp_div(dp, a)
    out = []
    i = 1
    while len(b) > 1:
        d = _qp_sub(c, _qp_der(b))
        a = _qp_gcd(b, d)
        if len(a) > 1:
            out.append((a, i))
        b = _qp_div(b, a)
        c = _qp_div(d, a)
        i += 1
    return out


def _pad(p, n):
    return [Fraction(0)] * (n - len(p)) + list(p)


def _qp_sub(a, b):
    n = max(len(a), len(b))
    r = [x - y for x, y in zip(_pad(a, n), _pad(b, n))]
    return _qp_trim(r) if r else [Fraction(0)]


def _as_fraction(v):
    if isinstance(v, (Fraction, int)):
        return Fraction(v)
    if isinstance(v, float) and math.isfinite(v):
        return Fraction(v)
    if isinstance(v, (complex, np.complexfloating)) and v.imag == 0 and math.isfinite(v.real):
        return Fraction(float(v.real))
    if isinstance(v, np.floating) and np.isfinite(v):
        return Fraction(float(v))
    return None


def roots_from_coefficients(lower: Sequence, point=()) -> SpectrumAtPoint:
    """Roots of mu^m + lower[m-1] mu^(m-1) + ... + lower[0] with multiplicities."""
    exact = [_as_fraction(c) for c in lower]
    m = len(lower)
    desc_c = np.array([1] + [complex(c) for c in reversed(list(lower))])
    if all(e is not None for e in exact):
        desc = [Fraction(1)] + list(reversed(exact))
        eig = []
        for factor, mult in squarefree_factors(desc):
            fc = np.array([float(c) for c in factor], dtype=complex)
            rs = _polish(fc, aberth(fc))
            # real factor: round-off imaginary parts on real roots are dropped
            rs = np.where(np.abs(rs.imag) <= 1e-13 * (1 + np.abs(rs.real)), rs.real + 0j, rs)
            eig.extend((complex(r), mult) for r in rs)
        jordan_ok = True
    else:
        rs = _polish(desc_c, aberth(desc_c))
        eig = _cluster(rs)
        jordan_ok = False
    spec = SpectrumAtPoint(tuple(point), tuple(eig), jordan_ok)
    total = sum(k for _, k in eig)
    if total != m:
        raise ArithmeticError(f"found {total} roots for degree {m}")
    for lam, k in eig:
        if k == 1:
            res = abs(_poly_eval(desc_c, lam))
            if res > ROOT_RESIDUAL * (1 + abs(lam)) ** m * max(1.0, float(np.max(np.abs(desc_c)))):
                raise ArithmeticError(f"root residual {res:.2e} too large")
    return spec


def _cluster(rs) -> list:
    groups = []
    for r in rs:
        for g in groups:
            if abs(g[0] - r) < CLUSTER_TOL:
                g.append(r)
                break
        else:
            groups.append([r])
    return [(complex(np.mean(g)), len(g)) for g in groups]


def _point_tuple(z: MonicZ, point) -> tuple:
    if isinstance(point, Mapping):
        return tuple(point[c] for c in z.vars)
    return tuple(point)


def roots_at_point(z: MonicZ, point) -> SpectrumAtPoint:
    pt = _point_tuple(z, point)
    return roots_from_coefficients(z_coefficients(z, pt), pt)


# -- Jordan blocks --------------------------------------------------------


def jordan_block_power_entry(lam, size: int, r: int, i: int, j: int):
    """(J^r)_{ij} = binom(r, j - i) lam^(r + i - j) for the upper Jordan block (1-based)."""
    if not (1 <= i <= size and 1 <= j <= size):
        raise IndexError("entry outside the block")
    d = j - i
    if d < 0 or d > r:
        return 0 * lam
    return math.comb(r, d) * lam ** (r - d)


# -- evaluation -----------------------------------------------------------


class ConvergenceError(ValueError):
    pass


def companion_numeric(lower) -> np.ndarray:
    return _companion_numeric([complex(v) for v in lower])


def sum_direct(spec: SeriesSpec, lower, rel: float = 1e-14, patience: int = 5, cap: int = 10_000) -> np.ndarray:
    """sum_r a_r C^r e_1 by iterating C, stopping after ``patience`` negligible terms."""
    c = companion_numeric(lower)
    m = c.shape[0]
    factor, weight = spec._stepper()
    u = np.zeros(m, dtype=complex)
    u[0] = 1
    total = weight(0) * u
    small = 0
    finite = spec.finite_length()
    for r in range(1, cap + 1):
        u = factor(r) * (c @ u)
        term = weight(r) * u
        total = total + term
        if finite is not None and r >= finite + patience:
            return total
        if np.max(np.abs(term)) < rel * (1 + np.max(np.abs(total))):
            small += 1
            if small >= patience:
                return total
        else:
            small = 0
        if not np.all(np.isfinite(total)):
            break
    raise ConvergenceError("slow convergence")


def partial_sum(spec: SeriesSpec, lower, n: int) -> np.ndarray:
    """sum_{r <= N} a_r C^r e_1 (numeric)."""
    c = companion_numeric(lower)
    u = np.zeros(c.shape[0], dtype=complex)
    u[0] = 1
    total = float(spec.coefficient(0)) * u
    for r in range(1, n + 1):
        u = c @ u
        total = total + float(spec.coefficient(r)) * u
    return total


def sum_spectral(spec: SeriesSpec, spectrum: SpectrumAtPoint) -> np.ndarray:
    """f(C) e_1 from the confluent Vandermonde system W p = F."""
    eig = spectrum.eigenvalues
    m = sum(k for _, k in eig)
    w = np.zeros((m, m), dtype=complex)
    rhs = np.zeros(m, dtype=complex)
    row = 0
    for lam, k in eig:
        for d in range(k):
            for i in range(d, m):
                w[row, i] = math.comb(i, d) * lam ** (i - d)
            rhs[row] = spec.derivative(lam, d)
            row += 1
    return np.linalg.solve(w, rhs)


@dataclass
class ConvergenceReport:
    ok: bool
    regime: str
    reason: str = ""


def convergence_check(spec: SeriesSpec, z: MonicZ, point, epsilon: float = 0.0, mode: str = STRICT) -> bool:
    return convergence_report(spec, roots_at_point(z, point), epsilon, mode).ok


def convergence_report(spec: SeriesSpec, spectrum: SpectrumAtPoint, epsilon: float = 0.0, mode: str = STRICT) -> ConvergenceReport:
    if mode not in (STRICT, RELAXED):
        raise ValueError(f"unknown mode {mode!r}")
    radius = spec.radius
    complex_roots = False
    for lam, _ in spectrum.eigenvalues:
        if abs(lam.imag) >= REAL_TOL:
            complex_roots = True
            if mode == STRICT:
                return ConvergenceReport(False, STRICT, f"non-real root {lam}")
            if math.isfinite(radius) and abs(lam) > radius - epsilon:
                return ConvergenceReport(False, RELAXED, f"root {lam} outside the disc")
        elif math.isfinite(radius) and not (-radius + epsilon <= lam.real <= radius - epsilon):
            return ConvergenceReport(False, mode, f"root {lam.real} outside [-R + eps, R - eps]")
    return ConvergenceReport(True, UNPROVED if complex_roots else mode)


@dataclass
class SeriesValue:
    value: np.ndarray
    spectrum: SpectrumAtPoint
    regime: str
    spectral: np.ndarray | None = None
    route_gap: float | None = None


def series_eval_full(spec: SeriesSpec, z: MonicZ, point, mode: str = STRICT, epsilon: float = 0.0, cross_check: bool = True) -> SeriesValue:
    pt = _point_tuple(z, point)
    lower = z_coefficients(z, pt)
    spectrum = roots_from_coefficients(lower, pt)
    rep = convergence_report(spec, spectrum, epsilon, mode)
    if not rep.ok:
        raise ConvergenceError("point outside convergence domain")
    direct = sum_direct(spec, lower)
    spectral, gap = None, None
    if cross_check and spectrum.min_gap() > GAP_TOL:
        spectral = sum_spectral(spec, spectrum)
        gap = float(np.max(np.abs(spectral - direct)))
        if gap > ROUTE_TOL * (1 + float(np.max(np.abs(direct)))):
            raise ArithmeticError(f"direct and spectral routes differ by {gap:.3e}")
    value = direct.real if np.all(np.abs(direct.imag) < 1e-12 * (1 + np.abs(direct))) else direct
    return SeriesValue(value, spectrum, rep.regime, spectral, gap)


def series_eval(spec: SeriesSpec, z: MonicZ, point, mode: str = STRICT, epsilon: float = 0.0) -> np.ndarray:
    return series_eval_full(spec, z, point, mode, epsilon).value


# -- numeric star products -------------------------------------------------


def star_mul_numeric(v, w, lower) -> np.ndarray:
    """Residue of v(mu) w(mu) modulo Z, numeric coefficients (ascending)."""
    prod = np.convolve(np.asarray(v, dtype=complex), np.asarray(w, dtype=complex))
    m = len(lower)
    prod = list(prod)
    for d in range(len(prod) - 1, m - 1, -1):
        c = prod[d]
        prod[d] = 0
        for i, zi in enumerate(lower):
            prod[d - m + i] -= c * complex(zi)
    return np.array(prod[:m])


def star_mul_at_roots(v, w, spectrum: SpectrumAtPoint) -> np.ndarray:
    """The residue of v w found by interpolating v(l) w(l) at simple roots."""
    if any(k != 1 for _, k in spectrum.eigenvalues):
        raise ValueError("root interpolation needs simple roots")
    lams = np.array([lam for lam, _ in spectrum.eigenvalues])
    vals = np.polyval(np.asarray(v, dtype=complex)[::-1], lams) * np.polyval(np.asarray(w, dtype=complex)[::-1], lams)
    vand = np.vander(lams, increasing=True)
    return np.linalg.solve(vand, vals)


# -- numeric verification of a series solution ----------------------------


@dataclass
class SeriesReport:
    ok: bool
    worst_point: tuple | None
    worst_residual: float
    regime: str
    points: int
    pattern: tuple
    per_point: list = field(default_factory=list)


def _a_numeric(sys, pt) -> list:
    return [np.array([[complex(e.evaluate(pt)) for e in row] for row in a]) for a in sys.a.mats]


def residual_at(spec: SeriesSpec, sys, pt, mode=STRICT, h: float = FD_STEP, value_fn: Callable | None = None) -> float:
    """Max-norm of sum_i C^i V' A_i with V' from central differences."""
    pt = np.array([float(p) for p in pt])
    fn = value_fn or (lambda p: series_eval_full(spec, sys.z, tuple(p), mode, cross_check=False).value)
    cols = []
    for j in range(pt.size):
        step = h * max(1.0, abs(pt[j]))
        up, dn = pt.copy(), pt.copy()
        up[j] += step
        dn[j] -= step
        cols.append((np.asarray(fn(up)) - np.asarray(fn(dn))) / (2 * step))
    vprime = np.stack(cols, axis=-1)
    lower = z_coefficients(sys.z, tuple(pt))
    c = companion_numeric(lower)
    acc = np.zeros_like(vprime, dtype=complex)
    for a in reversed(_a_numeric(sys, tuple(pt))):
        acc = c @ acc + vprime @ a
    return float(np.max(np.abs(acc)))


def verify_series_solution_numeric(spec: SeriesSpec, sys, domain_sample, mode: str = STRICT, tol: float = FD_TOL, h: float = FD_STEP) -> SeriesReport:
    pts = [tuple(float(v) for v in p) for p in domain_sample]
    pattern = None
    regime = mode
    for p in pts:
        spectrum = roots_at_point(sys.z, p)
        if pattern is None:
            pattern = spectrum.pattern
        elif spectrum.pattern != pattern:
            raise ValueError("Jordan structure not constant on domain")
        rep = convergence_report(spec, spectrum, 0.0, mode)
        if not rep.ok:
            raise ConvergenceError("point outside convergence domain")
        if rep.regime == UNPROVED:
            regime = UNPROVED
    worst, worst_p = -1.0, None
    per = []
    for p in pts:
        r = residual_at(spec, sys, p, mode, h)
        per.append((p, r))
        if r > worst:
            worst, worst_p = r, p
    return SeriesReport(worst < tol, worst_p, worst, regime, len(pts), pattern or (), per)


def truncation_errors(spec: SeriesSpec, z: MonicZ, point, ns: Sequence[int]) -> list:
    """||P_N - P|| for each N, with P the converged sum."""
    lower = z_coefficients(z, _point_tuple(z, point))
    full = sum_direct(spec, lower)
    return [float(np.max(np.abs(partial_sum(spec, lower, n) - full))) for n in ns]
