"""System instances A_mu dV_mu = 0 (mod Z_mu), residual forms and admissibility.

Convention: a covector ``w`` is a row of length n and a matrix acts on the
right, so the covector ``dV . A`` has components ``sum_a d_a V * A[a][b]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from starmul import matrix as mx
from starmul.muring import MonicZ, MuPoly, SolutionVec, _companion_shift, reduce
from starmul.ratfunc import Chart, RationalFunction


@dataclass(frozen=True)
class TensorPoly:
    """A_0 + mu A_1 + ... + mu^k A_k with n x n rational-function matrices."""

    mats: tuple

    def __post_init__(self):
        mats = tuple(mx.as_matrix(a) for a in self.mats)
        if not mats:
            raise ValueError("tensor polynomial needs at least one matrix")
        n = len(mats[0])
        for a in mats:
            if mx.shape(a) != (n, n):
                raise ValueError(f"expected {n}x{n} matrices, got {mx.shape(a)}")
        object.__setattr__(self, "mats", mats)

    @property
    def n(self) -> int:
        return len(self.mats[0])

    @property
    def k(self) -> int:
        return len(self.mats) - 1

    def entry(self, a: int, b: int) -> list:
        return [m[a][b] for m in self.mats]

    def reduced(self, z: MonicZ) -> TensorPoly:
        """Entrywise remainder modulo Z, padded to at least one matrix."""
        if self.k < z.m:
            return self
        n = self.n
        zero = RationalFunction.const(z.vars, 0)
        rows = [[reduce(MuPoly(z.vars, self.entry(a, b)), z) for b in range(n)] for a in range(n)]
        k = max(max((p.degree for row in rows for p in row), default=0), 0)
        mats = []
        for i in range(k + 1):
            mats.append(tuple(tuple(rows[a][b].coeff(i) if not rows[a][b].is_zero() else zero for b in range(n)) for a in range(n)))
        return TensorPoly(tuple(mats))


@dataclass(frozen=True)
class SystemSpec:
    coords: tuple
    z: MonicZ
    a: TensorPoly
    name: str = ""

    def __post_init__(self):
        chart = Chart(self.coords)
        object.__setattr__(self, "coords", chart.coords)
        for zi in self.z.lower:
            if zi.vars != chart.coords:
                raise ValueError(f"Z coefficient over {zi.vars}, system chart is {chart.coords}")
        for mat in self.a.mats:
            for row in mat:
                for e in row:
                    if e.vars != chart.coords:
                        raise ValueError(f"A entry over {e.vars}, system chart is {chart.coords}")
        if self.a.n != chart.n:
            raise ValueError(f"A is {self.a.n}x{self.a.n} but the chart has {chart.n} coordinates")
        if self.a.k > self.z.m - 1:
            object.__setattr__(self, "a", self.a.reduced(self.z))

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def m(self) -> int:
        return self.z.m

    @property
    def k(self) -> int:
        return self.a.k

    @property
    def chart(self) -> Chart:
        return Chart(self.coords)

    def vec(self, entries) -> SolutionVec:
        return SolutionVec.of(self.coords, entries)


@dataclass(frozen=True)
class ResidualForms:
    b: tuple

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.b for e in row)

    def first_nonzero(self):
        for i, row in enumerate(self.b):
            for j, e in enumerate(row):
                if not e.is_zero():
                    return i, j, e
        return None


@dataclass(frozen=True)
class XTensor:
    entries: tuple

    def __post_init__(self):
        e = mx.as_matrix(self.entries)
        n, m = mx.shape(e)
        if n != m:
            raise ValueError("X must be square")
        object.__setattr__(self, "entries", e)

    @property
    def n(self) -> int:
        return len(self.entries)


def functional_matrix(v: Sequence[RationalFunction], coords: Sequence[str]) -> tuple:
    """Rows d v_i, i.e. entry (i, j) is the partial of v_i along coords[j]."""
    return tuple(tuple(e.partial(c) for c in coords) for e in v)


def _check_vec(sys: SystemSpec, v) -> tuple:
    if isinstance(v, MuPoly):
        v = SolutionVec.from_mupoly(v, sys.m)
    entries = tuple(v)
    if len(entries) != sys.m:
        raise ValueError(f"solution has {len(entries)} entries, system has m = {sys.m}")
    for e in entries:
        if e.vars != sys.coords:
            raise ValueError(f"solution entry over {e.vars}, system chart is {sys.coords}")
    return entries


def _sum_c_powers(sys: SystemSpec, vprime) -> tuple:
    # Horner in C: V'A_0 + C(V'A_1 + C(V'A_2 + ...)).
    acc = None
    for a in reversed(sys.a.mats):
        term = mx.matmul(vprime, a)
        if acc is None:
            acc = term
        else:
            cols = mx.transpose(acc)
            shifted = mx.transpose(tuple(tuple(_companion_shift(list(col), sys.z)) for col in cols))
            acc = mx.add(term, shifted)
    return acc


def residuals(sys: SystemSpec, v) -> ResidualForms:
    """Residual covectors B_0..B_{m-1}: the rows of sum_i C^i V' A_i."""
    entries = _check_vec(sys, v)
    vprime = functional_matrix(entries, sys.coords)
    return ResidualForms(_sum_c_powers(sys, vprime))


def residuals_direct(sys: SystemSpec, v) -> ResidualForms:
    """Same forms via A_mu dV_mu expanded in mu and divided by Z, per component."""
    entries = _check_vec(sys, v)
    vprime = functional_matrix(entries, sys.coords)
    n, m = sys.n, sys.m
    cols = []
    for b in range(n):
        coeffs = {}
        for i, a in enumerate(sys.a.mats):
            for j in range(m):
                val = None
                for r in range(n):
                    if vprime[j][r].is_zero() or a[r][b].is_zero():
                        continue
                    t = vprime[j][r] * a[r][b]
                    val = t if val is None else val + t
                if val is not None:
                    coeffs[i + j] = coeffs[i + j] + val if i + j in coeffs else val
        top = max(coeffs, default=0)
        p = MuPoly(sys.coords, [coeffs.get(d, 0) for d in range(top + 1)])
        cols.append(reduce(p, sys.z).padded(m))
    return ResidualForms(mx.transpose(tuple(cols)))


def verify_solution(sys: SystemSpec, v) -> bool:
    return residuals(sys, v).is_zero()


@dataclass(frozen=True)
class Admissibility:
    verdict: bool
    witness: tuple | None = None  # (row, column, nonzero entry)


def admissibility(sys: SystemSpec) -> Admissibility:
    """Decide whether the solution space is closed under the star product.

    The condition is that Z_mu - mu^m, read as a column, is a solution.  It is
    evaluated by the matrix route and by the division route; both must agree.
    """
    zvec = SolutionVec(sys.z.lower)
    by_matrix = residuals(sys, zvec)
    by_division = residuals_direct(sys, zvec)
    if by_matrix != by_division:
        raise AssertionError("matrix and division routes disagree on admissibility")
    w = by_matrix.first_nonzero()
    return Admissibility(w is None, w)


def admits_multiplication(sys: SystemSpec) -> bool:
    return admissibility(sys).verdict


def from_tensor_X(x: XTensor | Sequence, coords: Sequence[str], name: str = "") -> SystemSpec:
    """A_mu = X + mu I with Z_mu = det(X + mu I)."""
    if not isinstance(x, XTensor):
        x = XTensor(x)
    coords = Chart(coords).coords
    n = x.n
    mupoly = [[MuPoly(coords, [x.entries[i][j]] + ([1] if i == j else [])) for j in range(n)] for i in range(n)]
    z = MonicZ.from_mupoly(mx.det(tuple(tuple(r) for r in mupoly)))
    zero = RationalFunction.const(coords, 0)
    one = RationalFunction.const(coords, 1)
    return SystemSpec(coords, z, TensorPoly((x.entries, mx.identity(n, zero, one))), name)


def nijenhuis(x: XTensor | Sequence, coords: Sequence[str]) -> tuple:
    """Torsion components N[k][i][j] of the (1,1)-tensor with X[k][i] = X^k_i."""
    if not isinstance(x, XTensor):
        x = XTensor(x)
    X = x.entries
    n = x.n
    d = [[[X[k][i].partial(c) for c in coords] for i in range(n)] for k in range(n)]  # d[k][i][l]
    zero = RationalFunction.const(coords, 0)
    out = []
    for k in range(n):
        plane = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for l in range(n):
                    acc = acc + X[l][i] * d[k][j][l] - X[l][j] * d[k][i][l]
                    acc = acc - X[k][l] * (d[l][j][i] - d[l][i][j])
                row.append(acc)
            plane.append(tuple(row))
        out.append(tuple(plane))
    return tuple(out)


def torsion_identity_sides(x: XTensor | Sequence, coords: Sequence[str]) -> tuple[tuple, tuple]:
    """Both sides of (X d det X - det X d tr X)_i = N^k_ij cof(X)^j_k.

    With the torsion normalized as in ``nijenhuis`` the constant is 1.
    """
    if not isinstance(x, XTensor):
        x = XTensor(x)
    X = x.entries
    n = x.n
    det = mx.det(X)
    tr = X[0][0]
    for i in range(1, n):
        tr = tr + X[i][i]
    cof = mx.adjugate(X)
    N = nijenhuis(x, coords)
    zero = RationalFunction.const(coords, 0)
    lhs, rhs = [], []
    for i in range(n):
        acc = zero
        for l in range(n):
            acc = acc + X[l][i] * det.partial(coords[l])
        lhs.append(acc - det * tr.partial(coords[i]))
        acc = zero
        for k in range(n):
            for j in range(n):
                acc = acc + N[k][i][j] * cof[j][k]
        rhs.append(acc)
    return tuple(lhs), tuple(rhs)


def check_fmg(M: Sequence[Sequence], f: RationalFunction, g: RationalFunction, coords: Sequence[str]) -> bool:
    """True iff d_i f = sum_j M[i][j] d_j g for every coordinate i."""
    n = len(coords)
    if len(M) != n or any(len(r) != n for r in M):
        raise ValueError(f"M must be {n}x{n}")
    dg = [g.partial(c) for c in coords]
    for i, c in enumerate(coords):
        rhs = RationalFunction.const(coords, 0)
        for j in range(n):
            if M[i][j]:
                rhs = rhs + dg[j] * M[i][j]
        if f.partial(c) != rhs:
            return False
    return True


# -- numeric systems (coefficients outside the rational-function field) -----


@dataclass
class NumericSystem:
    """A system whose Z coefficients and A matrices are numeric callables.

    ``z_lower(point) -> (m,)`` and ``a_mats(point) -> (k+1, n, n)``.  The
    callables must accept complex input for complex-step differentiation.
    """

    coords: tuple
    m: int
    z_lower: Callable
    a_mats: Callable
    name: str = ""
    meta: dict = field(default_factory=dict)


def _companion_numeric(lower) -> np.ndarray:
    m = len(lower)
    c = np.zeros((m, m), dtype=complex)
    c[1:, :-1] = np.eye(m - 1)
    c[:, -1] = -np.asarray(lower)
    return c


def _jacobian(fn: Callable, point: np.ndarray, h: float = 1e-20) -> np.ndarray:
    # complex-step: exact to rounding for analytic callables
    cols = []
    for j in range(point.size):
        p = point.astype(complex)
        p[j] += 1j * h
        cols.append(np.imag(np.asarray(fn(p))) / h)
    return np.stack(cols, axis=-1)


def numeric_residual(sys: NumericSystem, v: Callable, point) -> np.ndarray:
    """The m x n residual matrix sum_i C^i V' A_i at one point."""
    point = np.asarray(point, dtype=float)
    vprime = _jacobian(v, point)
    c = _companion_numeric(np.real(np.asarray(sys.z_lower(point.astype(complex)))))
    mats = np.real(np.asarray(sys.a_mats(point.astype(complex))))
    acc = np.zeros_like(vprime, dtype=complex)
    for a in reversed(mats):
        acc = c @ acc + vprime @ a
    return np.real(acc)


@dataclass
class GridReport:
    ok: bool
    worst_point: tuple
    worst_residual: float
    points: int


def grid_verify(sys: NumericSystem, v: Callable, points, tol: float = 1e-9) -> GridReport:
    worst, worst_p = -1.0, None
    count = 0
    for p in points:
        r = float(np.max(np.abs(numeric_residual(sys, v, p))))
        count += 1
        if r > worst:
            worst, worst_p = r, tuple(float(t) for t in p)
    return GridReport(worst <= tol, worst_p, worst, count)
