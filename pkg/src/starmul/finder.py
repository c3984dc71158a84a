"""Search for admissible tensors A_0..A_k once Z is fixed.

The admissibility condition sum_i C^i Z' A_i = 0 is linear in the entries of
the A_i.  It splits by column: column b of every A_i must lie in the kernel
of the block matrix [Z', C Z', ..., C^k Z'].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from starmul import matrix as mx
from starmul.muring import MonicZ, _companion_shift
from starmul.ratfunc import Chart, RationalFunction
from starmul.system import SystemSpec, TensorPoly, admits_multiplication, functional_matrix


@dataclass(frozen=True)
class TensorFamily:
    """particular + sum_s p_s basis[s] over free rational-function slots."""

    z: MonicZ
    coords: tuple
    particular: TensorPoly
    basis: tuple
    slots: tuple  # (column, index within the column kernel)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def n(self) -> int:
        return self.particular.n

    def specialize(self, params: Sequence) -> SystemSpec:
        if len(params) != self.dimension:
            raise ValueError(f"expected {self.dimension} parameters, got {len(params)}")
        ch = Chart(self.coords)
        mats = [list(list(r) for r in m) for m in self.particular.mats]
        for p, t in zip(params, self.basis):
            p = ch.coerce(p)
            if p.is_zero():
                continue
            for i, m in enumerate(t.mats):
                for a in range(self.n):
                    for b in range(self.n):
                        if not m[a][b].is_zero():
                            mats[i][a][b] = mats[i][a][b] + p * m[a][b]
        return SystemSpec(self.coords, self.z, TensorPoly(tuple(tuple(tuple(r) for r in m) for m in mats)))


def _block_matrix(z: MonicZ, coords, k: int) -> list:
    """Rows of [Z', C Z', ..., C^k Z'] (m x n(k+1))."""
    zp = functional_matrix(z.lower, coords)
    cols_by_power = []
    cur = [list(col) for col in mx.transpose(zp)]
    for _ in range(k + 1):
        cols_by_power.append(cur)
        cur = [_companion_shift(col, z) for col in cur]
    m = z.m
    return [[col[r] for block in cols_by_power for col in block] for r in range(m)]


def find_A(z: MonicZ, n: int, k: int, coords: Sequence[str], leading_identity: bool = False) -> TensorFamily:
    """Every A_0 + ... + mu^k A_k with sum_i C^i Z' A_i = 0.

    With ``leading_identity`` the top coefficient is fixed to the identity and
    the remaining coefficients are solved for (an affine family).
    """
    ch = Chart(coords)
    if ch.n != n:
        raise ValueError(f"{n} coordinates expected, got {ch.n}")
    if k < 0 or k > z.m - 1:
        raise ValueError("need 0 <= k <= m - 1")
    for zi in z.lower:
        if zi.vars != ch.coords:
            raise ValueError("Z must be expressed in the given coordinates")
    zero, one = ch.zero, ch.one
    rows = _block_matrix(z, ch.coords, k)
    width = n * (k + 1)

    if leading_identity:
        free_w = n * k
        lhs = [r[:free_w] for r in rows]
        col_solutions = []
        for b in range(n):
            rhs = [r[free_w + b] for r in rows]
            if free_w == 0:
                if any(not v.is_zero() for v in rhs):
                    return _empty(z, ch, n, k, leading_identity)
                col_solutions.append(((), []))
                continue
            if all(v.is_zero() for row in lhs for v in row):
                if any(not v.is_zero() for v in rhs):
                    return _empty(z, ch, n, k, leading_identity)
                kern = [tuple(one if i == j else zero for i in range(free_w)) for j in range(free_w)]
                col_solutions.append((tuple(zero for _ in range(free_w)), kern))
                continue
            sol = mx.solve_affine(lhs, [-v for v in rhs], ch.coords)
            if sol is None:
                return _empty(z, ch, n, k, leading_identity)
            col_solutions.append(sol)
        particular = [[[zero] * n for _ in range(n)] for _ in range(k + 1)]
        for b in range(n):
            particular[k][b][b] = one
        for b, (part, _) in enumerate(col_solutions):
            for idx, val in enumerate(part):
                i, a = divmod(idx, n)
                particular[i][a][b] = val
        basis, slots = [], []
        for b, (_, kern) in enumerate(col_solutions):
            for s, vec in enumerate(kern):
                basis.append(_column_tensor(vec, b, n, k, zero))
                slots.append((b, s))
    else:
        if all(v.is_zero() for row in rows for v in row):
            kern = [tuple(one if i == j else zero for i in range(width)) for j in range(width)]
        else:
            kern = mx.nullspace(rows, ch.coords)
        particular = [[[zero] * n for _ in range(n)] for _ in range(k + 1)]
        basis, slots = [], []
        for b in range(n):
            for s, vec in enumerate(kern):
                basis.append(_column_tensor(vec, b, n, k, zero))
                slots.append((b, s))
    part = TensorPoly(tuple(tuple(tuple(r) for r in m) for m in particular))
    return TensorFamily(z, ch.coords, part, tuple(basis), tuple(slots))


def _column_tensor(vec, b, n, k, zero) -> TensorPoly:
    mats = [[[zero] * n for _ in range(n)] for _ in range(k + 1)]
    for idx, val in enumerate(vec):
        i, a = divmod(idx, n)
        mats[i][a][b] = val
    return TensorPoly(tuple(tuple(tuple(r) for r in m) for m in mats))


def _empty(z, ch, n, k, leading_identity) -> TensorFamily:
    zero = ch.zero
    mats = tuple(tuple(tuple(zero for _ in range(n)) for _ in range(n)) for _ in range(k + 1))
    return TensorFamily(z, ch.coords, TensorPoly(mats), (), ())


def verify_family(family: TensorFamily, samples: Sequence[Sequence]) -> bool:
    """Every listed specialization passes the admissibility check."""
    return all(admits_multiplication(family.specialize(p)) for p in samples)


# -- the (2,3,1) pathway ----------------------------------------------------

COORDS_231 = ("x", "y")


def phi_231(a) -> RationalFunction:
    a = Fraction(a)
    if a == 0:
        raise ValueError("a must be nonzero")
    x, y = Chart(COORDS_231).symbols()
    return y * a - x * (a * a) + 1 / a


def check_231_phi(phi: RationalFunction) -> bool:
    """Both nonlinear conditions on Z_2 = phi(Z_0, Z_1) in generic coordinates."""
    ch = Chart(COORDS_231)
    phi = ch.coerce(phi)
    x, y = ch.symbols()
    px, py = phi.partial("x"), phi.partial("y")
    e1 = x * px * px - phi * px + y * px * py - py
    e2 = 1 + x * px * py + y * py * py - phi * py
    return e1.is_zero() and e2.is_zero()


def build_231(a) -> SystemSpec:
    """n = 2, m = 3, k = 1 system with Z = x + y mu + phi mu^2 + mu^3."""
    phi = phi_231(a)
    ch = Chart(COORDS_231)
    x, y = ch.symbols()
    px, py = phi.partial("x"), phi.partial("y")
    a0 = ((x * px, x * py), (y * px - 1, y * py))
    a1 = mx.identity(2, ch.zero, ch.one)
    return SystemSpec(ch.coords, MonicZ((x, y, phi)), TensorPoly((a0, a1)), f"generic-231:{Fraction(a)}")
