"""Named fixture systems with known solutions and machine-checkable identities."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from starmul import matrix as mx
from starmul.finder import build_231, find_A
from starmul.muring import MonicZ, MuPoly, SolutionVec, reduce, star_mul, star_pow
from starmul.ratfunc import Chart, RationalFunction
from starmul.solutions import (
    EIGEN_CHART,
    direct_sum,
    general_solution_221,
    idempotents_m2,
    lift_trivial,
    mu_power_table,
    power_series_solution,
)
from starmul.system import (
    NumericSystem,
    SystemSpec,
    TensorPoly,
    admissibility,
    check_fmg,
    grid_verify,
    verify_solution,
)


@dataclass
class Fixture:
    name: str
    sys: SystemSpec | None
    known_solutions: tuple = ()
    identities: tuple = ()  # (label, zero-argument callable returning bool)
    broken: SystemSpec | None = None
    numeric: NumericSystem | None = None
    numeric_solutions: tuple = ()  # (label, callable point -> (m,))
    sample_points: tuple = ()
    meta: dict = field(default_factory=dict)

    def check(self) -> None:
        """Raise if any stored claim fails."""
        if self.sys is not None:
            for label, v in self.known_solutions:
                if not verify_solution(self.sys, v):
                    raise AssertionError(f"{self.name}: {label} is not a solution")
        if self.broken is not None and admissibility(self.broken).verdict:
            raise AssertionError(f"{self.name}: broken variant is still admissible")
        if self.numeric is not None:
            for label, fn in self.numeric_solutions:
                rep = grid_verify(self.numeric, fn, self.sample_points)
                if not rep.ok:
                    raise AssertionError(f"{self.name}: {label} residual {rep.worst_residual:.3e}")
        for label, fn in self.identities:
            if not fn():
                raise AssertionError(f"{self.name}: identity {label!r} fails")


def _id(n, ch):
    return mx.identity(n, ch.zero, ch.one)


def _broken(sys: SystemSpec) -> SystemSpec:
    """One perturbed entry: A_0[0][0] + 1, or Z_0 + first coordinate if Z is constant."""
    ch = sys.chart
    if all(zi.is_constant() for zi in sys.z.lower):
        lower = (sys.z.lower[0] + ch.var(sys.coords[0]),) + sys.z.lower[1:]
        return SystemSpec(sys.coords, MonicZ(lower), sys.a, sys.name + ":broken")
    mats = [list(list(r) for r in m) for m in sys.a.mats]
    mats[0][0][0] = mats[0][0][0] + 1
    a = TensorPoly(tuple(tuple(tuple(r) for r in m) for m in mats))
    return SystemSpec(sys.coords, sys.z, a, sys.name + ":broken")


def _powers(sys, lo, hi):
    return tuple(mu_power_table(sys, lo, hi).members)


# -- system constructors ------------------------------------------------


def cauchy_riemann_system() -> SystemSpec:
    ch = Chart(("x", "y"))
    a0 = ((ch.zero, ch.one), (-ch.one, ch.zero))
    return SystemSpec(ch.coords, MonicZ((ch.one, ch.zero)), TensorPoly((a0, _id(2, ch))), "cauchy-riemann")


def generic_mm1_system(m: int) -> SystemSpec:
    """Chart q^i = Z_{i-1}, A_1 = I, A_0 = -C."""
    if m < 1:
        raise ValueError("m must be positive")
    coords = tuple(f"q{i + 1}" for i in range(m))
    ch = Chart(coords)
    z = MonicZ(ch.symbols())
    fam = find_A(z, m, 1, coords, leading_identity=True)
    return SystemSpec(coords, z, fam.particular, f"generic-mm1:{m}")


def generic_221_system() -> SystemSpec:
    ch = Chart(("x", "y"))
    x, y = ch.symbols()
    a0 = ((ch.zero, x), (-ch.one, y))
    return SystemSpec(ch.coords, MonicZ((x, y)), TensorPoly((a0, _id(2, ch))), "generic-221")


def eigen_221_system() -> SystemSpec:
    """Z = (mu - x)(mu - y) with A_0 = -diag(x, y), A_1 = I."""
    ch = Chart(EIGEN_CHART)
    x, y = ch.symbols()
    a0 = ((-x, ch.zero), (ch.zero, -y))
    return SystemSpec(ch.coords, MonicZ((x * y, -(x + y))), TensorPoly((a0, _id(2, ch))), "generic-221-eigen")


def findex_system(f=1, g=1) -> SystemSpec:
    ch = Chart(("x", "y"))
    x, y = ch.symbols()
    f, g = ch.coerce(f), ch.coerce(g)
    u = (x * x * y + 1, x * (1 - y * y))
    a1 = tuple(tuple(ua * w for w in (f, g)) for ua in u)
    d = ((x * y, x * x), (y * y - 1, x * y))
    a0 = mx.matmul(d, a1)
    return SystemSpec(ch.coords, MonicZ((x, y, x * y)), TensorPoly((a0, a1)), "findex")


def jodeit_block_system() -> SystemSpec:
    """Z = mu^2, A = [[0, 0], [-1, 0]] + mu I on (x1, x2)."""
    ch = Chart(("x1", "x2"))
    a0 = ((ch.zero, ch.zero), (-ch.one, ch.zero))
    return SystemSpec(ch.coords, MonicZ((ch.zero, ch.zero)), TensorPoly((a0, _id(2, ch))), "jodeit-block")


def cr_block_system() -> SystemSpec:
    ch = Chart(("x3", "x4"))
    a0 = ((ch.zero, ch.one), (-ch.one, ch.zero))
    return SystemSpec(ch.coords, MonicZ((ch.one, ch.zero)), TensorPoly((a0, _id(2, ch))), "cr-block")


# -- identities -----------------------------------------------------------


def _poly1(coeffs, var):
    acc = var * 0
    for c in reversed(list(coeffs)):
        acc = acc * var + Fraction(c)
    return acc


def jodeit_series_identity(psi, phi) -> bool:
    """f1 + mu g1 = sum_r (a_r + mu b_r) * (x1 + mu x2)^r with psi = sum a_r s^r, phi = sum b_r s^r."""
    sys = jodeit_block_system()
    ch = sys.chart
    x1, x2 = ch.symbols()
    base = MuPoly(ch.coords, [x1, x2])
    total = MuPoly(ch.coords)
    for r in range(max(len(psi), len(phi))):
        a = Fraction(psi[r]) if r < len(psi) else 0
        b = Fraction(phi[r]) if r < len(phi) else 0
        term = star_mul(MuPoly(ch.coords, [a, b]), star_pow(base, r, sys.z), sys.z)
        total = total + term
    f1, g1 = jodeit_pair(psi, phi)
    return total == MuPoly(ch.coords, [f1, g1]) and verify_solution(sys, total)


def jodeit_pair(psi, phi):
    ch = Chart(("x1", "x2"))
    x1, x2 = ch.symbols()
    p = _poly1(psi, x1)
    return p, x2 * p.partial("x1") + _poly1(phi, x1)


JODEIT_M = ((0, 1, 0, 0), (0, 0, 0, 0), (0, 0, 0, 1), (0, 0, -1, 0))


def jodeit_fmg_identity(psi, phi) -> bool:
    """The block pairs and their sum solve grad f = M grad g."""
    f1, g1 = jodeit_pair(psi, phi)
    if not check_fmg(((0, 1), (0, 0)), f1, g1, ("x1", "x2")):
        return False
    ch = Chart(("x3", "x4"))
    x3, x4 = ch.symbols()
    f2, g2 = x3 * x3 - x4 * x4, 2 * x3 * x4
    if not check_fmg(((0, 1), (-1, 0)), f2, g2, ch.coords):
        return False
    full = ("x1", "x2", "x3", "x4")
    f = f1.with_vars(full) + f2.with_vars(full)
    g = g1.with_vars(full) + g2.with_vars(full)
    return check_fmg(JODEIT_M, f, g, full)


def product_formula_m2(sys: SystemSpec) -> bool:
    ch = sys.chart
    s = ch.symbols()
    v = (s[0] + 1, s[-1] * 2)
    w = (s[0] * s[-1], ch.const(3) - s[0])
    z0, z1 = sys.z.lower
    expect = (v[0] * w[0] - z0 * v[1] * w[1], v[0] * w[1] + v[1] * w[0] - z1 * v[1] * w[1])
    return star_mul(MuPoly(ch.coords, v), MuPoly(ch.coords, w), sys.z, check=True) == MuPoly(ch.coords, expect)


def product_formula_m3(z: MonicZ, v, w) -> tuple:
    """Closed-form product for m = 3, written out term by term."""
    z0, z1, z2 = z.lower
    v0, v1, v2 = v
    w0, w1, w2 = w
    return (
        v0 * w0 - z0 * v1 * w2 - z0 * v2 * w1 + z0 * z2 * v2 * w2,
        v0 * w1 + v1 * w0 - z1 * v1 * w2 - z1 * v2 * w1 + (z1 * z2 - z0) * v2 * w2,
        v0 * w2 + v1 * w1 + v2 * w0 - z2 * v1 * w2 - z2 * v2 * w1 + (z2 * z2 - z1) * v2 * w2,
    )


def _check_m3(sys: SystemSpec) -> bool:
    ch = sys.chart
    x, y = ch.symbols()
    v = (x + 1, y * 2, x * y)
    w = (y - 3, x * x, ch.const(Fraction(1, 2)))
    got = star_mul(MuPoly(ch.coords, v), MuPoly(ch.coords, w), sys.z, check=True)
    return got == MuPoly(ch.coords, product_formula_m3(sys.z, v, w))


def table_tp() -> dict:
    """Six rows of the (2,2,1) power table; the r = -2 row is the exact square of mu^-1."""
    ch = Chart(("x", "y"))
    x, y = ch.symbols()
    return {
        -2: ((y * y - x) / (x * x), y / (x * x)),
        -1: (-y / x, -1 / x),
        0: (ch.one, ch.zero),
        1: (ch.zero, ch.one),
        2: (-x, -y),
        3: (x * y, y * y - x),
    }


def mm1_power_closed_forms(m: int) -> dict:
    """mu^r for r = 1 .. m + 2 in the chart q^i = Z_{i-1}."""
    coords = tuple(f"q{i + 1}" for i in range(m))
    ch = Chart(coords)
    q = ch.symbols()
    out = {}
    for r in range(1, m):
        out[r] = tuple(ch.one if i == r else ch.zero for i in range(m))
    out[m] = tuple(-qi for qi in q)
    # mu^{m+1}: [q1 qm, -q1 + q2 qm, ..., -q^{m-1} + qm^2]
    out[m + 1] = tuple((q[0] * q[-1]) if i == 0 else (-q[i - 1] + q[i] * q[-1]) for i in range(m))
    # mu^{m+2}: [q1 w, q1 qm + q2 w, ..., -q^{m-2} + q^{m-1} qm + qm w] with w = q^{m-1} - qm^2
    w = q[m - 2] - q[-1] * q[-1]
    row = [q[0] * w]
    for i in range(1, m):
        head = q[0] * q[-1] if i == 1 else -q[i - 2] + q[i - 1] * q[-1]
        row.append(head + q[i] * w)
    out[m + 2] = tuple(row)
    return out


def _mm1_embeds(sys: SystemSpec) -> bool:
    """Solutions of the k = 1 system also solve k = 2 with A_2 free and A_1 = -C A_2."""
    m = sys.m
    if m < 3:
        return True
    fam = find_A(sys.z, m, 2, sys.coords, leading_identity=True)
    ch = sys.chart
    wide = fam.specialize([ch.const((i % 3) + 1) for i in range(fam.dimension)])
    members = mu_power_table(sys, 0, m + 2).members
    return all(verify_solution(wide, v) for _, v in members)


def findex_equations():
    """The three scalar equations of the induced system, as coefficient rows over dV."""
    ch = Chart(("x", "y"))
    x, y = ch.symbols()
    z = ch.zero
    u = x * x * y + 1
    return (
        # d_x V0, d_y V0, d_x V1, d_y V1, d_x V2, d_y V2
        (x * (y + x * x), y * y - 1, z, z, -x * u, x * x * (y * y - 1)),
        (u, x * (1 - y * y), x * (y + x * x), y * y - 1, -y * u, x * y * (y * y - 1)),
        (z, z, u, x * (1 - y * y), x ** 3 * (1 - y * y), (y * y - 1) * u),
    )


def _residual_rows_scalar(sys: SystemSpec, f, g):
    """Express each residual row as (scalar form in dV) times (f, g)."""
    from starmul.system import residuals

    ch = sys.chart
    out = []
    basis = []
    for j in range(3):
        for c in range(2):
            e = [ch.zero] * 3
            e[j] = ch.var(ch.coords[c])
            basis.append(e)
    cols = [residuals(sys, SolutionVec(tuple(e))).b for e in basis]
    for a in range(3):
        coeffs = []
        for r in cols:
            b0, b1 = r[a]
            if not (b0 * g - b1 * f).is_zero():
                return None
            coeffs.append(b0 / f if not f.is_zero() else b1 / g)
        out.append(tuple(coeffs))
    return tuple(out)


def findex_identity() -> bool:
    """Induced system is the displayed one, for several (f, g)."""
    ch = Chart(("x", "y"))
    x, y = ch.symbols()
    expect = findex_equations()
    ref = None
    for f, g in ((1, 1), (x, y + 2), (x * y + 1, ch.const(-3))):
        f, g = ch.coerce(f), ch.coerce(g)
        rows = _residual_rows_scalar(findex_system(f, g), f, g)
        if rows is None:
            return False
        if ref is None:
            ref = rows
        elif rows != ref:
            return False
    for got, want in zip(ref, expect):
        # each displayed equation may differ by a nonzero factor
        ratio = None
        for a, b in zip(got, want):
            if a.is_zero() != b.is_zero():
                return False
            if a.is_zero():
                continue
            r = a / b
            if ratio is None:
                ratio = r
            elif r != ratio:
                return False
    return True


# -- fixture builders -----------------------------------------------------


def _fx_cauchy_riemann():
    sys = cauchy_riemann_system()
    ch = sys.chart
    x, y = ch.symbols()
    sols = _powers(sys, -3, 4) + (("x + i y", sys.vec([x, y])),)

    def powers_match():
        base = MuPoly(ch.coords, [x, y])
        re, im = ch.one, ch.zero
        for r in range(1, 9):
            re, im = re * x - im * y, re * y + im * x
            if star_pow(base, r, sys.z) != MuPoly(ch.coords, [re, im]):
                return False
        return True

    def product_rule():
        v, vt, w, wt = x + 1, y * y, x * y, y - 2
        got = star_mul(MuPoly(ch.coords, [v, vt]), MuPoly(ch.coords, [w, wt]), sys.z, check=True)
        return got == MuPoly(ch.coords, [v * w - vt * wt, v * wt + vt * w])

    return Fixture(
        "cauchy-riemann",
        sys,
        sols,
        (("product (VW - V~W~, VW~ + V~W)", product_rule), ("star powers are (x + iy)^r", powers_match),
         ("anti-holomorphic (x, -y) rejected", lambda: not verify_solution(sys, sys.vec([x, -y])))),
        _broken(sys),
    )


def _fx_generic_221():
    sys = generic_221_system()
    tp = table_tp()

    def table():
        fam = mu_power_table(sys, -2, 3)
        return all(fam[f"mu^{r}"] == SolutionVec(tp[r]) for r in tp)

    return Fixture(
        "generic-221",
        sys,
        _powers(sys, -3, 5),
        (("power table", table), ("m = 2 product formula", lambda: product_formula_m2(sys))),
        _broken(sys),
    )


EIGEN_SAMPLES = (
    ((0, 1), (0, 1)),
    ((0, 0, 1), (0, 0, 1)),
    ((0, 0, 0, 1), ()),
    ((1, 2, 0, 3), (Fraction(1, 2), 0, -1)),
)


def _fx_generic_221_eigen():
    sys = eigen_221_system()
    ch = sys.chart
    sols = [("phi=%s,psi=%s" % (p, q), general_solution_221(p, q)) for p, q in EIGEN_SAMPLES]
    ep, em = idempotents_m2(sys)
    sols += [("e(l1)", ep), ("e(l2)", em)]
    sols += list(_powers(sys, -2, 4))

    def idempotent_algebra():
        one = MuPoly(ch.coords, [1])
        a, b = ep.to_mupoly(), em.to_mupoly()
        return (
            star_mul(a, a, sys.z) == a
            and star_mul(b, b, sys.z) == b
            and a + b == one
            and star_mul(a, b, sys.z).is_zero()
        )

    def decomposition():
        for phi, psi in EIGEN_SAMPLES:
            lhs = general_solution_221(phi, psi).to_mupoly()
            p = power_series_solution(sys, phi).to_mupoly()
            q = power_series_solution(sys, psi).to_mupoly()
            rhs = star_mul(ep.to_mupoly(), p, sys.z) + star_mul(em.to_mupoly(), q, sys.z)
            if lhs != rhs:
                return False
        return True

    return Fixture(
        "generic-221-eigen",
        sys,
        tuple(sols),
        (("idempotents", idempotent_algebra), ("series decomposition", decomposition),
         ("m = 2 product formula", lambda: product_formula_m2(sys))),
        _broken(sys),
    )


def _fx_generic_mm1(m: int):
    sys = generic_mm1_system(m)
    forms = mm1_power_closed_forms(m)

    def power_list():
        fam = mu_power_table(sys, 1, m + 2)
        return all(fam[f"mu^{r}"] == SolutionVec(v) for r, v in forms.items())

    ch = sys.chart
    q = ch.symbols()
    coord_sol = ("V_i = q^{i+1}", sys.vec(q))
    return Fixture(
        f"generic-mm1:{m}",
        sys,
        _powers(sys, -1, m + 2) + (coord_sol,),
        (("mu-power list", power_list), ("solutions embed in k = 2", lambda: _mm1_embeds(sys))),
        _broken(sys),
    )


def _sqrt_branch(sign: int):
    def c_of(p):
        x, y = p[0], p[1]
        return (y + sign * np.sqrt(y * y - 4 * x)) / 2

    def z_lower(p):
        return np.array([p[0], p[1]])

    def a_mats(p):
        x, y, zc = p[0], p[1], p[2]
        c = c_of(p)
        a = -zc / (2 * c - y)
        b = a * (c - y)
        one, zero = 1 + 0 * x, 0 * x
        a0 = np.array([[zero, x, zero], [-one, y, zero], [a, b, c]])
        a1 = np.array([[one, zero, zero], [zero, one, zero], [zero, zero, one]])
        return np.array([a0, a1])

    return c_of, z_lower, a_mats


def _fx_generic_321():
    """Numeric-only: the branch c = (y + s sqrt(y^2 - 4x))/2, b = a(c - y), a = -z/(2c - y)."""
    c_of, z_lower, a_mats = _sqrt_branch(+1)
    num = NumericSystem(("x", "y", "z"), 2, z_lower, a_mats, "generic-321")

    def zdep(p):
        c = c_of(p)
        return np.array([(p[1] - c) * p[2], p[2]])

    def times_mu(p):
        c = c_of(p)
        return np.array([-p[0] * p[2], -c * p[2]])

    embedded = []
    g221 = generic_221_system()
    for label, v in _powers(g221, -2, 4):
        coeffs = [e for e in v]

        def fn(p, coeffs=coeffs):
            return np.array([e.num.evaluate((p[0], p[1])) / e.den.evaluate((p[0], p[1])) for e in coeffs])

        embedded.append((f"(2,2,1) {label}", fn))
    rng = np.random.default_rng(321)
    pts = []
    while len(pts) < 25:
        x, y, z = rng.uniform(0.2, 1.0), rng.uniform(2.5, 4.0), rng.uniform(-1.0, 1.0)
        if y * y - 4 * x > 0.5:
            pts.append((x, y, z))

    def other_branch():
        c_m, zl, am = _sqrt_branch(-1)
        sys_m = NumericSystem(("x", "y", "z"), 2, zl, am)

        def v(p):
            c = c_m(p)
            return np.array([(p[1] - c) * p[2], p[2]])

        return grid_verify(sys_m, v, pts).ok

    def characteristic_root():
        return all(abs(c_of(p) ** 2 - p[1] * c_of(p) + p[0]) < 1e-12 for p in pts)

    return Fixture(
        "generic-321",
        None,
        identities=(("c solves c^2 - y c + x = 0", characteristic_root), ("minus branch", other_branch)),
        numeric=num,
        numeric_solutions=(("((y - c) z, z)", zdep), ("mu * ((y - c) z, z)", times_mu), *embedded),
        sample_points=tuple(pts),
    )


def _fx_generic_231(a):
    sys = build_231(a)
    ch = sys.chart
    x, y = ch.symbols()
    a = Fraction(a)
    worked = sys.vec([-x, -y, x * a * a - y * a - 1 / a])

    def product():
        mu = MuPoly.mu(ch.coords)
        return star_mul(mu, star_pow(mu, 2, sys.z), sys.z, check=True) == worked.to_mupoly()

    from starmul.finder import check_231_phi

    return Fixture(
        f"generic-231:{a}",
        sys,
        _powers(sys, -1, 4) + (("worked product", worked),),
        (("phi solves both conditions", lambda: check_231_phi(sys.z.lower[2])), ("worked product", product)),
        _broken(sys),
    )


def _fx_findex():
    sys = findex_system()
    return Fixture(
        "findex",
        sys,
        _powers(sys, -2, 5),
        (("induced system independent of (f, g)", findex_identity), ("m = 3 product formula", lambda: _check_m3(sys))),
        _broken(sys),
    )


JODEIT_SAMPLES = (((0, 0, 1), (0, 0, 0, 1)), ((1, -2, 0, 3, 0, 1), (2, 0, 1, 0, -1, Fraction(1, 3))))


def _fx_jodeit():
    block = jodeit_block_system()
    sys = direct_sum(block, cr_block_system(), "jodeit-4d")
    ch = sys.chart
    x1, x2, x3, x4 = ch.symbols()
    sols = [(f"lift mu^{r}", lift_trivial(sys, [0] * r + [1])) for r in range(0, 6)]
    # block solutions times the other block's constant Z stay solutions
    zb = MuPoly(ch.coords, [1, 0, 1])
    za = MuPoly(ch.coords, [0, 0, 1])
    sols.append(("(x1 + mu x2)(1 + mu^2)", SolutionVec.from_mupoly(reduce(MuPoly(ch.coords, [x1, x2]) * zb, sys.z), 4)))
    sols.append(("(x3 + mu x4) mu^2", SolutionVec.from_mupoly(reduce(MuPoly(ch.coords, [x3, x4]) * za, sys.z), 4)))
    ids = [(f"series psi={p} phi={q}", functools.partial(jodeit_series_identity, p, q)) for p, q in JODEIT_SAMPLES]
    ids += [(f"grad f = M grad g psi={p} phi={q}", functools.partial(jodeit_fmg_identity, p, q)) for p, q in JODEIT_SAMPLES]
    return Fixture("jodeit-4d", sys, tuple(sols), tuple(ids), _broken(sys), meta={"block": block})


_BUILDERS: dict[str, Callable] = {
    "cauchy-riemann": _fx_cauchy_riemann,
    "generic-221": _fx_generic_221,
    "generic-221-eigen": _fx_generic_221_eigen,
    "generic-321": _fx_generic_321,
    "findex": _fx_findex,
    "jodeit-4d": _fx_jodeit,
}
_PARAMETRIZED = {"generic-mm1": (_fx_generic_mm1, int, 3), "generic-231": (_fx_generic_231, Fraction, 1)}
DEFAULT_NAMES = (
    "cauchy-riemann",
    "generic-221",
    "generic-221-eigen",
    "generic-mm1:2",
    "generic-mm1:3",
    "generic-mm1:4",
    "generic-mm1:5",
    "generic-321",
    "generic-231:1",
    "generic-231:2",
    "generic-231:-1/3",
    "findex",
    "jodeit-4d",
)


def list_fixtures() -> tuple:
    return DEFAULT_NAMES


@functools.lru_cache(maxsize=None)
def load_fixture(name: str, verify: bool = True) -> Fixture:
    """Build a fixture by name (``generic-mm1:4``, ``generic-231:-1/3``) and check its claims."""
    base, _, arg = name.partition(":")
    if base in _PARAMETRIZED:
        build, conv, default = _PARAMETRIZED[base]
        try:
            param = conv(arg) if arg else default
        except (ValueError, ZeroDivisionError):
            raise KeyError(f"bad parameter {arg!r} for {base}") from None
        fx = build(param)
    elif name in _BUILDERS:
        fx = _BUILDERS[name]()
    else:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(DEFAULT_NAMES)}")
    if verify:
        fx.check()
    return fx
