from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from starmul import matrix as mx
from starmul.catalog import cauchy_riemann_system, generic_221_system, findex_system
from starmul.finder import build_231
from starmul.muring import MonicZ, MuPoly, SolutionVec, companion, star_mul
from starmul.ratfunc import Chart, RationalFunction
from starmul.system import (
    NumericSystem,
    SystemSpec,
    TensorPoly,
    XTensor,
    admissibility,
    admits_multiplication,
    check_fmg,
    from_tensor_X,
    grid_verify,
    nijenhuis,
    residuals,
    residuals_direct,
    torsion_identity_sides,
    verify_solution,
)
from strategies import poly_rfs, reduced_mupolys

CH = Chart(("x", "y"))
x, y = CH.symbols()
ONE, ZERO = CH.one, CH.zero


def test_generic_221_residual_examples():
    sys = generic_221_system()
    assert residuals(sys, sys.vec([1, 0])).is_zero()
    assert residuals(sys, sys.vec([-x, -y])).is_zero()
    res = residuals(sys, sys.vec([x, 0]))
    assert not res.is_zero()


def test_verify_solution_examples():
    cr = cauchy_riemann_system()
    assert verify_solution(cr, cr.vec([x, y]))
    assert not verify_solution(cr, cr.vec([x, -y]))
    s231 = build_231(1)
    assert verify_solution(s231, s231.vec([-x, -y, x - y - 1]))


def test_wrong_length_rejected():
    with pytest.raises(ValueError):
        verify_solution(generic_221_system(), SolutionVec((x, y, x)))


def test_admissibility_examples():
    assert admits_multiplication(cauchy_riemann_system())
    assert admits_multiplication(generic_221_system())
    sys = generic_221_system()
    mats = [list(list(r) for r in m) for m in sys.a.mats]
    mats[0][0][0] = mats[0][0][0] + 1
    broken = SystemSpec(sys.coords, sys.z, TensorPoly(tuple(tuple(tuple(r) for r in m) for m in mats)))
    adm = admissibility(broken)
    assert not adm.verdict
    i, j, entry = adm.witness
    assert not entry.is_zero()
    # the product of trivial solutions mu and mu^(m-1) exhibits the failure
    mu = MuPoly.mu(sys.coords)
    assert verify_solution(broken, sys.vec([0, 1]))
    assert not verify_solution(broken, star_mul(mu, mu, sys.z))


def test_cayley_hamilton_makes_first_equation_vanish():
    sys = generic_221_system()
    c = companion(sys.z).entries
    a = mx.scale(c, -1)
    z0, z1 = sys.z.lower
    q = mx.add(mx.sub(mx.matmul(a, a), mx.scale(a, z1)), mx.scale(mx.identity(2, ZERO, ONE), z0))
    assert mx.is_zero_matrix(q)
    assert sys.a.mats[0] == a


def test_from_tensor_x_examples():
    s = from_tensor_X(((x, ZERO), (ZERO, y)), CH.coords)
    assert s.z == MonicZ((x * y, x + y))
    assert admits_multiplication(s)
    s0 = from_tensor_X(((ZERO, ZERO), (ZERO, ZERO)), CH.coords)
    assert s0.z == MonicZ((ZERO, ZERO))
    assert admits_multiplication(s0)
    comp = ((ZERO, CH.const(-2)), (ONE, CH.const(3)))
    assert all(e.is_zero() for plane in nijenhuis(comp, CH.coords) for row in plane for e in row)
    assert admits_multiplication(from_tensor_X(comp, CH.coords))


def test_nijenhuis_examples():
    assert all(e.is_zero() for p in nijenhuis(((x * y, ZERO), (ZERO, x * y)), CH.coords) for r in p for e in r)
    assert all(e.is_zero() for p in nijenhuis(((x, ZERO), (ZERO, y)), CH.coords) for r in p for e in r)


def _sympy_torsion_sides(X):
    """Independent expansion with the same index convention (X[k][i] = X^k_i)."""
    n = X.shape[0]
    q = sympy.symbols(" ".join(f"q{i}" for i in range(n)))
    q = q if isinstance(q, tuple) else (q,)
    N = [[[sum(X[l, i] * sympy.diff(X[k, j], q[l]) - X[l, j] * sympy.diff(X[k, i], q[l]) - X[k, l] * (sympy.diff(X[l, j], q[i]) - sympy.diff(X[l, i], q[j])) for l in range(n)) for j in range(n)] for i in range(n)] for k in range(n)]
    det, tr, adj = X.det(), X.trace(), X.adjugate()
    lhs = [sum(X[l, i] * sympy.diff(det, q[l]) for l in range(n)) - det * sympy.diff(tr, q[i]) for i in range(n)]
    rhs = [sum(N[k][i][j] * adj[j, k] for k in range(n) for j in range(n)) for i in range(n)]
    return q, lhs, rhs


def test_torsion_identity_against_sympy():
    sx = sympy.symbols("q0 q1")
    X = sympy.Matrix([[0, sx[0]], [1, sx[1]]])
    q, lhs, rhs = _sympy_torsion_sides(X)
    assert all(sympy.expand(a - b) == 0 for a, b in zip(lhs, rhs))
    ch = Chart(("q0", "q1"))
    a, b = ch.symbols()
    mine_l, mine_r = torsion_identity_sides(((ch.zero, a), (ch.one, b)), ch.coords)
    assert mine_l == mine_r
    for mine, ref in zip(mine_l, lhs):
        assert sympy.expand(sympy.sympify(str(mine).replace("^", "**")) - ref) == 0


def _rand_x(n):
    coords = tuple(f"q{i}" for i in range(n))
    return st.lists(poly_rfs(coords, 2, 2), min_size=n * n, max_size=n * n).map(lambda es: (coords, tuple(tuple(es[i * n : (i + 1) * n]) for i in range(n))))


@settings(max_examples=20)
@given(st.sampled_from([2, 3]).flatmap(_rand_x))
def test_torsion_identity_random(args):
    coords, X = args
    lhs, rhs = torsion_identity_sides(X, coords)
    assert lhs == rhs


def test_check_fmg_examples():
    ch = Chart(("x1", "x2"))
    x1, x2 = ch.symbols()
    psi, phi = x1**3 - x1, x1 * x1
    assert check_fmg(((0, 1), (0, 0)), psi, x2 * psi.partial("x1") + phi, ch.coords)
    # the pair with the roles of f and g exchanged is not a solution for this M
    assert not check_fmg(((0, 1), (0, 0)), x2 * phi.partial("x1") + psi, psi, ch.coords)
    f = x1 * x2 + 1
    assert check_fmg(((1, 0), (0, 1)), f, f, ch.coords)
    assert check_fmg(((0, 1), (-1, 0)), x1 * x1 - x2 * x2, 2 * x1 * x2, ch.coords)
    assert not check_fmg(((0, 1), (-1, 0)), x1 * x1 + x2 * x2, 2 * x1 * x2, ch.coords)


@settings(max_examples=30)
@given(reduced_mupolys(3))
def test_residual_routes_agree_on_findex(v):
    sys = findex_system()
    assert residuals(sys, v) == residuals_direct(sys, v)


def test_grid_verifier_on_cauchy_riemann():
    num = NumericSystem(
        ("x", "y"),
        2,
        lambda p: np.array([1 + 0 * p[0], 0 * p[0]]),
        lambda p: np.array([[[0 * p[0], 1 + 0 * p[0]], [-1 + 0 * p[0], 0 * p[0]]], [[1 + 0 * p[0], 0 * p[0]], [0 * p[0], 1 + 0 * p[0]]]]),
    )
    pts = [(0.1 * i, 0.2 * j - 0.5) for i in range(5) for j in range(5)]
    good = grid_verify(num, lambda p: np.array([np.exp(p[0]) * np.cos(p[1]), np.exp(p[0]) * np.sin(p[1])]), pts)
    assert good.ok and good.points == 25
    bad = grid_verify(num, lambda p: np.array([p[0] * p[1], p[1]]), pts)
    assert not bad.ok
