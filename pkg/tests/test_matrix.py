from fractions import Fraction

import pytest
import sympy

from starmul import matrix as mx
from starmul.muring import MonicZ, MuPoly, at_companion
from starmul.ratfunc import Chart

CH = Chart(("x", "y"))
x, y = CH.symbols()
Z0, O = CH.zero, CH.one


def test_det_and_adjugate():
    a = ((x, y, O), (Z0, x + 1, y), (y, Z0, x))
    d = mx.det(a)
    sx, sy = sympy.symbols("x y")
    ref = sympy.Matrix([[sx, sy, 1], [0, sx + 1, sy], [sy, 0, sx]]).det()
    assert sympy.expand(sympy.sympify(str(d).replace("^", "**")) - ref) == 0
    prod = mx.matmul(a, mx.adjugate(a))
    assert prod == mx.scale(mx.identity(3, Z0, O), d)


def test_inverse_and_singular():
    a = ((x, y), (O, x))
    inv = mx.inverse(a)
    assert mx.matmul(a, inv) == mx.identity(2, Z0, O)
    with pytest.raises(ZeroDivisionError, match="singular"):
        mx.inverse(((x, y), (x * 2, y * 2)))


def test_det_of_mupoly_matrix():
    mu = MuPoly.mu(CH.coords)
    xm, ym = MuPoly(CH.coords, [x]), MuPoly(CH.coords, [y])
    d = mx.det(((xm + mu, MuPoly(CH.coords)), (MuPoly(CH.coords), ym + mu)))
    assert d == MuPoly(CH.coords, [x * y, x + y, O])


def test_nullspace_rank_deficient():
    rows = [[x, y, x + y], [x * x, x * y, x * x + x * y]]
    basis = mx.nullspace(rows, CH.coords)
    assert len(basis) == 2
    for v in basis:
        for r in rows:
            assert sum((a * b for a, b in zip(r, v)), Z0).is_zero()


def test_nullspace_full_rank_is_empty():
    assert mx.nullspace([[O, Z0], [Z0, O]], CH.coords) == []


def test_solve_affine():
    rows = [[x, Z0], [Z0, y]]
    part, kern = mx.solve_affine(rows, [x * y, y], CH.coords)
    assert tuple(part) == (y, O) and kern == []
    assert mx.solve_affine([[O], [O]], [O, x], CH.coords) is None


def test_fraction_free_echelon_rank():
    rows = [[O, x, y], [O, x, y], [x, O, O]]
    ech, pivots = mx.fraction_free_echelon(rows)
    assert len(pivots) == 2


def test_at_companion_cayley_hamilton_m4():
    z = MonicZ((x, y * y, x * y + 1, Fraction(3)))
    assert mx.is_zero_matrix(at_companion(z.as_mupoly(), z))
