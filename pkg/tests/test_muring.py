from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from starmul import matrix as mx
from starmul.muring import (
    MU_NOT_UNIT,
    MonicZ,
    MuPoly,
    SolutionVec,
    at_companion,
    companion,
    divmod_mu,
    eval_at_companion,
    evaluate_z_at_matrix,
    mu_inverse,
    reduce,
    star_mul,
    star_mul_matrix,
    star_pow,
    unit_inverse,
)
from starmul.ratfunc import Chart
from strategies import XY, monic_zs, rationals, reduced_mupolys

CH = Chart(XY)
x, y = CH.symbols()
ONE, ZERO = CH.one, CH.zero
Z221 = MonicZ((x, y))
ZCR = MonicZ((ONE, ZERO))
ZFX = MonicZ((x, y, x * y))


def mp(*cs):
    return MuPoly(XY, list(cs))


def test_mupoly_printing():
    assert str(ZFX) == "x + y*mu + x*y*mu^2 + mu^3"
    assert str(mp(0, -1)) == "-mu"
    assert str(mp(x + 1, 0, -y)) == "1 + x - y*mu^2"


def test_divmod_reconstructs():
    p = mp(x, y, 1, x * y, 2, 1)
    q, r = divmod_mu(p, ZFX)
    assert q * ZFX.as_mupoly() + r == p
    assert r.degree < 3


def test_divmod_examples():
    assert reduce(ZFX.as_mupoly(), ZFX).is_zero()
    assert reduce(Z221.as_mupoly() + 1, Z221) == mp(1)
    assert reduce(mp(0, 0, 1), ZCR) == mp(-1)
    z0, z1, z2 = ZFX.lower
    assert reduce(MuPoly.monomial(XY, 4), ZFX) == mp(z0 * z2, z1 * z2 - z0, z2 * z2 - z1)


def test_companion_examples():
    c = companion(Z221).entries
    assert c == ((ZERO, -x), (ONE, -y))
    cr = companion(ZCR).entries
    assert mx.matmul(cr, cr) == mx.scale(mx.identity(2, ZERO, ONE), -1)


def test_cayley_hamilton_m4():
    z = MonicZ((x * y, x - 1, y * y, x + y))
    assert mx.is_zero_matrix(evaluate_z_at_matrix(z, companion(z).entries))


def test_eval_at_companion():
    for k in range(3):
        v = eval_at_companion(MuPoly.monomial(XY, k), ZFX)
        assert v.entries == tuple(ONE if i == k else ZERO for i in range(3))
    assert eval_at_companion(MuPoly.monomial(XY, 3), ZFX) == SolutionVec((-x, -y, -x * y))


def test_product_formulas():
    v, w = mp(x + 1, y), mp(x * y, 3 - x)
    z0, z1 = Z221.lower
    expect = mp(v.coeff(0) * w.coeff(0) - z0 * v.coeff(1) * w.coeff(1), v.coeff(0) * w.coeff(1) + v.coeff(1) * w.coeff(0) - z1 * v.coeff(1) * w.coeff(1))
    assert star_mul(v, w, Z221, check=True) == expect
    v3, w3 = mp(1, x, y), mp(y, 2, x * x)
    z0, z1, z2 = ZFX.lower
    v0, v1, v2 = v3.padded(3)
    w0, w1, w2 = w3.padded(3)
    third = v0 * w2 + v1 * w1 + v2 * w0 - z2 * v1 * w2 - z2 * v2 * w1 + (z2 * z2 - z1) * v2 * w2
    assert star_mul(v3, w3, ZFX, check=True).coeff(2) == third


def test_unreduced_operand_rejected():
    with pytest.raises(ValueError, match="reduce operands first"):
        star_mul(mp(0, 0, 1), mp(1), Z221)


def test_mu_inverse():
    assert mu_inverse(Z221) == mp(-y / x, -1 / x)
    assert star_mul(mu_inverse(ZCR), mp(0, 1), ZCR) == mp(1)
    with pytest.raises(ValueError, match=MU_NOT_UNIT.split("(")[0].strip()):
        mu_inverse(MonicZ((ZERO, ZERO)))


def test_star_pow_table():
    mu = mp(0, 1)
    assert star_pow(mu, 2, Z221, check=True) == mp(-x, -y)
    assert star_pow(mu, 3, Z221, check=True) == mp(x * y, y * y - x)
    assert star_pow(mu, -2, Z221, check=True) == mp((y * y - x) / (x * x), y / (x * x))
    assert star_pow(mu, 0, Z221) == mp(1)
    with pytest.raises(ValueError, match="only for the base mu"):
        star_pow(mp(x, 1), -1, Z221)


def test_generic_mm1_powers():
    ch = Chart(("q1", "q2", "q3", "q4"))
    q = ch.symbols()
    z = MonicZ(q)
    mu = MuPoly.mu(ch.coords)
    assert star_pow(mu, 4, z) == MuPoly(ch.coords, [-v for v in q])
    expect = [q[0] * q[3]] + [-q[i - 1] + q[i] * q[3] for i in range(1, 4)]
    assert star_pow(mu, 5, z) == MuPoly(ch.coords, expect)


def test_unit_inverse_convenience():
    v = mp(1, x)
    inv = unit_inverse(v, Z221)
    assert star_mul(v, inv, Z221) == mp(1)


# -- properties -------------------------------------------------------------


@settings(max_examples=60)
@given(st.integers(2, 4).flatmap(lambda m: st.tuples(monic_zs(m), reduced_mupolys(m), reduced_mupolys(m))))
def test_matrix_and_division_routes_agree(args):
    z, v, w = args
    assert star_mul(v, w, z) == star_mul_matrix(v, w, z)
    assert eval_at_companion(v * w, z) == SolutionVec.from_mupoly(star_mul(v, w, z), z.m)


@settings(max_examples=60)
@given(st.integers(2, 4).flatmap(lambda m: st.tuples(monic_zs(m), reduced_mupolys(m), reduced_mupolys(m), reduced_mupolys(m), rationals(), rationals())))
def test_bilinear(args):
    z, u, v, w, a, b = args
    lhs = star_mul(u.scale(a) + v.scale(b), w, z)
    rhs = star_mul(u, w, z).scale(a) + star_mul(v, w, z).scale(b)
    assert lhs == rhs


@settings(max_examples=60)
@given(st.integers(2, 4).flatmap(lambda m: st.tuples(monic_zs(m), reduced_mupolys(m))))
def test_unit_and_inverse_laws(args):
    z, v = args
    assert star_mul(reduce(MuPoly.one(XY), z), v, z) == v
    if not z.lower[0].is_zero():
        assert star_mul(MuPoly.mu(XY), mu_inverse(z), z) == mp(1)


@settings(max_examples=40)
@given(st.integers(2, 4).flatmap(lambda m: st.tuples(monic_zs(m), reduced_mupolys(m), reduced_mupolys(m))))
def test_full_companion_matrix_is_multiplicative(args):
    z, v, w = args
    lhs = at_companion(star_mul(v, w, z), z)
    rhs = mx.matmul(at_companion(v, z), at_companion(w, z))
    assert lhs == rhs


def test_root_evaluation_oracle_fx_point():
    rng = np.random.default_rng(3)
    pt = (2, 3)
    lower = [float(c.evaluate(pt)) for c in ZFX.lower]
    roots = np.roots([1] + lower[::-1])
    for _ in range(10):
        v = mp(*[int(c) for c in rng.integers(-5, 6, 3)])
        w = mp(x * int(rng.integers(-3, 4)), y + int(rng.integers(-3, 4)), 1)
        prod = star_mul(v, w, ZFX)
        for lam in roots:
            a = complex(prod.value_at(pt, lam))
            b = complex(v.value_at(pt, lam)) * complex(w.value_at(pt, lam))
            assert abs(a - b) <= 1e-9 * max(1.0, abs(b))
