import random
from fractions import Fraction

import pytest

from starmul import matrix as mx
from starmul.finder import build_231, check_231_phi, find_A, phi_231, verify_family
from starmul.muring import MonicZ, MuPoly, companion, star_mul, star_pow
from starmul.ratfunc import Chart
from starmul.system import admits_multiplication, verify_solution

CH = Chart(("x", "y"))
x, y = CH.symbols()


def _random_params(ch, k, rng):
    syms = ch.symbols()
    out = []
    for _ in range(k):
        v = ch.const(rng.randint(-3, 3))
        for s in syms:
            v = v + s * rng.randint(-2, 2)
        if rng.random() < 0.3:
            v = v / (syms[0] * syms[0] + 1)
        out.append(v)
    return out


def _spot_check(fam, ch, count=10, seed=0):
    rng = random.Random(seed)
    return verify_family(fam, [_random_params(ch, fam.dimension, rng) for _ in range(count)])


def test_worked_example_family():
    z = MonicZ((x, y, x * y))
    fam = find_A(z, 2, 1, CH.coords)
    assert fam.dimension == 2
    u = (x * x * y + 1, x * (1 - y * y))
    m0 = ((x * y, x * x), (y * y - 1, x * y))
    for t in fam.basis:
        a0, a1 = t.mats
        for col in range(2):
            c = (a1[0][col], a1[1][col])
            # each A_1 column is a multiple of u
            assert (c[0] * u[1] - c[1] * u[0]).is_zero()
        assert a0 == mx.matmul(m0, a1)
    assert sorted(s[0] for s in fam.slots) == [0, 1]
    assert _spot_check(fam, CH)


def test_generic_mm1_homogeneous():
    for m in (2, 3):
        ch = Chart(tuple(f"q{i + 1}" for i in range(m)))
        z = MonicZ(ch.symbols())
        fam = find_A(z, m, 1, ch.coords)
        assert fam.dimension == m * m
        c = companion(z).entries
        for t in fam.basis:
            a0, a1 = t.mats
            assert a0 == mx.scale(mx.matmul(c, a1), -1)
        assert _spot_check(fam, ch, 5)


def test_constant_z_everything_admissible():
    z = MonicZ((CH.one, CH.zero))
    fam = find_A(z, 2, 1, CH.coords)
    assert fam.dimension == 2 * 2 * 2
    assert _spot_check(fam, CH, 5)


def test_n21_structure():
    ch = Chart(("q1", "q2", "q3"))
    q1, q2, q3 = ch.symbols()
    z = MonicZ((q1, q2))
    fam = find_A(z, 3, 1, ch.coords)
    assert fam.dimension == 3 * 3 + 3 * (3 - 2)
    c = companion(z).entries
    for t in fam.basis:
        a0, a1 = t.mats
        top0 = tuple(a0[:2])
        top1 = tuple(a1[:2])
        assert top0 == mx.scale(mx.matmul(c, top1), -1)
    assert _spot_check(fam, ch, 5)


@pytest.mark.parametrize("n", [2, 3])
def test_n32_free_function_count(n):
    ch = Chart(tuple(f"q{i + 1}" for i in range(n)))
    q = ch.symbols()
    lower = tuple(q[:3]) if n >= 3 else (q[0], q[1], q[0] * q[1] + q[1] + 2)
    z = MonicZ(lower)
    fam = find_A(z, n, 2, ch.coords, leading_identity=True)
    assert fam.dimension == n * (2 * n - 3)
    assert _spot_check(fam, ch, 5)


def test_inconsistent_affine_system_is_empty():
    # with k = 0 the leading coefficient is A_0 = I, which would need dZ = 0
    fam = find_A(MonicZ((x, y)), 2, 0, CH.coords, leading_identity=True)
    assert fam.dimension == 0
    assert fam.particular.mats[0][0][0].is_zero()


def test_bad_k():
    with pytest.raises(ValueError):
        find_A(MonicZ((x, y)), 2, 2, CH.coords)


def test_check_231_phi():
    for a in (1, 2, Fraction(-1, 3)):
        assert check_231_phi(phi_231(a))
    assert not check_231_phi(CH.zero)
    assert not check_231_phi(y)
    with pytest.raises(ValueError):
        phi_231(0)


def test_build_231():
    for a in (1, 2, Fraction(-1, 3)):
        sys = build_231(a)
        assert admits_multiplication(sys)
        mu = MuPoly.mu(sys.coords)
        worked = star_mul(mu, star_pow(mu, 2, sys.z), sys.z, check=True)
        a = Fraction(a)
        assert worked == MuPoly(sys.coords, [-x, -y, x * a * a - y * a - 1 / a])
        assert verify_solution(sys, worked)
        assert verify_solution(sys, MuPoly.one(sys.coords))
    a0 = build_231(2).a.mats[0]
    assert a0 == ((-4 * x, 2 * x), (-4 * y - 1, 2 * y))
