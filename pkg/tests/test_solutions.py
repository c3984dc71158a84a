import itertools
import re
from fractions import Fraction

import pytest

from starmul.catalog import cauchy_riemann_system, eigen_221_system, generic_221_system, generic_mm1_system
from starmul.finder import find_A
from starmul.muring import MonicZ, MuPoly, SolutionVec, star_mul, star_pow
from starmul.ratfunc import Chart
from starmul.solutions import (
    GeneratedFamily,
    diagonal_block_X,
    direct_sum,
    general_solution_221,
    idempotents_m2,
    invert_X,
    lift_trivial,
    mu_power_table,
    power_series_solution,
)
from starmul.system import XTensor, admits_multiplication, from_tensor_X, verify_solution

CH = Chart(("x", "y"))
x, y = CH.symbols()


def test_power_table_221():
    fam = mu_power_table(generic_221_system(), -2, 3)
    assert [label for label, _ in fam.members] == ["mu^-2", "mu^-1", "mu^0", "mu^1", "mu^2", "mu^3"]
    assert fam["mu^0"] == SolutionVec.of(CH.coords, [1, 0])
    assert fam["mu^3"] == SolutionVec((x * y, y * y - x))


def test_power_table_mm1_m4():
    sys = generic_mm1_system(4)
    q1, q2, q3, q4 = sys.chart.symbols()
    fam = mu_power_table(sys, 1, 6)
    assert fam["mu^4"] == SolutionVec((-q1, -q2, -q3, -q4))
    assert fam["mu^6"][3] == -q2 + q4 * (2 * q3 - q4 * q4)


def test_power_table_requires_admissible():
    sys = generic_221_system()
    from starmul.catalog import _broken

    with pytest.raises(ValueError, match="does not admit"):
        mu_power_table(_broken(sys), 0, 2)


def test_family_rejects_non_solution():
    sys = generic_221_system()
    with pytest.raises(AssertionError):
        GeneratedFamily(sys, (("bad", sys.vec([x, 0])),))


def test_power_series_solution_matches_powers():
    sys = generic_221_system()
    v = power_series_solution(sys, [1, 2, 0, Fraction(1, 3)])
    mu = MuPoly.mu(sys.coords)
    expect = MuPoly(sys.coords, [1, 2]) + star_pow(mu, 3, sys.z).scale(Fraction(1, 3))
    assert v.to_mupoly() == expect
    assert verify_solution(sys, v)


def test_general_solution_examples():
    sys = eigen_221_system()
    mu = MuPoly.mu(sys.coords)
    assert general_solution_221([0, 1], [0, 1]) == SolutionVec.of(sys.coords, [0, 1])
    v2 = general_solution_221([0, 0, 1], [0, 0, 1])
    assert v2 == SolutionVec((-x * y, x + y))
    assert v2.to_mupoly() == star_pow(mu, 2, sys.z)
    v3 = general_solution_221([0, 0, 0, 1], [])
    assert verify_solution(sys, v3)


def test_idempotents():
    sys = eigen_221_system()
    em, ep = idempotents_m2(sys)
    one = MuPoly.one(sys.coords)
    assert star_mul(em, em, sys.z) == em.to_mupoly()
    assert star_mul(ep, ep, sys.z) == ep.to_mupoly()
    assert em.to_mupoly() + ep.to_mupoly() == one
    assert star_mul(em, ep, sys.z).is_zero()
    assert verify_solution(sys, em) and verify_solution(sys, ep)


def test_idempotents_need_roots():
    with pytest.raises(ValueError):
        idempotents_m2(generic_221_system())


def _rename(sys, names):
    from starmul.dsl import format_system, parse_system

    text = format_system(sys)
    mapping = dict(zip(sys.coords, names))
    text = re.sub(r"\b(%s)\b" % "|".join(sys.coords), lambda m: mapping[m.group()], text)
    return parse_system(text)


def test_direct_sum_examples():
    a = generic_221_system()
    b = _rename(a, ("u", "v"))
    s = direct_sum(a, b)
    assert s.n == 4 and s.m == 4
    assert admits_multiplication(s)
    assert admits_multiplication(direct_sum(a, _rename(cauchy_riemann_system(), ("u", "v"))))
    sols = [lift_trivial(s, [0] * r + [1]) for r in range(4)]
    for v, w in itertools.combinations_with_replacement(sols, 2):
        assert verify_solution(s, SolutionVec.from_mupoly(star_mul(v, w, s.z), 4))
    with pytest.raises(ValueError, match="clash"):
        direct_sum(a, a)


def test_star_powers_stay_closed():
    for m in (2, 3, 4):
        sys = generic_mm1_system(m)
        mu = MuPoly.mu(sys.coords)
        pw = {r: star_pow(mu, r, sys.z) for r in range(7)}
        for a, b in itertools.product(range(4), repeat=2):
            assert star_mul(pw[a], pw[b], sys.z) == star_pow(mu, a + b, sys.z)
        combo = pw[2].scale(3) + pw[5]
        assert star_mul(combo, pw[1], sys.z) == pw[3].scale(3) + pw[6]


def test_diagonal_block_x():
    ch = Chart(("q1", "q2"))
    q1, q2 = ch.symbols()
    X = diagonal_block_X([1, 1], [q1, q2], ch.coords)
    assert X.entries == ((q1, ch.zero), (ch.zero, q2))
    assert admits_multiplication(from_tensor_X(X, ch.coords))
    c = diagonal_block_X([2], [Fraction(5)], ch.coords)
    s = from_tensor_X(c, ch.coords)
    assert s.z.as_mupoly() == MuPoly(ch.coords, [25, 10, 1])
    assert admits_multiplication(s)
    with pytest.raises(ValueError):
        diagonal_block_X([1, 1], [q2, q1], ch.coords)


def test_invert_x():
    X = XTensor(((x, CH.zero), (CH.zero, y)))
    inv = invert_X(X)
    assert inv.entries == ((1 / x, CH.zero), (CH.zero, 1 / y))
    assert admits_multiplication(from_tensor_X(inv, CH.coords))
    c = invert_X(XTensor(((CH.const(3), CH.zero), (CH.zero, CH.const(3)))))
    assert c.entries[0][0] == Fraction(1, 3)
    with pytest.raises(ValueError, match="singular"):
        invert_X(XTensor(((x, y), (x, y))))


def test_invert_finder_x():
    fam = find_A(MonicZ((x, y)), 2, 1, CH.coords, leading_identity=True)
    X = XTensor(fam.particular.mats[0])
    assert admits_multiplication(from_tensor_X(X, CH.coords))
    assert admits_multiplication(from_tensor_X(invert_X(X), CH.coords))
