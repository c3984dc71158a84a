import pytest

from starmul.catalog import (
    _broken,
    jodeit_series_identity,
    list_fixtures,
    load_fixture,
    mm1_power_closed_forms,
)
from starmul.muring import MuPoly, SolutionVec, star_mul
from starmul.solutions import mu_power_table
from starmul.system import admissibility, admits_multiplication, verify_solution


@pytest.mark.parametrize("name", list_fixtures())
def test_fixture_loads_and_checks(name):
    fx = load_fixture(name)
    fx.check()
    if fx.sys is not None:
        assert admits_multiplication(fx.sys)
        assert fx.known_solutions
    else:
        assert fx.numeric is not None and fx.numeric_solutions


@pytest.mark.parametrize("name", [n for n in list_fixtures() if n != "generic-321"])
def test_broken_variant_fails(name):
    fx = load_fixture(name)
    assert fx.broken is not None
    adm = admissibility(fx.broken)
    assert not adm.verdict and adm.witness is not None


def test_unknown_fixture_lists_names():
    with pytest.raises(KeyError, match="available: cauchy-riemann"):
        load_fixture("nope")


def test_cauchy_riemann_product_rule():
    sys = load_fixture("cauchy-riemann").sys
    x, y = sys.chart.symbols()
    v, w = MuPoly(sys.coords, [x, y]), MuPoly(sys.coords, [x * x - y, 2 * x * y + 1])
    prod = star_mul(v, w, sys.z)
    vw = (v.coeff(0), v.coeff(1))
    ww = (w.coeff(0), w.coeff(1))
    assert prod == MuPoly(sys.coords, [vw[0] * ww[0] - vw[1] * ww[1], vw[0] * ww[1] + vw[1] * ww[0]])


def test_generic_221_shape():
    sys = load_fixture("generic-221").sys
    x, y = sys.chart.symbols()
    a0, a1 = sys.a.mats
    assert a0 == ((0, x), (-1, y)) or a0 == ((sys.chart.zero, x), (-sys.chart.one, y))
    # dV0/dx = y dV1/dx + dV1/dy and dV0/dy = -x dV1/dx for the table entries
    for _, v in mu_power_table(sys, -2, 3).members:
        v0, v1 = v
        assert v0.partial("x") == y * v1.partial("x") + v1.partial("y")
        assert v0.partial("y") == -x * v1.partial("x")


@pytest.mark.parametrize("m", [3, 4, 5])
def test_mm1_power_list(m):
    sys = load_fixture(f"generic-mm1:{m}").sys
    fam = mu_power_table(sys, 1, m + 2)
    for r, expect in mm1_power_closed_forms(m).items():
        assert fam[f"mu^{r}"] == SolutionVec(expect)
    for expect in mm1_power_closed_forms(m).values():
        assert verify_solution(sys, SolutionVec(expect))


def test_jodeit_series_examples():
    assert jodeit_series_identity([0, 0, 1], [0, 0, 0, 1])
    assert jodeit_series_identity([1, 2, 3, 4, 5, 6], [6, 5, 4, 3, 2, 1])


def test_generic_321_numeric_only():
    fx = load_fixture("generic-321")
    assert fx.sys is None
    labels = [label for label, _ in fx.numeric_solutions]
    assert any(label.startswith("(2,2,1)") for label in labels)
