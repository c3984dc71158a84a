import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from starmul.catalog import list_fixtures, load_fixture
from starmul.dsl import (
    DSLError,
    format_system,
    parse_expression,
    parse_mupoly,
    parse_point,
    parse_rf,
    parse_system,
    parse_vector,
)
from starmul.muring import MonicZ, MuPoly, SolutionVec
from starmul.ratfunc import Chart
from strategies import XY, ratfuncs

CH = Chart(XY)
x, y = CH.symbols()


def test_examples():
    z = parse_expression("x + y*mu + x*y*mu^2 + mu^3", XY)
    assert z == MonicZ((x, y, x * y)).as_mupoly()
    assert parse_expression("(x*y - y*x)", XY) == 0
    # expanded by hand: (x y^3 - y x^3)/(x - y) = -x y (x + y)
    assert parse_expression("1/(x - y) * (x*y^3 - y*x^3)", XY) == -x * y * (x + y)


def test_precedence():
    assert parse_rf("-x^2", XY) == -(x * x)
    assert parse_rf("2/3*x", XY) == x * 2 / 3
    assert parse_rf("x/y*y", XY) == x
    assert parse_rf("x^-2", XY) == 1 / (x * x)
    assert parse_rf("2^(1+1)", XY) == 4
    assert parse_rf("1.5*x", XY) == x * 3 / 2


@pytest.mark.parametrize(
    "text, col, msg",
    [
        ("x +", 4, "expected an expression"),
        ("x + q", 5, "unknown identifier"),
        ("x/(mu + 1)", 2, "containing mu"),
        ("x ^ y", 5, "integer constant"),
        ("(x", 3, "expected ')'"),
        ("x $ y", 3, "unexpected character"),
        ("x/0", 2, "division by zero"),
    ],
)
def test_syntax_errors(text, col, msg):
    with pytest.raises(DSLError, match=re.escape(msg)) as e:
        parse_mupoly(text, XY)
    assert e.value.line == 1 and e.value.col == col


def test_mu_in_coefficient_position():
    with pytest.raises(DSLError, match="coefficient position"):
        parse_rf("x*mu", XY)
    with pytest.raises(DSLError, match="reserved"):
        parse_rf("x", ("x", "mu"))


def test_vector_and_point():
    assert parse_vector("(x*y, -x + y^2)", XY) == SolutionVec((x * y, y * y - x))
    assert parse_point("x=0.2, y=-1e-3") == {"x": 0.2, "y": -0.001}
    with pytest.raises(DSLError):
        parse_point("x0.2")


def test_system_document():
    text = """
    # comment line
    system demo:1;
    coords: x, y;
    Z: x + y*mu + mu^2;   # trailing comment
    A0: [[0, x], [-1, y]];
    A1: [[1, 0],
         [0, 1]];
    """
    sys = parse_system(text)
    assert sys.name == "demo:1" and sys.coords == XY and sys.k == 1
    assert parse_system(format_system(sys)) == sys


def test_system_errors_have_positions():
    with pytest.raises(DSLError) as e:
        parse_system("coords: x, y;\nZ: x + mu^2;\nA0: [[1, 0], [0]];")
    assert e.value.line == 3
    with pytest.raises(DSLError, match="monic"):
        parse_system("coords: x;\nZ: 2*mu;\nA0: [[1]];")
    with pytest.raises(DSLError, match="duplicate"):
        parse_system("coords: x, x;\nZ: mu;\nA0: [[1, 0], [0, 1]];")


@pytest.mark.parametrize("name", [n for n in list_fixtures() if n != "generic-321"])
def test_catalog_round_trip(name):
    sys = load_fixture(name).sys
    text = format_system(sys)
    again = parse_system(text)
    assert again == sys
    assert format_system(again) == text


@settings(max_examples=500)
@given(ratfuncs(max_deg=3))
def test_round_trip_rational_functions(f):
    assert parse_rf(str(f), XY) == f


@settings(max_examples=100)
@given(st.lists(ratfuncs(max_deg=2), min_size=1, max_size=4))
def test_round_trip_mupolys(cs):
    p = MuPoly(XY, cs)
    assert parse_mupoly(str(p), XY) == p
