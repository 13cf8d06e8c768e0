import json
import math
import os
import pathlib

import pytest

import tscalc

DATA = pathlib.Path(os.environ.get("TSCALC_TEST_DATA", pathlib.Path(__file__).resolve().parents[2] / "tests" / "data"))


def test_time_scale_basics():
    ts = tscalc.TimeScale([(0, 0), (1, 1), (2, 2), (3, 4)])
    assert ts.min == 0 and ts.max == 4
    assert 3.5 in ts and 2.5 not in ts
    info = ts.point_info(1)
    assert (info["sigma"], info["rho"], info["mu"], info["nu"]) == (2, 0, 1, 1)
    assert tscalc.TimeScale.integers(0, 2) == tscalc.TimeScale([(0, 0), (1, 1), (2, 2)])
    assert tscalc.TimeScale.parse("[[0,1],[1,2]]").components == [(0, 2)]


def test_integrals_and_derivatives():
    z = tscalc.TimeScale.integers(0, 3)
    assert tscalc.integrate(z, "t", 0, 3, "delta") == 3
    assert tscalc.integrate(z, "t", 0, 3, "nabla") == 6
    assert tscalc.integrate(z, lambda t: t, 0, 3, "diamond:0.5") == 4.5
    assert tscalc.differentiate(z, "t^2", 1, "diamond:0.5") == 2
    unit = tscalc.TimeScale([(0, 1)])
    assert abs(tscalc.integrate(unit, "exp(t)", 0, 1) - (math.e - 1)) < 1e-9


def test_inequalities():
    z = tscalc.TimeScale.integers(0, 2)
    bil, dual = tscalc.hardy_pair(z, "1", "1", "1", "1", "1", p=2)
    assert abs(bil["lhs"] - 4) < 1e-12 and abs(bil["rhs"] - 4) < 1e-12
    assert abs(dual["lhs"] - 4) < 1e-12 and abs(dual["rhs"] - 4) < 1e-12
    r = tscalc.holder_2d(z, "1 + x*y", "x + 1", lambda x, y: 2 + y, p=3, alpha=0.3)
    assert r["holds"] and r["lhs"] <= r["rhs"]
    assert tscalc.young(2, 4, 2)["lhs"] == 8
    assert tscalc.reverse_holder(z, "1 + t", "1", p=2)["holds"]


def test_errors():
    z = tscalc.TimeScale.integers(0, 2)
    with pytest.raises(tscalc.ExprSyntaxError, match="at position 3"):
        tscalc.integrate(z, "1 +", 0, 2)
    with pytest.raises(tscalc.DomainError):
        tscalc.differentiate(z, "t", 2, "delta")
    with pytest.raises(tscalc.InputError):
        tscalc.TimeScale([(2, 1)])
    with pytest.raises(tscalc.Error):
        tscalc.integrate(z, "log(t)", 0, 2)


def test_expression_helpers():
    assert tscalc.canonical("1+2*3") == "(1 + (2 * 3))"
    assert tscalc.evaluate("x*y + t", {"x": 2, "y": 3, "t": 1}) == 7


def test_check_matches_cli_document():
    doc = json.loads((DATA / "hardy_unit.json").read_text())
    out = tscalc.check(doc)
    assert out["holds"] is True
    assert out["reports"]["bilinear"]["lhs"] == pytest.approx(4)


def test_fuzz_is_deterministic():
    a = tscalc.fuzz(seed=7, instances=20, checks=["young", "hardy_pair"])
    b = tscalc.fuzz(seed=7, instances=20, checks=["young", "hardy_pair"], threads=2)
    a.pop("wall_time")
    b.pop("wall_time")
    assert a == b
    assert a["violations"] == [] and a["total"] == 20
    assert "hardy_pair" in tscalc.check_names()
