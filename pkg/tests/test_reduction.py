import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from possifolio.frv import FuzzyRandomReturn
from possifolio.model import PortfolioInstance
from possifolio.reduction import ChanceLevels, ReducedLP, load_lp, reduce, save_lp

ROWS = [("1.35", "0.5", "0.15"), ("1.3", "0.6", "0.1"), ("1.45", "0.55", "0.2"),
        ("1.35", "0.4", "0.15"), ("1.5", "0.5", "0.2")]  # (R1, R2, gamma)


def substitute(shift: str, spread_level: str):
    """Coefficients by exact rational substitution of the table rows."""
    return [Fraction(r1) + Fraction(shift) * Fraction(r2) + Fraction(spread_level) * Fraction(g)
            for r1, r2, g in ROWS]


@pytest.mark.parametrize("level, shift, spread, rhs", [
    # T*(1 - lam) rounded to 2 dp; R*(eta) = L*(eta) = 1 - eta
    (0.1, "1.28", "0.9", Fraction(250) + Fraction("1.28") * 50 - 40 * Fraction("0.9")),
    (0.9, "-1.28", "0.1", Fraction(250) - Fraction("1.28") * 50 - 40 * Fraction("0.1")),
])
def test_table1_reduction_paper_2dp(table1, level, shift, spread, rhs):
    lp = reduce(table1, ChanceLevels(level, level), "paper_2dp")
    expected = substitute(shift, spread)
    assert lp.c == pytest.approx([float(v) for v in expected], abs=1e-12)
    assert lp.rhs == pytest.approx(float(rhs), abs=1e-12)
    assert lp.budget == 200 and lp.bounds == (60,) * 5


def test_frozen_table1_values(table1):
    lp = reduce(table1, ChanceLevels(0.1, 0.1), "paper_2dp")
    assert lp.c == pytest.approx((2.125, 2.158, 2.334, 1.997, 2.320), abs=1e-12)
    assert lp.rhs == pytest.approx(278.0)
    lp = reduce(table1, ChanceLevels(0.9, 0.9), "paper_2dp")
    assert lp.c == pytest.approx((0.725, 0.542, 0.766, 0.853, 0.880), abs=1e-12)
    assert lp.rhs == pytest.approx(182.0)
    lp = reduce(table1, ChanceLevels(0.7, 0.7), "paper_2dp")
    assert lp.c == pytest.approx((1.135, 1.018, 1.224, 1.187, 1.300), abs=1e-12)


def test_crisp_degeneracy():
    assets = [FuzzyRandomReturn(1.0, 1.2, 0.0, 0.0, 0.0), FuzzyRandomReturn(0.8, 0.9, 0.0, 0.0, 0.0)]
    inst = PortfolioInstance(tuple(assets), (5, 5), 6, FuzzyRandomReturn(7, 7, 0, 0, 0))
    for lam in (0.2, 0.5, 0.8):
        lp = reduce(inst, ChanceLevels(lam, lam))
        assert lp.c == (1.2, 0.9)
        assert lp.rhs == 7


def test_provenance_and_determinism(table1):
    a = reduce(table1, ChanceLevels(0.4, 0.7), "exact")
    b = reduce(table1, ChanceLevels(0.4, 0.7), "exact")
    assert a == b and a.to_dict() == b.to_dict()
    assert (a.instance, a.lam, a.eta, a.quantile_mode) == ("table1", 0.4, 0.7, "exact")


@pytest.mark.parametrize("lam, eta", [(0.0, 0.5), (1.0, 0.5), (0.5, 0.0), (0.5, 1.2)])
def test_levels_validated(lam, eta):
    with pytest.raises(ValueError):
        ChanceLevels(lam, eta)


def test_eta_one_allowed(table1):
    lp = reduce(table1, ChanceLevels(0.5, 1.0))
    # spread terms vanish, T*(0.5) = 0
    assert lp.c == pytest.approx((1.35, 1.3, 1.45, 1.35, 1.5), abs=1e-15)
    assert lp.rhs == pytest.approx(250.0)


def test_invalid_instance_rejected():
    inst = PortfolioInstance((FuzzyRandomReturn(1, 1, 0, 0, 0),), (1,), 5, FuzzyRandomReturn(1, 1, 0, 0, 0))
    with pytest.raises(ValueError, match="budget unattainable"):
        reduce(inst, ChanceLevels(0.5, 0.5))


levels = st.floats(0.01, 0.99)


@given(levels, levels, levels)
def test_coefficients_non_increasing(table1, l1, l2, eta):
    l1, l2 = sorted((l1, l2))
    lo, hi = reduce(table1, ChanceLevels(l1, eta)), reduce(table1, ChanceLevels(l2, eta))
    assert all(a >= b - 1e-12 for a, b in zip(lo.c, hi.c))
    lo, hi = reduce(table1, ChanceLevels(eta, l1)), reduce(table1, ChanceLevels(eta, l2))
    assert all(a >= b - 1e-12 for a, b in zip(lo.c, hi.c))


def test_lp_json_round_trip(table1, tmp_path):
    lp = reduce(table1, ChanceLevels(0.1, 0.1), "paper_2dp")
    for item in (lp, lp.without_return_constraint()):
        save_lp(item, tmp_path / "lp.json")
        assert load_lp(tmp_path / "lp.json") == item
    assert load_lp(tmp_path / "lp.json").rhs == -math.inf


def test_lp_rejects_bad_documents():
    with pytest.raises(ValueError):
        ReducedLP.from_dict({"c": [1]})
    with pytest.raises(ValueError):
        ReducedLP((1.0, 2.0), 0.0, 1.0, (1.0,))
