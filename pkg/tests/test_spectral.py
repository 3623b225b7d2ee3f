from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from cwlocate.engine import MatrixSpec, diagonalize
from cwlocate.expr import Join, SlickExpr, IDENTITY, evaluate
from cwlocate.generate import cograph_pair_join, random_cograph, random_slick
from cwlocate.spectral import (
    Inertia, Interval, check_join_bounds, count_eigenvalues, inertia, inertia_of_values,
    multiplicity, parse_interval,
)

from conftest import rationals, slick_exprs


def test_inertia_examples():
    vals = [F(-2), F(2), F(-1, 2), F(-3, 2), F(2, 3), F(1, 2), F(0)]
    assert inertia_of_values(vals) == Inertia(3, 1, 3)
    assert inertia_of_values([]) == (0, 0, 0)
    assert inertia_of_values([0, 0]) == (0, 2, 0)
    assert str(Inertia(3, 1, 3)) == "n+=3 n0=1 n-=3"


@pytest.mark.parametrize("text, expected", [
    ("(0,1)", Interval(F(0), F(1))),
    ("[0,1)", Interval(F(0), F(1), True, False)),
    ("( -1/2 , 3 ]", Interval(F(-1, 2), F(3), False, True)),
    ("(-inf,2]", Interval(None, F(2), False, True)),
    ("(-inf,inf)", Interval(None, None)),
    ("[0.5,0.5]", Interval(F(1, 2), F(1, 2), True, True)),
])
def test_parse_interval(text, expected):
    assert parse_interval(text) == expected


@pytest.mark.parametrize("text", [
    "0,1", "(1,0)", "[-inf,0)", "(0,inf]", "(inf,2)", "(0,-inf)", "(a,b)", "(1,1)", "[1,1)", "(0,1,2)",
])
def test_bad_intervals(text):
    with pytest.raises(ValueError):
        parse_interval(text)


@pytest.mark.parametrize("interval, expected", [
    ("(-2,-1)", 3), ("(-1,0)", 0), ("[0,0]", 1), ("(0,1)", 2), ("(1,4)", 1),
    ("(-inf,inf)", 7), ("(-inf,0)", 3), ("(-inf,0]", 4), ("(0,inf)", 3), ("[0,inf)", 4),
    ("[0,1)", 3), ("(-1,0]", 1), ("[-1/2,0]", 1),
])
def test_seven_counts(seven, interval, expected):
    assert count_eigenvalues(seven, interval) == expected


def test_multiplicity(seven, k2):
    assert multiplicity(seven, 0) == 1
    assert multiplicity(k2, 1) == 1
    assert multiplicity(k2, F(1, 2)) == 0


@settings(max_examples=40, deadline=None)
@given(slick_exprs(max_n=10), st.lists(rationals, min_size=3, max_size=3, unique=True))
def test_partition_property(e, pts):
    a, b, c = sorted(pts)
    left = count_eigenvalues(e, Interval(a, b, False, True))
    right = count_eigenvalues(e, Interval(b, c, False, True))
    assert left + right == count_eigenvalues(e, Interval(a, c, False, True))
    n = len(evaluate(e))
    assert count_eigenvalues(e, "(-inf,inf)") == n
    below = count_eigenvalues(e, Interval(None, b, False, False))
    above = count_eigenvalues(e, Interval(b, None, True, False))
    assert below + above == n


@settings(max_examples=30, deadline=None)
@given(slick_exprs(max_n=10), rationals, rationals)
def test_monotone_in_shift(e, c1, c2):
    lo, hi = sorted((c1, c2))
    a, b = inertia(diagonalize(e, lo)), inertia(diagonalize(e, hi))
    assert b.n_plus <= a.n_plus and b.n_minus >= a.n_minus


@pytest.mark.parametrize("seed", range(25))
def test_cograph_gap(seed):
    e = random_cograph(1 + seed % 30, seed)
    assert count_eigenvalues(e, "(-1,0)") == 0


def test_join_bounds_report():
    e = cograph_pair_join(8, 9, 3)
    rep = check_join_bounds(e, "(-1,0)")
    assert rep.count_left == rep.count_right == 0
    assert rep.count_bound_applies and rep.count_bound_ok
    assert rep.multiplicity_ok and rep.max_multiplicity <= 8
    assert len(rep.samples) == 7
    assert rep.samples[0][0] == F(-7, 8)
    text = str(rep)
    assert "bound_8k=16" in text and "multiplicity_ok=true" in text
    assert "lambda" in text.splitlines()[0]


def test_join_bounds_union_of_cographs():
    a = random_cograph(10, 1, prefix="l")
    b = random_cograph(10, 2, prefix="r")
    e = SlickExpr(1, Join(frozenset(), IDENTITY, IDENTITY, a.root, b.root))
    assert check_join_bounds(e, "(-1,0)").count == 0


def test_join_bounds_errors(k2):
    with pytest.raises(ValueError):
        check_join_bounds(random_slick(1, 1, 0), "(-1,0)")
    with pytest.raises(ValueError):
        check_join_bounds(k2, "[-1,0]")
    with pytest.raises(ValueError):
        check_join_bounds(k2, "(-inf,0)")


def test_count_with_laplacian(seven):
    spec = MatrixSpec.laplacian()
    assert count_eigenvalues(seven, "(-inf,0)", spec) == 0
    assert count_eigenvalues(seven, "[0,0]", spec) == 1
