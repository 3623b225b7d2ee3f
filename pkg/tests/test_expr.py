import pytest
from hypothesis import given, settings

from cwlocate.expr import (
    Atom, ExprError, IDENTITY, Join, LabelMap, LabeledGraph, ParseError, SlickExpr, depth,
    evaluate, format_expr, graphs_equal, node_count, parse_classic, parse_expr, parse_slick,
)

from conftest import SEVEN_EDGES, classic_exprs, slick_exprs


def edge_names(g, swap=None):
    swap = swap or {}
    return {"".join(sorted(swap.get(v, v) for v in e)) for e in g.edges}


def test_seven_expression_builds_the_expected_graph(seven):
    g = evaluate(seven)
    assert len(g) == 7 and len(g.edges) == 10
    assert edge_names(g, {"f": "g", "g": "f"}) == SEVEN_EDGES
    assert set(g.labels.values()) == {1}
    assert depth(seven) == 4


def test_seven_degrees(seven):
    assert evaluate(seven).degrees() == {"a": 2, "b": 4, "c": 2, "d": 4, "e": 2, "f": 5, "g": 1}


def test_atom_and_p4(p4):
    g = evaluate(parse_slick("k 1\n(v 1 x)"))
    assert g.labels == {"x": 1} and not g.edges
    assert edge_names(evaluate(p4)) == {"ab", "bc", "cd"}


def test_classic_eval():
    e = parse_classic("k 2 (rho 2 1 (eta 1 2 (u (v 1 a) (u (v 2 b) (v 1 c)))))")
    g = evaluate(e)
    assert edge_names(g) == {"ab", "bc"}
    assert g.labels == {"a": 1, "b": 1, "c": 1}


@pytest.mark.parametrize("text, where, fragment", [
    ("k 2\n(v 3 a)", (2, 4), "label 3"),
    ("k 2 (join (S (1 2)) (L) (R) (v 1 a))", None, "join"),
    ("k 2 (join (S (1 2)) (L) (R) (v 1 a) (v 2 a))", None, "a"),
    ("(v 1 a)", (1, 1), "k"),
    ("k 1 (v 1 a", (1, 5), "unclosed"),
    ("k 2 (join (S (1 2)) (L (1 2) (1 1)) (R) (v 1 a) (v 2 b))", None, "mapped twice"),
])
def test_parse_errors(text, where, fragment):
    with pytest.raises(ParseError) as info:
        parse_slick(text)
    assert fragment in str(info.value)
    if where:
        assert (info.value.line, info.value.col) == where


def test_classic_eta_needs_distinct_labels():
    with pytest.raises(ExprError):
        parse_classic("k 2 (eta 1 1 (v 1 a))")


def test_parse_expr_dispatch():
    assert isinstance(parse_expr("k 1 (v 1 a)", "slick"), SlickExpr)
    with pytest.raises(ValueError):
        parse_expr("k 1 (v 1 a)", "json")


def test_labelmap():
    f = LabelMap([(1, 2), (2, 2)])
    assert f(1) == 2 and f(2) == 2 and f(3) == 3
    assert f.pairs == ((1, 2),)
    assert f.table(3) == [0, 2, 2, 3]
    assert IDENTITY.is_identity() and not f.is_identity()


def test_deep_expression_is_not_recursive():
    # a path v0 - v1 - ... built as a caterpillar of depth 19999
    retire = LabelMap([(1, 2)])
    node = Atom(1, "v0")
    for i in range(1, 20000):
        node = Join(frozenset({(1, 1)}), retire, IDENTITY, node, Atom(1, f"v{i}"))
    e = SlickExpr(2, node)
    assert depth(e) == 19999
    assert node_count(e) == 39999
    assert parse_slick(format_expr(e)) == e
    g = evaluate(e)
    assert len(g.edges) == 19999 and g.components() == 1


@settings(max_examples=60, deadline=None)
@given(slick_exprs())
def test_slick_format_roundtrip(e):
    for indent in (None, 2):
        again = parse_slick(format_expr(e, indent))
        assert again == e
        assert graphs_equal(evaluate(again), evaluate(e))


@settings(max_examples=60, deadline=None)
@given(classic_exprs())
def test_classic_format_roundtrip(e):
    assert parse_classic(format_expr(e)) == e


def test_graphs_equal_checks_labels():
    a = LabeledGraph.from_edges({"x": 1, "y": 1}, [("x", "y")])
    b = LabeledGraph.from_edges({"x": 1, "y": 2}, [("x", "y")])
    c = LabeledGraph.from_edges({"x": 1, "y": 1}, [("y", "x")])
    assert a == c and a != b
    assert a.components() == 1
    assert LabeledGraph.from_edges({"x": 1, "y": 1}, []).components() == 2
