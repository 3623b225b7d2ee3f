from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from cwlocate.engine import MatrixSpec
from cwlocate.expr import LabeledGraph, evaluate
from cwlocate.oracle import (
    build_matrix, dense_congruent_diagonalize, determinant, oracle_diagonal, oracle_inertia,
)
from cwlocate.spectral import inertia_of_values

from conftest import rationals, slick_exprs


def test_build_k2(k2):
    order, B = build_matrix(evaluate(k2), 0)
    assert order == ["a", "b"] and B == [[0, 1], [1, 0]]


def test_build_single_vertex():
    g = LabeledGraph.from_edges({"x": 1}, [])
    assert build_matrix(g, 3)[1] == [[-3]]


def test_build_seven(seven):
    B = build_matrix(evaluate(seven), 0)[1]
    assert sum(x for row in B for x in row) == 20
    assert all(B[i][i] == 0 for i in range(7))


def test_build_laplacian(p4):
    B = build_matrix(evaluate(p4), 0, MatrixSpec.laplacian())[1]
    assert B == [[1, -1, 0, 0], [-1, 2, -1, 0], [0, -1, 2, -1], [0, 0, -1, 1]]


def test_two_by_two_trick():
    assert dense_congruent_diagonalize([[0, 1], [1, 0]]) == [-1, 1]


def test_zero_matrix():
    assert dense_congruent_diagonalize([[0] * 3 for _ in range(3)]) == [0, 0, 0]


def test_rejects_asymmetric():
    with pytest.raises(ValueError):
        dense_congruent_diagonalize([[0, 1], [2, 0]])


@pytest.mark.parametrize("B, det", [
    ([[0, 1], [1, 0]], -1),
    ([[1 if i == j else 0 for j in range(4)] for i in range(4)], 1),
    ([], 1),
    ([[F(1, 2), 3], [3, F(-2, 3)]], F(-1, 3) - 9),
    ([[0, 0, 1], [0, 2, 0], [1, 0, 0]], -2),
])
def test_determinant(B, det):
    assert determinant(B) == det


def test_seven_oracle(seven):
    assert tuple(oracle_inertia(seven, 0)) == (3, 1, 3)
    assert determinant(build_matrix(evaluate(seven), 0)[1]) == 0


def test_small_oracles(p4, k2):
    assert tuple(oracle_inertia(p4, 0)) == (2, 0, 2)
    assert tuple(oracle_inertia(k2, 0)) == (1, 0, 1)


@settings(max_examples=80, deadline=None)
@given(slick_exprs(), rationals)
def test_product_is_determinant(e, c):
    B = build_matrix(evaluate(e), c)[1]
    prod = F(1)
    for v in dense_congruent_diagonalize(B):
        prod *= v
    assert prod == determinant(B)


@settings(max_examples=40, deadline=None)
@given(slick_exprs(max_n=8))
def test_leading_minor_sign_changes(e):
    # inertia from the diagonal agrees with the sign pattern of leading minors when
    # all of them are nonzero (an independent check that needs no eigensolver)
    B = build_matrix(evaluate(e), F(1, 3))[1]
    minors = [determinant([row[:m] for row in B[:m]]) for m in range(len(B) + 1)]
    if all(minors):
        flips = sum(1 for a, b in zip(minors, minors[1:]) if (a > 0) != (b > 0))
        assert oracle_inertia(e, F(1, 3)).n_minus == flips
        assert inertia_of_values(oracle_diagonal(e, F(1, 3))).n_zero == 0
