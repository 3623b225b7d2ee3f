"""Dense O(n^3) reference: build the full matrix and diagonalize it directly.

Shares nothing with the engine except the expression evaluator; degrees
come from the evaluated edge set, not from the parse tree.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm

from .engine.types import ADJACENCY, MatrixSpec
from .expr import LabeledGraph, SlickExpr, ClassicExpr, evaluate
from .spectral import Inertia, inertia_of_values

__all__ = ["build_matrix", "dense_congruent_diagonalize", "oracle_inertia", "determinant",
           "oracle_diagonal"]


def build_matrix(g: LabeledGraph, c=0, spec: MatrixSpec = ADJACENCY) -> tuple[list[str], list[list[Fraction]]]:
    """``(vertex order, B)`` with ``B = spec(g) - c*I``."""
    c = Fraction(c)
    order = g.vertices
    index = {v: i for i, v in enumerate(order)}
    deg = g.degrees() if spec.uses_degrees else {}
    n = len(order)
    B = [[Fraction(0)] * n for _ in range(n)]
    for v in order:
        B[index[v]][index[v]] = spec.diagonal_of(v, deg.get(v, 0)) - c
    w = Fraction(spec.w)
    for edge in g.edges:
        u, v = tuple(edge)
        B[index[u]][index[v]] = B[index[v]][index[u]] = w
    return order, B


def dense_congruent_diagonalize(B: list[list[Fraction]]) -> list[Fraction]:
    """Diagonal of a matrix congruent to symmetric ``B`` (symmetric Gaussian
    elimination; a zero pivot with a nonzero off-diagonal partner is fixed by
    adding that row and column, or half of it when both diagonals vanish)."""
    A = [list(map(Fraction, row)) for row in B]
    n = len(A)
    for i in range(n):
        if any(A[i][j] != A[j][i] for j in range(n)):
            raise ValueError("matrix is not symmetric")
    alive = list(range(n))
    out = []
    while alive:
        p = next((i for i in alive if A[i][i] != 0), None)
        if p is None:
            pair = next(((i, j) for i in alive for j in alive if i != j and A[i][j] != 0), None)
            if pair is None:
                out.extend(Fraction(0) for _ in alive)
                break
            i, j = pair
            # (0 a; a 0) -> (-a 0; 0 a)
            for src, dst, f in ((i, j, Fraction(1, 2)), (j, i, Fraction(-1))):
                for r in alive:
                    A[dst][r] += f * A[src][r]
                for r in alive:
                    A[r][dst] += f * A[r][src]
            p = i
        d = A[p][p]
        alive.remove(p)
        for r in alive:
            f = A[r][p] / d
            if f:
                for s in alive:
                    A[r][s] -= f * A[p][s]
        for r in alive:
            A[r][p] = A[p][r] = Fraction(0)
        out.append(d)
    return out


def determinant(B: list[list[Fraction]]) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination on integers."""
    n = len(B)
    if n == 0:
        return Fraction(1)
    den = 1
    for row in B:
        for x in row:
            den = lcm(den, Fraction(x).denominator)
    A = [[int(Fraction(x) * den) for x in row] for row in B]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if A[r][k] != 0), None)
            if swap is None:
                return Fraction(0)
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return Fraction(sign * A[n - 1][n - 1], den ** n)


def oracle_diagonal(e: SlickExpr | ClassicExpr, c=0, spec: MatrixSpec = ADJACENCY) -> list[Fraction]:
    return dense_congruent_diagonalize(build_matrix(evaluate(e), c, spec)[1])


def oracle_inertia(e: SlickExpr | ClassicExpr, c=0, spec: MatrixSpec = ADJACENCY) -> Inertia:
    return inertia_of_values(oracle_diagonal(e, c, spec))
