"""Seeded random expressions and the fixed families used by the test suites."""
from __future__ import annotations

import random

from .expr import (
    Atom, ClassicExpr, Eta, Join, LabelMap, Rho, SlickExpr, Union, IDENTITY,
)

__all__ = [
    "random_tree_shape", "random_slick", "random_classic", "random_cograph",
    "cograph_pair_join", "path_copies", "k2_copies", "balanced_union",
]


def random_tree_shape(n: int, rng: random.Random) -> tuple[int, list[int], list[int]]:
    """Uniformly random full binary tree with ``n`` leaves (Remy's algorithm).

    Returns ``(root, left, right)``; leaves have ``left[v] == -1``.
    """
    if n < 1:
        raise ValueError("need at least one leaf")
    left, right, parent = [-1], [-1], [-1]
    root = 0
    for _ in range(n - 1):
        x = rng.randrange(len(left))
        leaf, inner = len(left), len(left) + 1
        left += [-1, -1]
        right += [-1, -1]
        parent += [inner, parent[x]]
        p = parent[x]
        if rng.random() < 0.5:
            left[inner], right[inner] = x, leaf
        else:
            left[inner], right[inner] = leaf, x
        parent[x] = inner
        if p == -1:
            root = inner
        elif left[p] == x:
            left[p] = inner
        else:
            right[p] = inner
    return root, left, right


def _build(root: int, left: list[int], right: list[int], make_leaf, make_join):
    """Assemble nodes bottom-up; leaves are numbered in left-to-right order."""
    built: dict[int, object] = {}
    stack = [(root, False)]
    leaf_no = 0
    while stack:
        v, expanded = stack.pop()
        if left[v] == -1:
            leaf_no += 1
            built[v] = make_leaf(leaf_no)
        elif expanded:
            built[v] = make_join(built.pop(left[v]), built.pop(right[v]))
        else:
            stack += [(v, True), (right[v], False), (left[v], False)]
    return built[root]


def _random_map(k: int, rng: random.Random) -> LabelMap:
    if k == 1 or rng.random() < 0.5:
        return IDENTITY
    return LabelMap((i, rng.randint(1, k)) for i in range(1, k + 1))


def random_slick(n: int, k: int, rng: random.Random | int) -> SlickExpr:
    """Random slick k-expression with ``n`` atoms named ``v1..vn``.

    Tree shapes are uniform; each S contains every label pair with probability
    1/2; each of L and R is the identity or a uniformly random function.
    """
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    root, left, right = random_tree_shape(n, rng)
    pairs = [(i, j) for i in range(1, k + 1) for j in range(1, k + 1)]

    def leaf(no):
        return Atom(rng.randint(1, k), f"v{no}")

    def join(a, b):
        S = frozenset(p for p in pairs if rng.random() < 0.5)
        return Join(S, _random_map(k, rng), _random_map(k, rng), a, b)

    return SlickExpr(k, _build(root, left, right, leaf, join))


def random_classic(n: int, k: int, rng: random.Random | int, unary_rate: float = 0.6) -> ClassicExpr:
    """Random classic k-expression: random unions with eta/rho chains sprinkled on top."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    root, left, right = random_tree_shape(n, rng)

    def decorate(node):
        while rng.random() < unary_rate:
            i = rng.randint(1, k)
            j = rng.randint(1, k)
            if k > 1 and rng.random() < 0.6:
                while j == i:
                    j = rng.randint(1, k)
                node = Eta(i, j, node)
            else:
                node = Rho(i, j, node)
        return node

    def leaf(no):
        return decorate(Atom(rng.randint(1, k), f"v{no}"))

    def join(a, b):
        return decorate(Union(a, b))

    return ClassicExpr(k, _build(root, left, right, leaf, join))


def random_cograph(n: int, rng: random.Random | int, prefix: str = "v",
                   marked: float | None = None) -> SlickExpr:
    """Random cograph as a slick 1-expression.

    With ``marked`` set, a slick 2-expression for the same graph is returned
    instead, where each vertex independently carries label 2 with probability
    ``marked`` (label 1 otherwise).
    """
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    root, left, right = random_tree_shape(n, rng)
    k = 1 if marked is None else 2
    full = frozenset((i, j) for i in range(1, k + 1) for j in range(1, k + 1))

    def leaf(no):
        label = 2 if marked is not None and rng.random() < marked else 1
        return Atom(label, f"{prefix}{no}")

    def join(a, b):
        S = full if rng.random() < 0.5 else frozenset()
        return Join(S, IDENTITY, IDENTITY, a, b)

    return SlickExpr(k, _build(root, left, right, leaf, join))


def cograph_pair_join(n_left: int, n_right: int, rng: random.Random | int,
                      marked: float = 0.5) -> SlickExpr:
    """Two random cographs joined between their label-2 vertices, S = {(2, 2)}."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    a = random_cograph(n_left, rng, prefix="l", marked=marked)
    b = random_cograph(n_right, rng, prefix="r", marked=marked)
    return SlickExpr(2, Join(frozenset({(2, 2)}), IDENTITY, IDENTITY, a.root, b.root))


def balanced_union(parts: list, k: int) -> SlickExpr:
    """Disjoint union of slick subtrees as a balanced tree of S = {} joins."""
    level = list(parts)
    while len(level) > 1:
        nxt = [Join(frozenset(), IDENTITY, IDENTITY, level[i], level[i + 1])
               for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    return SlickExpr(k, level[0])


def _p4(tag: str):
    ab = Join(frozenset({(1, 2)}), IDENTITY, IDENTITY, Atom(1, f"a{tag}"), Atom(2, f"b{tag}"))
    cd = Join(frozenset({(2, 1)}), IDENTITY, IDENTITY, Atom(2, f"c{tag}"), Atom(1, f"d{tag}"))
    return Join(frozenset({(2, 2)}), IDENTITY, IDENTITY, ab, cd)


def path_copies(t: int) -> SlickExpr:
    """``t`` disjoint copies of the path a-b-c-d as a slick 2-expression."""
    return balanced_union([_p4(str(i)) for i in range(1, t + 1)], 2)


def k2_copies(t: int) -> SlickExpr:
    """``t`` disjoint edges as a slick 1-expression."""
    edge = frozenset({(1, 1)})
    parts = [Join(edge, IDENTITY, IDENTITY, Atom(1, f"x{i}"), Atom(1, f"y{i}"))
             for i in range(1, t + 1)]
    return balanced_union(parts, 1)
