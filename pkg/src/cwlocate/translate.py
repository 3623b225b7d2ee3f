"""Translations between classic k-expressions and slick k-expressions.

classic -> slick keeps the width k; slick -> classic doubles it to 2k.
"""
from __future__ import annotations

from .expr import (
    Atom, ClassicExpr, Eta, ExprError, Join, LabelMap, Rho, SlickExpr, Union, postorder,
)

__all__ = ["eta_to_slick", "classic_to_slick", "slick_to_classic"]


class _Node:
    """Mutable slick node used while rewriting.

    ``pending`` holds unordered label pairs {i, j} (in the node's output
    labels) whose eta operation still has to be pushed into S or into the
    children.
    """

    __slots__ = ("atom", "S", "L", "R", "left", "right", "pending")

    def __init__(self, atom=None, S=None, L=None, R=None, left=None, right=None):
        self.atom = atom
        self.S = S
        self.L = L
        self.R = R
        self.left = left
        self.right = right
        self.pending: set = set()


def _thaw(root, k: int) -> _Node:
    stack: list[_Node] = []
    for node in postorder(root):
        if isinstance(node, Atom):
            stack.append(_Node(atom=node))
        else:
            right = stack.pop()
            left = stack.pop()
            stack.append(_Node(None, set(node.S), node.L.table(k), node.R.table(k), left, right))
    return stack[0]


def _flush(node: _Node, k: int):
    """Turn the pending eta pairs of one join into cross edges and child etas."""
    pending = node.pending
    if not pending:
        return
    L, R = node.L, node.R
    for x in range(1, k + 1):
        for y in range(1, k + 1):
            if frozenset((L[x], R[y])) in pending:
                node.S.add((x, y))
    for child, f in ((node.left, L), (node.right, R)):
        if child.atom is not None:
            continue
        for x in range(1, k + 1):
            for y in range(x + 1, k + 1):
                if frozenset((f[x], f[y])) in pending:
                    child.pending.add(frozenset((x, y)))
    pending.clear()


def _freeze(root: _Node, k: int) -> SlickExpr:
    # top-down: push every pending eta to the leaves
    order = []
    stack = [root]
    while stack:
        node = stack.pop()
        if node.atom is not None:
            continue
        _flush(node, k)
        order.append(node)
        stack.append(node.right)
        stack.append(node.left)
    built: dict[int, object] = {}

    def get(node):
        return node.atom if node.atom is not None else built.pop(id(node))

    for node in reversed(order):
        built[id(node)] = Join(
            frozenset(node.S),
            LabelMap((i, node.L[i]) for i in range(1, k + 1)),
            LabelMap((i, node.R[i]) for i in range(1, k + 1)),
            get(node.left), get(node.right))
    return SlickExpr(k, get(root))


def eta_to_slick(i: int, j: int, s: SlickExpr) -> SlickExpr:
    """A slick expression of the same depth (same tree shape) producing
    ``eta_{i,j}`` applied to the labelled graph of ``s``."""
    if i == j:
        raise ExprError(f"eta needs two distinct labels, got {i} {j}")
    for lab in (i, j):
        if not 1 <= lab <= s.k:
            raise ExprError(f"label {lab} out of range 1..{s.k}")
    root = _thaw(s.root, s.k)
    if root.atom is None:
        root.pending.add(frozenset((i, j)))
    return _freeze(root, s.k)


def classic_to_slick(r: ClassicExpr) -> SlickExpr:
    """An equivalent slick expression of the same width.

    Eta operations are pushed down lazily: a node flushes its pending pairs
    only when a relabelling above it changes its maps, which keeps the whole
    translation linear in the size of ``r`` for fixed k.
    """
    k = r.k
    identity = list(range(k + 1))
    stack: list[_Node] = []
    for node in postorder(r.root):
        if isinstance(node, Atom):
            stack.append(_Node(atom=node))
        elif isinstance(node, Union):
            right = stack.pop()
            left = stack.pop()
            stack.append(_Node(None, set(), identity[:], identity[:], left, right))
        elif isinstance(node, Eta):
            top = stack[-1]
            if top.atom is None:
                top.pending.add(frozenset((node.i, node.j)))
        else:
            top = stack[-1]
            if top.atom is not None:
                if top.atom.label == node.i:
                    top.atom = Atom(node.j, top.atom.vertex)
                continue
            _flush(top, k)
            for table in (top.L, top.R):
                for t in range(1, k + 1):
                    if table[t] == node.i:
                        table[t] = node.j
    return _freeze(stack[0], k)


def _join_to_classic(node: Join, k: int, left, right):
    two_k = 2 * k
    w = left
    for i in range(k, 0, -1):
        w = Rho(i, k + i, w)
    w = Union(w, right)
    for i, j in sorted(node.S):
        w = Eta(i + k, j, w)

    f = [0] * (two_k + 1)
    for x in range(1, two_k + 1):
        f[x] = node.L(x - k) if x > k else node.R(x)
    g = [0] * (two_k + 1)
    for x in range(1, two_k + 1):
        g[x] = max(y for y in range(1, two_k + 1) if f[y] == f[x])

    # round 1: merge labels with the same final image into the largest one
    for x in range(two_k, 0, -1):
        if g[x] != x:
            w = Rho(x, g[x], w)
    # round 2: pack the surviving labels into [2k-q+1, 2k]
    current = sorted(set(g[1:]))
    q = len(current)
    h = {lab: two_k - q + idx for idx, lab in enumerate(current, start=1)}
    for lab in reversed(current):
        if h[lab] != lab:
            w = Rho(lab, h[lab], w)
    # round 3: move each packed label to its final value in [k]
    for lab in reversed(current):
        if f[lab] != h[lab]:
            w = Rho(h[lab], f[lab], w)
    return w


def slick_to_classic(s: SlickExpr) -> ClassicExpr:
    """An equivalent classic expression of width 2k."""
    k = s.k
    stack: list = []
    for node in postorder(s.root):
        if isinstance(node, Atom):
            stack.append(node)
        else:
            right = stack.pop()
            left = stack.pop()
            stack.append(_join_to_classic(node, k, left, right))
    return ClassicExpr(2 * k, stack[0])
