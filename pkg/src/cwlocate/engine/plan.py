"""Flatten a slick expression into post-order arrays that both kernels consume."""
from __future__ import annotations

from array import array
from dataclasses import dataclass

from ..expr import Atom, SlickExpr, postorder


@dataclass
class Plan:
    """Post-order node arrays. Node ``t`` (0-based) is reported as ``t + 1``.

    For a join, ``smask[(t*k + i-1)*k + j-1]`` is 1 when (i, j) is in S and
    ``lmap[t*k + i-1]`` is L(i). For a leaf, ``left[t] == -1``.
    """

    k: int
    left: array
    right: array
    leaf_label: array
    leaf_vertex: array
    smask: bytes
    lmap: array
    rmap: array
    vertices: list

    @property
    def nodes(self) -> int:
        return len(self.left)

    @property
    def n(self) -> int:
        return len(self.vertices)


def compile_plan(expr: SlickExpr) -> Plan:
    k = expr.k
    left, right = array("i"), array("i")
    leaf_label, leaf_vertex = array("i"), array("i")
    lmap, rmap = array("i"), array("i")
    smask = bytearray()
    vertices: list[str] = []
    pending: list[int] = []
    zeros_k = array("i", [0] * k)
    for node in postorder(expr.root):
        t = len(left)
        if isinstance(node, Atom):
            left.append(-1)
            right.append(-1)
            leaf_label.append(node.label)
            leaf_vertex.append(len(vertices))
            vertices.append(node.vertex)
            lmap.extend(zeros_k)
            rmap.extend(zeros_k)
            smask.extend(bytes(k * k))
        else:
            r = pending.pop()
            l = pending.pop()
            left.append(l)
            right.append(r)
            leaf_label.append(0)
            leaf_vertex.append(-1)
            lmap.extend(node.L.table(k)[1:])
            rmap.extend(node.R.table(k)[1:])
            block = bytearray(k * k)
            for i, j in node.S:
                block[(i - 1) * k + j - 1] = 1
            smask.extend(block)
        pending.append(t)
    return Plan(k, left, right, leaf_label, leaf_vertex, bytes(smask), lmap, rmap, vertices)


def degrees(plan: Plan) -> list[int]:
    """Vertex degrees, indexed like ``plan.vertices``, in O(k^2 n).

    Bottom-up we count vertices per output label of every node; top-down we
    carry, per label, how many neighbours the ancestors' joins add to a
    vertex holding that label.
    """
    k, nn = plan.k, plan.nodes
    left, right = plan.left, plan.right
    counts: list = [None] * nn
    for t in range(nn):
        c = [0] * (k + 1)
        if left[t] < 0:
            c[plan.leaf_label[t]] = 1
        else:
            cl, cr = counts[left[t]], counts[right[t]]
            base = t * k
            for i in range(1, k + 1):
                c[plan.lmap[base + i - 1]] += cl[i]
                c[plan.rmap[base + i - 1]] += cr[i]
        counts[t] = c
    deg = [0] * plan.n
    extra: list = [None] * nn
    extra[nn - 1] = [0] * (k + 1)
    for t in range(nn - 1, -1, -1):
        up = extra[t]
        extra[t] = None
        if left[t] < 0:
            deg[plan.leaf_vertex[t]] = up[plan.leaf_label[t]]
            continue
        l, r = left[t], right[t]
        cl, cr = counts[l], counts[r]
        base = t * k
        el = [0] * (k + 1)
        er = [0] * (k + 1)
        for i in range(1, k + 1):
            el[i] = up[plan.lmap[base + i - 1]]
            er[i] = up[plan.rmap[base + i - 1]]
        sbase = t * k * k
        for i in range(1, k + 1):
            for j in range(1, k + 1):
                if plan.smask[sbase + (i - 1) * k + j - 1]:
                    el[i] += cr[j]
                    er[j] += cl[i]
        extra[l], extra[r] = el, er
    return deg
