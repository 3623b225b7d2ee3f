"""Diagonalization of ``A - cI`` along a slick expression's parse tree.

Two interchangeable kernels: a compiled GMP core (``_ckernel``) and the
pure-Python reference (``_pyengine``). The compiled one is used when it was
built; set ``CWLOCATE_BACKEND=python`` to force the fallback.
"""
from __future__ import annotations

import os
from fractions import Fraction

from ..expr import SlickExpr
from . import _pyengine
from .boxes import (
    annihilate_m0, combine_boxes, diagonalize_box, leaf_box, merge_children,
    reduce_duplicate_type_ii, reduce_kp,
)
from .plan import Plan, compile_plan, degrees
from .types import (
    ADJACENCY, DiagEntry, DiagList, InvariantViolation, KBox, MatrixSpec, RowKind, RowMeta,
    TraceRecord,
)

try:
    from . import _ckernel
except ImportError:  # extension not built
    _ckernel = None

BACKENDS = ("compiled", "python") if _ckernel is not None else ("python",)
DEFAULT_BACKEND = os.environ.get("CWLOCATE_BACKEND") or BACKENDS[0]

__all__ = [
    "diagonalize", "leaf_values", "BACKENDS", "DEFAULT_BACKEND",
    "leaf_box", "merge_children", "reduce_duplicate_type_ii", "annihilate_m0",
    "reduce_kp", "combine_boxes", "diagonalize_box",
    "KBox", "RowMeta", "RowKind", "DiagEntry", "DiagList", "TraceRecord",
    "MatrixSpec", "InvariantViolation", "ADJACENCY", "Plan", "compile_plan", "degrees",
]


def _kernel(backend: str):
    name = DEFAULT_BACKEND if backend in (None, "auto") else backend
    if name == "python":
        return "python", _pyengine.run
    if name == "compiled":
        if _ckernel is None:
            raise RuntimeError("compiled backend not available; rebuild the package")
        return "compiled", _ckernel.run
    raise ValueError(f"unknown backend {backend!r}")


def leaf_values(plan: Plan, c, spec: MatrixSpec = ADJACENCY) -> list[Fraction]:
    """Diagonal of the shifted matrix, indexed like ``plan.vertices``."""
    c = Fraction(c)
    if not spec.uses_degrees and not spec.diagonal:
        return [-c] * plan.n
    deg = degrees(plan) if spec.uses_degrees else [0] * plan.n
    cache = {}
    out = []
    for v, d in zip(plan.vertices, deg):
        key = (spec.diagonal.get(v, 0), d)
        if key not in cache:
            cache[key] = spec.diagonal_of(v, d) - c
        out.append(cache[key])
    return out


def diagonalize(e: SlickExpr, c=0, spec: MatrixSpec = ADJACENCY, *, backend: str = "auto",
                check: bool = False, trace: bool = False, plan: Plan | None = None) -> DiagList:
    """Diagonal entries of a matrix congruent to ``spec(e) - c*I``.

    With ``check`` every box is validated after each join and an
    InvariantViolation names the offending node. ``trace`` records one
    TraceRecord per parse-tree node (post-order, 1-based).
    """
    name, run = _kernel(backend)
    if plan is None:
        plan = compile_plan(e)
    vals = leaf_values(plan, c, spec)
    raw, ops, records = run(plan, vals, Fraction(spec.w), check, trace)
    names = plan.vertices
    entries = [DiagEntry(node, names[v], x) for node, v, x in raw]
    return DiagList(entries, ops, records, name)
