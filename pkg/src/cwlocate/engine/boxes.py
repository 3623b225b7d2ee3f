"""Single-step operations on KBox values, for inspection and tests.

Each returns a fresh box; inputs are never mutated. Emitted fragments are
lists of DiagEntry tagged with ``node`` (0 when called standalone).
"""
from __future__ import annotations

from fractions import Fraction

from . import _pyengine as _py
from .types import ADJACENCY, DiagEntry, KBox, MatrixSpec, RowKind, RowMeta


def _packed(box: KBox):
    return ([list(r) for r in box.M], [r.kind for r in box.rows],
            [r.label for r in box.rows], [r.vertex for r in box.rows])


def _work(box: KBox, node=0) -> _py.Work:
    w = _py.Work(*_packed(box), node=node)
    w.partition()
    return w


def _result(work: _py.Work):
    M, kind, label, vert = work.pack()
    box = KBox(M, [RowMeta(RowKind(a), b, c) for a, b, c in zip(kind, label, vert)])
    return box, [DiagEntry(*e) for e in work.out]


def leaf_box(label: int, vertex: str, c=0, spec: MatrixSpec = ADJACENCY, degree: int = 0) -> KBox:
    value = spec.diagonal_of(vertex, degree) - Fraction(c)
    return KBox([[value]], [RowMeta(RowKind.TYPE_II, label, vertex)])


def merge_children(left: KBox, right: KBox, S, L, R, spec: MatrixSpec = ADJACENCY) -> KBox:
    """Pre-reduction box of a join; may hold repeated type-ii labels."""
    work = _py.merge(_packed(left), _packed(right), frozenset(S), L, R, Fraction(spec.w))
    return _result(work)[0]


def reduce_duplicate_type_ii(box: KBox):
    work = _work(box)
    work.merge_duplicates()
    return _result(work)


def annihilate_m0(box: KBox):
    work = _work(box)
    work.annihilate()
    return _result(work)


def reduce_kp(box: KBox):
    """Run the M1 echelon step when kp > kpp (M0 must already be zero)."""
    work = _work(box)
    if len(work.rows_of(RowKind.TYPE_I)) > len(work.rows_of(RowKind.TYPE_II)):
        work.reduce_kp()
    return _result(work)


def combine_boxes(left: KBox, right: KBox, S, L, R, spec: MatrixSpec = ADJACENCY, node: int = 0):
    work = _py.merge(_packed(left), _packed(right), frozenset(S), L, R, Fraction(spec.w), node)
    work.combine()
    return _result(work)


def diagonalize_box(box: KBox, node: int = 0) -> list:
    work = _work(box, node)
    work.diagonalize()
    return _result(work)[1]
