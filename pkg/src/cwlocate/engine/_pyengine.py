"""Pure-Python k-box kernel over ``fractions.Fraction``.

This is the reference implementation; the compiled kernel performs the same
row/column operations in the same order and reports the same op count.

Op accounting: one op per entry touched by a row or column operation (the
box order m each time) plus one per pivot quotient. Merging costs nothing.
"""
from __future__ import annotations

from fractions import Fraction

from .types import InvariantViolation, RowKind, TraceRecord

TYPE_I, TYPE_II, DONE = RowKind.TYPE_I, RowKind.TYPE_II, RowKind.DIAGONALIZED
ZERO = Fraction(0)
HALF = Fraction(1, 2)


class Work:
    """A box being reduced. Rows are never moved physically; ``order`` lists
    the live rows in logical order (type-i block first after partition())."""

    __slots__ = ("M", "kind", "label", "vert", "order", "ops", "out", "node", "check")

    def __init__(self, M, kind, label, vert, node=0, check=False):
        self.M = M
        self.kind = kind
        self.label = label
        self.vert = vert
        self.order = list(range(len(M)))
        self.ops = 0
        self.out = []
        self.node = node
        self.check = check

    # -- bookkeeping ----------------------------------------------------

    def set_kind(self, x, new):
        old = self.kind[x]
        if new <= old:
            raise InvariantViolation(self.node, f"row {x} went {old.name} -> {new.name}")
        self.kind[x] = new

    def partition(self):
        kind = self.kind
        self.order = ([x for x in self.order if kind[x] == TYPE_I]
                      + [x for x in self.order if kind[x] == TYPE_II])

    def rows_of(self, which):
        return [x for x in self.order if self.kind[x] == which]

    def emit(self, x, value):
        self.order.remove(x)
        self.set_kind(x, DONE)
        self.out.append((self.node, self.vert[x], value))

    # -- congruence steps -------------------------------------------------

    def row_add(self, dst, src, t):
        rd, rs = self.M[dst], self.M[src]
        for l in self.order:
            v = rs[l]
            if v:
                rd[l] += t * v
        self.ops += len(self.order)

    def col_add(self, dst, src, t):
        for l in self.order:
            r = self.M[l]
            v = r[src]
            if v:
                r[dst] += t * v
        self.ops += len(self.order)

    def pivot(self, i):
        """Clear row and column i against every other live row, then emit m_ii."""
        M = self.M
        d = M[i][i]
        for j in list(self.order):
            if j != i and M[j][i]:
                t = -M[j][i] / d
                self.ops += 1
                self.row_add(j, i, t)
                self.col_add(j, i, t)
        self.emit(i, d)

    def trick(self, x, y):
        # (0 a; a b) -> (-a 0; 0 a) when m_xx = 0 and m_xy = a != 0
        self.row_add(y, x, HALF)
        self.col_add(y, x, HALF)
        self.row_add(x, y, -1)
        self.col_add(x, y, -1)

    def first_pair(self, rows):
        M = self.M
        for a, x in enumerate(rows):
            r = M[x]
            for y in rows[a + 1:]:
                if r[y]:
                    return x, y
        return None

    # -- the four combine phases ------------------------------------------

    def merge_duplicates(self):
        """Make type-ii labels distinct. The last type-ii row carrying a label
        survives; every earlier one is subtracted from it and turns type-i."""
        last = {}
        for x in self.order:
            if self.kind[x] == TYPE_II:
                last[self.label[x]] = x
        for x in list(self.order):
            if self.kind[x] == TYPE_II and last[self.label[x]] != x:
                s = last[self.label[x]]
                self.row_add(x, s, -1)
                self.col_add(x, s, -1)
                self.set_kind(x, TYPE_I)
        self.partition()

    def annihilate(self):
        """Pivot out type-i rows until M0 is zero or empty."""
        M = self.M
        while True:
            rows = self.rows_of(TYPE_I)
            if not rows:
                return
            piv = next((x for x in rows if M[x][x]), None)
            if piv is not None:
                self.pivot(piv)
                continue
            pair = self.first_pair(rows)
            if pair is None:
                return
            self.trick(*pair)

    def reduce_kp(self):
        """Echelon M1 over the type-ii columns; leftover type-i rows are zero."""
        M = self.M
        rows = self.rows_of(TYPE_I)
        free = list(rows)
        for c in self.rows_of(TYPE_II):
            piv = next((x for x in free if M[x][c]), None)
            if piv is None:
                continue
            free.remove(piv)
            for x in free:
                if M[x][c]:
                    t = -M[x][c] / M[piv][c]
                    self.ops += 1
                    self.row_add(x, piv, t)
                    self.col_add(x, piv, t)
        for x in free:
            if self.check and any(M[x][l] for l in self.order):
                raise InvariantViolation(self.node, f"row {x} not cleared by kp reduction")
            self.emit(x, ZERO)

    def combine(self):
        self.merge_duplicates()
        if len(self.rows_of(TYPE_I)) > len(self.rows_of(TYPE_II)):
            self.annihilate()
            if len(self.rows_of(TYPE_I)) > len(self.rows_of(TYPE_II)):
                self.reduce_kp()

    def diagonalize(self):
        """Generic congruence elimination of everything left (root only)."""
        M = self.M
        while self.order:
            piv = next((x for x in self.order if M[x][x]), None)
            if piv is not None:
                self.pivot(piv)
                continue
            pair = self.first_pair(self.order)
            if pair is not None:
                self.trick(*pair)
                continue
            for x in list(self.order):
                self.emit(x, ZERO)

    # -- packing ----------------------------------------------------------

    def pack(self):
        """(M, kind, label, vert) restricted to live rows in logical order."""
        self.partition()
        o = self.order
        M = self.M
        return ([[M[a][b] for b in o] for a in o],
                [self.kind[a] for a in o], [self.label[a] for a in o], [self.vert[a] for a in o])

    def validate(self, k):
        kind, label, M, o = self.kind, self.label, self.M, self.order
        kp = sum(1 for x in o if kind[x] == TYPE_I)
        kpp = len(o) - kp
        if not (kp <= kpp <= k):
            raise InvariantViolation(self.node, f"box shape kp={kp} kpp={kpp} outside 0<=kp<=kpp<={k}")
        if o and kpp < 1:
            raise InvariantViolation(self.node, "nonempty box without type-ii rows")
        seen = set()
        for x in o:
            if kind[x] == TYPE_II:
                if label[x] in seen:
                    raise InvariantViolation(self.node, f"type-ii label {label[x]} repeated")
                seen.add(label[x])
            elif kind[x] != TYPE_I:
                raise InvariantViolation(self.node, f"row {x} is {kind[x].name} but still live")
        for a in o:
            for b in o:
                if M[a][b] != M[b][a]:
                    raise InvariantViolation(self.node, f"asymmetric entries ({a},{b})")


def merge(left, right, S, lmap, rmap, w, node=0, check=False):
    """Block union of two packed boxes plus the join's cross entries.

    ``S`` is any container of (i, j) label pairs; ``lmap``/``rmap`` are
    callables on labels. Cross entries use labels before relabelling.
    """
    ML, kl, ll, vl = left
    MR, kr, lr, vr = right
    a, b = len(ML), len(MR)
    m = a + b
    M = [[ZERO] * m for _ in range(m)]
    for x in range(a):
        M[x][:a] = ML[x]
    for y in range(b):
        M[a + y][a:] = MR[y]
    for x in range(a):
        if kl[x] != TYPE_II:
            continue
        for y in range(b):
            if kr[y] == TYPE_II and (ll[x], lr[y]) in S:
                M[x][a + y] = w
                M[a + y][x] = w
    labels = [lmap(t) for t in ll] + [rmap(t) for t in lr]
    work = Work(M, list(kl) + list(kr), labels, list(vl) + list(vr), node, check)
    work.partition()
    return work


def run(plan, leafvals, w, check=False, trace=False):
    """Diagonalize along the post-order plan.

    Returns ``(entries, ops, records)`` where entries are
    ``(node, vertex_index, Fraction)`` in emission order.
    """
    k = plan.k
    left, right = plan.left, plan.right
    smask, lm, rm = plan.smask, plan.lmap, plan.rmap
    nodes = len(left)
    stack = []
    out = []
    ops = 0
    records = [] if trace else None
    for t in range(nodes):
        if left[t] < 0:
            stack.append(([[leafvals[plan.leaf_vertex[t]]]], [TYPE_II],
                          [plan.leaf_label[t]], [plan.leaf_vertex[t]]))
            work = None
        else:
            R = stack.pop()
            L = stack.pop()
            base = t * k * k
            S = {(i, j) for i in range(1, k + 1) for j in range(1, k + 1)
                 if smask[base + (i - 1) * k + j - 1]}
            lt = lm[t * k:(t + 1) * k]
            rt = rm[t * k:(t + 1) * k]
            work = merge(L, R, S, lambda x: lt[x - 1], lambda x: rt[x - 1], w, t + 1, check)
            work.combine()
            if check:
                work.validate(k)
            stack.append(work.pack())
        if t == nodes - 1:
            if work is None:
                work = Work(*stack[-1], node=t + 1, check=check)
            shape = (len(work.rows_of(TYPE_I)), len(work.rows_of(TYPE_II)))
            work.diagonalize()
        elif trace:
            shape = (len(work.rows_of(TYPE_I)), len(work.rows_of(TYPE_II))) if work else (0, 1)
        if work is not None:
            out.extend(work.out)
            ops += work.ops
        if trace:
            emitted = tuple(v for _, _, v in work.out) if work is not None else ()
            records.append(TraceRecord(t + 1, shape[0], shape[1], emitted))
    return out, ops, records
