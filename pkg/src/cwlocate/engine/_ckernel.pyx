# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""GMP (mpq_t) k-box kernel.

Mirrors ``_pyengine.Work`` loop for loop, so emissions and op counts are
identical. Boxes waiting on the post-order stack live in one growable arena
of mpq_t; the box being reduced lives in a fixed 4k x 4k workspace.
"""
from fractions import Fraction

from libc.limits cimport LONG_MAX
from libc.stdlib cimport free, malloc, realloc

from .types import InvariantViolation, TraceRecord


cdef extern from "gmp.h":
    ctypedef struct __mpz_struct:
        pass
    ctypedef struct __mpq_struct:
        pass
    ctypedef __mpz_struct* mpz_ptr
    ctypedef __mpq_struct* mpq_ptr
    ctypedef __mpq_struct mpq_t[1]

    void mpq_init(mpq_ptr)
    void mpq_clear(mpq_ptr)
    void mpq_set(mpq_ptr, mpq_ptr)
    void mpq_set_si(mpq_ptr, long, unsigned long)
    void mpq_canonicalize(mpq_ptr)
    void mpq_add(mpq_ptr, mpq_ptr, mpq_ptr)
    void mpq_sub(mpq_ptr, mpq_ptr, mpq_ptr)
    void mpq_mul(mpq_ptr, mpq_ptr, mpq_ptr)
    void mpq_div(mpq_ptr, mpq_ptr, mpq_ptr)
    void mpq_neg(mpq_ptr, mpq_ptr)
    int mpq_sgn(mpq_ptr)
    int mpq_equal(mpq_ptr, mpq_ptr)
    mpz_ptr mpq_numref(mpq_ptr)
    mpz_ptr mpq_denref(mpq_ptr)
    int mpz_set_str(mpz_ptr, const char*, int)
    char* mpz_get_str(char*, int, mpz_ptr)
    size_t mpz_sizeinbase(mpz_ptr, int)
    int mpz_fits_slong_p(mpz_ptr)
    long mpz_get_si(mpz_ptr)


# row kinds; numeric order is the only legal direction of travel
DEF TII = 1
DEF TI = 2
DEF DONE = 3

_KIND_NAMES = {TII: "TYPE_II", TI: "TYPE_I", DONE: "DIAGONALIZED"}
_ZERO = Fraction(0)


cdef object _z2py(mpz_ptr z):
    cdef size_t size
    cdef char* buf
    if mpz_fits_slong_p(z):
        return mpz_get_si(z)
    size = mpz_sizeinbase(z, 16) + 2
    buf = <char*>malloc(size)
    try:
        mpz_get_str(buf, 16, z)
        return int(buf.decode("ascii"), 16)
    finally:
        free(buf)


cdef object _q2py(mpq_ptr q):
    if mpq_sgn(q) == 0:
        return _ZERO
    return Fraction(_z2py(mpq_numref(q)), _z2py(mpq_denref(q)))


cdef void _py2q(mpq_ptr q, object x) except *:
    if type(x) is not Fraction:
        x = Fraction(x)
    num, den = x.numerator, x.denominator
    if -LONG_MAX <= num <= LONG_MAX and den <= LONG_MAX:
        mpq_set_si(q, num, den)
        return
    mpz_set_str(mpq_numref(q), format(num, "x").encode("ascii"), 16)
    mpz_set_str(mpq_denref(q), format(den, "x").encode("ascii"), 16)
    mpq_canonicalize(q)


cdef class _Run:
    cdef int k, MM, cnt, node
    cdef bint check
    cdef long long ops
    cdef list out
    # workspace
    cdef __mpq_struct* W
    cdef int* kind
    cdef int* label
    cdef int* vert
    cdef int* order
    cdef int* scratch
    cdef int* rows_a
    cdef int* rows_b
    cdef int* last
    cdef char* isfree
    cdef mpq_t tmp, q, half, minus_one, zero, w
    # arena of boxes on the post-order stack
    cdef __mpq_struct* A
    cdef Py_ssize_t acap, atop
    cdef int* rk
    cdef int* rl
    cdef int* rv
    cdef Py_ssize_t rcap, rtop
    cdef Py_ssize_t* hmat
    cdef Py_ssize_t* hrow
    cdef int* hm
    cdef int htop

    def __cinit__(self, int k, Py_ssize_t nodes, object w, bint check):
        cdef Py_ssize_t i
        self.k = k
        self.MM = 4 * k
        self.check = check
        self.ops = 0
        self.out = []
        self.W = <__mpq_struct*>malloc(self.MM * self.MM * sizeof(__mpq_struct))
        for i in range(self.MM * self.MM):
            mpq_init(&self.W[i])
        self.kind = <int*>malloc(self.MM * sizeof(int))
        self.label = <int*>malloc(self.MM * sizeof(int))
        self.vert = <int*>malloc(self.MM * sizeof(int))
        self.order = <int*>malloc(self.MM * sizeof(int))
        self.scratch = <int*>malloc(self.MM * sizeof(int))
        self.rows_a = <int*>malloc(self.MM * sizeof(int))
        self.rows_b = <int*>malloc(self.MM * sizeof(int))
        self.last = <int*>malloc((k + 1) * sizeof(int))
        self.isfree = <char*>malloc(self.MM)
        mpq_init(self.tmp)
        mpq_init(self.q)
        mpq_init(self.half)
        mpq_init(self.minus_one)
        mpq_init(self.zero)
        mpq_init(self.w)
        mpq_set_si(self.half, 1, 2)
        mpq_set_si(self.minus_one, -1, 1)
        _py2q(self.w, w)
        self.acap = 0
        self.atop = 0
        self.A = NULL
        self.rcap = max(16, 2 * self.MM)
        self.rtop = 0
        self.rk = <int*>malloc(self.rcap * sizeof(int))
        self.rl = <int*>malloc(self.rcap * sizeof(int))
        self.rv = <int*>malloc(self.rcap * sizeof(int))
        self.hmat = <Py_ssize_t*>malloc((nodes + 1) * sizeof(Py_ssize_t))
        self.hrow = <Py_ssize_t*>malloc((nodes + 1) * sizeof(Py_ssize_t))
        self.hm = <int*>malloc((nodes + 1) * sizeof(int))
        self.htop = 0

    def __dealloc__(self):
        cdef Py_ssize_t i
        if self.W != NULL:
            for i in range(self.MM * self.MM):
                mpq_clear(&self.W[i])
            free(self.W)
        if self.A != NULL:
            for i in range(self.acap):
                mpq_clear(&self.A[i])
            free(self.A)
        mpq_clear(self.tmp)
        mpq_clear(self.q)
        mpq_clear(self.half)
        mpq_clear(self.minus_one)
        mpq_clear(self.zero)
        mpq_clear(self.w)
        free(self.kind); free(self.label); free(self.vert); free(self.order)
        free(self.scratch); free(self.rows_a); free(self.rows_b); free(self.last)
        free(self.isfree); free(self.rk); free(self.rl); free(self.rv)
        free(self.hmat); free(self.hrow); free(self.hm)

    # -- arena --------------------------------------------------------------

    cdef int reserve(self, Py_ssize_t mats, Py_ssize_t rows) except -1:
        cdef Py_ssize_t cap, i
        cdef void* p
        if self.atop + mats > self.acap:
            cap = max(2 * self.acap, self.atop + mats, 1024)
            p = realloc(self.A, cap * sizeof(__mpq_struct))
            if p == NULL:
                raise MemoryError()
            self.A = <__mpq_struct*>p
            for i in range(self.acap, cap):
                mpq_init(&self.A[i])
            self.acap = cap
        if self.rtop + rows > self.rcap:
            cap = max(2 * self.rcap, self.rtop + rows)
            self.rk = <int*>realloc(self.rk, cap * sizeof(int))
            self.rl = <int*>realloc(self.rl, cap * sizeof(int))
            self.rv = <int*>realloc(self.rv, cap * sizeof(int))
            if self.rk == NULL or self.rl == NULL or self.rv == NULL:
                raise MemoryError()
            self.rcap = cap
        return 0

    cdef int push_leaf(self, object value, int lab, int v) except -1:
        self.reserve(1, 1)
        _py2q(&self.A[self.atop], value)
        self.rk[self.rtop] = TII
        self.rl[self.rtop] = lab
        self.rv[self.rtop] = v
        self.hmat[self.htop] = self.atop
        self.hrow[self.htop] = self.rtop
        self.hm[self.htop] = 1
        self.htop += 1
        self.atop += 1
        self.rtop += 1
        return 0

    cdef int push_work(self) except -1:
        cdef int m = self.cnt, a, b, MM = self.MM
        self.reserve(m * m, m)
        for a in range(m):
            for b in range(m):
                mpq_set(&self.A[self.atop + a * m + b], &self.W[self.order[a] * MM + self.order[b]])
            self.rk[self.rtop + a] = self.kind[self.order[a]]
            self.rl[self.rtop + a] = self.label[self.order[a]]
            self.rv[self.rtop + a] = self.vert[self.order[a]]
        self.hmat[self.htop] = self.atop
        self.hrow[self.htop] = self.rtop
        self.hm[self.htop] = m
        self.htop += 1
        self.atop += m * m
        self.rtop += m
        return 0

    cdef void load(self, int h, int offset, int[:] lmap, int base):
        """Copy stacked box ``h`` into the workspace at row ``offset``; relabel."""
        cdef int m = self.hm[h], a, b, MM = self.MM
        cdef Py_ssize_t mo = self.hmat[h], ro = self.hrow[h]
        for a in range(m):
            for b in range(m):
                mpq_set(&self.W[(offset + a) * MM + offset + b], &self.A[mo + a * m + b])
            self.kind[offset + a] = self.rk[ro + a]
            self.label[offset + a] = lmap[base + self.rl[ro + a] - 1]
            self.vert[offset + a] = self.rv[ro + a]

    cdef int merge(self, const unsigned char[:] smask, int[:] lmap, int[:] rmap,
                   Py_ssize_t t) except -1:
        cdef int hl = self.htop - 2, hr = self.htop - 1, k = self.k, MM = self.MM
        cdef int a = self.hm[hl], b = self.hm[hr], x, y, li, ri
        cdef Py_ssize_t sbase = t * k * k
        cdef Py_ssize_t lbl = self.hrow[hl], lbr = self.hrow[hr]
        for x in range(a):
            for y in range(b):
                mpq_set_si(&self.W[x * MM + a + y], 0, 1)
                mpq_set_si(&self.W[(a + y) * MM + x], 0, 1)
        for x in range(a):
            if self.rk[lbl + x] != TII:
                continue
            li = self.rl[lbl + x]
            for y in range(b):
                if self.rk[lbr + y] != TII:
                    continue
                ri = self.rl[lbr + y]
                if smask[sbase + (li - 1) * k + ri - 1]:
                    mpq_set(&self.W[x * MM + a + y], self.w)
                    mpq_set(&self.W[(a + y) * MM + x], self.w)
        self.load(hl, 0, lmap, t * k)
        self.load(hr, a, rmap, t * k)
        self.atop = self.hmat[hl]
        self.rtop = self.hrow[hl]
        self.htop -= 2
        self.cnt = a + b
        for x in range(a + b):
            self.order[x] = x
        self.partition()
        return 0

    cdef int load_root_leaf(self) except -1:
        cdef Py_ssize_t mo = self.hmat[0], ro = self.hrow[0]
        mpq_set(&self.W[0], &self.A[mo])
        self.kind[0] = self.rk[ro]
        self.label[0] = self.rl[ro]
        self.vert[0] = self.rv[ro]
        self.order[0] = 0
        self.cnt = 1
        return 0

    # -- bookkeeping ----------------------------------------------------------

    cdef int set_kind(self, int x, int new) except -1:
        if new <= self.kind[x]:
            raise InvariantViolation(self.node, "row %d went %s -> %s"
                                     % (x, _KIND_NAMES[self.kind[x]], _KIND_NAMES[new]))
        self.kind[x] = new
        return 0

    cdef void partition(self):
        cdef int i, n = 0
        for i in range(self.cnt):
            if self.kind[self.order[i]] == TI:
                self.scratch[n] = self.order[i]
                n += 1
        for i in range(self.cnt):
            if self.kind[self.order[i]] == TII:
                self.scratch[n] = self.order[i]
                n += 1
        for i in range(n):
            self.order[i] = self.scratch[i]

    cdef int rows_of(self, int which, int* dst):
        cdef int i, n = 0
        for i in range(self.cnt):
            if self.kind[self.order[i]] == which:
                dst[n] = self.order[i]
                n += 1
        return n

    cdef int emit(self, int x, mpq_ptr value) except -1:
        cdef int i, j = 0
        for i in range(self.cnt):
            if self.order[i] != x:
                self.order[j] = self.order[i]
                j += 1
        self.cnt = j
        self.set_kind(x, DONE)
        self.out.append((self.node, self.vert[x], _q2py(value)))
        return 0

    # -- congruence steps -------------------------------------------------------

    cdef void row_add(self, int dst, int src, mpq_ptr t):
        cdef int i, l
        cdef __mpq_struct* rs = &self.W[src * self.MM]
        cdef __mpq_struct* rd = &self.W[dst * self.MM]
        for i in range(self.cnt):
            l = self.order[i]
            if mpq_sgn(&rs[l]) != 0:
                mpq_mul(self.tmp, t, &rs[l])
                mpq_add(&rd[l], &rd[l], self.tmp)
        self.ops += self.cnt

    cdef void col_add(self, int dst, int src, mpq_ptr t):
        cdef int i, l, MM = self.MM
        for i in range(self.cnt):
            l = self.order[i]
            if mpq_sgn(&self.W[l * MM + src]) != 0:
                mpq_mul(self.tmp, t, &self.W[l * MM + src])
                mpq_add(&self.W[l * MM + dst], &self.W[l * MM + dst], self.tmp)
        self.ops += self.cnt

    cdef int pivot(self, int i) except -1:
        cdef int idx, j, MM = self.MM
        cdef mpq_ptr d = &self.W[i * MM + i]
        for idx in range(self.cnt):
            j = self.order[idx]
            if j != i and mpq_sgn(&self.W[j * MM + i]) != 0:
                mpq_div(self.q, &self.W[j * MM + i], d)
                mpq_neg(self.q, self.q)
                self.ops += 1
                self.row_add(j, i, self.q)
                self.col_add(j, i, self.q)
        self.emit(i, d)
        return 0

    cdef void trick(self, int x, int y):
        self.row_add(y, x, self.half)
        self.col_add(y, x, self.half)
        self.row_add(x, y, self.minus_one)
        self.col_add(x, y, self.minus_one)

    cdef bint first_pair(self, int* rows, int n, int* px, int* py):
        cdef int a, b, MM = self.MM
        for a in range(n):
            for b in range(a + 1, n):
                if mpq_sgn(&self.W[rows[a] * MM + rows[b]]) != 0:
                    px[0] = rows[a]
                    py[0] = rows[b]
                    return True
        return False

    cdef int first_nonzero_diag(self, int* rows, int n):
        cdef int a
        for a in range(n):
            if mpq_sgn(&self.W[rows[a] * self.MM + rows[a]]) != 0:
                return rows[a]
        return -1

    # -- combine phases ---------------------------------------------------------

    cdef int merge_duplicates(self) except -1:
        cdef int i, x, s
        for i in range(self.k + 1):
            self.last[i] = -1
        for i in range(self.cnt):
            x = self.order[i]
            if self.kind[x] == TII:
                self.last[self.label[x]] = x
        for i in range(self.cnt):
            x = self.order[i]
            if self.kind[x] == TII and self.last[self.label[x]] != x:
                s = self.last[self.label[x]]
                self.row_add(x, s, self.minus_one)
                self.col_add(x, s, self.minus_one)
                self.set_kind(x, TI)
        self.partition()
        return 0

    cdef int annihilate(self) except -1:
        cdef int n, piv, x = 0, y = 0
        while True:
            n = self.rows_of(TI, self.rows_a)
            if n == 0:
                return 0
            piv = self.first_nonzero_diag(self.rows_a, n)
            if piv >= 0:
                self.pivot(piv)
                continue
            if not self.first_pair(self.rows_a, n, &x, &y):
                return 0
            self.trick(x, y)

    cdef int reduce_kp(self) except -1:
        cdef int nt, nc, ci, a, b, c, x, piv, MM = self.MM
        nt = self.rows_of(TI, self.rows_a)
        nc = self.rows_of(TII, self.rows_b)
        for a in range(nt):
            self.isfree[a] = 1
        for ci in range(nc):
            c = self.rows_b[ci]
            piv = -1
            for a in range(nt):
                if self.isfree[a] and mpq_sgn(&self.W[self.rows_a[a] * MM + c]) != 0:
                    piv = self.rows_a[a]
                    self.isfree[a] = 0
                    break
            if piv < 0:
                continue
            for b in range(nt):
                x = self.rows_a[b]
                if self.isfree[b] and mpq_sgn(&self.W[x * MM + c]) != 0:
                    mpq_div(self.q, &self.W[x * MM + c], &self.W[piv * MM + c])
                    mpq_neg(self.q, self.q)
                    self.ops += 1
                    self.row_add(x, piv, self.q)
                    self.col_add(x, piv, self.q)
        for a in range(nt):
            if not self.isfree[a]:
                continue
            x = self.rows_a[a]
            if self.check:
                for b in range(self.cnt):
                    if mpq_sgn(&self.W[x * MM + self.order[b]]) != 0:
                        raise InvariantViolation(self.node, "row %d not cleared by kp reduction" % x)
            self.emit(x, self.zero)
        return 0

    cdef int combine(self) except -1:
        cdef int kp, kpp
        self.merge_duplicates()
        kp = self.rows_of(TI, self.scratch)
        kpp = self.cnt - kp
        if kp > kpp:
            self.annihilate()
            kp = self.rows_of(TI, self.scratch)
            if kp > self.cnt - kp:
                self.reduce_kp()
        return 0

    cdef int diagonalize(self) except -1:
        cdef int piv, x = 0, y = 0
        while self.cnt:
            piv = self.first_nonzero_diag(self.order, self.cnt)
            if piv >= 0:
                self.pivot(piv)
                continue
            if self.first_pair(self.order, self.cnt, &x, &y):
                self.trick(x, y)
                continue
            while self.cnt:
                self.emit(self.order[0], self.zero)
        return 0

    cdef int validate(self) except -1:
        cdef int i, j, x, kp = 0, kpp, MM = self.MM
        for i in range(self.k + 1):
            self.last[i] = -1
        for i in range(self.cnt):
            x = self.order[i]
            if self.kind[x] == TI:
                kp += 1
            elif self.kind[x] == TII:
                if self.last[self.label[x]] >= 0:
                    raise InvariantViolation(self.node, "type-ii label %d repeated" % self.label[x])
                self.last[self.label[x]] = x
            else:
                raise InvariantViolation(self.node, "row %d is %s but still live"
                                         % (x, _KIND_NAMES[self.kind[x]]))
        kpp = self.cnt - kp
        if not (kp <= kpp <= self.k):
            raise InvariantViolation(self.node, "box shape kp=%d kpp=%d outside 0<=kp<=kpp<=%d"
                                     % (kp, kpp, self.k))
        if self.cnt and kpp < 1:
            raise InvariantViolation(self.node, "nonempty box without type-ii rows")
        for i in range(self.cnt):
            for j in range(self.cnt):
                if not mpq_equal(&self.W[self.order[i] * MM + self.order[j]],
                                 &self.W[self.order[j] * MM + self.order[i]]):
                    raise InvariantViolation(self.node, "asymmetric entries (%d,%d)"
                                             % (self.order[i], self.order[j]))
        return 0


def run(plan, leafvals, w, bint check=False, bint trace=False):
    """Same contract as ``_pyengine.run``."""
    cdef int k = plan.k
    cdef int[:] left = plan.left
    cdef int[:] leaf_label = plan.leaf_label
    cdef int[:] leaf_vertex = plan.leaf_vertex
    cdef int[:] lmap = plan.lmap
    cdef int[:] rmap = plan.rmap
    cdef const unsigned char[:] smask = plan.smask
    cdef Py_ssize_t t, nodes = left.shape[0], mark
    cdef int kp
    cdef _Run r = _Run(k, nodes, w, check)
    records = [] if trace else None
    for t in range(nodes):
        r.node = t + 1
        mark = len(r.out)
        shape = (0, 1)
        if left[t] < 0:
            r.push_leaf(leafvals[leaf_vertex[t]], leaf_label[t], leaf_vertex[t])
            if t == nodes - 1:
                r.htop -= 1
                r.load_root_leaf()
                r.diagonalize()
        else:
            r.merge(smask, lmap, rmap, t)
            r.combine()
            if check:
                r.validate()
            kp = r.rows_of(TI, r.scratch)
            shape = (kp, r.cnt - kp)
            if t == nodes - 1:
                r.diagonalize()
            else:
                r.push_work()
        if trace:
            records.append(TraceRecord(t + 1, shape[0], shape[1],
                                       tuple(e[2] for e in r.out[mark:])))
    return r.out, r.ops, records
