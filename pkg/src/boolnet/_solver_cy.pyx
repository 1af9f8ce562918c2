# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled search kernel: a decision-for-decision twin of _solver_py.

Same depth-first signature search with support propagation and
conflict-directed backjumping; reason masks are fixed-width word arrays
instead of Python integers.  Both kernels explore identical trees, charge
identical node counts, and report identical refutation cores — the test
suite holds them to that.
"""

from libc.stdlib cimport calloc, free
from libc.string cimport memcpy, memset

KERNEL_NAME = "c"

NOP, INP, OUT, SET, RES, SWAP, USED, FREE = range(8)

_APPLY = (
    (0, 1), (-1, 0), (1, -1), (1, 1),
    (0, 0), (1, 0), (-1, 1), (0, -1),
)
_BACK = (
    (0, 1), (1, -1), (-1, 0), (-2, -2),
    (-2, -2), (1, 0), (-1, 1), (0, -1),
)

cdef int APPLY_C[8][2]
cdef int BACK_C[8][2]
for _i in range(8):
    for _x in range(2):
        APPLY_C[_i][_x] = _APPLY[_i][_x]
        BACK_C[_i][_x] = _BACK[_i][_x]

SSP, ESSP = 0, 1
FOUND, NONE, BUDGET = 0, 1, 2

# internal return codes for the search helpers
cdef enum:
    R_OK = 0
    R_CONFLICT = 1
    R_ABORT = 2

ctypedef unsigned long long word


cdef inline void _zero(word *dst, int w) noexcept:
    memset(dst, 0, w * sizeof(word))


cdef inline void _copy(word *dst, word *src, int w) noexcept:
    memcpy(dst, src, w * sizeof(word))


cdef inline void _or_into(word *dst, word *src, int w) noexcept:
    cdef int i
    for i in range(w):
        dst[i] |= src[i]


cdef inline void _or3(word *dst, word *a, word *b, int w) noexcept:
    cdef int i
    for i in range(w):
        dst[i] = a[i] | b[i]


cdef inline void _setbit(word *dst, int bit) noexcept:
    dst[bit >> 6] |= (<word>1) << (bit & 63)


cdef inline void _clearbit(word *dst, int bit) noexcept:
    dst[bit >> 6] &= ~((<word>1) << (bit & 63))


cdef inline bint _testbit(word *src, int bit) noexcept:
    return (src[bit >> 6] >> (bit & 63)) & 1


cdef class Problem:
    """Prepared arc tables for one (transition system, type) pair."""

    cdef int n_states, n_events, n_arcs, initial, n_tags
    cdef int *arc_src
    cdef int *arc_ev
    cdef int *arc_dst
    cdef int *out_start
    cdef int *out_list
    cdef int *in_start
    cdef int *in_list
    cdef int *ev_start
    cdef int *ev_list
    cdef int *branch

    def __cinit__(self):
        self.arc_src = self.arc_ev = self.arc_dst = NULL
        self.out_start = self.out_list = NULL
        self.in_start = self.in_list = NULL
        self.ev_start = self.ev_list = NULL
        self.branch = NULL

    def __dealloc__(self):
        free(self.arc_src); free(self.arc_ev); free(self.arc_dst)
        free(self.out_start); free(self.out_list)
        free(self.in_start); free(self.in_list)
        free(self.ev_start); free(self.ev_list)
        free(self.branch)


cdef void _fill_csr(int **start, int **flat, object groups, int n) except *:
    cdef int total = 0
    cdef int i, j
    for g in groups:
        total += len(g)
    start[0] = <int *> calloc(n + 1, sizeof(int))
    flat[0] = <int *> calloc(total if total else 1, sizeof(int))
    if start[0] == NULL or flat[0] == NULL:
        raise MemoryError()
    j = 0
    for i in range(n):
        start[0][i] = j
        for a in groups[i]:
            flat[0][j] = a
            j += 1
    start[0][n] = j


def prepare(n_states, n_events, arc_src, arc_ev, arc_dst,
            out_arcs, in_arcs, ev_arcs, initial, branch_tags):
    cdef Problem p = Problem()
    cdef int n = len(arc_src)
    cdef int i
    p.n_states = n_states
    p.n_events = n_events
    p.n_arcs = n
    p.initial = initial
    p.n_tags = len(branch_tags)
    p.arc_src = <int *> calloc(n if n else 1, sizeof(int))
    p.arc_ev = <int *> calloc(n if n else 1, sizeof(int))
    p.arc_dst = <int *> calloc(n if n else 1, sizeof(int))
    p.branch = <int *> calloc(p.n_tags if p.n_tags else 1, sizeof(int))
    if p.arc_src == NULL or p.arc_ev == NULL or p.arc_dst == NULL or p.branch == NULL:
        raise MemoryError()
    for i in range(n):
        p.arc_src[i] = arc_src[i]
        p.arc_ev[i] = arc_ev[i]
        p.arc_dst[i] = arc_dst[i]
    for i in range(p.n_tags):
        p.branch[i] = branch_tags[i]
    _fill_csr(&p.out_start, &p.out_list, out_arcs, n_states)
    _fill_csr(&p.in_start, &p.in_list, in_arcs, n_states)
    _fill_csr(&p.ev_start, &p.ev_list, ev_arcs, n_events)
    return p


cdef class _Search:
    cdef Problem p
    cdef int kind, goal_a, goal_b
    cdef long long limit, nodes
    cdef int lvw, arw
    cdef int *sup
    cdef int *sig
    cdef word *cause_lv
    cdef word *cause_arc
    cdef word *ccl        # current conflict: decision levels
    cdef word *cca        # current conflict: arcs
    cdef word *tlv        # incoming cause scratch: levels
    cdef word *tar        # incoming cause scratch: arcs
    cdef word *acc_lv     # per-depth accumulators
    cdef word *acc_ar
    cdef word *core
    cdef int *trail
    cdef int n_trail
    cdef int *pending
    cdef int n_pending

    def __cinit__(self, Problem p, int kind, int goal_a, int goal_b, long long limit):
        cdef int S = p.n_states
        cdef int E = p.n_events
        self.p = p
        self.kind = kind
        self.goal_a = goal_a
        self.goal_b = goal_b
        self.limit = limit
        self.nodes = 0
        self.lvw = ((E + 1) + 63) >> 6
        self.arw = (p.n_arcs + 63) >> 6
        if self.lvw == 0:
            self.lvw = 1
        if self.arw == 0:
            self.arw = 1
        self.sup = <int *> calloc(S if S else 1, sizeof(int))
        self.sig = <int *> calloc(E if E else 1, sizeof(int))
        self.cause_lv = <word *> calloc((S if S else 1) * self.lvw, sizeof(word))
        self.cause_arc = <word *> calloc((S if S else 1) * self.arw, sizeof(word))
        self.ccl = <word *> calloc(self.lvw, sizeof(word))
        self.cca = <word *> calloc(self.arw, sizeof(word))
        self.tlv = <word *> calloc(self.lvw, sizeof(word))
        self.tar = <word *> calloc(self.arw, sizeof(word))
        self.acc_lv = <word *> calloc((E + 1) * self.lvw, sizeof(word))
        self.acc_ar = <word *> calloc((E + 1) * self.arw, sizeof(word))
        self.core = <word *> calloc(self.arw, sizeof(word))
        self.trail = <int *> calloc(S if S else 1, sizeof(int))
        self.pending = <int *> calloc(S if S else 1, sizeof(int))
        if (self.sup == NULL or self.sig == NULL or self.cause_lv == NULL
                or self.cause_arc == NULL or self.ccl == NULL or self.cca == NULL
                or self.tlv == NULL or self.tar == NULL or self.acc_lv == NULL
                or self.acc_ar == NULL or self.core == NULL or self.trail == NULL
                or self.pending == NULL):
            raise MemoryError()
        cdef int i
        for i in range(S):
            self.sup[i] = -1
        for i in range(E):
            self.sig[i] = -1
        self.n_trail = 0
        self.n_pending = 0

    def __dealloc__(self):
        free(self.sup); free(self.sig)
        free(self.cause_lv); free(self.cause_arc)
        free(self.ccl); free(self.cca); free(self.tlv); free(self.tar)
        free(self.acc_lv); free(self.acc_ar); free(self.core)
        free(self.trail); free(self.pending)

    cdef inline int charge(self) noexcept:
        self.nodes += 1
        if 0 <= self.limit < self.nodes:
            return R_ABORT
        return R_OK

    cdef int assign_sup(self, int s, int v) noexcept:
        # incoming cause is in tlv/tar
        cdef int old = self.sup[s]
        if old >= 0:
            if old == v:
                return R_OK
            _or3(self.ccl, self.cause_lv + s * self.lvw, self.tlv, self.lvw)
            _or3(self.cca, self.cause_arc + s * self.arw, self.tar, self.arw)
            return R_CONFLICT
        self.sup[s] = v
        _copy(self.cause_lv + s * self.lvw, self.tlv, self.lvw)
        _copy(self.cause_arc + s * self.arw, self.tar, self.arw)
        self.trail[self.n_trail] = s
        self.n_trail += 1
        self.pending[self.n_pending] = s
        self.n_pending += 1
        if self.kind == SSP:
            if s == self.goal_a:
                return self.assign_sup(self.goal_b, 1 - v)
            if s == self.goal_b:
                return self.assign_sup(self.goal_a, 1 - v)
        return R_OK

    cdef int flow_forward(self, int a) noexcept:
        cdef int src = self.p.arc_src[a]
        cdef int e = self.p.arc_ev[a]
        cdef int v2 = APPLY_C[self.sig[e]][self.sup[src]]
        _copy(self.tlv, self.cause_lv + src * self.lvw, self.lvw)
        _setbit(self.tlv, e + 1)
        _copy(self.tar, self.cause_arc + src * self.arw, self.arw)
        _setbit(self.tar, a)
        if v2 < 0:
            _copy(self.ccl, self.tlv, self.lvw)
            _copy(self.cca, self.tar, self.arw)
            return R_CONFLICT
        return self.assign_sup(self.p.arc_dst[a], v2)

    cdef int flow_backward(self, int a) noexcept:
        cdef int dst = self.p.arc_dst[a]
        cdef int e = self.p.arc_ev[a]
        cdef int v0 = BACK_C[self.sig[e]][self.sup[dst]]
        if v0 == -2:
            return R_OK
        _copy(self.tlv, self.cause_lv + dst * self.lvw, self.lvw)
        _setbit(self.tlv, e + 1)
        _copy(self.tar, self.cause_arc + dst * self.arw, self.arw)
        _setbit(self.tar, a)
        if v0 == -1:
            _copy(self.ccl, self.tlv, self.lvw)
            _copy(self.cca, self.tar, self.arw)
            return R_CONFLICT
        return self.assign_sup(self.p.arc_src[a], v0)

    cdef int propagate(self) noexcept:
        cdef int s, i, a, r
        while self.n_pending:
            self.n_pending -= 1
            s = self.pending[self.n_pending]
            for i in range(self.p.out_start[s], self.p.out_start[s + 1]):
                a = self.p.out_list[i]
                if self.sig[self.p.arc_ev[a]] >= 0:
                    r = self.flow_forward(a)
                    if r != R_OK:
                        return r
            for i in range(self.p.in_start[s], self.p.in_start[s + 1]):
                a = self.p.in_list[i]
                if self.sig[self.p.arc_ev[a]] >= 0:
                    r = self.flow_backward(a)
                    if r != R_OK:
                        return r
        return R_OK

    cdef int assign_sig(self, int e, int t) noexcept:
        cdef int r = self.charge()
        cdef int i, a
        if r != R_OK:
            return r
        self.sig[e] = t
        if self.kind == ESSP and e == self.goal_a:
            if APPLY_C[t][0] >= 0 and APPLY_C[t][1] >= 0:
                _zero(self.ccl, self.lvw)
                _setbit(self.ccl, e + 1)
                _zero(self.cca, self.arw)
                return R_CONFLICT
            _zero(self.tlv, self.lvw)
            _setbit(self.tlv, e + 1)
            _zero(self.tar, self.arw)
            r = self.assign_sup(self.goal_b, 0 if APPLY_C[t][0] < 0 else 1)
            if r != R_OK:
                return r
        for i in range(self.p.ev_start[e], self.p.ev_start[e + 1]):
            a = self.p.ev_list[i]
            if self.sup[self.p.arc_src[a]] >= 0:
                r = self.flow_forward(a)
                if r != R_OK:
                    return r
            elif self.sup[self.p.arc_dst[a]] >= 0:
                r = self.flow_backward(a)
                if r != R_OK:
                    return r
        return self.propagate()

    cdef int dfs(self, int e) noexcept:
        if e == self.p.n_events:
            return R_OK
        cdef word *alv = self.acc_lv + e * self.lvw
        cdef word *aar = self.acc_ar + e * self.arw
        _zero(alv, self.lvw)
        _zero(aar, self.arw)
        cdef int ti, t, mark, r
        for ti in range(self.p.n_tags):
            t = self.p.branch[ti]
            mark = self.n_trail
            r = self.assign_sig(e, t)
            if r == R_OK:
                r = self.dfs(e + 1)
                if r == R_OK:
                    return R_OK
            if r == R_ABORT:
                return R_ABORT
            self.n_pending = 0
            self.sig[e] = -1
            while self.n_trail > mark:
                self.n_trail -= 1
                self.sup[self.trail[self.n_trail]] = -1
            if not _testbit(self.ccl, e + 1):
                # the failure never looked at this decision: siblings are
                # doomed for the same reason, hand the conflict upward
                return R_CONFLICT
            _or_into(alv, self.ccl, self.lvw)
            _or_into(aar, self.cca, self.arw)
        _copy(self.ccl, alv, self.lvw)
        _clearbit(self.ccl, e + 1)
        _copy(self.cca, aar, self.arw)
        return R_CONFLICT

    cdef int run(self) noexcept:
        cdef int v0, r
        _zero(self.core, self.arw)
        for v0 in range(2):
            r = self.charge()
            if r != R_OK:
                return R_ABORT
            _zero(self.tlv, self.lvw)
            _setbit(self.tlv, 0)
            _zero(self.tar, self.arw)
            r = self.assign_sup(self.p.initial, v0)
            if r == R_OK:
                r = self.propagate()
            if r == R_OK:
                r = self.dfs(0)
            if r == R_OK:
                return R_OK
            if r == R_ABORT:
                return R_ABORT
            _or_into(self.core, self.cca, self.arw)
            self.n_pending = 0
            while self.n_trail:
                self.n_trail -= 1
                self.sup[self.trail[self.n_trail]] = -1
            if not _testbit(self.ccl, 0):
                break  # refuted independently of the root choice
        return R_CONFLICT


def solve(Problem p, int kind, int goal_a, int goal_b, limit, collect_touched):
    """Search for a region solving one atom; see the pure kernel's contract."""
    cdef _Search s = _Search(p, kind, goal_a, goal_b, <long long> limit)
    cdef int r = s.run()
    cdef int i
    touched = bytearray(p.n_arcs) if collect_touched else None
    if r == R_OK:
        sup = [s.sup[i] for i in range(p.n_states)]
        sig = [s.sig[i] for i in range(p.n_events)]
        for i in range(p.n_states):
            assert s.sup[i] >= 0
        return (FOUND, sup, sig, s.nodes, touched)
    if r == R_ABORT:
        return (BUDGET, None, None, s.nodes, touched)
    if collect_touched:
        for i in range(p.n_arcs):
            if _testbit(s.core, i):
                touched[i] = 1
    return (NONE, None, None, s.nodes, touched)
