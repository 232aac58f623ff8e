# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled minimax kernel.

Same recurrences, traversal order and transposition-table policy as
``_pykernel``; input sets are fixed-width arrays of 64-bit words and the search
runs without the GIL so root-level workers can proceed in parallel.
"""

from libc.stdint cimport uint64_t, int32_t
from libc.string cimport memcpy
from libcpp.string cimport string
from libcpp.unordered_map cimport unordered_map
from libcpp.pair cimport pair
from libcpp.vector cimport vector
from posix.time cimport clock_gettime, timespec, CLOCK_MONOTONIC

from ._pykernel import SearchAborted

from cython.operator cimport dereference as deref

cdef enum:
    NT_V = 0
    NT_W = 1
    NT_B = 2
    NT_QN = 3
    NT_WQ = 4
    NT_WB = 5
    BIG = 4096
    TIME_CHECK_EVERY = 1024
    HEADER = 8

ABORT_REASONS = {1: "node limit", 2: "time limit", 3: "depth limit"}


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int _lowbit(uint64_t w) noexcept nogil:
    return __builtin_ctzll(w)


cdef class Kernel:
    cdef int n_inputs, nw, nq
    cdef vector[uint64_t] answers
    cdef vector[uint64_t] class_masks
    cdef vector[int] class_ids
    cdef vector[uint64_t] scratch
    cdef int depth_cap
    cdef unordered_map[string, pair[int, int]] tt
    cdef string keybuf
    cdef bint alpha_beta, memo
    cdef size_t memo_cap
    cdef public long long nodes
    cdef long long node_limit
    cdef double deadline
    cdef int aborted

    def __init__(self, n_inputs, answers, class_ids, class_masks, alpha_beta=True, memo=True, memo_cap=0):
        cdef int i
        self.n_inputs = n_inputs
        self.nw = (n_inputs + 63) // 64
        self.nq = len(answers)
        self.answers.resize(self.nq * self.nw)
        for i, a in enumerate(answers):
            self._load(a, &self.answers[i * self.nw])
        self.class_masks.resize(len(class_masks) * self.nw)
        for i, a in enumerate(class_masks):
            self._load(a, &self.class_masks[i * self.nw])
        self.class_ids.resize(n_inputs)
        for i in range(n_inputs):
            self.class_ids[i] = class_ids[i]
        self.alpha_beta = bool(alpha_beta)
        self.memo = bool(memo)
        self.memo_cap = int(memo_cap or 0)
        self.nodes = 0
        self.node_limit = 0
        self.deadline = 0.0
        self.aborted = 0
        # Each call level needs two split buffers; levels nest at most 3 per query.
        # The slot past the last level holds the root set.
        self.depth_cap = 3 * self.nq + 8
        self.scratch.resize((self.depth_cap + 1) * 2 * self.nw)
        self.keybuf.resize(HEADER + 8 * self.nw)

    cdef _load(self, mask, uint64_t* out):
        cdef bytes raw = int(mask).to_bytes(8 * self.nw, "little")
        memcpy(out, <const char*> raw, 8 * self.nw)

    # -- public surface shared with the pure-Python kernel ----------------------

    @property
    def memo_entries(self):
        return self.tt.size()

    def set_limits(self, node_limit=0, deadline=0.0):
        self.node_limit = int(node_limit)
        self.deadline = float(deadline)

    def is_certificate(self, S):
        cdef vector[uint64_t] buf = vector[uint64_t](self.nw)
        self._load(S, &buf[0])
        return bool(self._cert(&buf[0]))

    def undetermined(self, S):
        cdef vector[uint64_t] buf = vector[uint64_t](self.nw)
        cdef int q
        self._load(S, &buf[0])
        return [q for q in range(self.nq) if self._splits_q(&buf[0], q)]

    def bounds(self, int t, S, int x, int c):
        cdef vector[uint64_t] buf = vector[uint64_t](self.nw)
        cdef int u, q, lo, hi
        cdef unordered_map[string, pair[int, int]].iterator it
        self._load(S, &buf[0])
        if self._cert(&buf[0]):
            return 0, 0
        u = 0
        for q in range(self.nq):
            if self._splits_q(&buf[0], q):
                u += 1
        if c > u:
            c = u
        if t != NT_V and t != NT_B and t != NT_QN:
            x = 0
        lo, hi = 1, u
        self._make_key(t, &buf[0], x, c)
        it = self.tt.find(self.keybuf)
        if it != self.tt.end():
            lo = max(lo, deref(it).second.first)
            hi = min(hi, deref(it).second.second)
        return lo, hi

    def exact(self, int t, S, int x, int c):
        return self.search(t, S, x, c, -1, BIG)

    def search(self, int t, S, int x, int c, int alpha, int beta):
        cdef int r
        cdef uint64_t* base = &self.scratch[self.depth_cap * 2 * self.nw]
        self._load(S, base)
        self.aborted = 0
        with nogil:
            r = self._search(t, base, x, c, alpha, beta, 0)
        if self.aborted:
            raise SearchAborted(ABORT_REASONS[self.aborted])
        return r

    # -- internals ---------------------------------------------------------------

    cdef inline bint _cert(self, const uint64_t* S) noexcept nogil:
        cdef int i, low = -1
        cdef const uint64_t* cls
        for i in range(self.nw):
            if S[i]:
                low = i * 64 + _lowbit(S[i])
                break
        if low < 0:
            return True
        cls = &self.class_masks[self.class_ids[low] * self.nw]
        for i in range(self.nw):
            if S[i] & ~cls[i]:
                return False
        return True

    cdef inline bint _splits_q(self, const uint64_t* S, int q) noexcept nogil:
        cdef int i
        cdef bint any_yes = False, any_no = False
        cdef const uint64_t* a = &self.answers[q * self.nw]
        for i in range(self.nw):
            if S[i] & a[i]:
                any_yes = True
            if S[i] & ~a[i]:
                any_no = True
        return any_yes and any_no

    cdef inline void _make_key(self, int t, const uint64_t* S, int x, int c) noexcept nogil:
        cdef char* k = &self.keybuf[0]
        k[0] = <char> t
        k[1] = <char> (c & 0xFF)
        k[2] = <char> ((c >> 8) & 0xFF)
        k[3] = 0
        (<int32_t*> (k + 4))[0] = x
        memcpy(k + HEADER, S, 8 * self.nw)

    cdef inline double _now(self) noexcept nogil:
        cdef timespec ts
        clock_gettime(CLOCK_MONOTONIC, &ts)
        return ts.tv_sec + ts.tv_nsec * 1e-9

    cdef bint _tick(self) noexcept nogil:
        self.nodes += 1
        if self.node_limit and self.nodes > self.node_limit:
            self.aborted = 1
            return True
        if self.deadline and self.nodes % TIME_CHECK_EVERY == 0 and self._now() > self.deadline:
            self.aborted = 2
            return True
        return False

    cdef int _search(self, int t, const uint64_t* S, int x, int c, int alpha, int beta, int depth) noexcept nogil:
        cdef int nw = self.nw
        cdef int u, q, i, lo, hi, a, b, r, best, m, cb, ca, v, child
        cdef bint ab = self.alpha_beta, yes
        cdef uint64_t* sy
        cdef uint64_t* sn
        cdef const uint64_t* ans
        cdef const uint64_t* own
        cdef uint64_t w, low
        cdef unordered_map[string, pair[int, int]].iterator it

        if self._cert(S):
            return 0
        u = 0
        for q in range(self.nq):
            if self._splits_q(S, q):
                u += 1
        if c > u:
            c = u
        if t == NT_W or t == NT_WQ or t == NT_WB:
            x = 0
        lo = 1
        hi = u
        if self.memo:
            self._make_key(t, S, x, c)
            it = self.tt.find(self.keybuf)
            if it != self.tt.end():
                if deref(it).second.first > lo:
                    lo = deref(it).second.first
                if deref(it).second.second < hi:
                    hi = deref(it).second.second
        if lo == hi:
            return lo
        if lo >= beta:
            return lo
        if hi <= alpha:
            return hi
        if self._tick():
            return 0
        if depth >= self.depth_cap:
            # Unreachable for valid inputs; treat as an abort rather than overrun scratch.
            self.aborted = 3
            return 0

        if ab:
            a = alpha if alpha > lo else lo
            b = beta if beta < hi else hi
        else:
            a = -1
            b = BIG

        sy = &self.scratch[depth * 2 * nw]
        sn = sy + nw

        if t == NT_V or t == NT_QN:
            best = BIG
            for q in range(self.nq):
                if not self._splits_q(S, q):
                    continue
                ans = &self.answers[q * nw]
                for i in range(nw):
                    sy[i] = S[i] & ans[i]
                    sn[i] = S[i] & ~ans[i]
                yes = (ans[x >> 6] >> (x & 63)) & 1
                own = sy if yes else sn
                if ab:
                    cb = (b if b < best else best) - 1
                else:
                    cb = BIG - 1
                ca = a - 1
                if t == NT_V:
                    m = self._search(NT_V, own, x, c, ca, cb, depth + 1)
                    if self.aborted:
                        return 0
                    if c > 0 and not (ab and m >= cb):
                        v = self._search(NT_W, sy, 0, c - 1, ca if ca > m else m, cb, depth + 1)
                        if self.aborted:
                            return 0
                        if v > m:
                            m = v
                        if not (ab and m >= cb):
                            v = self._search(NT_W, sn, 0, c - 1, ca if ca > m else m, cb, depth + 1)
                            if self.aborted:
                                return 0
                            if v > m:
                                m = v
                else:
                    m = self._search(NT_B, own, x, c, ca, cb, depth + 1)
                    if self.aborted:
                        return 0
                if m + 1 < best:
                    best = m + 1
                if ab and best <= a:
                    break
            r = best
        elif t == NT_B:
            r = self._search(NT_QN, S, x, c, a, b, depth + 1)
            if self.aborted:
                return 0
            if c > 0 and not (ab and r >= b):
                v = self._search(NT_WQ, S, 0, c - 1, a if a > r else r, b, depth + 1)
                if self.aborted:
                    return 0
                if v > r:
                    r = v
        else:
            if t == NT_W:
                child = NT_V
            elif t == NT_WQ:
                child = NT_QN
            else:
                child = NT_B
            r = 0
            for i in range(nw):
                w = S[i]
                while w:
                    low = w & (~w + 1)
                    w ^= low
                    v = self._search(child, S, i * 64 + _lowbit(low), c, a if a > r else r, b, depth + 1)
                    if self.aborted:
                        return 0
                    if v > r:
                        r = v
                    if ab and r >= b:
                        break
                if ab and r >= b:
                    break

        if self.memo:
            self._make_key(t, S, x, c)
            if not self.memo_cap or self.tt.size() < self.memo_cap or self.tt.count(self.keybuf):
                if r <= a:
                    if r < hi:
                        hi = r
                elif r >= b:
                    if r > lo:
                        lo = r
                else:
                    lo = r
                    hi = r
                self.tt[self.keybuf] = pair[int, int](lo, hi)
        return r
