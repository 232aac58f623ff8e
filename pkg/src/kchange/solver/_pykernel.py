"""Pure-Python minimax kernel (fallback when the compiled kernel is unavailable).

Node types (``S`` a consistent set, ``x`` the current input, ``c`` changes left):

after-query timing
    ``V(S,x,c) = 1 + min_q max(V(S|x,x,c), W(S_yes,c-1), W(S_no,c-1))``
    ``W(S,c)   = max_{x in S} V(S,x,c)``
before-query timing
    ``B(S,x,c)  = max(Q(S,x,c), WQ(S,c-1))``
    ``Q(S,x,c)  = 1 + min_q B(S|x,x,c)``
    ``WQ(S,c)   = max_{x in S} Q(S,x,c)``,  ``WB(S,c) = max_{x in S} B(S,x,c)``

``S|x`` is ``S`` restricted to the answer ``x`` gives; change terms exist only
when ``c > 0``; every node on a certificate set is worth 0.  Replacement inputs
that answer the same way are grouped through ``W``/``WQ``, which is exact because
the best replacement on each side is worth exactly the ``W`` of that side.

Search is fail-soft alpha-beta with a transposition table of (lower, upper)
bounds.  The compiled kernel mirrors this file node for node, so both report
identical values and node counts.
"""

import time

V, W, B, QN, WQ, WB = range(6)
BIG = 1 << 12
TIME_CHECK_EVERY = 1024


class SearchAborted(Exception):
    pass


class Kernel:
    def __init__(self, n_inputs, answers, class_ids, class_masks, alpha_beta=True, memo=True, memo_cap=0):
        self.n_inputs = n_inputs
        self.answers = list(answers)
        self.class_ids = list(class_ids)
        self.class_masks = list(class_masks)
        self.alpha_beta = bool(alpha_beta)
        self.memo = bool(memo)
        self.memo_cap = int(memo_cap or 0)
        self.tt = {}
        self._splits = {}
        self.nodes = 0
        self.node_limit = 0
        self.deadline = 0.0

    # -- public surface shared with the compiled kernel -------------------------

    @property
    def memo_entries(self):
        return len(self.tt)

    def set_limits(self, node_limit=0, deadline=0.0):
        """Abort once ``nodes`` exceeds ``node_limit`` or ``time.monotonic()`` passes ``deadline`` (0 = none)."""
        self.node_limit = int(node_limit)
        self.deadline = float(deadline)

    def is_certificate(self, S):
        low = (S & -S).bit_length() - 1
        return S & ~self.class_masks[self.class_ids[low]] == 0

    def undetermined(self, S):
        return [q for q, _, _ in self._split(S)]

    def bounds(self, t, S, x, c):
        """Proven (lower, upper) bounds for a node without searching."""
        if self.is_certificate(S):
            return 0, 0
        u = len(self._split(S))
        c = min(c, u)
        lo, hi = 1, u
        e = self.tt.get((t, S, x if t in (V, B, QN) else 0, c))
        if e is not None:
            lo, hi = max(lo, e[0]), min(hi, e[1])
        return lo, hi

    def exact(self, t, S, x, c):
        return self.search(t, S, x, c, -1, BIG)

    # -- search -----------------------------------------------------------------

    def _split(self, S):
        sp = self._splits.get(S)
        if sp is None:
            sp = []
            for q, yes in enumerate(self.answers):
                sy = S & yes
                if sy and sy != S:
                    sp.append((q, sy, S ^ sy))
            self._splits[S] = sp
        return sp

    def _tick(self):
        self.nodes += 1
        if self.node_limit and self.nodes > self.node_limit:
            raise SearchAborted("node limit")
        if self.deadline and self.nodes % TIME_CHECK_EVERY == 0 and time.monotonic() > self.deadline:
            raise SearchAborted("time limit")

    def search(self, t, S, x, c, alpha, beta):
        if self.is_certificate(S):
            return 0
        splits = self._split(S)
        u = len(splits)
        if c > u:
            c = u
        if t in (W, WQ, WB):
            x = 0
        lo, hi = 1, u
        key = (t, S, x, c)
        if self.memo:
            e = self.tt.get(key)
            if e is not None:
                lo, hi = max(lo, e[0]), min(hi, e[1])
        if lo == hi:
            return lo
        if lo >= beta:
            return lo
        if hi <= alpha:
            return hi
        self._tick()

        ab = self.alpha_beta
        if ab:
            a, b = max(alpha, lo), min(beta, hi)
        else:
            a, b = -1, BIG
        answers = self.answers

        if t == V:
            best = BIG
            for q, sy, sn in splits:
                own = sy if answers[q] >> x & 1 else sn
                cb = (min(b, best) if ab else BIG) - 1
                ca = a - 1
                m = self.search(V, own, x, c, ca, cb)
                if c > 0 and not (ab and m >= cb):
                    m = max(m, self.search(W, sy, 0, c - 1, max(ca, m), cb))
                    if not (ab and m >= cb):
                        m = max(m, self.search(W, sn, 0, c - 1, max(ca, m), cb))
                if m + 1 < best:
                    best = m + 1
                if ab and best <= a:
                    break
            r = best
        elif t == QN:
            best = BIG
            for q, sy, sn in splits:
                own = sy if answers[q] >> x & 1 else sn
                cb = (min(b, best) if ab else BIG) - 1
                m = self.search(B, own, x, c, a - 1, cb)
                if m + 1 < best:
                    best = m + 1
                if ab and best <= a:
                    break
            r = best
        elif t == B:
            r = self.search(QN, S, x, c, a, b)
            if c > 0 and not (ab and r >= b):
                r = max(r, self.search(WQ, S, 0, c - 1, max(a, r), b))
        else:
            child = {W: V, WQ: QN, WB: B}[t]
            r = 0
            rest = S
            while rest:
                low = rest & -rest
                rest ^= low
                v = self.search(child, S, low.bit_length() - 1, c, max(a, r), b)
                if v > r:
                    r = v
                if ab and r >= b:
                    break

        if self.memo and (not self.memo_cap or len(self.tt) < self.memo_cap or key in self.tt):
            if r <= a:
                hi = min(hi, r)
            elif r >= b:
                lo = max(lo, r)
            else:
                lo = hi = r
            self.tt[key] = (lo, hi)
        return r
