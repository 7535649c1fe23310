"""Pure-Python HLT coset enumeration with lookahead.

Same interface as the compiled kernel: ``enumerate_cosets(ncols, relators,
subgroup, max_cosets)``.  Columns come in inverse pairs (2g, 2g + 1) and a
word is a sequence of column indices.  Returns ``(status, table, stats)``
where status is 0 for complete and 1 for overflow; the table is an int32
array of shape (index, ncols) in the internal numbering of live cosets.
"""
from __future__ import annotations

import numpy as np

COMPLETE, OVERFLOW = 0, 1


class _Enumerator:
    def __init__(self, ncols, max_cosets):
        self.ncols = ncols
        self.max = max_cosets
        self.table = [[-1] * ncols]
        self.p = [0]
        self.nxt = [-1]
        self.prv = [-1]
        self.last = 0
        self.live = 1
        self.defined = 1
        self.peak = 1
        self.fill_mode = True
        self.queue = []
        self.cur = 0
        self.skip = False

    # coset bookkeeping

    def define(self, c, x):
        if len(self.table) >= self.max:
            return False
        d = len(self.table)
        self.table.append([-1] * self.ncols)
        self.p.append(d)
        self.nxt.append(-1)
        self.prv.append(self.last)
        self.nxt[self.last] = d
        self.last = d
        self.table[c][x] = d
        self.table[d][x ^ 1] = c
        self.live += 1
        self.defined += 1
        self.peak = max(self.peak, self.live)
        return True

    def rep(self, k):
        p = self.p
        r = k
        while p[r] != r:
            r = p[r]
        while p[k] != r:
            p[k], k = r, p[k]
        return r

    def merge(self, k, l):
        a, b = self.rep(k), self.rep(l)
        if a == b:
            return
        lo, hi = min(a, b), max(a, b)
        self.p[hi] = lo
        self.queue.append(hi)
        # unlink hi from the live list, keeping its forward pointer
        pv, nx = self.prv[hi], self.nxt[hi]
        if pv >= 0:
            self.nxt[pv] = nx
        if nx >= 0:
            self.prv[nx] = pv
        else:
            self.last = pv
        self.live -= 1

    def coincidence(self, a, b):
        self.queue = []
        self.merge(a, b)
        t = self.table
        i = 0
        while i < len(self.queue):
            g = self.queue[i]
            i += 1
            row = t[g]
            for x in range(self.ncols):
                d = row[x]
                if d < 0:
                    continue
                t[d][x ^ 1] = -1
                mu, nu = self.rep(g), self.rep(d)
                if t[mu][x] >= 0:
                    self.merge(nu, t[mu][x])
                elif t[nu][x ^ 1] >= 0:
                    self.merge(mu, t[nu][x ^ 1])
                else:
                    t[mu][x] = nu
                    t[nu][x ^ 1] = mu

    def scan_and_fill(self, a, w):
        t = self.table
        f, b = a, a
        i, j = 0, len(w) - 1
        while True:
            while i <= j and t[f][w[i]] >= 0:
                f = t[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return True
            while j >= i and t[b][w[j] ^ 1] >= 0:
                b = t[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return True
            if i == j:
                t[f][w[i]] = b
                t[b][w[i] ^ 1] = f
                return True
            if not self.fill_mode or not self.define(f, w[i]):
                return False

    def alive(self, c):
        return self.p[c] == c

    def lookahead(self, relators):
        """Scan every relator at every live coset without defining new cosets."""
        self.fill_mode = False
        c = 0
        while c >= 0:
            if self.alive(c):
                for w in relators:
                    self.scan_and_fill(c, w)
                    if not self.alive(c):
                        break
            c = self.nxt[c]
        self.fill_mode = True


def enumerate_cosets(ncols, relators, subgroup=(), max_cosets=2_000_000):
    relators = [list(w) for w in relators if len(w)]
    E = _Enumerator(ncols, max_cosets)
    for w in subgroup:
        if len(w):
            _scan_with_space(E, list(w), relators)
    while E.cur >= 0:
        E.skip = False
        for w in relators:
            if not _scan_with_space(E, w, relators):
                return _result(E, OVERFLOW)
            if E.skip or not E.alive(E.cur):
                break
        if not E.skip and E.alive(E.cur):
            for x in range(ncols):
                if E.table[E.cur][x] < 0 and not E.define(E.cur, x):
                    if not _make_space(E, relators):
                        return _result(E, OVERFLOW)
                    if E.skip:
                        break
                    if E.table[E.cur][x] < 0 and not E.define(E.cur, x):
                        return _result(E, OVERFLOW)
        if not E.skip:
            E.cur = _next_live(E, E.cur)
    return _result(E, COMPLETE)


def _next_live(E, a):
    a = E.nxt[a]
    while a >= 0 and not E.alive(a):
        a = E.nxt[a]
    return a


def _scan_with_space(E, w, relators):
    while not E.scan_and_fill(E.cur, w):
        if not _make_space(E, relators):
            return False
        if E.skip:
            return True
    return True


def _make_space(E, relators):
    """Lookahead; succeed if coincidences freed room below the budget."""
    before = E.live
    E.lookahead(relators)
    if E.live == before:
        return False
    if not E.alive(E.cur):
        # step off the dead row before its slot is reused
        E.cur = _next_live(E, E.cur)
        E.skip = True
    _recycle(E)
    return len(E.table) < E.max


def _recycle(E):
    """Reuse dead rows by moving the highest live rows into them."""
    t = E.table
    dead = [c for c in range(len(t)) if E.p[c] != c]
    for hole in dead:
        # drop trailing dead rows
        while len(t) and E.p[len(t) - 1] != len(t) - 1:
            _drop_last(E)
        if hole >= len(t):
            break
        src = len(t) - 1
        _move(E, src, hole)
        _drop_last(E)


def _drop_last(E):
    E.table.pop()
    E.p.pop()
    E.nxt.pop()
    E.prv.pop()


def _move(E, src, dst):
    t = E.table
    t[dst] = t[src]
    E.p[dst] = dst
    for x, d in enumerate(t[dst]):
        if d >= 0:
            if d == src:
                t[dst][x] = dst
            else:
                t[d][x ^ 1] = dst
    # splice dst into src's position in the live list
    pv, nx = E.prv[src], E.nxt[src]
    E.prv[dst], E.nxt[dst] = pv, nx
    if pv >= 0:
        E.nxt[pv] = dst
    if nx >= 0:
        E.prv[nx] = dst
    if E.last == src:
        E.last = dst
    if E.cur == src:
        E.cur = dst


def _result(E, status):
    stats = {"defined": E.defined, "peak": E.peak, "live": E.live}
    if status != COMPLETE:
        return status, None, stats
    live = [c for c in range(len(E.table)) if E.p[c] == c]
    new_of = {c: k for k, c in enumerate(live)}
    table = np.array([[new_of[d] for d in E.table[c]] for c in live], dtype=np.int32)
    return status, table.reshape(len(live), E.ncols), stats
