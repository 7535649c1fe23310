# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled HLT coset enumeration with lookahead.

Mirrors ``_cosets_py`` step for step, so both backends produce identical
tables and statistics.
"""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, realloc, free

cnp.import_array()

cdef enum:
    UNDEF = -1


cdef struct State:
    int ncols
    long maxc
    long n          # rows in use
    long cap
    int *table
    long *p
    long *nxt
    long *prv
    long last
    long live
    long defined
    long peak
    int fill_mode
    long *queue
    long qlen
    long qcap
    long cur
    int skip


cdef int _grow(State *S, long want) except -1:
    cdef long cap = S.cap
    if want <= cap:
        return 0
    while cap < want:
        cap *= 2
    if cap > S.maxc:
        cap = S.maxc
    S.table = <int *> realloc(S.table, cap * S.ncols * sizeof(int))
    S.p = <long *> realloc(S.p, cap * sizeof(long))
    S.nxt = <long *> realloc(S.nxt, cap * sizeof(long))
    S.prv = <long *> realloc(S.prv, cap * sizeof(long))
    if S.table == NULL or S.p == NULL or S.nxt == NULL or S.prv == NULL:
        raise MemoryError()
    S.cap = cap
    return 0


cdef inline int _define(State *S, long c, int x) except -1:
    cdef long d
    cdef int k
    if S.n >= S.maxc:
        return 0
    d = S.n
    _grow(S, d + 1)
    S.n += 1
    for k in range(S.ncols):
        S.table[d * S.ncols + k] = UNDEF
    S.p[d] = d
    S.nxt[d] = -1
    S.prv[d] = S.last
    S.nxt[S.last] = d
    S.last = d
    S.table[c * S.ncols + x] = <int> d
    S.table[d * S.ncols + (x ^ 1)] = <int> c
    S.live += 1
    S.defined += 1
    if S.live > S.peak:
        S.peak = S.live
    return 1


cdef inline long _rep(State *S, long k):
    cdef long r = k, nk
    while S.p[r] != r:
        r = S.p[r]
    while S.p[k] != r:
        nk = S.p[k]
        S.p[k] = r
        k = nk
    return r


cdef int _merge(State *S, long k, long l) except -1:
    cdef long a = _rep(S, k), b = _rep(S, l), lo, hi, pv, nx
    if a == b:
        return 0
    lo = a if a < b else b
    hi = b if a < b else a
    S.p[hi] = lo
    if S.qlen == S.qcap:
        S.qcap *= 2
        S.queue = <long *> realloc(S.queue, S.qcap * sizeof(long))
        if S.queue == NULL:
            raise MemoryError()
    S.queue[S.qlen] = hi
    S.qlen += 1
    pv = S.prv[hi]
    nx = S.nxt[hi]
    if pv >= 0:
        S.nxt[pv] = nx
    if nx >= 0:
        S.prv[nx] = pv
    else:
        S.last = pv
    S.live -= 1
    return 0


cdef int _coincidence(State *S, long a, long b) except -1:
    cdef long i = 0, g, d, mu, nu
    cdef int x, nc = S.ncols
    cdef int *t = S.table
    S.qlen = 0
    _merge(S, a, b)
    while i < S.qlen:
        g = S.queue[i]
        i += 1
        for x in range(nc):
            d = t[g * nc + x]
            if d < 0:
                continue
            t[d * nc + (x ^ 1)] = UNDEF
            mu = _rep(S, g)
            nu = _rep(S, d)
            if t[mu * nc + x] >= 0:
                _merge(S, nu, t[mu * nc + x])
            elif t[nu * nc + (x ^ 1)] >= 0:
                _merge(S, mu, t[nu * nc + (x ^ 1)])
            else:
                t[mu * nc + x] = <int> nu
                t[nu * nc + (x ^ 1)] = <int> mu
    return 0


cdef int _scan_and_fill(State *S, long a, const int *w, long length) except -1:
    """1 when the scan finished, 0 when a definition was needed but refused."""
    cdef long f = a, b = a, i = 0, j = length - 1
    cdef int nc = S.ncols
    while True:
        # the table may move when a definition grows it
        while i <= j and S.table[f * nc + w[i]] >= 0:
            f = S.table[f * nc + w[i]]
            i += 1
        if i > j:
            if f != b:
                _coincidence(S, f, b)
            return 1
        while j >= i and S.table[b * nc + (w[j] ^ 1)] >= 0:
            b = S.table[b * nc + (w[j] ^ 1)]
            j -= 1
        if j < i:
            _coincidence(S, f, b)
            return 1
        if i == j:
            S.table[f * nc + w[i]] = <int> b
            S.table[b * nc + (w[i] ^ 1)] = <int> f
            return 1
        if not S.fill_mode or not _define(S, f, w[i]):
            return 0


cdef int _lookahead(State *S, const int *words, const long *offsets, long nrel) except -1:
    cdef long c = 0, r
    S.fill_mode = 0
    while c >= 0:
        if S.p[c] == c:
            for r in range(nrel):
                _scan_and_fill(S, c, words + offsets[r], offsets[r + 1] - offsets[r])
                if S.p[c] != c:
                    break
        c = S.nxt[c]
    S.fill_mode = 1
    return 0


cdef void _drop_last(State *S):
    S.n -= 1


cdef void _move(State *S, long src, long dst):
    cdef int nc = S.ncols, x
    cdef long d, pv, nx
    cdef int *t = S.table
    for x in range(nc):
        t[dst * nc + x] = t[src * nc + x]
    S.p[dst] = dst
    for x in range(nc):
        d = t[dst * nc + x]
        if d >= 0:
            if d == src:
                t[dst * nc + x] = <int> dst
            else:
                t[d * nc + (x ^ 1)] = <int> dst
    pv = S.prv[src]
    nx = S.nxt[src]
    S.prv[dst] = pv
    S.nxt[dst] = nx
    if pv >= 0:
        S.nxt[pv] = dst
    if nx >= 0:
        S.prv[nx] = dst
    if S.last == src:
        S.last = dst
    if S.cur == src:
        S.cur = dst


cdef void _recycle(State *S):
    cdef long c, k, ndead = 0, hole
    cdef long *dead = <long *> malloc((S.n + 1) * sizeof(long))
    for c in range(S.n):
        if S.p[c] != c:
            dead[ndead] = c
            ndead += 1
    for k in range(ndead):
        hole = dead[k]
        while S.n and S.p[S.n - 1] != S.n - 1:
            _drop_last(S)
        if hole >= S.n:
            break
        _move(S, S.n - 1, hole)
        _drop_last(S)
    free(dead)


cdef long _next_live(State *S, long a):
    a = S.nxt[a]
    while a >= 0 and S.p[a] != a:
        a = S.nxt[a]
    return a


cdef int _make_space(State *S, const int *words, const long *offsets, long nrel) except -1:
    cdef long before = S.live
    _lookahead(S, words, offsets, nrel)
    if S.live == before:
        return 0
    if S.p[S.cur] != S.cur:
        S.cur = _next_live(S, S.cur)
        S.skip = 1
    _recycle(S)
    return 1 if S.n < S.maxc else 0


cdef int _scan_with_space(State *S, const int *w, long length,
                          const int *words, const long *offsets, long nrel) except -1:
    while not _scan_and_fill(S, S.cur, w, length):
        if not _make_space(S, words, offsets, nrel):
            return 0
        if S.skip:
            return 1
    return 1


cdef int _run(State *S, const int *words, const long *offsets, long nrel,
              const int *sub, const long *soff, long nsub) except -1:
    cdef long r
    cdef int x
    for r in range(nsub):
        if soff[r + 1] > soff[r]:
            _scan_with_space(S, sub + soff[r], soff[r + 1] - soff[r], words, offsets, nrel)
    while S.cur >= 0:
        S.skip = 0
        for r in range(nrel):
            if not _scan_with_space(S, words + offsets[r], offsets[r + 1] - offsets[r],
                                    words, offsets, nrel):
                return 1
            if S.skip or S.p[S.cur] != S.cur:
                break
        if not S.skip and S.p[S.cur] == S.cur:
            for x in range(S.ncols):
                if S.table[S.cur * S.ncols + x] < 0 and not _define(S, S.cur, x):
                    if not _make_space(S, words, offsets, nrel):
                        return 1
                    if S.skip:
                        break
                    if S.table[S.cur * S.ncols + x] < 0 and not _define(S, S.cur, x):
                        return 1
        if not S.skip:
            S.cur = _next_live(S, S.cur)
    return 0


def _flatten(words):
    words = [list(w) for w in words if len(w)]
    offsets = np.zeros(len(words) + 1, dtype=np.int64)
    for k, w in enumerate(words):
        offsets[k + 1] = offsets[k] + len(w)
    flat = np.zeros(max(int(offsets[-1]), 1), dtype=np.int32)
    for k, w in enumerate(words):
        flat[offsets[k]:offsets[k + 1]] = w
    return flat, offsets, len(words)


def enumerate_cosets(int ncols, relators, subgroup=(), long max_cosets=2_000_000):
    cdef cnp.ndarray[int, ndim=1] words, sub
    cdef cnp.ndarray[long, ndim=1] offsets, soff
    cdef long nrel, nsub, c, k
    cdef int x, status
    cdef State S
    words, offsets, nrel = _flatten(relators)
    sub, soff, nsub = _flatten(subgroup)
    S.ncols = ncols
    S.maxc = max_cosets
    S.cap = 1024 if max_cosets > 1024 else max_cosets
    S.table = <int *> malloc(S.cap * ncols * sizeof(int))
    S.p = <long *> malloc(S.cap * sizeof(long))
    S.nxt = <long *> malloc(S.cap * sizeof(long))
    S.prv = <long *> malloc(S.cap * sizeof(long))
    S.qcap = 1024
    S.queue = <long *> malloc(S.qcap * sizeof(long))
    if S.table == NULL or S.p == NULL or S.nxt == NULL or S.prv == NULL or S.queue == NULL:
        raise MemoryError()
    try:
        for x in range(ncols):
            S.table[x] = UNDEF
        S.p[0] = 0
        S.nxt[0] = -1
        S.prv[0] = -1
        S.n = 1
        S.last = 0
        S.live = 1
        S.defined = 1
        S.peak = 1
        S.fill_mode = 1
        S.qlen = 0
        S.cur = 0
        S.skip = 0
        status = _run(&S, &words[0], &offsets[0], nrel, &sub[0], &soff[0], nsub)
        stats = {"defined": S.defined, "peak": S.peak, "live": S.live}
        if status:
            return status, None, stats
        new_of = np.full(S.n, -1, dtype=np.int64)
        k = 0
        for c in range(S.n):
            if S.p[c] == c:
                new_of[c] = k
                k += 1
        raw = np.empty((S.n, ncols), dtype=np.int32)
        for c in range(S.n):
            for x in range(ncols):
                raw[c, x] = S.table[c * ncols + x]
        live = new_of >= 0
        table = new_of[raw[live]].astype(np.int32)
        return 0, table, stats
    finally:
        free(S.table)
        free(S.p)
        free(S.nxt)
        free(S.prv)
        free(S.queue)
