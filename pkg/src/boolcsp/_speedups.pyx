# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels mirroring ``_purepy`` exactly."""

from libc.stdlib cimport malloc, free


cdef struct Problem:
    int n
    int d
    int ncons
    int *scope        # flattened scopes
    int *scope_off    # ncons + 1 offsets
    unsigned char *member
    long *member_off
    int *check        # constraint ids grouped by max variable
    int *check_off    # n + 1 offsets
    int *vals


cdef int _build(Problem *p, int n, int d, scopes, members) except -1:
    cdef int c, j, v, total = 0, mx
    cdef long mtotal = 0
    p.n = n
    p.d = d
    p.ncons = len(scopes)
    for s in scopes:
        total += len(s)
    for mb in members:
        mtotal += len(mb)
    p.scope = <int *> malloc(max(total, 1) * sizeof(int))
    p.scope_off = <int *> malloc((p.ncons + 1) * sizeof(int))
    p.member = <unsigned char *> malloc(max(mtotal, 1))
    p.member_off = <long *> malloc((p.ncons + 1) * sizeof(long))
    p.check = <int *> malloc(max(p.ncons, 1) * sizeof(int))
    p.check_off = <int *> malloc((n + 1) * sizeof(int))
    p.vals = <int *> malloc(max(n, 1) * sizeof(int))
    cdef int *counts = <int *> malloc((n + 1) * sizeof(int))
    cdef int *maxvar = <int *> malloc(max(p.ncons, 1) * sizeof(int))
    cdef int pos = 0
    cdef long mpos = 0
    cdef bytes mbytes
    cdef const unsigned char *src
    for v in range(n + 1):
        counts[v] = 0
    for c in range(p.ncons):
        p.scope_off[c] = pos
        mx = -1
        for v in scopes[c]:
            p.scope[pos] = v
            pos += 1
            if v > mx:
                mx = v
        maxvar[c] = mx
        counts[mx] += 1
        p.member_off[c] = mpos
        mbytes = bytes(members[c])
        src = mbytes
        for j in range(len(mbytes)):
            p.member[mpos + j] = src[j]
        mpos += len(mbytes)
    p.scope_off[p.ncons] = pos
    p.member_off[p.ncons] = mpos
    p.check_off[0] = 0
    for v in range(n):
        p.check_off[v + 1] = p.check_off[v] + counts[v]
        counts[v] = p.check_off[v]
    for c in range(p.ncons):
        p.check[counts[maxvar[c]]] = c
        counts[maxvar[c]] += 1
    free(counts)
    free(maxvar)
    return 0


cdef void _release(Problem *p):
    free(p.scope)
    free(p.scope_off)
    free(p.member)
    free(p.member_off)
    free(p.check)
    free(p.check_off)
    free(p.vals)


cdef inline bint _ok(Problem *p, int i) nogil:
    cdef int t, c, j
    cdef long r
    for t in range(p.check_off[i], p.check_off[i + 1]):
        c = p.check[t]
        r = 0
        for j in range(p.scope_off[c], p.scope_off[c + 1]):
            r = r * p.d + p.vals[p.scope[j]]
        if not p.member[p.member_off[c] + r]:
            return False
    return True


def search(int n, int d, scopes, members, fixed=None, long limit=1):
    if n == 0:
        return [()]
    cdef Problem p
    _build(&p, n, d, scopes, members)
    cdef int *lo = <int *> malloc(n * sizeof(int))
    cdef int *hi = <int *> malloc(n * sizeof(int))
    cdef int i, v
    for i in range(n):
        lo[i] = 0
        hi[i] = d - 1
    if fixed is not None:
        for i in range(n):
            v = fixed[i]
            if v >= 0:
                lo[i] = v
                hi[i] = v
    out = []
    cdef long found = 0
    try:
        i = 0
        p.vals[0] = lo[0] - 1
        while i >= 0:
            p.vals[i] += 1
            if p.vals[i] > hi[i]:
                i -= 1
                continue
            if not _ok(&p, i):
                continue
            if i == n - 1:
                out.append(tuple([p.vals[v] for v in range(n)]))
                found += 1
                if limit and found >= limit:
                    break
            else:
                i += 1
                p.vals[i] = lo[i] - 1
    finally:
        free(lo)
        free(hi)
        _release(&p)
    return out


cdef bint _qrec(Problem *p, unsigned char *forall, int i) nogil:
    cdef int v
    cdef bint r
    if i == p.n:
        return True
    for v in range(p.d):
        p.vals[i] = v
        r = _ok(p, i) and _qrec(p, forall, i + 1)
        if forall[i] and not r:
            return False
        if not forall[i] and r:
            return True
    return forall[i]


def qeval(int n, int d, forall, scopes, members):
    cdef Problem p
    cdef bint result
    cdef int i
    _build(&p, n, d, scopes, members)
    cdef unsigned char *fa = <unsigned char *> malloc(max(n, 1))
    for i in range(n):
        fa[i] = 1 if forall[i] else 0
    try:
        result = _qrec(&p, fa, 0)
    finally:
        free(fa)
        _release(&p)
    return bool(result)


def find_violation(table, int m, int d, tuples, const unsigned char[:] member):
    cdef int nt = len(tuples)
    if nt == 0:
        return None
    cdef int k = len(tuples[0])
    cdef int *tab = <int *> malloc(len(table) * sizeof(int))
    cdef int *tup = <int *> malloc(nt * k * sizeof(int))
    cdef int *idx = <int *> malloc(m * sizeof(int))
    cdef int i, j, pos
    cdef long a, r
    for i in range(len(table)):
        tab[i] = table[i]
    for i in range(nt):
        t = tuples[i]
        for j in range(k):
            tup[i * k + j] = t[j]
    for i in range(m):
        idx[i] = 0
    result = None
    try:
        while True:
            r = 0
            for j in range(k):
                a = 0
                for i in range(m):
                    a = a * d + tup[idx[i] * k + j]
                r = r * d + tab[a]
            if not member[r]:
                result = tuple([idx[i] for i in range(m)])
                break
            pos = m - 1
            while pos >= 0:
                idx[pos] += 1
                if idx[pos] < nt:
                    break
                idx[pos] = 0
                pos -= 1
            if pos < 0:
                break
    finally:
        free(tab)
        free(tup)
        free(idx)
    return result
