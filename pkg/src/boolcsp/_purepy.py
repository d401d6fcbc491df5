"""Pure-Python kernels; same signatures and results as ``_speedups``.

Variables are integers ``0..n-1``.  A constraint is a scope (tuple of
variable indices, repeats allowed) plus a membership vector over
``D^len(scope)`` indexed by lexicographic rank.
"""


def _checklists(n, scopes):
    # Each constraint is checked once its highest-indexed variable is set.
    lists = [[] for _ in range(n)]
    for c, scope in enumerate(scopes):
        lists[max(scope)].append(c)
    return lists


def _ok(c_list, scopes, members, vals, d):
    for c in c_list:
        r = 0
        for v in scopes[c]:
            r = r * d + vals[v]
        if not members[c][r]:
            return False
    return True


def search(n, d, scopes, members, fixed=None, limit=1):
    """Depth-first search in lexicographic order.

    Returns up to ``limit`` solutions (``limit=0``: all).  ``fixed[i] >= 0``
    pins variable ``i``.
    """
    if n == 0:
        return [()]
    checks = _checklists(n, scopes)
    lo = [0] * n
    hi = [d - 1] * n
    if fixed is not None:
        for i, v in enumerate(fixed):
            if v >= 0:
                lo[i] = hi[i] = v
    vals = [0] * n
    out = []
    i = 0
    vals[0] = lo[0] - 1
    while i >= 0:
        vals[i] += 1
        if vals[i] > hi[i]:
            i -= 1
            continue
        if not _ok(checks[i], scopes, members, vals, d):
            continue
        if i == n - 1:
            out.append(tuple(vals))
            if limit and len(out) >= limit:
                break
        else:
            i += 1
            vals[i] = lo[i] - 1
    return out


def qeval(n, d, forall, scopes, members):
    """Game-tree value of ``Q_0 x_0 ... Q_{n-1} x_{n-1}`` over the conjunction."""
    checks = _checklists(n, scopes)
    vals = [0] * n

    def rec(i):
        if i == n:
            return True
        universal = forall[i]
        for v in range(d):
            vals[i] = v
            r = _ok(checks[i], scopes, members, vals, d) and rec(i + 1)
            if universal and not r:
                return False
            if not universal and r:
                return True
        return universal

    return rec(0)


def find_violation(table, m, d, tuples, member):
    """First m-sequence of tuple indices whose coordinatewise image leaves the relation."""
    nt = len(tuples)
    if nt == 0:
        return None
    k = len(tuples[0])
    idx = [0] * m
    while True:
        r = 0
        for j in range(k):
            a = 0
            for i in range(m):
                a = a * d + tuples[idx[i]][j]
            r = r * d + table[a]
        if not member[r]:
            return tuple(idx)
        pos = m - 1
        while pos >= 0:
            idx[pos] += 1
            if idx[pos] < nt:
                break
            idx[pos] = 0
            pos -= 1
        if pos < 0:
            return None
