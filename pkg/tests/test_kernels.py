"""The compiled and pure-Python kernels must agree with each other and with itertools."""

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from boolcsp import _purepy, kernels

BACKENDS = sorted(kernels.BACKENDS.items())
needs_cython = pytest.mark.skipif("cython" not in kernels.BACKENDS, reason="extension not built")


@st.composite
def problems(draw, max_vars=6, max_d=3):
    d = draw(st.integers(2, max_d))
    n = draw(st.integers(1, max_vars))
    cons = draw(st.integers(0, 6))
    scopes, members = [], []
    for _ in range(cons):
        k = draw(st.integers(1, 3))
        scopes.append(tuple(draw(st.integers(0, n - 1)) for _ in range(k)))
        members.append(bytes(draw(st.lists(st.integers(0, 1), min_size=d**k, max_size=d**k))))
    return n, d, scopes, members


def _rank(vals, d):
    r = 0
    for v in vals:
        r = r * d + v
    return r


def _naive_all(n, d, scopes, members, fixed=None):
    out = []
    for vals in itertools.product(range(d), repeat=n):
        if fixed and any(f >= 0 and f != v for f, v in zip(fixed, vals)):
            continue
        if all(m[_rank([vals[i] for i in s], d)] for s, m in zip(scopes, members)):
            out.append(vals)
    return out


def _naive_q(n, d, forall, scopes, members):
    def rec(prefix):
        i = len(prefix)
        if i == n:
            return all(m[_rank([prefix[j] for j in s], d)] for s, m in zip(scopes, members))
        results = (rec(prefix + (v,)) for v in range(d))
        return all(results) if forall[i] else any(results)

    return rec(())


@given(problems())
def test_search_matches_enumeration(p):
    n, d, scopes, members = p
    expected = _naive_all(n, d, scopes, members)
    for name, impl in BACKENDS:
        assert impl.search(n, d, scopes, members, None, 0) == expected, name
        first = impl.search(n, d, scopes, members, None, 1)
        assert first == expected[:1], name


@given(problems(), st.data())
def test_search_with_pins(p, data):
    n, d, scopes, members = p
    fixed = [data.draw(st.integers(-1, d - 1)) for _ in range(n)]
    expected = _naive_all(n, d, scopes, members, fixed)
    for name, impl in BACKENDS:
        assert impl.search(n, d, scopes, members, fixed, 0) == expected, name


@given(problems(), st.data())
def test_qeval_matches_game_tree(p, data):
    n, d, scopes, members = p
    forall = [data.draw(st.booleans()) for _ in range(n)]
    expected = _naive_q(n, d, forall, scopes, members)
    for name, impl in BACKENDS:
        assert impl.qeval(n, d, forall, scopes, members) == expected, name


@given(st.data())
def test_find_violation_matches_scan(data):
    d = data.draw(st.integers(2, 3))
    m = data.draw(st.integers(1, 3))
    k = data.draw(st.integers(1, 3))
    table = data.draw(st.lists(st.integers(0, d - 1), min_size=d**m, max_size=d**m))
    member = data.draw(st.lists(st.integers(0, 1), min_size=d**k, max_size=d**k))
    pool = list(itertools.product(range(d), repeat=k))
    tuples = sorted(t for t in pool if member[_rank(t, d)])
    expected = None
    for idx in itertools.product(range(len(tuples)), repeat=m):
        image = [table[_rank([tuples[i][j] for i in idx], d)] for j in range(k)]
        if not member[_rank(image, d)]:
            expected = idx
            break
    for name, impl in BACKENDS:
        assert impl.find_violation(table, m, d, tuples, bytes(member)) == expected, name


def test_zero_variables():
    for _, impl in BACKENDS:
        assert impl.search(0, 2, [], [], None, 0) == [()]


@needs_cython
def test_default_backend_is_compiled_when_available():
    assert kernels.BACKEND in ("cython", "python")
    assert kernels.BACKENDS["python"] is _purepy
