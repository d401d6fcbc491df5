"""Time the pure-Python and compiled kernels on identical workloads.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--seed S]
"""

from __future__ import annotations

import argparse
import random
import timeit

from boolcsp import kernels
from boolcsp.algebra import MAJORITY, polymorphism_problem
from boolcsp.core import all_tuples
from boolcsp.corpus import random_language, random_qcsp
from boolcsp.library import NAMED_LANGUAGES
from boolcsp.oracle import _encode


def _csp_workload(rng, n_vars=16, n_cons=14):
    lang = NAMED_LANGUAGES["gamma3"]
    q = random_qcsp(rng, lang, n_vars, n_cons)
    scopes, members = _encode(lang, q.variables, q.constraints)
    return lambda k: k.search(n_vars, 2, scopes, members, None, 0)


def _qcsp_workload(rng, n_univ=14):
    # True instance: the universal block never fails, so the whole tree is walked.
    n = n_univ + 2
    scopes = [(i, n - 2) for i in range(n_univ)] + [(n - 2, n - 1)]
    imp = NAMED_LANGUAGES["two-sat"]["IMP"].membership_bytes()
    members = [bytes([1, 1, 1, 1])] * n_univ + [imp]
    forall = [True] * n_univ + [False, False]
    return lambda k: k.qeval(n, 2, forall, scopes, members)


def _polymorphism_workload(rng):
    lang = random_language(rng, max_rels=3, max_arity=3)
    scopes, members = polymorphism_problem(list(lang), 3, 2)
    return lambda k: k.search(8, 2, scopes, members, None, 0)


def _violation_workload(rng):
    rel = [t for t in all_tuples(2, 6) if rng.random() < 0.5]
    member = bytes(1 if t in set(rel) else 0 for t in all_tuples(2, 6))
    table = list(MAJORITY.table)
    return lambda k: k.find_violation(table, 3, 2, rel, member)


WORKLOADS = {
    "search (Γ3 CSP, 16 vars, all solutions)": _csp_workload,
    "qeval (true QCSP, 14 universal vars)": _qcsp_workload,
    "search (ternary polymorphisms)": _polymorphism_workload,
    "find_violation (majority, arity 6)": _violation_workload,
}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = kernels.BACKENDS
    if "cython" not in backends:
        print("compiled extension not built; timing the python backend only")
    header = f"{'workload':45s}" + "".join(f"{b:>12s}" for b in backends)
    if len(backends) > 1:
        header += f"{'speedup':>10s}"
    print(header)
    for label, make in WORKLOADS.items():
        work = make(random.Random(args.seed))
        results = {b: work(k) for b, k in backends.items()}
        if len(set(map(repr, results.values()))) != 1:
            raise SystemExit(f"backends disagree on {label}")
        times = {
            b: min(timeit.repeat(lambda k=k: work(k), number=1, repeat=args.repeat))
            for b, k in backends.items()
        }
        row = f"{label:45s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times.values())
        if len(times) > 1:
            row += f"{times['python'] / times['cython']:9.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
