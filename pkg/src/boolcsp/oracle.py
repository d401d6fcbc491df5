"""Exhaustive ground truth: CSP search, QCSP game trees, partial solutions, pp-closure."""

from __future__ import annotations

from typing import Mapping

from . import kernels
from .algebra import _check_table_budget, polymorphism_problem
from .core import (
    FORALL,
    ConstraintLanguage,
    CspInstance,
    QcspInstance,
    Relation,
    all_tuples,
    check_search_budget,
    tuple_rank,
)
from .errors import ValidationError


def _encode(lang: ConstraintLanguage, variables, constraints):
    index = {v: i for i, v in enumerate(variables)}
    cache: dict[str, bytes] = {}
    scopes, members = [], []
    for c in constraints:
        if c.relation not in cache:
            cache[c.relation] = lang[c.relation].membership_bytes()
        scopes.append(tuple(index[v] for v in c.vars))
        members.append(cache[c.relation])
    return scopes, members


def brute_solve(inst: CspInstance) -> dict[str, int] | None:
    """Lexicographically first satisfying assignment (declared variable order), or ``None``."""
    d, n = inst.language.domain_size, len(inst.variables)
    check_search_budget(d, n)
    scopes, members = _encode(inst.language, inst.variables, inst.constraints)
    if n == 0:
        ok = all(() in inst.language[c.relation] for c in inst.constraints)
        return {} if ok else None
    found = kernels.search(n, d, scopes, members, None, 1)
    if not found:
        return None
    return dict(zip(inst.variables, found[0]))


def brute_count(inst: CspInstance) -> int:
    d, n = inst.language.domain_size, len(inst.variables)
    check_search_budget(d, n)
    scopes, members = _encode(inst.language, inst.variables, inst.constraints)
    return len(kernels.search(n, d, scopes, members, None, 0)) if n else 1


def brute_eval_qcsp(q: QcspInstance) -> bool:
    """Truth value by game-tree evaluation in prefix order."""
    d, n = q.language.domain_size, len(q.prefix)
    check_search_budget(d, n, "game-tree leaves")
    scopes, members = _encode(q.language, q.variables, q.constraints)
    if n == 0:
        return True
    forall = [qq == FORALL for qq, _ in q.prefix]
    return kernels.qeval(n, d, forall, scopes, members)


def is_partial_solution(inst: CspInstance, p: Mapping[str, int]) -> bool:
    """Every constraint has a tuple agreeing with ``p`` on its assigned variables."""
    for v in p:
        if v not in inst.variables:
            raise ValidationError(f"partial assignment mentions unknown variable {v!r}")
    for c in inst.constraints:
        rel = inst.language[c.relation]
        fixed = [(j, p[v]) for j, v in enumerate(c.vars) if v in p]
        if not any(all(t[j] == val for j, val in fixed) for t in rel.tuples):
            return False
    return True


def pp_closure(R: Relation, lang: ConstraintLanguage, name: str | None = None) -> Relation:
    """Smallest relation pp-definable over ``lang`` that contains ``R``.

    This is the set of images of R's tuple list under all ``|R|``-ary
    polymorphisms of ``lang``.  Each candidate tuple is tested by asking
    whether some polymorphism sends the column points of R to it, which is
    a search over the polymorphism CSP with those points pinned.
    """
    name = name or R.name
    d = lang.domain_size
    if R.domain_size != d:
        raise ValidationError("relation and language have different domains")
    m = len(R.tuples)
    if m == 0:
        # Nullary polymorphisms are the constants c whose diagonal tuple lies in every relation.
        consts = [c for c in range(d) if all((c,) * S.arity in S for S in lang)]
        return Relation(name, R.arity, tuple((c,) * R.arity for c in consts), d)
    _check_table_budget(d, m)
    scopes, members = polymorphism_problem(list(lang), m, d)
    points = [tuple_rank([t[j] for t in R.tuples], d) for j in range(R.arity)]
    out = []
    for cand in all_tuples(d, R.arity):
        fixed = [-1] * d**m
        ok = True
        for p, v in zip(points, cand):
            if fixed[p] not in (-1, v):
                ok = False
                break
            fixed[p] = v
        if ok and kernels.search(d**m, d, scopes, members, fixed, 1):
            out.append(cand)
    return Relation(name, R.arity, tuple(out), d)


def is_pp_definable(R: Relation, lang: ConstraintLanguage) -> bool:
    return pp_closure(R, lang).same_tuples(R)
