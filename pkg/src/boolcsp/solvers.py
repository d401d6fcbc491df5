"""Polynomial-time CSP algorithms for the six Schaefer polymorphisms, plus dispatch."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .algebra import AND, CONST0, CONST1, MAJORITY, MINORITY, OR, is_polymorphism
from .core import ConstraintLanguage, Constraint, CspInstance, Operation, Relation, all_tuples
from .errors import NoTractableMethod, PreconditionError, ValidationError
from .oracle import brute_solve

Assignment = dict[str, int]


def _require_boolean(inst: CspInstance) -> None:
    if inst.language.domain_size != 2:
        raise PreconditionError("the tractable solvers are defined for the boolean domain")


def _require_polymorphism(op: Operation, lang: ConstraintLanguage) -> None:
    if not is_polymorphism(op, lang):
        raise PreconditionError(f"{op.name} is not a polymorphism of the language")


@dataclass(frozen=True)
class TightenedInstance:
    """An instance whose relations were replaced by subsets during propagation.

    ``instance`` uses fresh relation names; ``domains`` holds the final
    variable domains for arc consistency and is ``None`` for the majority
    algorithm.
    """

    original: CspInstance
    instance: CspInstance
    domains: Mapping[str, frozenset[int]] | None = None


# --------------------------------------------------------------------------
# Constant polymorphisms
# --------------------------------------------------------------------------


def solve_constant(inst: CspInstance, b: int) -> Assignment | None:
    """All-``b`` assignment when every constrained relation is non-empty."""
    _require_boolean(inst)
    _require_polymorphism(CONST1 if b else CONST0, inst.language)
    if any(len(inst.language[c.relation]) == 0 for c in inst.constraints):
        return None
    return {v: b for v in inst.variables}


# --------------------------------------------------------------------------
# Arc consistency (and / or)
# --------------------------------------------------------------------------


def arc_consistency_tighten(inst: CspInstance) -> TightenedInstance | None:
    """Fixpoint of ``D_v := D_v ∩ π_v(C)`` and ``R := R ∩ Π D_{v_i}``; ``None`` if a relation empties.

    A variable occurring at several positions of one constraint has
    ``π_v(C)`` equal to the intersection of the projections at those positions.
    """
    lang = inst.language
    domains = {v: frozenset(range(lang.domain_size)) for v in inst.variables}
    tables = [lang[c.relation].tuples for c in inst.constraints]
    changed = True
    while changed:
        changed = False
        for i, c in enumerate(inst.constraints):
            rows = tuple(t for t in tables[i] if all(x in domains[v] for x, v in zip(t, c.vars)))
            if not rows:
                return None
            if len(rows) != len(tables[i]):
                tables[i] = rows
                changed = True
            proj: dict[str, frozenset[int]] = {}
            for j, v in enumerate(c.vars):
                col = frozenset(t[j] for t in rows)
                proj[v] = proj[v] & col if v in proj else col
            for v, col in proj.items():
                new = domains[v] & col
                if new != domains[v]:
                    domains[v] = new
                    changed = True
    rels, cons = [], []
    for i, c in enumerate(inst.constraints):
        name = f"{c.relation}@{i}"
        rels.append(Relation(name, len(c.vars), tables[i], lang.domain_size))
        cons.append(Constraint(name, c.vars))
    tightened = CspInstance(ConstraintLanguage(rels, lang.domain_size), inst.variables, cons)
    return TightenedInstance(inst, tightened, domains)


def arc_consistency_solve(inst: CspInstance, semilattice: Operation) -> Assignment | None:
    """Arc consistency for an and/or-closed language.

    For ``and`` a variable is 1 exactly when its final domain is ``{1}``;
    for ``or`` it is 0 exactly when the domain is ``{0}``.
    """
    _require_boolean(inst)
    if semilattice == AND:
        default = 0
    elif semilattice == OR:
        default = 1
    else:
        raise ValidationError("arc consistency solver expects the and/or operation")
    _require_polymorphism(semilattice, inst.language)
    t = arc_consistency_tighten(inst)
    if t is None:
        return None
    return {v: (1 - default if t.domains[v] == {1 - default} else default) for v in inst.variables}


# --------------------------------------------------------------------------
# Majority
# --------------------------------------------------------------------------


class _MajorityState:
    """Step 1 and 2 of the majority algorithm over variable indices.

    ``table[W]`` is the current relation of the added constraint on the
    sorted index triple/pair/singleton ``W``; absent keys stand for the
    untouched full relation ``D^|W|``.  Original constraints never change
    the partial-solution test after the first pass, because every original
    constraint of arity at most 3 is subsumed by the added constraint on its
    variable set, so they are kept as-is.
    """

    def __init__(self, inst: CspInstance):
        self.inst = inst
        self.d = inst.language.domain_size
        self.n = len(inst.variables)
        index = {v: i for i, v in enumerate(inst.variables)}
        self.orig = []
        for c in inst.constraints:
            scope = tuple(index[v] for v in c.vars)
            self.orig.append((scope, inst.language[c.relation].tuples))
        self.orig_by_var: list[list[int]] = [[] for _ in range(self.n)]
        for ci, (scope, _) in enumerate(self.orig):
            for v in set(scope):
                self.orig_by_var[v].append(ci)
        self.table: dict[tuple[int, ...], frozenset[tuple[int, ...]]] = {}
        self.by_var: list[set[tuple[int, ...]]] = [set() for _ in range(self.n)]
        self._orig_cache: dict = {}

    def _orig_projection(self, ci: int, vars_: tuple[int, ...]):
        key = (ci, vars_)
        hit = self._orig_cache.get(key)
        if hit is None:
            scope, rows = self.orig[ci]
            pos = {v: [j for j, u in enumerate(scope) if u == v] for v in vars_}
            hit = set()
            for t in rows:
                vals = []
                for v in vars_:
                    ps = pos[v]
                    if any(t[p] != t[ps[0]] for p in ps):
                        break
                    vals.append(t[ps[0]])
                else:
                    hit.add(tuple(vals))
            self._orig_cache[key] = hit
        return hit

    def is_partial(self, f: Mapping[int, int]) -> bool:
        """Partial-solution test against originals and all added constraints."""
        W = set(f)
        seen_orig = set()
        seen_tab = set()
        for v in W:
            for ci in self.orig_by_var[v]:
                if ci in seen_orig:
                    continue
                seen_orig.add(ci)
                common = tuple(sorted(W.intersection(self.orig[ci][0])))
                if tuple(f[u] for u in common) not in self._orig_projection(ci, common):
                    return False
            for key in self.by_var[v]:
                if key in seen_tab:
                    continue
                seen_tab.add(key)
                pos = [j for j, u in enumerate(key) if u in W]
                want = tuple(f[key[j]] for j in pos)
                if not any(tuple(t[j] for j in pos) == want for t in self.table[key]):
                    return False
        return True

    def support(self, W: tuple[int, ...]) -> frozenset[tuple[int, ...]]:
        return frozenset(
            t for t in all_tuples(self.d, len(W)) if self.is_partial(dict(zip(W, t)))
        )

    def run(self) -> bool:
        """Iterate step 2 to a fixpoint; ``False`` when some relation empties."""
        subsets = [W for l in (1, 2, 3) for W in itertools.combinations(range(self.n), l)]
        full = {l: self.d**l for l in (1, 2, 3)}
        # Original constraints must themselves be non-empty.
        if any(not rows for _, rows in self.orig):
            return False
        changed = True
        while changed:
            changed = False
            for W in subsets:
                new = self.support(W)
                if not new:
                    return False
                old = self.table.get(W)
                if old is None:
                    if len(new) == full[len(W)]:
                        continue
                    for v in W:
                        self.by_var[v].add(W)
                elif new == old:
                    continue
                self.table[W] = new
                changed = True
        return True

    def extend(self) -> tuple[int, ...]:
        f: dict[int, int] = {}
        for v in range(self.n):
            for a in range(self.d):
                f[v] = a
                if self.is_partial(f):
                    break
            else:
                raise AssertionError("extension failed; majority precondition must be violated")
        return tuple(f[v] for v in range(self.n))


def majority_tighten(inst: CspInstance) -> TightenedInstance | None:
    """Run the propagation and materialize every added constraint that shrank."""
    _require_boolean(inst)
    state = _MajorityState(inst)
    if not state.run():
        return None
    lang = inst.language
    rels, cons = list(lang), list(inst.constraints)
    for k, (W, rows) in enumerate(sorted(state.table.items())):
        name = f"T{k}@" + "_".join(map(str, W))
        rels.append(Relation(name, len(W), tuple(rows), lang.domain_size))
        cons.append(Constraint(name, tuple(inst.variables[i] for i in W)))
    tightened = CspInstance(ConstraintLanguage(rels, lang.domain_size), inst.variables, cons)
    return TightenedInstance(inst, tightened, None)


def majority_solve(inst: CspInstance) -> Assignment | None:
    """Three-consistency propagation, then greedy extension in declared variable order."""
    _require_boolean(inst)
    _require_polymorphism(MAJORITY, inst.language)
    if len(inst.variables) < 3:
        return brute_solve(inst)
    state = _MajorityState(inst)
    if not state.run():
        return None
    return dict(zip(inst.variables, state.extend()))


# --------------------------------------------------------------------------
# Minority: linear equations over GF(2)
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearEquation:
    """``(xor of left_vars) = right_const``; repeated variables cancel."""

    left_vars: frozenset
    right_const: int

    @classmethod
    def of(cls, vars_: Sequence[str], const: int) -> "LinearEquation":
        acc: set = set()
        for v in vars_:
            acc ^= {v}
        return cls(frozenset(acc), const & 1)

    def holds(self, a: Mapping[str, int]) -> bool:
        return sum(a[v] for v in self.left_vars) % 2 == self.right_const

    def __str__(self):
        left = " + ".join(sorted(self.left_vars)) or "0"
        return f"{left} = {self.right_const}"


def _equations_for(rows: set[tuple[int, ...]], k: int) -> list[tuple[frozenset, int]]:
    # Equations over positions 0..k-1 expressing exactly ``rows``.
    if not rows:
        return [(frozenset(), 1)]
    if k == 1:
        if rows == {(0,)}:
            return [(frozenset({0}), 0)]
        if rows == {(1,)}:
            return [(frozenset({0}), 1)]
        return []
    r0 = {t[1:] for t in rows if t[0] == 0}
    r1 = {t[1:] for t in rows if t[0] == 1}

    def shift(eqs):
        return [(frozenset(i + 1 for i in s), c) for s, c in eqs]

    if not r0:
        return [(frozenset({0}), 1)] + shift(_equations_for(r1, k - 1))
    if not r1:
        return [(frozenset({0}), 0)] + shift(_equations_for(r0, k - 1))
    c0, c1 = min(r0), min(r1)
    out = []
    for s, c in shift(_equations_for(r0, k - 1)):
        # x'_i = x_i + (c0_i + c1_i) x_0, so x_0 enters with the parity of the offsets on s.
        parity = sum(c0[i - 1] ^ c1[i - 1] for i in s) & 1
        out.append((s | {0} if parity else s, c))
    return out


def minority_to_equations(R: Relation, vars_: Sequence[str]) -> list[LinearEquation]:
    """Linear system over ``vars_`` whose solution set is the constraint ``R(vars_)``."""
    if len(vars_) != R.arity:
        raise ValidationError(f"{len(vars_)} variables for relation of arity {R.arity}")
    if R.domain_size != 2:
        raise PreconditionError("linear equations are defined for the boolean domain")
    if not is_polymorphism(MINORITY, [R]):
        raise PreconditionError(f"minority is not a polymorphism of {R.name}")
    out = []
    for s, c in _equations_for(set(R.tuples), R.arity):
        eq = LinearEquation.of([vars_[i] for i in sorted(s)], c)
        if eq.left_vars or eq.right_const:
            out.append(eq)
    return out


def gaussian_solve(eqs: Sequence[LinearEquation], vars_: Sequence[str]) -> Assignment | None:
    """Gauss-Jordan elimination; pivots on the highest-indexed variable, free variables are 0.

    Eliminating from the back leaves the earliest variables free, so the
    returned solution is the lexicographically smallest one.
    """
    index = {v: i for i, v in enumerate(vars_)}
    rows: dict[int, tuple[int, int]] = {}  # pivot -> (mask, const)
    for eq in eqs:
        try:
            mask = sum(1 << index[v] for v in eq.left_vars)
        except KeyError as exc:
            raise ValidationError(f"equation mentions unknown variable {exc.args[0]!r}") from None
        const = eq.right_const
        for p, (pm, pc) in rows.items():
            if mask >> p & 1:
                mask ^= pm
                const ^= pc
        if mask == 0:
            if const:
                return None
            continue
        p = mask.bit_length() - 1
        for q, (qm, qc) in list(rows.items()):
            if qm >> p & 1:
                rows[q] = (qm ^ mask, qc ^ const)
        rows[p] = (mask, const)
    values = [0] * len(vars_)
    for p, (mask, const) in rows.items():
        # Other bits of a reduced row are free variables, which are 0.
        values[p] = const
    return dict(zip(vars_, values))


def minority_solve(inst: CspInstance) -> Assignment | None:
    _require_boolean(inst)
    _require_polymorphism(MINORITY, inst.language)
    eqs = []
    for c in inst.constraints:
        eqs.extend(minority_to_equations(inst.language[c.relation], c.vars))
    return gaussian_solve(eqs, inst.variables)


# --------------------------------------------------------------------------
# Dispatch
# --------------------------------------------------------------------------

METHODS = ("const0", "const1", "ac-and", "ac-or", "majority", "minority")
_WITNESS = {
    "const0": CONST0,
    "const1": CONST1,
    "ac-and": AND,
    "ac-or": OR,
    "majority": MAJORITY,
    "minority": MINORITY,
}


@dataclass(frozen=True)
class SolveResult:
    verdict: str  # "sat" or "unsat"
    assignment: Assignment | None
    method: str

    @property
    def satisfiable(self) -> bool:
        return self.verdict == "sat"


def run_method(inst: CspInstance, method: str) -> Assignment | None:
    if method == "brute":
        return brute_solve(inst)
    if method == "const0":
        return solve_constant(inst, 0)
    if method == "const1":
        return solve_constant(inst, 1)
    if method == "ac-and":
        return arc_consistency_solve(inst, AND)
    if method == "ac-or":
        return arc_consistency_solve(inst, OR)
    if method == "majority":
        return majority_solve(inst)
    if method == "minority":
        return minority_solve(inst)
    raise ValidationError(f"unknown method {method!r}")


def select_method(lang: ConstraintLanguage) -> str:
    if lang.domain_size != 2:
        raise PreconditionError("dispatch is defined for the boolean domain")
    for method in METHODS:
        if is_polymorphism(_WITNESS[method], lang):
            return method
    raise NoTractableMethod("no tractable method: none of the six Schaefer operations is a polymorphism")


def solve_with(inst: CspInstance, method: str) -> SolveResult:
    """Run ``method`` and check any returned assignment against the constraints."""
    a = run_method(inst, method)
    if a is not None and not inst.satisfied_by(a):
        raise AssertionError(f"method {method} returned a non-solution")
    return SolveResult("sat" if a is not None else "unsat", a, method)


def dispatch_solve(inst: CspInstance) -> SolveResult:
    """Route to the first applicable solver in the order const0, const1, and, or, majority, minority."""
    return solve_with(inst, select_method(inst.language))
