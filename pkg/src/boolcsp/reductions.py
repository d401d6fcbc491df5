"""pp/few-definitions, their synthesis and inlining, spread expressions, and hardness gadgets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

from . import kernels
from .algebra import _check_table_budget
from .core import (
    EXISTS,
    FORALL,
    Constraint,
    ConstraintLanguage,
    CspInstance,
    QcspInstance,
    Relation,
    all_tuples,
    check_search_budget,
    tuple_rank,
    unrank,
)
from .errors import PreconditionError, ValidationError
from .qcsp import prefix_pattern


@dataclass(frozen=True)
class Eq:
    """Equality atom ``left = right``."""

    left: str
    right: str

    def __str__(self):
        return f"{self.left} = {self.right}"


Atom = Union[Constraint, Eq]


def _atom_vars(a: Atom) -> tuple[str, ...]:
    return (a.left, a.right) if isinstance(a, Eq) else a.vars


@dataclass(frozen=True)
class FewDefinition:
    """``target(free_vars) == Q_1 b_1 ... Q_m b_m (conjunction of body)``."""

    target: str
    free_vars: tuple[str, ...]
    bound: tuple[tuple[str, str], ...]
    body: tuple[Atom, ...]

    def __post_init__(self):
        object.__setattr__(self, "free_vars", tuple(self.free_vars))
        object.__setattr__(self, "bound", tuple((q, v) for q, v in self.bound))
        object.__setattr__(self, "body", tuple(self.body))
        names = list(self.free_vars) + [v for _, v in self.bound]
        if len(set(names)) != len(names):
            raise ValidationError(f"definition of {self.target}: variable names must be distinct")
        if not self.free_vars:
            raise ValidationError(f"definition of {self.target}: needs at least one free variable")
        for q, _ in self.bound:
            if q not in (FORALL, EXISTS):
                raise ValidationError(f"definition of {self.target}: unknown quantifier {q!r}")
        known = set(names)
        for a in self.body:
            for v in _atom_vars(a):
                if v not in known:
                    raise ValidationError(f"definition of {self.target}: {v!r} is neither free nor bound")

    @property
    def bound_vars(self) -> tuple[str, ...]:
        return tuple(v for _, v in self.bound)

    @property
    def is_pp(self) -> bool:
        return all(q == EXISTS for q, _ in self.bound)

    def __str__(self):
        prefix = " ".join(f"{q} {v}" for q, v in self.bound)
        body = " & ".join(str(a) for a in self.body) or "true"
        head = f"{self.target}({', '.join(self.free_vars)})"
        return f"{head} == {prefix + ' . ' if prefix else ''}{body}"


class PpDefinition(FewDefinition):
    """A few-definition whose bound variables are all existential."""

    def __init__(self, target, free_vars, bound_vars, body):
        super().__init__(target, tuple(free_vars), tuple((EXISTS, v) for v in bound_vars), tuple(body))


def identity_definition(rel: Relation) -> PpDefinition:
    xs = tuple(f"x{i}" for i in range(rel.arity))
    return PpDefinition(rel.name, xs, (), (Constraint(rel.name, xs),))


def _encode_body(defn: FewDefinition, lang: ConstraintLanguage, order: Sequence[str]):
    d = lang.domain_size
    index = {v: i for i, v in enumerate(order)}
    eq_bytes = bytes(1 if a == b else 0 for a, b in all_tuples(d, 2))
    scopes, members = [], []
    for a in defn.body:
        if isinstance(a, Eq):
            scopes.append((index[a.left], index[a.right]))
            members.append(eq_bytes)
        else:
            rel = lang[a.relation]
            if len(a.vars) != rel.arity:
                raise ValidationError(f"definition of {defn.target}: {a} has wrong arity")
            scopes.append(tuple(index[v] for v in a.vars))
            members.append(rel.membership_bytes())
    return scopes, members


def definition_relation(defn: FewDefinition, lang: ConstraintLanguage, name: str | None = None) -> Relation:
    """The relation defined by ``defn``, by exhaustive game-tree evaluation for each free tuple."""
    d = lang.domain_size
    order = list(defn.free_vars) + list(defn.bound_vars)
    check_search_budget(d, len(order), "definition assignments")
    scopes, members = _encode_body(defn, lang, order)
    k = len(defn.free_vars)
    forall = [False] * k + [q == FORALL for q, _ in defn.bound]
    out = []
    for t in all_tuples(d, k):
        pins_s = [(i,) for i in range(k)]
        pins_m = [bytes(1 if x == t[i] else 0 for x in range(d)) for i in range(k)]
        if kernels.qeval(len(order), d, forall, scopes + pins_s, members + pins_m):
            out.append(t)
    return Relation(name or defn.target, k, tuple(out), d)


# --------------------------------------------------------------------------
# Synthesis of pp-definitions from the polymorphism CSP
# --------------------------------------------------------------------------


def _point_name(rank: int, d: int, m: int) -> str:
    return "p" + "".join(str(x) for x in unrank(rank, d, m)) if d <= 10 else f"p{rank}"


def synthesize_pp_definition(R: Relation, lang: ConstraintLanguage) -> PpDefinition | None:
    """pp-definition of ``R`` over ``lang`` built from the polymorphism CSP, or ``None``.

    Variables are the points of ``D^m`` (``m = |R|``).  The free variables
    are the column points of R's tuple list; a repeated column gets its own
    free variable tied to the first occurrence by an equality atom.  The
    body holds, for every relation ``S`` and every ``m``-sequence of its
    tuples, the constraint ``S`` on the columns of that sequence.  The
    definition is returned only when exhaustive evaluation reproduces ``R``.
    """
    d = lang.domain_size
    if R.domain_size != d:
        raise ValidationError("relation and language have different domains")
    m = len(R.tuples)
    _check_table_budget(d, m)
    npts = d**m
    check_search_budget(d, npts, "points of the polymorphism CSP")
    names = [_point_name(r, d, m) for r in range(npts)]
    body: list[Atom] = []
    if m == 0:
        # One point; each relation contributes its diagonal constraint.
        for rel in lang:
            body.append(Constraint(rel.name, (names[0],) * rel.arity))
    else:
        seen = set()
        for rel in lang:
            for seq in itertools.product(rel.tuples, repeat=m):
                scope = tuple(tuple_rank([t[j] for t in seq], d) for j in range(rel.arity))
                if (rel.name, scope) not in seen:
                    seen.add((rel.name, scope))
                    body.append(Constraint(rel.name, tuple(names[p] for p in scope)))
    cols = [tuple_rank([t[j] for t in R.tuples], d) for j in range(R.arity)]
    free, used = [], set()
    for j, p in enumerate(cols):
        if p in used:
            alias = f"{names[p]}~{j}"
            free.append(alias)
            body.append(Eq(alias, names[p]))
        else:
            used.add(p)
            free.append(names[p])
    bound = [names[p] for p in range(npts) if p not in used]
    defn = PpDefinition(R.name, tuple(free), tuple(bound), tuple(body))
    if definition_relation(defn, lang).same_tuples(R):
        return defn
    return None


# --------------------------------------------------------------------------
# Inlining definitions into instances
# --------------------------------------------------------------------------


class _ConstantFalse:
    """Reduction result standing for a formula that is false outright."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "CONSTANT_FALSE"

    def __bool__(self):
        return False


CONSTANT_FALSE = _ConstantFalse()


def _expand(defs, c: Constraint, i: int):
    try:
        defn = defs[c.relation]
    except KeyError:
        raise ValidationError(f"no definition for relation {c.relation!r}") from None
    if len(defn.free_vars) != len(c.vars):
        raise ValidationError(f"definition of {c.relation} has {len(defn.free_vars)} free variables")
    sub = dict(zip(defn.free_vars, c.vars))
    for _, b in defn.bound:
        sub[b] = f"{i}.{b}"
    fresh = [(q, sub[b]) for q, b in defn.bound]
    atoms = []
    for a in defn.body:
        if isinstance(a, Eq):
            atoms.append(Eq(sub[a.left], sub[a.right]))
        else:
            atoms.append(Constraint(a.relation, tuple(sub[v] for v in a.vars)))
    return fresh, atoms


def _check_fresh(existing, fresh):
    clash = set(existing).intersection(v for _, v in fresh)
    if clash:
        raise ValidationError(f"fresh variable names collide with instance variables: {sorted(clash)}")


def inline_reduce_csp(
    inst: CspInstance, defs: Mapping[str, FewDefinition], lang: ConstraintLanguage
) -> CspInstance:
    """Replace every constraint by its pp-definition over ``lang``.

    Bound variables become ``<constraint-index>.<name>``; equality atoms are
    eliminated by merging into the lexicographically smaller variable.
    """
    variables = list(inst.variables)
    atoms: list[Atom] = []
    for i, c in enumerate(inst.constraints):
        fresh, body = _expand(defs, c, i)
        if any(q != EXISTS for q, _ in fresh):
            raise PreconditionError(f"definition of {c.relation} is not a pp-definition")
        _check_fresh(variables, fresh)
        variables.extend(v for _, v in fresh)
        atoms.extend(body)
    parent = {v: v for v in variables}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a in atoms:
        if isinstance(a, Eq):
            ru, rv = find(a.left), find(a.right)
            if ru != rv:
                keep, drop = min(ru, rv), max(ru, rv)
                parent[drop] = keep
    kept = [v for v in variables if find(v) == v]
    cons = [
        Constraint(a.relation, tuple(find(v) for v in a.vars)) for a in atoms if isinstance(a, Constraint)
    ]
    return CspInstance(lang, tuple(kept), tuple(cons))


def inline_reduce_qcsp(
    q: QcspInstance, defs: Mapping[str, FewDefinition], lang: ConstraintLanguage
) -> QcspInstance | _ConstantFalse:
    """Replace constraints by few-definitions, appending their quantifiers to the prefix.

    An equality between distinct variables drops the later-quantified one;
    if that variable is universal the formula is false.
    """
    prefix = list(q.prefix)
    atoms: list[Atom] = []
    for i, c in enumerate(q.constraints):
        fresh, body = _expand(defs, c, i)
        _check_fresh([v for _, v in prefix], fresh)
        prefix.extend(fresh)
        atoms.extend(body)
    pos = {v: k for k, (_, v) in enumerate(prefix)}
    quant = dict((v, qq) for qq, v in prefix)
    parent = {v: v for v in pos}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a in atoms:
        if isinstance(a, Eq):
            ru, rv = find(a.left), find(a.right)
            if ru == rv:
                continue
            early, late = sorted((ru, rv), key=pos.__getitem__)
            if quant[late] == FORALL:
                return CONSTANT_FALSE
            parent[late] = early
    new_prefix = [(qq, v) for qq, v in prefix if find(v) == v]
    cons = [
        Constraint(a.relation, tuple(find(v) for v in a.vars)) for a in atoms if isinstance(a, Constraint)
    ]
    return QcspInstance(lang, tuple(new_prefix), tuple(cons))


# --------------------------------------------------------------------------
# Spread expressions and the prefix-preserving reduction
# --------------------------------------------------------------------------


def _body_relation(defn: FewDefinition, lang: ConstraintLanguage) -> tuple[tuple[int, ...], ...]:
    # Quantifier-free body as a set of tuples over free + bound variables.
    order = list(defn.free_vars) + list(defn.bound_vars)
    idx = {v: i for i, v in enumerate(order)}
    rows = []
    for t in all_tuples(lang.domain_size, len(order)):
        ok = True
        for a in defn.body:
            if isinstance(a, Eq):
                ok = t[idx[a.left]] == t[idx[a.right]]
            else:
                ok = tuple(t[idx[v]] for v in a.vars) in lang[a.relation]
            if not ok:
                break
        if ok:
            rows.append(t)
    return tuple(rows)


def spread_express(defn: FewDefinition, lang: ConstraintLanguage, name: str | None = None) -> Relation:
    """Relation ``R'`` of arity ``k + 2`` spread-expressing the relation defined by ``defn``.

    Quantifiers are removed innermost first.  The base ignores the two
    trailing ``y`` columns; ``∃`` projects its column away; ``∀`` keeps the
    tuples ``(x, y1, y2)`` for which both ``(x, y1, y1, y2)`` and
    ``(x, y2, y1, y2)`` belong to the previous relation.
    """
    if lang.domain_size != 2:
        raise PreconditionError("spread expressions are built for the boolean domain")
    rows = {t + y for t in _body_relation(defn, lang) for y in all_tuples(2, 2)}
    width = len(defn.free_vars) + len(defn.bound)
    for q, _ in reversed(defn.bound):
        width -= 1
        if q == EXISTS:
            rows = {t[:width] + t[width + 1 :] for t in rows}
        else:
            cand = {t[:width] + t[width + 1 :] for t in rows}
            rows = {
                s
                for s in cand
                if all(s[:width] + (yt,) + s[width:] in rows for yt in (s[width], s[width + 1]))
            }
    return Relation(name or f"{defn.target}.spread", len(defn.free_vars) + 2, tuple(rows), 2)


@dataclass(frozen=True)
class SpreadCheck:
    monotone: bool
    expresses: bool

    @property
    def ok(self) -> bool:
        return self.monotone and self.expresses


def check_spread_expression(Rp: Relation, R: Relation) -> SpreadCheck:
    """Exhaustively test monotonicity and expression of ``Rp`` for ``R`` at d = 2."""
    d = R.domain_size
    if Rp.arity != R.arity + d:
        raise ValidationError("spread relation must have arity k + d")
    ys = list(all_tuples(d, d))
    monotone = True
    for b, b2 in itertools.product(ys, ys):
        if not set(b) >= set(b2):
            continue
        for a in all_tuples(d, R.arity):
            if a + b in Rp and a + b2 not in Rp:
                monotone = False
    expresses = all(
        (a in R) == (a + b in Rp)
        for b in ys
        if len(set(b)) == d
        for a in all_tuples(d, R.arity)
    )
    return SpreadCheck(monotone, expresses)


def _fresh_name(base: str, taken) -> str:
    name, k = base, 0
    while name in taken:
        k += 1
        name = f"{base}_{k}"
    return name


def bounded_alt_reduce(q: QcspInstance, spread: Mapping[str, Relation]) -> QcspInstance:
    """Prefix-preserving reduction: ``R(v)`` becomes ``R''(v, y1, y2)``.

    ``y1, y2`` are universal and placed at the front of the outermost
    universal block.  Accepts ``Π_k`` with even ``k >= 2`` or ``Σ_k`` with odd
    ``k >= 3``.
    """
    pat = prefix_pattern(q)
    if not ((pat.kind == "P" and pat.k >= 2 and pat.k % 2 == 0) or (pat.kind == "S" and pat.k >= 3 and pat.k % 2 == 1)):
        raise PreconditionError(f"prefix class {pat.label} is not Π_k (even k >= 2) or Σ_k (odd k >= 3)")
    taken = set(q.variables)
    y1 = _fresh_name("y1", taken)
    y2 = _fresh_name("y2", taken | {y1})
    prefix = list(q.prefix)
    at = next(i for i, (qq, _) in enumerate(prefix) if qq == FORALL)
    prefix[at:at] = [(FORALL, y1), (FORALL, y2)]
    rels, cons = {}, []
    for c in q.constraints:
        try:
            r2 = spread[c.relation]
        except KeyError:
            raise ValidationError(f"no spread relation for {c.relation!r}") from None
        if r2.arity != len(c.vars) + 2:
            raise ValidationError(f"spread relation for {c.relation} must have arity {len(c.vars) + 2}")
        rels[r2.name] = r2
        cons.append(Constraint(r2.name, c.vars + (y1, y2)))
    lang = ConstraintLanguage(rels.values(), q.language.domain_size)
    return QcspInstance(lang, tuple(prefix), tuple(cons))


# --------------------------------------------------------------------------
# Hardness gadgets
# --------------------------------------------------------------------------


def lift_with_constants(R: Relation, name: str | None = None) -> Relation:
    """``(R x {0,1}) ∪ {0^(k+1), 1^(k+1)}``; has both constant polymorphisms."""
    if R.domain_size != 2:
        raise PreconditionError("lift_with_constants is defined for the boolean domain")
    rows = {t + (b,) for t in R.tuples for b in (0, 1)}
    rows |= {(0,) * (R.arity + 1), (1,) * (R.arity + 1)}
    return Relation(name or f"{R.name}.lift", R.arity + 1, tuple(rows), 2)


def lift_definition(R: Relation, lifted: Relation) -> FewDefinition:
    """``R(x) == ∀y lifted(x, y)``."""
    xs = tuple(f"x{i}" for i in range(R.arity))
    return FewDefinition(R.name, xs, ((FORALL, "y"),), (Constraint(lifted.name, xs + ("y",)),))


def lift_language(lang: ConstraintLanguage) -> tuple[ConstraintLanguage, dict[str, FewDefinition]]:
    lifted = [lift_with_constants(r) for r in lang]
    defs = {r.name: lift_definition(r, lr) for r, lr in zip(lang, lifted)}
    return ConstraintLanguage(lifted, 2), defs


def negation_closure(R: Relation, name: str | None = None) -> Relation:
    """``{(0, t)} ∪ {(1, ¬t)}`` over ``t ∈ R``; has negation as a polymorphism."""
    if R.domain_size != 2:
        raise PreconditionError("negation_closure is defined for the boolean domain")
    rows = [(0,) + t for t in R.tuples] + [(1,) + tuple(1 - x for x in t) for t in R.tuples]
    return Relation(name or f"{R.name}.neg", R.arity + 1, tuple(rows), 2)


def negation_language(lang: ConstraintLanguage) -> ConstraintLanguage:
    return ConstraintLanguage([negation_closure(r) for r in lang], 2)


def negation_instance(inst: CspInstance | QcspInstance, quantifier: str = EXISTS):
    """Add pivot ``b0`` and turn each ``R(v)`` into ``R''(b0, v)``.

    For a quantified instance ``b0`` is quantified outermost with ``quantifier``.
    """
    lang = negation_language(inst.language)
    b0 = _fresh_name("b0", set(inst.variables))
    cons = tuple(Constraint(f"{c.relation}.neg", (b0,) + c.vars) for c in inst.constraints)
    if isinstance(inst, QcspInstance):
        if quantifier not in (FORALL, EXISTS):
            raise ValidationError(f"unknown quantifier {quantifier!r}")
        return QcspInstance(lang, ((quantifier, b0),) + inst.prefix, cons)
    return CspInstance(lang, (b0,) + inst.variables, cons)
