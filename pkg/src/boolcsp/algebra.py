"""Polymorphisms, composition, and generator extraction for boolean clones."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from . import kernels
from .core import BUDGET, ConstraintLanguage, Operation, Relation, all_tuples, tuple_rank, unrank
from .errors import BudgetExceeded, PreconditionError, ValidationError

# --------------------------------------------------------------------------
# Named boolean operations
# --------------------------------------------------------------------------


def _op(name, arity, fn):
    return Operation.from_function(arity, fn, 2, name)


CONST0 = _op("const0", 1, lambda x: 0)
CONST1 = _op("const1", 1, lambda x: 1)
IDENTITY = _op("identity", 1, lambda x: x)
NOT = _op("not", 1, lambda x: 1 - x)
AND = _op("and", 2, lambda x, y: x & y)
OR = _op("or", 2, lambda x, y: x | y)
XOR = _op("xor", 2, lambda x, y: x ^ y)
MAJORITY = _op("majority", 3, lambda x, y, z: (x & y) | (x & z) | (y & z))
MINORITY = _op("minority", 3, lambda x, y, z: x ^ y ^ z)

SCHAEFER_SIX = (CONST0, CONST1, AND, OR, MAJORITY, MINORITY)
SCHAEFER_FOUR = (AND, OR, MAJORITY, MINORITY)

NAMED_OPS = {op.name: op for op in (CONST0, CONST1, IDENTITY, NOT, AND, OR, XOR, MAJORITY, MINORITY)}


def projection(i: int, m: int, domain_size: int = 2) -> Operation:
    """The ``m``-ary projection onto coordinate ``i`` (0-based)."""
    if not 0 <= i < m:
        raise ValidationError(f"projection index {i} out of range for arity {m}")
    return Operation.from_function(m, lambda *xs: xs[i], domain_size, f"proj({i},{m})")


def named_op(name: str) -> Operation:
    if name.startswith("proj(") and name.endswith(")"):
        i, m = (int(x) for x in name[5:-1].split(","))
        return projection(i, m)
    try:
        return NAMED_OPS[name]
    except KeyError:
        raise ValidationError(f"unknown operation name {name!r}") from None


def op_name(f: Operation) -> str | None:
    """Name of ``f`` if its table equals one of the named boolean operations."""
    if f.domain_size != 2:
        return None
    for op in NAMED_OPS.values():
        if op == f:
            return op.name
    w = essentially_unary_witness(f)
    if w is not None and w.inner == IDENTITY:
        return f"proj({w.coordinate},{f.arity})"
    return None


# --------------------------------------------------------------------------
# Polymorphism checks
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    """``f`` applied coordinatewise to ``tuples`` leaves ``relation``."""

    relation: str
    tuples: tuple[tuple[int, ...], ...]
    image: tuple[int, ...]


def polymorphism_violation(f: Operation, lang: ConstraintLanguage | Sequence[Relation]) -> Violation | None:
    rels = list(lang)
    for rel in rels:
        if rel.domain_size != f.domain_size:
            raise ValidationError(
                f"operation over domain {f.domain_size} checked against relation {rel.name} over {rel.domain_size}"
            )
        hit = kernels.find_violation(f.table, f.arity, f.domain_size, rel.tuples, rel.membership_bytes())
        if hit is not None:
            ts = tuple(rel.tuples[i] for i in hit)
            image = tuple(f(*(t[j] for t in ts)) for j in range(rel.arity))
            return Violation(rel.name, ts, image)
    return None


def is_polymorphism(f: Operation, lang: ConstraintLanguage | Sequence[Relation]) -> bool:
    return polymorphism_violation(f, lang) is None


def _check_table_budget(d: int, m: int) -> None:
    if d ** (d**m) > BUDGET.max_tables:
        raise BudgetExceeded(
            f"{d}^({d}^{m}) candidate operations exceeds max_tables={BUDGET.max_tables}"
        )


def polymorphism_problem(rels: Sequence[Relation], m: int, d: int):
    """Kernel encoding of "f is an m-ary polymorphism" as a CSP over the points of ``D^m``.

    For each relation ``S`` and each ``m``-sequence of its tuples, the
    columns of that sequence are points of ``D^m`` and ``f`` must map them
    into ``S``.  Duplicate constraints are dropped.
    """
    scopes, members, seen = [], [], set()
    for rel in rels:
        mb = rel.membership_bytes()
        for seq in itertools.product(rel.tuples, repeat=m):
            scope = tuple(tuple_rank([t[j] for t in seq], d) for j in range(rel.arity))
            key = (rel.name, scope)
            if key in seen:
                continue
            seen.add(key)
            scopes.append(scope)
            members.append(mb)
    return scopes, members


def polymorphisms_of_arity(lang: ConstraintLanguage, m: int) -> list[Operation]:
    """All ``m``-ary polymorphisms of ``lang``, in lexicographic table order."""
    d = lang.domain_size
    if m < 1:
        raise ValidationError("arity must be at least 1")
    _check_table_budget(d, m)
    scopes, members = polymorphism_problem(list(lang), m, d)
    tables = kernels.search(d**m, d, scopes, members, None, 0)
    return [Operation(m, t, d) for t in tables]


# --------------------------------------------------------------------------
# Structure of single operations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EssentiallyUnaryWitness:
    coordinate: int
    inner: Operation


def essentially_unary_witness(f: Operation) -> EssentiallyUnaryWitness | None:
    """Smallest coordinate ``i`` and unary ``g`` with ``f(x) = g(x_i)`` everywhere."""
    d, m = f.domain_size, f.arity
    for i in range(m):
        g = tuple(f(*[a if j == i else 0 for j in range(m)]) for a in range(d))
        if all(f.table[r] == g[x[i]] for r, x in enumerate(all_tuples(d, m))):
            return EssentiallyUnaryWitness(i, Operation(1, g, d))
    return None


def acts_as_permutation(f: Operation) -> bool:
    w = essentially_unary_witness(f)
    return w is not None and len(set(w.inner.table)) == f.domain_size


def is_projection(f: Operation) -> bool:
    w = essentially_unary_witness(f)
    return w is not None and w.inner.table == tuple(range(f.domain_size))


def diagonal(f: Operation) -> Operation:
    """The unary operation ``d -> f(d, ..., d)``."""
    return Operation(1, tuple(f(*([a] * f.arity)) for a in range(f.domain_size)), f.domain_size)


def compose(f: Operation, gs: Sequence[Operation]) -> Operation:
    """``x -> f(g_1(x), ..., g_n(x))``."""
    if len(gs) != f.arity:
        raise ValidationError(f"compose: {len(gs)} inner operations for outer arity {f.arity}")
    if not gs:
        raise ValidationError("compose: no inner operations")
    m, d = gs[0].arity, f.domain_size
    for g in gs:
        if g.arity != m:
            raise ValidationError("compose: inner operations must share an arity")
        if g.domain_size != d:
            raise ValidationError("compose: domain mismatch")
    table = tuple(
        f.table[tuple_rank([g.table[r] for g in gs], d)] for r in range(d**m)
    )
    return Operation(m, table, d)


def identify(f: Operation, i: int, j: int) -> Operation:
    """Identify argument ``j`` with argument ``i`` (``i < j``); the result drops coordinate ``j``."""
    m = f.arity
    idx = [c if c < j else c - 1 for c in range(m)]
    idx[j] = i
    return compose(f, [projection(c, m - 1, f.domain_size) for c in idx])


# --------------------------------------------------------------------------
# Generator extraction
# --------------------------------------------------------------------------


def _normalize(f: Operation, expected: Operation) -> Operation:
    if f != expected:
        raise AssertionError(f"derivation produced {f}, expected {expected.name}")
    return expected


def _from_constant_diagonal(f: Operation, c: int) -> Operation:
    # Binary g built by splitting the coordinates along a witness input where f != c.
    k = f.arity
    a = next(x for x in all_tuples(2, k) if f(*x) != c)
    # Positions where the witness differs from c receive the first argument.
    proj = [projection(0 if a[t] != c else 1, 2) for t in range(k)]
    g = compose(f, proj)
    p1_3, p2_3, p3_3 = (projection(i, 3) for i in range(3))
    # g(c', c') = c, g(1-c, c) = 1-c; the remaining value decides the case.
    if g(c, 1 - c) == 1 - c:
        # xor (c = 0) or xnor (c = 1): g(x, g(y, z)) is minority either way.
        inner = compose(g, [p2_3, p3_3])
        return _normalize(compose(g, [p1_3, inner]), MINORITY)
    result = compose(g, [projection(0, 2), g])
    return _normalize(result, AND if c == 0 else OR)


def _ternary_case(g: Operation) -> Operation:
    x, y, z = (projection(i, 3) for i in range(3))
    sig = (
        g(0, 0, 1) == 0 and g(1, 1, 0) == 1,  # g(x,x,y) = x
        g(0, 1, 0) == 0 and g(1, 0, 1) == 1,  # g(x,y,x) = x
        g(1, 0, 0) == 0 and g(0, 1, 1) == 1,  # g(y,x,x) = x
    )
    if all(sig):
        return _normalize(g, MAJORITY)
    if not any(sig):
        return _normalize(g, MINORITY)
    if sum(sig) == 1:
        # The agreeing pair returns its common value; the inner g goes in the odd slot.
        slot = {0: 2, 1: 1, 2: 0}[sig.index(True)]
        args = [x, y, z]
        args[slot] = g
        return _normalize(compose(g, args), MAJORITY)
    raise AssertionError("ternary case analysis reached a projection")


def derive_schaefer_generator(f: Operation) -> Operation:
    """One of and/or/majority/minority generated by a non-essentially-unary boolean ``f``."""
    if f.domain_size != 2:
        raise PreconditionError("generator extraction is defined for the boolean domain")
    if essentially_unary_witness(f) is not None:
        raise PreconditionError("operation is essentially unary")
    diag = diagonal(f).table
    if diag in ((0, 0), (1, 1)):
        return _from_constant_diagonal(f, diag[0])
    g = f if diag == (0, 1) else compose(NOT, [f])
    while g.arity > 3 or (g.arity == 3 and _binary_descent(g) is not None):
        g = _binary_descent(g) if g.arity == 3 else _descend(g)
    if g.arity == 2:
        if g(0, 1) != g(1, 0):
            raise AssertionError("binary idempotent non-projection expected")
        return _normalize(g, AND if g(0, 1) == 0 else OR)
    return _ternary_case(g)


def _descend(g: Operation) -> Operation:
    for i, j in itertools.combinations(range(g.arity), 2):
        h = identify(g, i, j)
        if not is_projection(h):
            return h
    raise AssertionError("every identification is a projection, so g is a projection")


def _binary_descent(g: Operation) -> Operation | None:
    for i, j in itertools.combinations(range(3), 2):
        h = identify(g, i, j)
        if not is_projection(h):
            return h
    return None


def schaefer_witnesses(lang: ConstraintLanguage) -> tuple[str, ...]:
    """Names of the six Schaefer operations that are polymorphisms of ``lang``."""
    if lang.domain_size != 2:
        raise PreconditionError("Schaefer witnesses are defined for boolean languages")
    return tuple(op.name for op in SCHAEFER_SIX if is_polymorphism(op, lang))


__all__ = [
    "AND", "OR", "XOR", "NOT", "MAJORITY", "MINORITY", "CONST0", "CONST1", "IDENTITY",
    "SCHAEFER_SIX", "SCHAEFER_FOUR", "Violation", "EssentiallyUnaryWitness",
    "projection", "named_op", "op_name", "is_polymorphism", "polymorphism_violation",
    "polymorphisms_of_arity", "essentially_unary_witness", "acts_as_permutation",
    "is_projection", "diagonal", "compose", "identify", "derive_schaefer_generator",
    "schaefer_witnesses", "unrank",
]
