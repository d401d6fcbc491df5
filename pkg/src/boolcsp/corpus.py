"""Seeded random generators for languages, relations and instances."""

from __future__ import annotations

import itertools
import random
from typing import Sequence

from .core import (
    EXISTS,
    FORALL,
    Constraint,
    ConstraintLanguage,
    CspInstance,
    Operation,
    QcspInstance,
    Relation,
    all_tuples,
    apply_coordinatewise,
)


def random_relation(rng: random.Random, name: str, arity: int, density: float | None = None, d: int = 2) -> Relation:
    p = rng.random() if density is None else density
    return Relation(name, arity, tuple(t for t in all_tuples(d, arity) if rng.random() < p), d)


def random_language(rng: random.Random, max_rels: int = 3, max_arity: int = 3, d: int = 2) -> ConstraintLanguage:
    n = rng.randint(1, max_rels)
    return ConstraintLanguage(
        [random_relation(rng, f"R{i}", rng.randint(1, max_arity), d=d) for i in range(n)], d
    )


def close_under(rel: Relation, ops: Sequence[Operation], name: str | None = None) -> Relation:
    """Smallest superset of ``rel`` closed under every operation in ``ops``."""
    rows = set(rel.tuples)
    changed = True
    while changed:
        changed = False
        current = sorted(rows)
        for f in ops:
            for seq in itertools.product(current, repeat=f.arity):
                t = apply_coordinatewise(f, seq)
                if t not in rows:
                    rows.add(t)
                    changed = True
    return Relation(name or rel.name, rel.arity, tuple(rows), rel.domain_size)


def random_closed_language(
    rng: random.Random, op: Operation, max_rels: int = 3, max_arity: int = 3, with_constants: bool = True
) -> ConstraintLanguage:
    """Random relations closed under ``op``; optionally add C0 and C1 so constants are not polymorphisms."""
    rels = []
    for i in range(rng.randint(1, max_rels)):
        r = random_relation(rng, f"R{i}", rng.randint(1, max_arity), density=rng.choice((0.2, 0.35, 0.5)))
        rels.append(close_under(r, [op]))
    if with_constants:
        rels.append(Relation("C0", 1, ((0,),)))
        rels.append(Relation("C1", 1, ((1,),)))
    return ConstraintLanguage(rels, 2)


def random_instance(
    rng: random.Random, lang: ConstraintLanguage, n_vars: int, n_cons: int, prefix: str = "v"
) -> CspInstance:
    variables = tuple(f"{prefix}{i}" for i in range(n_vars))
    rels = list(lang)
    cons = []
    if rels and n_vars:
        for _ in range(n_cons):
            r = rng.choice(rels)
            cons.append(Constraint(r.name, tuple(rng.choice(variables) for _ in range(r.arity))))
    return CspInstance(lang, variables, tuple(cons))


def random_qcsp(
    rng: random.Random,
    lang: ConstraintLanguage,
    n_vars: int,
    n_cons: int,
    pattern: str | None = None,
) -> QcspInstance:
    """Random quantified instance; ``pattern`` such as ``"AE"`` fixes the block order."""
    inst = random_instance(rng, lang, n_vars, n_cons)
    if pattern is None:
        quants = [rng.choice((FORALL, EXISTS)) for _ in inst.variables]
    else:
        # Split the variables into len(pattern) non-empty consecutive blocks.
        k = len(pattern)
        if n_vars < k:
            raise ValueError("need at least one variable per block")
        cuts = sorted(rng.sample(range(1, n_vars), k - 1)) if k > 1 else []
        bounds = [0] + cuts + [n_vars]
        quants = []
        for b, q in enumerate(pattern):
            quants.extend([q] * (bounds[b + 1] - bounds[b]))
    return QcspInstance(lang, tuple(zip(quants, inst.variables)), inst.constraints)
