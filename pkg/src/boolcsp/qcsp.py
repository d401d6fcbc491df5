"""Prefix patterns and Π2 decision by restricted families of universal assignments."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .algebra import schaefer_witnesses
from .core import (
    BUDGET,
    EXISTS,
    FORALL,
    Constraint,
    ConstraintLanguage,
    CspInstance,
    QcspInstance,
    Relation,
)
from .errors import BudgetExceeded, PreconditionError, ValidationError
from .solvers import dispatch_solve

# --------------------------------------------------------------------------
# Prefix patterns
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PrefixPattern:
    """Maximal blocks of equal quantifiers, as ``(quantifier, count)`` pairs."""

    blocks: tuple[tuple[str, int], ...]

    def __post_init__(self):
        for (q1, _), (q2, _) in zip(self.blocks, self.blocks[1:]):
            if q1 == q2:
                raise ValidationError("adjacent prefix blocks must alternate")
        if any(c < 1 for _, c in self.blocks):
            raise ValidationError("prefix block counts must be positive")

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def kind(self) -> str:
        """``"P"`` when the outermost block is universal, else ``"S"`` (also for the empty prefix)."""
        return "P" if self.blocks and self.blocks[0][0] == FORALL else "S"

    @property
    def label(self) -> str:
        return ("Π" if self.kind == "P" else "Σ") + str(self.k)

    @property
    def pattern(self) -> str:
        return "".join("∀" if q == FORALL else "∃" for q, _ in self.blocks)


def prefix_pattern(q: QcspInstance | Sequence[tuple[str, str]]) -> PrefixPattern:
    prefix = q.prefix if isinstance(q, QcspInstance) else q
    blocks = [(quant, len(list(group))) for quant, group in itertools.groupby(p[0] for p in prefix)]
    return PrefixPattern(tuple(blocks))


# --------------------------------------------------------------------------
# Assignment families
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AssignmentFamily:
    """Union of the sets ``[<= j, b]``: assignments sending at most ``j`` variables to ``b``."""

    components: tuple[tuple[int, int], ...]

    def __post_init__(self):
        comps = tuple(sorted({(int(j), int(b)) for j, b in self.components}))
        for j, b in comps:
            if j < 0 or b not in (0, 1):
                raise ValidationError(f"bad family component [<={j},{b}]")
        if not comps:
            raise ValidationError("a family needs at least one component")
        object.__setattr__(self, "components", comps)

    @classmethod
    def parse(cls, text: str) -> "AssignmentFamily":
        """Parse e.g. ``"<=1,0 | <=0,1"`` or ``"[<=2,false]"``."""
        comps = []
        for part in text.split("|"):
            part = part.strip().strip("[]").strip()
            if not part.startswith("<="):
                raise ValidationError(f"family component {part!r} must look like '<=j,b'")
            j, _, b = part[2:].partition(",")
            b = b.strip().lower()
            bit = {"0": 0, "false": 0, "1": 1, "true": 1}.get(b)
            if bit is None or not j.strip().isdigit():
                raise ValidationError(f"family component {part!r} must look like '<=j,b'")
            comps.append((int(j), bit))
        return cls(tuple(comps))

    def __str__(self):
        return " | ".join(f"[<={j},{'true' if b else 'false'}]" for j, b in self.components)

    def covers(self, other: "AssignmentFamily") -> bool:
        """Componentwise containment: each component of ``other`` sits inside one of ours."""
        return all(any(b2 == b and j2 >= j for j2, b2 in self.components) for j, b in other.components)

    def size(self, m: int) -> int:
        return len(enumerate_family(self, [str(i) for i in range(m)]))


LEQ1_FALSE = AssignmentFamily(((1, 0),))
LEQ1_TRUE = AssignmentFamily(((1, 1),))
LEQ2_FALSE = AssignmentFamily(((2, 0),))
LEQ2_TRUE = AssignmentFamily(((2, 1),))
LEQ1_FALSE_LEQ0_TRUE = AssignmentFamily(((1, 0), (0, 1)))
LEQ1_TRUE_LEQ0_FALSE = AssignmentFamily(((1, 1), (0, 0)))

# Minimal families proven sufficient for each QCSP-tractable polymorphism.
SOUND_BASES = {
    "and": (LEQ1_FALSE,),
    "or": (LEQ1_TRUE,),
    "majority": (LEQ2_FALSE, LEQ2_TRUE, LEQ1_FALSE_LEQ0_TRUE, LEQ1_TRUE_LEQ0_FALSE),
    "minority": (LEQ1_FALSE, LEQ1_TRUE),
}

DEFAULT_FAMILY = {"and": LEQ1_FALSE, "or": LEQ1_TRUE, "majority": LEQ2_FALSE, "minority": LEQ2_FALSE}


def enumerate_family(fam: AssignmentFamily, Y: Sequence[str]) -> list[dict[str, int]]:
    """Members of ``fam`` over ``Y``, deduplicated and in lexicographic order."""
    m = len(Y)
    if m > BUDGET.max_family_vars:
        raise BudgetExceeded(f"{m} universal variables exceeds max_family_vars={BUDGET.max_family_vars}")
    seen = set()
    for j, b in fam.components:
        for size in range(min(j, m) + 1):
            for pos in itertools.combinations(range(m), size):
                t = [1 - b] * m
                for p in pos:
                    t[p] = b
                seen.add(tuple(t))
    return [dict(zip(Y, t)) for t in sorted(seen)]


def is_sound_family(fam: AssignmentFamily, witnesses: Sequence[str]) -> bool:
    return any(fam.covers(base) for w in witnesses for base in SOUND_BASES.get(w, ()))


def default_family(witnesses: Sequence[str]) -> AssignmentFamily:
    for w in ("and", "or", "majority", "minority"):
        if w in witnesses:
            return DEFAULT_FAMILY[w]
    raise PreconditionError("no Π2 family: none of and/or/majority/minority is a polymorphism")


# --------------------------------------------------------------------------
# Residual instances and the decision procedure
# --------------------------------------------------------------------------


def residual_instance(q: QcspInstance, fixed: dict[str, int]) -> CspInstance | None:
    """The CSP left after substituting ``fixed`` into the matrix.

    Each constraint becomes a constraint on its unfixed variables over the
    slice of its relation at the fixed values; a constraint with every
    variable fixed is checked directly and ``None`` is returned if it fails.
    """
    rels: dict[str, Relation] = {}
    cons = []
    free_vars = [v for v in q.variables if v not in fixed]
    d = q.language.domain_size
    for c in q.constraints:
        rel = q.language[c.relation]
        free = [j for j, v in enumerate(c.vars) if v not in fixed]
        if not free:
            if tuple(fixed[v] for v in c.vars) not in rel:
                return None
            continue
        tag = "".join(str(fixed[v]) if v in fixed else "_" for v in c.vars)
        name = rel.name if len(free) == len(c.vars) else f"{rel.name}|{tag}"
        if name not in rels:
            rows = tuple(
                tuple(t[j] for j in free)
                for t in rel.tuples
                if all(t[j] == fixed[v] for j, v in enumerate(c.vars) if v in fixed)
            )
            rels[name] = Relation(name, len(free), rows, d)
        cons.append(Constraint(name, tuple(c.vars[j] for j in free)))
    return CspInstance(ConstraintLanguage(rels.values(), d), tuple(free_vars), tuple(cons))


def _dispatch_base(inst: CspInstance):
    return dispatch_solve(inst).assignment


@dataclass(frozen=True)
class Pi2Outcome:
    value: bool
    family: AssignmentFamily
    members_checked: int
    counterexample: dict[str, int] | None = None
    witnesses: tuple[str, ...] = field(default=())


def pi2_decide(
    q: QcspInstance,
    fam: AssignmentFamily | None = None,
    base: Callable[[CspInstance], dict | None] | None = None,
    check_soundness: bool = True,
) -> Pi2Outcome:
    """Decide a ``∀Y ∃X`` formula by checking only the family members over ``Y``.

    The formula is true iff every member's residual CSP over ``X`` is
    satisfiable.  The first failing member (in lexicographic order) is
    returned as a counterexample.
    """
    if q.language.domain_size != 2:
        raise PreconditionError("Π2 families are defined for the boolean domain")
    pat = prefix_pattern(q)
    if pat.pattern not in ("", "∀", "∃", "∀∃"):
        raise PreconditionError(f"prefix class {pat.label} (pattern {pat.pattern}) is not Π2")
    witnesses = tuple(w for w in schaefer_witnesses(q.language) if w in SOUND_BASES)
    if fam is None:
        fam = default_family(witnesses)
    elif check_soundness and not is_sound_family(fam, witnesses):
        raise PreconditionError(
            f"family {fam} is not known to be sound for witnesses {list(witnesses) or 'none'}"
        )
    base = base or _dispatch_base
    Y = [v for qq, v in q.prefix if qq == FORALL]
    members = enumerate_family(fam, Y)
    for count, f in enumerate(members, 1):
        inst = residual_instance(q, f)
        if inst is None or base(inst) is None:
            return Pi2Outcome(False, fam, count, f, witnesses)
    return Pi2Outcome(True, fam, len(members), None, witnesses)


__all__ = [
    "PrefixPattern", "prefix_pattern", "AssignmentFamily", "enumerate_family", "pi2_decide",
    "Pi2Outcome", "residual_instance", "is_sound_family", "default_family", "SOUND_BASES",
    "LEQ1_FALSE", "LEQ1_TRUE", "LEQ2_FALSE", "LEQ2_TRUE", "LEQ1_FALSE_LEQ0_TRUE",
    "LEQ1_TRUE_LEQ0_FALSE", "EXISTS", "FORALL",
]
