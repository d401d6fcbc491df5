"""Domain model: relations, operations, constraint languages and instances.

Domain values are the integers ``0 .. d-1``; for boolean languages 0 is
false and 1 is true.  Every object here is immutable after construction.
"""

from __future__ import annotations

import itertools
import os
import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import BudgetExceeded, ParseError, ValidationError

FORALL = "A"
EXISTS = "E"

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_.'~@|*-]*$")


# --------------------------------------------------------------------------
# Budgets
# --------------------------------------------------------------------------


@dataclass
class Budget:
    """Hard limits for exhaustive procedures.

    Override with the ``BOOLCSP_BUDGET`` environment variable, e.g.
    ``BOOLCSP_BUDGET="max_vars=22,max_tables=1048576"``.
    """

    max_vars: int = 20
    max_tables: int = 65536
    max_partition_vars: int = 10
    max_family_vars: int = 64

    @classmethod
    def from_env(cls) -> "Budget":
        budget = cls()
        spec = os.environ.get("BOOLCSP_BUDGET", "").strip()
        if not spec:
            return budget
        for item in spec.split(","):
            key, _, value = item.partition("=")
            key = key.strip()
            if not hasattr(budget, key):
                raise ValidationError(f"unknown budget key {key!r} in BOOLCSP_BUDGET")
            setattr(budget, key, int(value))
        return budget


BUDGET = Budget.from_env()


def check_search_budget(domain_size: int, n_vars: int, what: str = "assignments") -> None:
    limit = domain_size ** BUDGET.max_vars if domain_size > 1 else 1
    if domain_size**n_vars > limit:
        raise BudgetExceeded(
            f"{domain_size}^{n_vars} {what} exceeds budget "
            f"(max_vars={BUDGET.max_vars} at d={domain_size})"
        )


# --------------------------------------------------------------------------
# Relations and operations
# --------------------------------------------------------------------------


def tuple_rank(t: Sequence[int], d: int) -> int:
    """Lexicographic rank of ``t`` in ``D^len(t)`` (first coordinate most significant)."""
    r = 0
    for x in t:
        r = r * d + x
    return r


def unrank(r: int, d: int, k: int) -> tuple[int, ...]:
    out = [0] * k
    for i in range(k - 1, -1, -1):
        r, out[i] = divmod(r, d)
    return tuple(out)


def all_tuples(d: int, k: int) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(d), repeat=k)


@dataclass(frozen=True)
class Relation:
    """A named subset of ``D^arity`` stored as a sorted, deduplicated tuple table."""

    name: str
    arity: int
    tuples: tuple[tuple[int, ...], ...]
    domain_size: int = 2
    _members: frozenset = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not isinstance(self.arity, int) or self.arity < 1:
            raise ValidationError(f"relation {self.name}: arity must be a positive integer")
        if self.domain_size < 2:
            raise ValidationError(f"relation {self.name}: domain size must be at least 2")
        cleaned = set()
        for t in self.tuples:
            t = tuple(int(x) for x in t)
            if len(t) != self.arity:
                raise ValidationError(
                    f"relation {self.name}: tuple {t} has length {len(t)}, expected {self.arity}"
                )
            for x in t:
                if not 0 <= x < self.domain_size:
                    raise ValidationError(
                        f"relation {self.name}: value {x} outside domain 0..{self.domain_size - 1}"
                    )
            cleaned.add(t)
        object.__setattr__(self, "tuples", tuple(sorted(cleaned)))
        object.__setattr__(self, "_members", frozenset(cleaned))

    @classmethod
    def from_predicate(cls, name, arity, pred, domain_size=2) -> "Relation":
        return cls(name, arity, tuple(t for t in all_tuples(domain_size, arity) if pred(*t)), domain_size)

    @classmethod
    def full(cls, name, arity, domain_size=2) -> "Relation":
        return cls(name, arity, tuple(all_tuples(domain_size, arity)), domain_size)

    def __contains__(self, t) -> bool:
        return tuple(t) in self._members

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self):
        return iter(self.tuples)

    def renamed(self, name: str) -> "Relation":
        return Relation(name, self.arity, self.tuples, self.domain_size)

    def same_tuples(self, other: "Relation") -> bool:
        return self.arity == other.arity and self._members == other._members

    def membership_bytes(self) -> bytes:
        """Indicator vector over ``D^arity`` in lexicographic rank order."""
        d = self.domain_size
        buf = bytearray(d**self.arity)
        for t in self.tuples:
            buf[tuple_rank(t, d)] = 1
        return bytes(buf)


@dataclass(frozen=True)
class Operation:
    """A finitary operation ``D^arity -> D`` given by its value table.

    ``table[r]`` is the value on the input tuple of lexicographic rank ``r``.
    Identity is table equality; ``name`` is cosmetic.
    """

    arity: int
    table: tuple[int, ...]
    domain_size: int = 2
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.arity < 1:
            raise ValidationError("operation arity must be positive")
        table = tuple(int(x) for x in self.table)
        if len(table) != self.domain_size**self.arity:
            raise ValidationError(
                f"operation table has {len(table)} entries, expected {self.domain_size ** self.arity}"
            )
        if any(not 0 <= x < self.domain_size for x in table):
            raise ValidationError("operation table value outside the domain")
        object.__setattr__(self, "table", table)

    @classmethod
    def from_function(cls, arity, fn, domain_size=2, name=None) -> "Operation":
        return cls(arity, tuple(fn(*t) for t in all_tuples(domain_size, arity)), domain_size, name)

    def __call__(self, *args: int) -> int:
        return self.table[tuple_rank(args, self.domain_size)]

    def __repr__(self):
        label = f"{self.name}, " if self.name else ""
        return f"Operation({label}arity={self.arity}, table={''.join(map(str, self.table))})"


def apply_coordinatewise(f: Operation, ts: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Apply ``f`` to ``f.arity`` equal-length tuples column by column."""
    if len(ts) != f.arity:
        raise ValidationError(f"operation of arity {f.arity} applied to {len(ts)} tuples")
    if not ts:
        return ()
    k = len(ts[0])
    if any(len(t) != k for t in ts):
        raise ValidationError("tuples of unequal arity")
    return tuple(f(*(t[j] for t in ts)) for j in range(k))


# --------------------------------------------------------------------------
# Languages, constraints, instances
# --------------------------------------------------------------------------


class ConstraintLanguage:
    """A set of relations over one domain, addressed by name."""

    def __init__(self, relations: Iterable[Relation] = (), domain_size: int = 2):
        rels: dict[str, Relation] = {}
        for r in relations:
            if r.domain_size != domain_size:
                raise ValidationError(
                    f"relation {r.name} has domain size {r.domain_size}, language has {domain_size}"
                )
            if r.name in rels:
                raise ValidationError(f"duplicate relation name {r.name!r}")
            rels[r.name] = r
        self.domain_size = domain_size
        self.relations: Mapping[str, Relation] = MappingProxyType(rels)

    def __getitem__(self, name: str) -> Relation:
        try:
            return self.relations[name]
        except KeyError:
            raise ValidationError(f"unknown relation {name!r}") from None

    def __contains__(self, name) -> bool:
        return name in self.relations

    def __iter__(self):
        return iter(self.relations.values())

    def __len__(self):
        return len(self.relations)

    def __eq__(self, other):
        if not isinstance(other, ConstraintLanguage):
            return NotImplemented
        return self.domain_size == other.domain_size and dict(self.relations) == dict(other.relations)

    def __hash__(self):
        return hash((self.domain_size, tuple(sorted(self.relations))))

    def __repr__(self):
        return f"ConstraintLanguage(d={self.domain_size}, relations={list(self.relations)})"

    def with_relations(self, extra: Iterable[Relation]) -> "ConstraintLanguage":
        merged = dict(self.relations)
        for r in extra:
            merged[r.name] = r
        return ConstraintLanguage(merged.values(), self.domain_size)


@dataclass(frozen=True)
class Constraint:
    relation: str
    vars: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))

    def __str__(self):
        return f"{self.relation}({', '.join(self.vars)})"


def _check_constraints(language: ConstraintLanguage, variables, constraints):
    known = set(variables)
    if len(known) != len(variables):
        raise ValidationError("duplicate variable in variable list")
    for c in constraints:
        rel = language[c.relation]
        if len(c.vars) != rel.arity:
            raise ValidationError(
                f"constraint {c}: {len(c.vars)} variables for relation of arity {rel.arity}"
            )
        for v in c.vars:
            if v not in known:
                raise ValidationError(f"constraint {c}: undeclared variable {v!r}")


@dataclass(frozen=True)
class CspInstance:
    language: ConstraintLanguage
    variables: tuple[str, ...]
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        _check_constraints(self.language, self.variables, self.constraints)

    def satisfied_by(self, assignment: Mapping[str, int]) -> bool:
        return all(eval_constraint(c, self.language, assignment) for c in self.constraints)


@dataclass(frozen=True)
class QcspInstance:
    """A quantified instance; ``prefix`` is a sequence of ``("A"|"E", var)``."""

    language: ConstraintLanguage
    prefix: tuple[tuple[str, str], ...]
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        prefix = tuple((q, v) for q, v in self.prefix)
        for q, v in prefix:
            if q not in (FORALL, EXISTS):
                raise ValidationError(f"unknown quantifier {q!r}")
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "constraints", tuple(self.constraints))
        _check_constraints(self.language, self.variables, self.constraints)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for _, v in self.prefix)

    def matrix(self) -> CspInstance:
        return CspInstance(self.language, self.variables, self.constraints)

    def quantifier(self, var: str) -> str:
        for q, v in self.prefix:
            if v == var:
                return q
        raise KeyError(var)


def eval_constraint(c: Constraint, lang: ConstraintLanguage, a: Mapping[str, int]) -> bool:
    rel = lang[c.relation]
    try:
        values = tuple(a[v] for v in c.vars)
    except KeyError as exc:
        raise ValidationError(f"constraint {c}: variable {exc.args[0]!r} is unassigned") from None
    return values in rel


# --------------------------------------------------------------------------
# Text formats
# --------------------------------------------------------------------------


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if line.strip():
            yield lineno, raw, line


def _col(raw: str, token: str) -> int:
    return raw.find(token) + 1 if token in raw else 1


def _int(token, lineno, raw, what):
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {token!r}", lineno, _col(raw, token)) from None


def _ident(token, lineno, raw, what):
    if not _IDENT.match(token):
        raise ParseError(f"invalid {what} {token!r}", lineno, _col(raw, token))
    return token


def _parse_tuple(token, d, arity, lineno, raw, name):
    if "," in token:
        parts = token.split(",")
        try:
            values = tuple(int(p) for p in parts)
        except ValueError:
            raise ParseError(f"bad tuple {token!r}", lineno, _col(raw, token)) from None
    else:
        if not token.isdigit():
            raise ParseError(f"bad tuple {token!r}", lineno, _col(raw, token))
        values = tuple(int(ch) for ch in token)
    if len(values) != arity:
        raise ParseError(
            f"tuple {token!r} has length {len(values)} but relation {name} has arity {arity}",
            lineno,
            _col(raw, token),
        )
    for x in values:
        if x >= d:
            raise ParseError(f"value {x} in tuple {token!r} outside domain 0..{d - 1}", lineno, _col(raw, token))
    return values


def parse_language(text: str, source: str | None = None) -> ConstraintLanguage:
    """Parse the line-oriented language format (``domain``/``relation`` blocks)."""
    d = None
    blocks: list[list] = []
    seen: set[str] = set()
    for lineno, raw, line in _lines(text):
        tokens = line.split()
        head = tokens[0]
        if head == "domain":
            if d is not None:
                raise ParseError("duplicate domain declaration", lineno, 1, source)
            if len(tokens) != 2:
                raise ParseError("expected 'domain <d>'", lineno, 1, source)
            d = _int(tokens[1], lineno, raw, "domain size")
            if d < 2:
                raise ParseError("domain size must be at least 2", lineno, _col(raw, tokens[1]), source)
        elif head == "relation":
            if d is None:
                raise ParseError("relation before domain declaration", lineno, 1, source)
            if len(tokens) != 3:
                raise ParseError("expected 'relation <name> <arity>'", lineno, 1, source)
            name = _ident(tokens[1], lineno, raw, "relation name")
            arity = _int(tokens[2], lineno, raw, "arity")
            if arity < 1:
                raise ParseError("arity must be at least 1", lineno, _col(raw, tokens[2]), source)
            if name in seen:
                raise ParseError(f"duplicate relation name {name!r}", lineno, _col(raw, name), source)
            seen.add(name)
            blocks.append([name, arity, []])
        else:
            if not blocks:
                raise ParseError(f"unexpected token {head!r}", lineno, _col(raw, head), source)
            name, arity, tuples = blocks[-1]
            try:
                for tok in tokens:
                    tuples.append(_parse_tuple(tok, d, arity, lineno, raw, name))
            except ParseError as exc:
                exc.source = source
                raise
    if d is None:
        raise ParseError("missing 'domain <d>' line", None, None, source)
    return ConstraintLanguage((Relation(n, a, tuple(ts), d) for n, a, ts in blocks), d)


def format_tuple(t: Sequence[int], d: int) -> str:
    if d <= 10:
        return "".join(str(x) for x in t)
    return ",".join(str(x) for x in t)


def serialize_language(lang: ConstraintLanguage) -> str:
    out = [f"domain {lang.domain_size}"]
    for rel in lang:
        out.append(f"relation {rel.name} {rel.arity}")
        out.extend(format_tuple(t, lang.domain_size) for t in rel.tuples)
    return "\n".join(out) + "\n"


def _parse_instance_body(text, source):
    variables = None
    constraints = []
    prefix = None
    for lineno, raw, line in _lines(text):
        tokens = line.split()
        head = tokens[0]
        if head == "vars":
            if variables is not None:
                raise ParseError("duplicate 'vars' line", lineno, 1, source)
            variables = [_ident(t, lineno, raw, "variable") for t in tokens[1:]]
        elif head == "constraint":
            if len(tokens) < 3:
                raise ParseError("expected 'constraint <relation> <var>...'", lineno, 1, source)
            constraints.append(
                (lineno, Constraint(tokens[1], tuple(_ident(t, lineno, raw, "variable") for t in tokens[2:])))
            )
        elif head == "prefix":
            if prefix is not None:
                raise ParseError("duplicate 'prefix' line", lineno, 1, source)
            rest = tokens[1:]
            if len(rest) % 2:
                raise ParseError("prefix must alternate quantifier and variable tokens", lineno, 1, source)
            prefix = []
            for q, v in zip(rest[::2], rest[1::2]):
                if q not in (FORALL, EXISTS):
                    raise ParseError(f"unknown quantifier {q!r} (use A or E)", lineno, _col(raw, q), source)
                prefix.append((q, _ident(v, lineno, raw, "variable")))
        else:
            raise ParseError(f"unexpected token {head!r}", lineno, _col(raw, head), source)
    return variables, constraints, prefix


def _validated(build, constraints, source):
    try:
        return build()
    except ValidationError as exc:
        # Locate the offending constraint line when possible.
        for lineno, c in constraints:
            if str(c) in str(exc):
                raise ParseError(str(exc), lineno, 1, source) from None
        raise


def parse_instance(text: str, lang: ConstraintLanguage, source: str | None = None) -> CspInstance:
    variables, constraints, prefix = _parse_instance_body(text, source)
    if prefix is not None:
        raise ParseError("CSP instance must not have a prefix line (use a QCSP file)", None, None, source)
    if variables is None:
        raise ParseError("missing 'vars' line", None, None, source)
    return _validated(
        lambda: CspInstance(lang, tuple(variables), tuple(c for _, c in constraints)), constraints, source
    )


def parse_qcsp(text: str, lang: ConstraintLanguage, source: str | None = None) -> QcspInstance:
    variables, constraints, prefix = _parse_instance_body(text, source)
    if prefix is None:
        raise ParseError("missing 'prefix' line", None, None, source)
    pvars = [v for _, v in prefix]
    if len(set(pvars)) != len(pvars):
        raise ParseError("variable quantified twice in prefix", None, None, source)
    if variables is not None and sorted(variables) != sorted(pvars):
        raise ParseError("prefix must quantify every declared variable exactly once", None, None, source)
    return _validated(
        lambda: QcspInstance(lang, tuple(prefix), tuple(c for _, c in constraints)), constraints, source
    )


def serialize_instance(inst: CspInstance | QcspInstance) -> str:
    out = ["vars " + " ".join(inst.variables) if inst.variables else "vars"]
    if isinstance(inst, QcspInstance):
        out.append("prefix " + " ".join(f"{q} {v}" for q, v in inst.prefix) if inst.prefix else "prefix")
    out.extend(f"constraint {c.relation} {' '.join(c.vars)}" for c in inst.constraints)
    return "\n".join(out) + "\n"
