"""Quantified equality formulas over an infinite domain, decided through equality types."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence, Union

from .core import BUDGET, EXISTS, FORALL
from .errors import BudgetExceeded, ParseError, PreconditionError, ValidationError

# --------------------------------------------------------------------------
# Syntax
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EqAtom:
    """``left = right`` (``equal=True``) or ``left != right``."""

    left: str
    right: str
    equal: bool = True

    def __str__(self):
        return f"({self.left}{'=' if self.equal else '!='}{self.right})"


@dataclass(frozen=True)
class Not:
    sub: "EqFormula"

    def __str__(self):
        return f"!{self.sub}"


@dataclass(frozen=True)
class And:
    parts: tuple["EqFormula", ...]

    def __str__(self):
        return "(" + " & ".join(map(str, self.parts)) + ")" if self.parts else "true"


@dataclass(frozen=True)
class Or:
    parts: tuple["EqFormula", ...]

    def __str__(self):
        return "(" + " | ".join(map(str, self.parts)) + ")" if self.parts else "false"


EqFormula = Union[EqAtom, Not, And, Or]


def is_positive(phi: EqFormula) -> bool:
    """Built from ``=``, ``&`` and ``|`` only."""
    if isinstance(phi, EqAtom):
        return phi.equal
    if isinstance(phi, Not):
        return False
    return all(is_positive(p) for p in phi.parts)


def formula_vars(phi: EqFormula) -> set[str]:
    if isinstance(phi, EqAtom):
        return {phi.left, phi.right}
    if isinstance(phi, Not):
        return formula_vars(phi.sub)
    out: set[str] = set()
    for p in phi.parts:
        out |= formula_vars(p)
    return out


def count_atoms(phi: EqFormula, equal: bool | None = None) -> int:
    if isinstance(phi, EqAtom):
        return int(equal is None or phi.equal == equal)
    if isinstance(phi, Not):
        return count_atoms(phi.sub, equal)
    return sum(count_atoms(p, equal) for p in phi.parts)


@dataclass(frozen=True)
class QuantifiedEqFormula:
    """``Q_1 v_1 ... Q_n v_n matrix``; every matrix variable must be quantified."""

    prefix: tuple[tuple[str, str], ...]
    matrix: EqFormula

    def __post_init__(self):
        prefix = tuple((q, v) for q, v in self.prefix)
        object.__setattr__(self, "prefix", prefix)
        names = [v for _, v in prefix]
        if len(set(names)) != len(names):
            raise ValidationError("variable quantified twice")
        for q, _ in prefix:
            if q not in (FORALL, EXISTS):
                raise ValidationError(f"unknown quantifier {q!r}")
        free = formula_vars(self.matrix) - set(names)
        if free:
            raise ValidationError(f"unquantified variables in matrix: {sorted(free)}")

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for _, v in self.prefix)

    @property
    def is_positive(self) -> bool:
        return is_positive(self.matrix)

    def __str__(self):
        return "".join(f"{q} {v} . " for q, v in self.prefix) + str(self.matrix)


class PositiveQcsp(QuantifiedEqFormula):
    """A quantified equality formula whose matrix is positive."""

    def __post_init__(self):
        super().__post_init__()
        if not is_positive(self.matrix):
            raise PreconditionError("matrix is not positive (uses ! or !=)")


_TOKEN = re.compile(r"!=|[=&|!().]|[A-Za-z_][A-Za-z0-9_']*")


def _tokenize(text: str, source):
    pos, out = 0, []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            return out
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", 1, pos + 1, source)
        out.append((m.group(0), pos + 1))
        pos = m.end()


class _Parser:
    def __init__(self, text, source):
        self.toks = _tokenize(text, source)
        self.i = 0
        self.source = source

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, expected=None):
        if self.i >= len(self.toks):
            raise ParseError(f"unexpected end of input{'; expected ' + repr(expected) if expected else ''}",
                             1, None, self.source)
        tok, col = self.toks[self.i]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", 1, col, self.source)
        self.i += 1
        return tok

    def ident(self):
        tok, col = self.toks[self.i] if self.i < len(self.toks) else (None, None)
        if tok is None or not re.match(r"[A-Za-z_]", tok):
            raise ParseError(f"expected a variable, found {tok!r}", 1, col, self.source)
        self.i += 1
        return tok

    def quantified(self):
        prefix = []
        # 'A' and 'E' are also legal variable names; a prefix entry is 'Q v .'.
        while (
            self.peek() in (FORALL, EXISTS)
            and self.i + 2 < len(self.toks)
            and self.toks[self.i + 2][0] == "."
        ):
            q = self.take()
            v = self.ident()
            self.take(".")
            prefix.append((q, v))
        phi = self.disj()
        if self.peek() is not None:
            tok, col = self.toks[self.i]
            raise ParseError(f"unexpected token {tok!r}", 1, col, self.source)
        return prefix, phi

    def disj(self):
        parts = [self.conj()]
        while self.peek() == "|":
            self.take()
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self):
        parts = [self.unary()]
        while self.peek() == "&":
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self):
        if self.peek() == "!":
            self.take()
            return Not(self.unary())
        if self.peek() == "(":
            self.take()
            phi = self.disj()
            self.take(")")
            return phi
        left = self.ident()
        op = self.peek()
        if op not in ("=", "!="):
            col = self.toks[self.i][1] if self.i < len(self.toks) else None
            raise ParseError(f"expected '=' or '!=' after {left!r}", 1, col, self.source)
        self.take()
        return EqAtom(left, self.ident(), op == "=")


def parse_eq_formula(text: str, source: str | None = None) -> QuantifiedEqFormula:
    """Parse ``A x . E y . ((x=y) | !(x=z) & (y!=z))``; ``&`` binds tighter than ``|``."""
    prefix, phi = _Parser(text, source).quantified()
    return QuantifiedEqFormula(tuple(prefix), phi)


# --------------------------------------------------------------------------
# Semantics
# --------------------------------------------------------------------------


def _eval(phi: EqFormula, val: Mapping[str, int]) -> bool:
    if isinstance(phi, EqAtom):
        return (val[phi.left] == val[phi.right]) == phi.equal
    if isinstance(phi, Not):
        return not _eval(phi.sub, val)
    if isinstance(phi, And):
        return all(_eval(p, val) for p in phi.parts)
    return any(_eval(p, val) for p in phi.parts)


@dataclass(frozen=True)
class Partition:
    """Blocks of variables that take equal values."""

    blocks: tuple[frozenset, ...]

    def __post_init__(self):
        blocks = tuple(frozenset(b) for b in self.blocks)
        seen: set = set()
        for b in blocks:
            if not b:
                raise ValidationError("partition blocks must be non-empty")
            if seen & b:
                raise ValidationError("partition blocks must be disjoint")
            seen |= b
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_labels(cls, variables: Sequence[str], labels: Sequence[int]) -> "Partition":
        groups: dict[int, set] = {}
        for v, lab in zip(variables, labels):
            groups.setdefault(lab, set()).add(v)
        return cls(tuple(frozenset(groups[k]) for k in sorted(groups)))

    def labels(self) -> dict[str, int]:
        return {v: i for i, b in enumerate(self.blocks) for v in b}

    @property
    def variables(self) -> frozenset:
        out: set = set()
        for b in self.blocks:
            out |= b
        return frozenset(out)


def restricted_growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    """All set partitions of ``n`` items as restricted-growth strings, lexicographically."""
    if n == 0:
        yield ()
        return
    a = [0] * n
    while True:
        yield tuple(a)
        # Increment the rightmost position that may grow.
        i = n - 1
        while i > 0:
            if a[i] <= max(a[:i]):
                a[i] += 1
                for j in range(i + 1, n):
                    a[j] = 0
                break
            i -= 1
        else:
            return


def eval_under_partition(phi: EqFormula, p: Partition) -> bool:
    missing = formula_vars(phi) - p.variables
    if missing:
        raise ValidationError(f"partition does not cover {sorted(missing)}")
    return _eval(phi, p.labels())


def _budget(n: int) -> None:
    if n > BUDGET.max_partition_vars:
        raise BudgetExceeded(f"{n} variables exceeds max_partition_vars={BUDGET.max_partition_vars}")


def positive_qcsp_reduce(phi: QuantifiedEqFormula, allow_nonpositive: bool = False) -> QuantifiedEqFormula:
    """``∃v_1..∃v_n (matrix ∧ ⋀_{i<j, Q_j=∀} v_i != v_j)``.

    ``allow_nonpositive`` skips the positivity check so the failure of the
    equivalence on non-positive matrices can be demonstrated.
    """
    if not allow_nonpositive and not phi.is_positive:
        raise PreconditionError("matrix is not positive (uses ! or !=)")
    vs = phi.variables
    diseq = tuple(
        EqAtom(vs[i], vs[j], False)
        for j, (q, _) in enumerate(phi.prefix)
        if q == FORALL
        for i in range(j)
    )
    matrix = And((phi.matrix,) + diseq) if diseq else phi.matrix
    return QuantifiedEqFormula(tuple((EXISTS, v) for v in vs), matrix)


def satisfying_partition(phi: QuantifiedEqFormula) -> Partition | None:
    """First partition (restricted-growth order) satisfying the matrix, prefix ignored."""
    vs = phi.variables
    _budget(len(vs))
    for rgs in restricted_growth_strings(len(vs)):
        val = dict(zip(vs, rgs))
        if _eval(phi.matrix, val):
            return Partition.from_labels(vs, rgs)
    return None


def decide_positive_qcsp(phi: QuantifiedEqFormula) -> bool:
    """Truth over an infinite domain via satisfiability of the existential reduct."""
    return satisfying_partition(positive_qcsp_reduce(phi)) is not None


def game_oracle_eval(phi: QuantifiedEqFormula) -> bool:
    """Game-tree evaluation where each variable equals an earlier value or is fresh."""
    vs = phi.variables
    _budget(len(vs))
    val: dict[str, int] = {}

    def rec(i: int, used: int) -> bool:
        if i == len(vs):
            return _eval(phi.matrix, val)
        q, v = phi.prefix[i]
        for lab in range(used + 1):
            val[v] = lab
            r = rec(i + 1, max(used, lab + 1))
            if q == FORALL and not r:
                return False
            if q == EXISTS and r:
                return True
        return q == FORALL

    return rec(0, 0)


NON_POSITIVE_COUNTEREXAMPLE = "E x . A y . (x != y)"
