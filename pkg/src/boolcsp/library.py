"""Named boolean languages and clause-based instance builders."""

from __future__ import annotations

from typing import Iterable, Sequence

from .core import EXISTS, FORALL, Constraint, ConstraintLanguage, CspInstance, QcspInstance, Relation


def clause_relation(signs: Sequence[bool], name: str | None = None) -> Relation:
    """Relation of the clause with the given literal polarities (``True`` = positive).

    It excludes exactly the tuple that falsifies every literal.
    """
    bad = tuple(0 if s else 1 for s in signs)
    name = name or "cl_" + "".join("P" if s else "N" for s in signs)
    return Relation.from_predicate(name, len(signs), lambda *t: t != bad)


def _rel(name, arity, pred):
    return Relation.from_predicate(name, arity, pred)


EQ = _rel("EQ", 2, lambda x, y: x == y)
NEQ = _rel("NEQ", 2, lambda x, y: x != y)
C0 = Relation("C0", 1, ((0,),))
C1 = Relation("C1", 1, ((1,),))
IMP = _rel("IMP", 2, lambda x, y: (not x) or y)
EMPTY = Relation("EMPTY", 1, ())
XOR3 = _rel("XOR3", 3, lambda x, y, z: (x ^ y ^ z) == 1)
R03 = clause_relation((True, True, True), "R03")
R13 = clause_relation((False, True, True), "R13")
R23 = clause_relation((False, False, True), "R23")
R33 = clause_relation((False, False, False), "R33")
NAE = _rel("NAE", 3, lambda x, y, z: not (x == y == z))
ONE_IN_THREE = _rel("ONEIN3", 3, lambda x, y, z: x + y + z == 1)
S_EQ = _rel("S", 3, lambda a, b, c: a == b or b == c)

HORN3 = clause_relation((False, False, True), "H3")
DUAL_HORN3 = clause_relation((True, True, False), "DH3")
OR2 = clause_relation((True, True), "OR2")
NAND2 = clause_relation((False, False), "NAND2")


def language(*rels: Relation) -> ConstraintLanguage:
    return ConstraintLanguage(rels, 2)


NAMED_LANGUAGES: dict[str, ConstraintLanguage] = {
    "gamma3": language(R03, R13, R23, R33),
    "nae": language(NAE),
    "one-in-three": language(ONE_IN_THREE),
    "c0c1s": language(C0, C1, S_EQ),
    "horn": language(IMP, C0, C1, HORN3),
    "dual-horn": language(IMP, C0, C1, DUAL_HORN3),
    "two-sat": language(OR2, IMP, NAND2, C0, C1),
    "affine": language(EQ, NEQ, C0, C1, XOR3),
    "const0": language(R13, R23, R33, EMPTY),
    "const1": language(R03, R13, R23, EMPTY),
    "empty": language(),
}

# A language for each dispatch method, in dispatch priority order.
DISPATCH_CLASSES = {
    "const0": "const0",
    "const1": "const1",
    "ac-and": "horn",
    "ac-or": "dual-horn",
    "majority": "two-sat",
    "minority": "affine",
}


def parse_literal(lit: str) -> tuple[str, bool]:
    lit = lit.strip()
    if lit[:1] in ("-", "~", "!", "¬"):
        return lit[1:].strip(), False
    return lit, True


def clauses_instance(clauses: Iterable[Sequence[str]], variables: Sequence[str] | None = None) -> CspInstance:
    """CSP instance with one ``cl_<signs>`` constraint per clause; ``-v`` is a negative literal."""
    parsed = [[parse_literal(lit) for lit in cl] for cl in clauses]
    if variables is None:
        seen: dict[str, None] = {}
        for cl in parsed:
            for v, _ in cl:
                seen.setdefault(v)
        variables = list(seen)
    rels: dict[str, Relation] = {}
    cons = []
    for cl in parsed:
        rel = clause_relation([s for _, s in cl])
        rels.setdefault(rel.name, rel)
        cons.append(Constraint(rel.name, tuple(v for v, _ in cl)))
    return CspInstance(ConstraintLanguage(rels.values(), 2), tuple(variables), tuple(cons))


def clauses_qcsp(prefix: Sequence[tuple[str, str]], clauses: Iterable[Sequence[str]]) -> QcspInstance:
    inst = clauses_instance(clauses, [v for _, v in prefix])
    return QcspInstance(inst.language, tuple(prefix), inst.constraints)


# Worked formulas from the introduction.
SAT_EXAMPLE = [["s", "t"], ["-s"], ["-u", "s", "-t"], ["-s", "t"]]
TWO_SAT_EXAMPLE = [["-u", "v"], ["-u", "-v"], ["-v", "w"], ["-w", "t"], ["-t", "v"]]
HORN_EXAMPLE = [["-y", "x1"], ["-y'", "-x1", "y"], ["-x2", "-y"], ["-x1", "x2"]]
Q2SAT_PREFIX = [(FORALL, "v"), (FORALL, "t"), (EXISTS, "u"), (EXISTS, "w")]
QHORN_PREFIX = [(FORALL, "y"), (FORALL, "y'"), (FORALL, "y''"), (EXISTS, "x1"), (EXISTS, "x2")]
QHORN_CLAUSES = [["-y", "x1"], ["-y'", "-x1", "y"], ["-x2", "-y"], ["-y''", "-x1", "x2"]]


def sat_example() -> CspInstance:
    return clauses_instance(SAT_EXAMPLE, ["s", "t", "u"])


def two_sat_example() -> CspInstance:
    return clauses_instance(TWO_SAT_EXAMPLE, ["u", "v", "w", "t"])


def horn_example() -> CspInstance:
    return clauses_instance(HORN_EXAMPLE, ["y", "y'", "x1", "x2"])


def quantified_two_sat_example() -> QcspInstance:
    return clauses_qcsp(Q2SAT_PREFIX, TWO_SAT_EXAMPLE)


def quantified_horn_example() -> QcspInstance:
    return clauses_qcsp(QHORN_PREFIX, QHORN_CLAUSES)
