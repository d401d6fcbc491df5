import os
import random
from pathlib import Path

import pytest
from hypothesis import settings

from boolcsp.core import Constraint, ConstraintLanguage, CspInstance, QcspInstance, Relation

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("default", max_examples=60, deadline=None)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def fixtures():
    return FIXTURES


@pytest.fixture
def rng():
    return random.Random(1234)


def rel(name, rows, arity=None, d=2):
    """Relation from strings like ``"010"`` or tuples."""
    rows = [tuple(int(c) for c in r) if isinstance(r, str) else tuple(r) for r in rows]
    if arity is None:
        arity = len(rows[0])
    return Relation(name, arity, tuple(rows), d)


def csp(rels, variables, cons):
    """``cons`` is a list of ``(relation name, "x y z")``."""
    lang = rels if isinstance(rels, ConstraintLanguage) else ConstraintLanguage(rels, 2)
    return CspInstance(lang, tuple(variables), tuple(Constraint(r, tuple(vs.split())) for r, vs in cons))


def qcsp(rels, prefix, cons):
    """``prefix`` is a string like ``"A x E y"``."""
    lang = rels if isinstance(rels, ConstraintLanguage) else ConstraintLanguage(rels, 2)
    toks = prefix.split()
    pre = tuple(zip(toks[::2], toks[1::2]))
    return QcspInstance(lang, pre, tuple(Constraint(r, tuple(vs.split())) for r, vs in cons))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
