import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from boolcsp.algebra import CONST0, CONST1, NOT, is_polymorphism
from boolcsp.core import EXISTS, FORALL, Constraint, ConstraintLanguage, Relation, all_tuples
from boolcsp.corpus import random_instance, random_language, random_qcsp, random_relation
from boolcsp.errors import PreconditionError, ValidationError
from boolcsp.library import EQ, NAMED_LANGUAGES, NEQ
from boolcsp.oracle import brute_eval_qcsp, brute_solve, pp_closure
from boolcsp.reductions import (
    CONSTANT_FALSE,
    Eq,
    FewDefinition,
    PpDefinition,
    bounded_alt_reduce,
    check_spread_expression,
    definition_relation,
    identity_definition,
    inline_reduce_csp,
    inline_reduce_qcsp,
    lift_language,
    lift_with_constants,
    negation_closure,
    negation_instance,
    spread_express,
    synthesize_pp_definition,
)

from conftest import csp, qcsp, rel

GAMMA3 = NAMED_LANGUAGES["gamma3"]


# pp-definitions


def test_synthesize_neq_over_gamma3():
    defn = synthesize_pp_definition(NEQ, GAMMA3)
    assert defn is not None and defn.is_pp
    # Four points of {0,1}^2; the columns (0,1) and (1,0) are free.
    assert defn.free_vars == ("p01", "p10")
    assert defn.bound_vars == ("p00", "p11")
    assert definition_relation(defn, GAMMA3).same_tuples(NEQ)


def test_hand_written_neq_definition_over_gamma3():
    # R03(y,z,z) is y or z, R33(y,z,z) is not-y or not-z; together they say y != z.
    body = (Constraint("R03", ("y", "z", "z")), Constraint("R33", ("y", "z", "z")))
    defn = PpDefinition("NEQ", ("y", "z"), (), body)
    assert definition_relation(defn, GAMMA3).same_tuples(NEQ)


def test_synthesize_equality_uses_one_equality_atom():
    for lang in (ConstraintLanguage([]), GAMMA3, NAMED_LANGUAGES["affine"]):
        defn = synthesize_pp_definition(EQ, lang)
        assert defn is not None
        assert sum(isinstance(a, Eq) for a in defn.body) == 1
    bare = synthesize_pp_definition(EQ, ConstraintLanguage([]))
    assert bare.body == (Eq("p01~1", "p01"),)


def test_synthesize_fails_outside_the_closure():
    R = rel("R", ["01"])
    lang = ConstraintLanguage([EQ])
    assert not pp_closure(R, lang).same_tuples(R)
    assert synthesize_pp_definition(R, lang) is None


def test_definition_validation():
    with pytest.raises(ValidationError):
        PpDefinition("R", ("x",), (), (Constraint("EQ", ("x", "y")),))
    with pytest.raises(ValidationError):
        PpDefinition("R", ("x", "x"), (), ())


# Inlining


def test_inline_neq_into_gamma3():
    defn = synthesize_pp_definition(NEQ, GAMMA3)
    inst = csp([NEQ], ["a", "b"], [("NEQ", "a b")])
    out = inline_reduce_csp(inst, {"NEQ": defn}, GAMMA3)
    assert out.language is GAMMA3
    assert (brute_solve(out) is None) == (brute_solve(inst) is None)
    tri = csp([NEQ], ["a", "b", "c"], [("NEQ", "a b"), ("NEQ", "b c"), ("NEQ", "a c")])
    assert brute_solve(inline_reduce_csp(tri, {"NEQ": defn}, GAMMA3)) is None


def test_inline_identity_definitions():
    lang = NAMED_LANGUAGES["horn"]
    inst = csp(lang, ["a", "b", "c"], [("H3", "a b c"), ("IMP", "c a")])
    defs = {r.name: identity_definition(r) for r in lang}
    out = inline_reduce_csp(inst, defs, lang)
    assert out.variables == inst.variables
    assert out.constraints == inst.constraints


def test_inline_equality_body_merges_variables():
    defn = PpDefinition("EQ", ("u", "v"), (), (Eq("u", "v"),))
    inst = csp([EQ], ["a", "b"], [("EQ", "a b")])
    out = inline_reduce_csp(inst, {"EQ": defn}, ConstraintLanguage([]))
    assert out.variables == ("a",) and out.constraints == ()


def test_inline_qcsp_universal_equality_is_false():
    defn = PpDefinition("EQ", ("u", "v"), (), (Eq("u", "v"),))
    q = qcsp([EQ], "E a A b", [("EQ", "a b")])
    assert inline_reduce_qcsp(q, {"EQ": defn}, ConstraintLanguage([])) is CONSTANT_FALSE
    q2 = qcsp([EQ], "A a E b", [("EQ", "a b")])
    out = inline_reduce_qcsp(q2, {"EQ": defn}, ConstraintLanguage([]))
    assert out.prefix == (("A", "a"),) and brute_eval_qcsp(out) is True


def _random_defs(rng, lang, target_lang):
    defs = {}
    for r in target_lang:
        d = synthesize_pp_definition(r, lang)
        if d is None:
            return None
        defs[r.name] = d
    return defs


@given(st.integers(0, 2**32 - 1))
def test_inline_preserves_satisfiability(seed):
    rng = random.Random(seed)
    lang = random_language(rng, max_rels=2, max_arity=3)
    targets = []
    for i in range(2):
        k = rng.randint(1, 3)
        rows = rng.sample(list(all_tuples(2, k)), rng.randint(1, 2))
        closed = pp_closure(Relation(f"T{i}", k, tuple(rows)), lang)
        if len(closed.tuples) <= 2:
            targets.append(closed)
    if not targets:
        return
    tlang = ConstraintLanguage(targets)
    defs = _random_defs(rng, lang, tlang)
    inst = random_instance(rng, tlang, rng.randint(1, 5), rng.randint(0, 4))
    out = inline_reduce_csp(inst, defs, lang)
    assert (brute_solve(out) is None) == (brute_solve(inst) is None)


# Spread expressions


def test_spread_of_universal_neq():
    defn = FewDefinition("R", ("v",), ((FORALL, "y"),), (Constraint("NEQ", ("v", "y")),))
    lang = ConstraintLanguage([NEQ])
    Rp = spread_express(defn, lang)
    assert Rp.arity == 3
    assert set(Rp.tuples) == {(v, a, b) for v in (0, 1) for a in (0, 1) for b in (0, 1) if v != a and v != b}
    R = definition_relation(defn, lang)
    assert R.tuples == ()
    assert check_spread_expression(Rp, R).ok


def test_spread_of_quantifier_free_definition():
    lang = ConstraintLanguage([NEQ])
    defn = PpDefinition("N", ("a", "b"), (), (Constraint("NEQ", ("a", "b")),))
    Rp = spread_express(defn, lang)
    assert set(Rp.tuples) == {t + (y1, y2) for t in NEQ.tuples for y1 in (0, 1) for y2 in (0, 1)}


def test_spread_of_existential_equality():
    defn = PpDefinition("F", ("v",), ("x",), (Eq("v", "x"),))
    Rp = spread_express(defn, ConstraintLanguage([]))
    assert len(Rp.tuples) == 8


# Bounded alternation


def _spread_for(lang):
    return {r.name: spread_express(identity_definition(r), lang) for r in lang}


def test_bounded_alt_reduce_places_universals_first():
    lang = NAMED_LANGUAGES["two-sat"]
    q = qcsp(lang, "A a E b", [("OR2", "a b")])
    out = bounded_alt_reduce(q, _spread_for(lang))
    assert out.prefix == (("A", "y1"), ("A", "y2"), ("A", "a"), ("E", "b"))
    assert brute_eval_qcsp(out) == brute_eval_qcsp(q)


def test_bounded_alt_reduce_without_constraints():
    q = qcsp(NAMED_LANGUAGES["two-sat"], "A a E b", [])
    out = bounded_alt_reduce(q, {})
    assert len(out.prefix) == 4 and brute_eval_qcsp(out)


def test_bounded_alt_reduce_rejects_sigma2():
    q = qcsp(NAMED_LANGUAGES["two-sat"], "E a A b", [])
    with pytest.raises(PreconditionError):
        bounded_alt_reduce(q, {})


# Gadgets


def test_lift_examples():
    assert set(lift_with_constants(rel("R", ["01"])).tuples) == {(0, 1, 0), (0, 1, 1), (0, 0, 0), (1, 1, 1)}
    assert set(lift_with_constants(Relation("E", 2, ())).tuples) == {(0, 0, 0), (1, 1, 1)}


@given(st.integers(0, 2**32 - 1))
def test_lift_has_constant_polymorphisms_and_recovers_r(seed):
    rng = random.Random(seed)
    R = random_relation(rng, "R", rng.randint(1, 3))
    L = lift_with_constants(R)
    assert is_polymorphism(CONST0, [L]) and is_polymorphism(CONST1, [L])
    lang, defs = lift_language(ConstraintLanguage([R]))
    assert definition_relation(defs["R"], lang).same_tuples(R)


def test_negation_examples():
    R2 = negation_closure(rel("R", ["01"]))
    assert set(R2.tuples) == {(0, 0, 1), (1, 1, 0)}
    assert is_polymorphism(NOT, [R2])


def test_negation_instance_puts_pivot_first():
    q = qcsp([rel("R", ["01"])], "A a E b", [("R", "a b")])
    out = negation_instance(q)
    assert out.prefix[0] == (EXISTS, "b0")
    assert out.constraints[0].vars == ("b0", "a", "b")


@given(st.integers(0, 2**32 - 1))
def test_negation_preserves_verdicts(seed):
    rng = random.Random(seed)
    lang = random_language(rng)
    inst = random_instance(rng, lang, rng.randint(1, 6), rng.randint(0, 6))
    assert (brute_solve(negation_instance(inst)) is None) == (brute_solve(inst) is None)
    q = random_qcsp(rng, lang, rng.randint(1, 5), rng.randint(0, 5))
    assert brute_eval_qcsp(negation_instance(q)) == brute_eval_qcsp(q)
