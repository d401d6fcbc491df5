import itertools
import random

from hypothesis import given
from hypothesis import strategies as st

from boolcsp.algebra import is_polymorphism, polymorphisms_of_arity
from boolcsp.core import ConstraintLanguage, CspInstance, QcspInstance, Relation, all_tuples, apply_coordinatewise
from boolcsp.corpus import random_instance, random_language, random_qcsp, random_relation
from boolcsp.library import C0, EMPTY, EQ, NAMED_LANGUAGES, NEQ, quantified_horn_example, quantified_two_sat_example, sat_example
from boolcsp.oracle import brute_count, brute_eval_qcsp, brute_solve, is_partial_solution, pp_closure

from conftest import csp, rel

GAMMA3 = NAMED_LANGUAGES["gamma3"]


def test_sat_example_first_solution():
    inst = sat_example()
    a = brute_solve(inst)
    assert a == {"s": 0, "t": 1, "u": 0}
    assert inst.satisfied_by(a)


def test_empty_relation_is_unsatisfiable():
    assert brute_solve(csp([EMPTY], ["x"], [("EMPTY", "x")])) is None


def test_no_constraints_gives_all_zero():
    assert brute_solve(csp([EQ], ["a", "b", "c"], [])) == {"a": 0, "b": 0, "c": 0}
    assert brute_count(csp([EQ], ["a", "b", "c"], [])) == 8


def test_introduction_qcsp_examples_are_false():
    assert brute_eval_qcsp(quantified_two_sat_example()) is False
    assert brute_eval_qcsp(quantified_horn_example()) is False


def test_partial_solution_examples():
    inst = sat_example()
    assert is_partial_solution(inst, {})
    assert is_partial_solution(inst, brute_solve(inst))
    assert not is_partial_solution(csp([C0], ["x"], [("C0", "x")]), {"x": 1})


def _naive_eval(q):
    def rec(i, val):
        if i == len(q.prefix):
            return q.matrix().satisfied_by(val)
        quant, v = q.prefix[i]
        results = (rec(i + 1, {**val, v: b}) for b in (0, 1))
        return all(results) if quant == "A" else any(results)

    return rec(0, {})


@given(st.integers(0, 2**32 - 1))
def test_qcsp_eval_matches_naive_recursion(seed):
    rng = random.Random(seed)
    lang = random_language(rng)
    q = random_qcsp(rng, lang, rng.randint(0, 7), rng.randint(0, 6))
    assert brute_eval_qcsp(q) == _naive_eval(q)


@given(st.integers(0, 2**32 - 1))
def test_all_existential_prefix_matches_solve(seed):
    rng = random.Random(seed)
    lang = random_language(rng)
    inst = random_instance(rng, lang, rng.randint(1, 8), rng.randint(0, 8))
    q = QcspInstance(lang, tuple(("E", v) for v in inst.variables), inst.constraints)
    assert brute_eval_qcsp(q) == (brute_solve(inst) is not None)


@given(st.integers(0, 2**32 - 1))
def test_solve_matches_enumeration_and_is_monotone(seed):
    rng = random.Random(seed)
    lang = random_language(rng)
    inst = random_instance(rng, lang, rng.randint(1, 7), rng.randint(0, 8))
    sols = [
        dict(zip(inst.variables, t))
        for t in itertools.product((0, 1), repeat=len(inst.variables))
        if inst.satisfied_by(dict(zip(inst.variables, t)))
    ]
    assert brute_solve(inst) == (sols[0] if sols else None)
    assert brute_count(inst) == len(sols)
    # Dropping a constraint never loses solutions.
    if inst.constraints and sols:
        smaller = CspInstance(lang, inst.variables, inst.constraints[1:])
        assert brute_solve(smaller) is not None


def _closure_by_enumeration(R, lang):
    # Images of R's tuple list under every |R|-ary polymorphism.
    m = len(R.tuples)
    ops = polymorphisms_of_arity(lang, m)
    return {apply_coordinatewise(f, R.tuples) for f in ops}


def test_pp_closure_of_neq_over_gamma3():
    assert pp_closure(NEQ, GAMMA3).same_tuples(NEQ)


def test_pp_closure_over_equality_is_column_pattern_closure():
    # Every operation preserves EQ, so the closure is every tuple respecting R's column-equality pattern.
    lang = ConstraintLanguage([EQ])
    for R in (rel("R", ["01"]), rel("R", ["011", "100"]), rel("R", ["001", "010", "100"])):
        cols = [tuple(t[j] for t in R.tuples) for j in range(R.arity)]
        expected = {t for t in all_tuples(2, R.arity) if all(t[i] == t[j] for i in range(R.arity) for j in range(R.arity) if cols[i] == cols[j])}
        assert set(pp_closure(R, lang).tuples) == expected


def test_pp_closure_contains_r():
    R = rel("R", ["01"])
    for lang in NAMED_LANGUAGES.values():
        assert set(R.tuples) <= set(pp_closure(R, lang).tuples)


def test_pp_closure_of_empty_relation():
    assert pp_closure(Relation("E", 2, ()), NAMED_LANGUAGES["gamma3"]).tuples == ()
    # Every relation of the Horn language contains an all-zero or all-one tuple.
    closed = pp_closure(Relation("E", 2, ()), ConstraintLanguage([EQ]))
    assert closed.tuples == ((0, 0), (1, 1))


@given(st.integers(0, 2**32 - 1))
def test_pp_closure_matches_polymorphism_images(seed):
    rng = random.Random(seed)
    lang = random_language(rng, max_rels=2, max_arity=3)
    R = random_relation(rng, "T", rng.randint(1, 3))
    if not 1 <= len(R.tuples) <= 3:
        return
    closure = pp_closure(R, lang)
    assert set(closure.tuples) == _closure_by_enumeration(R, lang)
    # Galois membership: R is closed iff every polymorphism of arity |R| preserves it.
    ops = polymorphisms_of_arity(lang, len(R.tuples))
    assert closure.same_tuples(R) == all(is_polymorphism(f, [R]) for f in ops)


@given(st.integers(0, 2**32 - 1))
def test_pp_closure_ignores_tuple_order(seed):
    rng = random.Random(seed)
    lang = random_language(rng, max_rels=2, max_arity=3)
    R = random_relation(rng, "T", 2)
    if not R.tuples:
        return
    rows = list(R.tuples)
    rng.shuffle(rows)
    images = {apply_coordinatewise(f, rows) for f in polymorphisms_of_arity(lang, len(rows))}
    assert images == set(pp_closure(R, lang).tuples)
