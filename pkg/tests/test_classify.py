
import pytest

from boolcsp.algebra import SCHAEFER_FOUR, SCHAEFER_SIX, is_polymorphism
from boolcsp.classify import Classification, bounded_alternation_classify, qcsp_classify, schaefer_classify
from boolcsp.core import ConstraintLanguage, Relation, all_tuples
from boolcsp.errors import PreconditionError, ValidationError
from boolcsp.library import IMP, C0, C1, NAMED_LANGUAGES

from conftest import rel

L = NAMED_LANGUAGES

# Found by scanning all 256 ternary relations for witnesses exactly {const0, const1}.
CONSTANTS_ONLY = ConstraintLanguage([rel("K", ["000", "010", "011", "100", "101", "111"])])


@pytest.mark.parametrize("name", ["gamma3", "nae", "one-in-three", "c0c1s"])
def test_np_complete_languages(name):
    c = schaefer_classify(L[name])
    assert c.verdict == "NP-complete" and c.witnesses == ()


def test_horn_is_tractable_via_and():
    c = schaefer_classify(ConstraintLanguage([IMP, C0, C1]))
    assert c.tractable and "and" in c.witnesses
    assert "and" in schaefer_classify(L["horn"]).witnesses


def test_empty_language_has_all_six_witnesses():
    c = schaefer_classify(L["empty"])
    assert c.witnesses == ("const0", "const1", "and", "or", "majority", "minority")


def test_qcsp_examples():
    assert qcsp_classify(L["gamma3"]).verdict == "PSPACE-complete"
    c = qcsp_classify(L["two-sat"])
    assert c.tractable and "majority" in c.witnesses


def test_constants_alone_do_not_make_qcsp_tractable():
    assert schaefer_classify(CONSTANTS_ONLY).witnesses == ("const0", "const1")
    assert qcsp_classify(CONSTANTS_ONLY).verdict == "PSPACE-complete"


def test_constants_only_language_is_what_the_scan_says():
    # Independent check of the frozen fixture: the two constants preserve it and none of the four does.
    K = CONSTANTS_ONLY["K"]
    assert (0, 0, 0) in K and (1, 1, 1) in K
    assert not any(is_polymorphism(f, [K]) for f in SCHAEFER_FOUR)


def test_bounded_alternation_examples():
    assert bounded_alternation_classify(L["gamma3"], 2, "P").verdict == "Π2p-complete"
    assert bounded_alternation_classify(L["gamma3"], 3, "Σ").verdict == "Σ3p-complete"
    c = bounded_alternation_classify(L["two-sat"], 3, "S")
    assert c.tractable and "majority" in c.witnesses
    with pytest.raises(PreconditionError):
        bounded_alternation_classify(L["gamma3"], 2, "S")
    with pytest.raises(PreconditionError):
        bounded_alternation_classify(L["gamma3"], 3, "P")


def test_classification_record_invariants():
    with pytest.raises(ValidationError):
        Classification("csp", True, (), None)
    with pytest.raises(ValidationError):
        Classification("csp", False, ("and",), "NP-complete")


def test_classify_rejects_non_boolean():
    with pytest.raises(PreconditionError):
        schaefer_classify(ConstraintLanguage([Relation("R", 1, ((2,),), 3)], 3))


def test_every_single_binary_relation_language():
    # Exhaustive at arity <= 2: the verdict follows the six witnesses exactly.
    for k in (1, 2):
        pool = list(all_tuples(2, k))
        for mask in range(2 ** len(pool)):
            r = Relation("R", k, tuple(t for i, t in enumerate(pool) if mask >> i & 1))
            lang = ConstraintLanguage([r])
            expected = [f.name for f in SCHAEFER_SIX if is_polymorphism(f, lang)]
            c = schaefer_classify(lang)
            assert list(c.witnesses) == expected
            # Every boolean relation of arity <= 2 is bijunctive, so these are all tractable.
            assert c.tractable
