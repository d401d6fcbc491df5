"""Complexity classification of boolean languages for CSP, QCSP and bounded-alternation QCSP."""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import schaefer_witnesses
from .core import ConstraintLanguage
from .errors import PreconditionError, ValidationError

QCSP_OPS = ("and", "or", "majority", "minority")

NP_COMPLETE = "NP-complete"
PSPACE_COMPLETE = "PSPACE-complete"


@dataclass(frozen=True)
class Classification:
    """Verdict for one problem family.

    ``problem`` is ``"csp"``, ``"qcsp"`` or ``"qcsp_prefix(<k>,<kind>)"``.
    Tractable verdicts list witness operations; hard ones name a class.
    """

    problem: str
    tractable: bool
    witnesses: tuple[str, ...] = ()
    hardness: str | None = None

    def __post_init__(self):
        if self.tractable and (not self.witnesses or self.hardness):
            raise ValidationError("tractable classification needs witnesses and no hardness label")
        if not self.tractable and (self.witnesses or not self.hardness):
            raise ValidationError("hard classification needs a label and no witnesses")

    @property
    def verdict(self) -> str:
        return "tractable" if self.tractable else self.hardness

    def as_dict(self) -> dict:
        return {
            "problem": self.problem,
            "verdict": self.verdict,
            "witnesses": list(self.witnesses),
        }


def _boolean(lang: ConstraintLanguage) -> None:
    if lang.domain_size != 2:
        raise PreconditionError(f"classification is defined for d = 2, got d = {lang.domain_size}")


def schaefer_classify(lang: ConstraintLanguage) -> Classification:
    _boolean(lang)
    w = schaefer_witnesses(lang)
    if w:
        return Classification("csp", True, w)
    return Classification("csp", False, (), NP_COMPLETE)


def qcsp_classify(lang: ConstraintLanguage) -> Classification:
    _boolean(lang)
    w = tuple(x for x in schaefer_witnesses(lang) if x in QCSP_OPS)
    if w:
        return Classification("qcsp", True, w)
    return Classification("qcsp", False, (), PSPACE_COMPLETE)


def bounded_alternation_classify(lang: ConstraintLanguage, k: int, kind: str) -> Classification:
    """Classification of the prefix class ``Σ_k`` (``kind="S"``) or ``Π_k`` (``kind="P"``).

    Tractable whenever the QCSP is.  Hardness labels exist only for
    ``Π_k`` with even ``k >= 2`` and ``Σ_k`` with odd ``k >= 3``; other hard
    cases raise ``PreconditionError``.
    """
    _boolean(lang)
    kind = {"S": "S", "Σ": "S", "sigma": "S", "P": "P", "Π": "P", "pi": "P"}.get(kind, kind)
    if kind not in ("S", "P") or k < 1:
        raise ValidationError(f"unknown prefix class {kind}{k}")
    problem = f"qcsp_prefix({k},{'Σ' if kind == 'S' else 'Π'})"
    w = qcsp_classify(lang).witnesses
    if w:
        return Classification(problem, True, w)
    if kind == "P" and k >= 2 and k % 2 == 0:
        return Classification(problem, False, (), f"Π{k}p-complete")
    if kind == "S" and k >= 3 and k % 2 == 1:
        return Classification(problem, False, (), f"Σ{k}p-complete")
    raise PreconditionError(
        f"unsupported prefix class {'Σ' if kind == 'S' else 'Π'}{k}: hardness is certified only "
        "for Π with even k >= 2 and Σ with odd k >= 3"
    )
