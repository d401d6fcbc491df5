"""Boolean constraint languages: classification, tractable solvers, reductions, and oracles."""

from .algebra import (
    AND,
    MAJORITY,
    MINORITY,
    NOT,
    OR,
    XOR,
    CONST0,
    CONST1,
    compose,
    derive_schaefer_generator,
    essentially_unary_witness,
    is_polymorphism,
    polymorphism_violation,
    polymorphisms_of_arity,
)
from .classify import (
    Classification,
    bounded_alternation_classify,
    qcsp_classify,
    schaefer_classify,
)
from .core import (
    EXISTS,
    FORALL,
    Constraint,
    ConstraintLanguage,
    CspInstance,
    Operation,
    QcspInstance,
    Relation,
    apply_coordinatewise,
    eval_constraint,
    parse_instance,
    parse_language,
    parse_qcsp,
)
from .errors import (
    BoolCspError,
    BudgetExceeded,
    InputError,
    NoTractableMethod,
    ParseError,
    PreconditionError,
    ValidationError,
)
from .kernels import BACKEND
from .oracle import brute_eval_qcsp, brute_solve, is_partial_solution, pp_closure
from .solvers import dispatch_solve

__version__ = "0.1.0"
