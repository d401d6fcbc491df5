"""Command-line front end; every command prints one JSON report on stdout.

Exit codes: 0 verdict produced, 1 input error, 2 budget or precondition error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from pathlib import Path

from . import kernels
from .algebra import op_name, polymorphisms_of_arity
from .classify import bounded_alternation_classify, qcsp_classify, schaefer_classify
from .core import (
    EXISTS,
    ConstraintLanguage,
    CspInstance,
    QcspInstance,
    parse_instance,
    parse_language,
    parse_qcsp,
    serialize_instance,
    serialize_language,
)
from .corpus import random_closed_language, random_instance
from .equality import decide_positive_qcsp, game_oracle_eval, parse_eq_formula, positive_qcsp_reduce
from .errors import BudgetExceeded, InputError, NoTractableMethod, PreconditionError
from .oracle import brute_eval_qcsp, brute_solve, pp_closure
from .qcsp import AssignmentFamily, pi2_decide, prefix_pattern
from .reductions import (
    CONSTANT_FALSE,
    inline_reduce_qcsp,
    lift_language,
    negation_instance,
    negation_language,
    synthesize_pp_definition,
)
from .solvers import METHODS, select_method, solve_with


class _Inputs:
    """Reads input files and remembers their digests for the report."""

    def __init__(self):
        self.digests: dict[str, str] = {}

    def read(self, path: str) -> str:
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
        self.digests[path] = hashlib.sha256(data).hexdigest()
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError:
            raise InputError(f"{path} is not valid UTF-8") from None

    def language(self, path: str) -> ConstraintLanguage:
        return parse_language(self.read(path), path)


def _rows(rel) -> list[str]:
    return ["".join(map(str, t)) for t in rel.tuples]


def _classifications(lang) -> dict:
    out = {"csp": schaefer_classify(lang).as_dict(), "qcsp": qcsp_classify(lang).as_dict()}
    bounded = {}
    for kind, k in (("P", 2), ("S", 3)):
        c = bounded_alternation_classify(lang, k, kind)
        bounded[c.problem] = c.as_dict()
    out["bounded_alternation"] = bounded
    return out


def cmd_classify(args, io: _Inputs) -> dict:
    lang = io.language(args.language)
    result = _classifications(lang)
    if args.k is not None:
        result["requested"] = bounded_alternation_classify(lang, args.k, args.kind).as_dict()
    return result


def cmd_solve(args, io: _Inputs) -> dict:
    lang = io.language(args.language)
    inst = parse_instance(io.read(args.instance), lang, args.instance)
    method = select_method(lang) if args.method == "auto" else args.method
    res = solve_with(inst, method)
    out = {"verdict": res.verdict, "method": res.method, "assignment": res.assignment}
    if args.verify:
        oracle = brute_solve(inst)
        out["verified"] = (oracle is not None) == res.satisfiable
        if not out["verified"]:
            out["oracle_assignment"] = oracle
    return out


def cmd_qsolve(args, io: _Inputs) -> dict:
    lang = io.language(args.language)
    q = parse_qcsp(io.read(args.instance), lang, args.instance)
    pat = prefix_pattern(q)
    out = {"prefix_class": pat.label, "pattern": pat.pattern}
    method = args.method
    if method == "auto" and pat.pattern in ("", "∃"):
        # Purely existential: this is a plain CSP instance.
        inst = CspInstance(lang, q.variables, q.constraints)
        try:
            csp_method = select_method(lang)
        except NoTractableMethod:
            csp_method = "brute"
        res = solve_with(inst, csp_method)
        out.update(value=res.satisfiable, method=f"csp:{res.method}", assignment=res.assignment)
        return out
    if method == "auto":
        method = "pi2" if pat.pattern == "∀∃" and qcsp_classify(lang).tractable else "brute"
    if method == "pi2":
        fam = AssignmentFamily.parse(args.family) if args.family else None
        res = pi2_decide(q, fam)
        out.update(
            value=res.value,
            method="pi2",
            family=str(res.family),
            members_checked=res.members_checked,
            counterexample=res.counterexample,
        )
    else:
        out.update(value=brute_eval_qcsp(q), method="brute")
    return out


def cmd_polymorphisms(args, io: _Inputs) -> dict:
    lang = io.language(args.language)
    ops = polymorphisms_of_arity(lang, args.arity)
    return {
        "arity": args.arity,
        "count": len(ops),
        "operations": [
            {"table": "".join(map(str, f.table)), "name": op_name(f)} for f in ops
        ],
    }


def cmd_ppmember(args, io: _Inputs) -> dict:
    lang = io.language(args.language)
    targets = io.language(args.relations)
    names = [args.name] if args.name else list(targets.relations)
    out = {}
    for name in names:
        rel = targets[name]
        closure = pp_closure(rel, lang)
        entry = {"member": closure.same_tuples(rel), "closure": _rows(closure)}
        if args.definition and entry["member"]:
            defn = synthesize_pp_definition(rel, lang)
            entry["definition"] = str(defn) if defn else None
        out[name] = entry
    return out


def _write(path: str | None, text: str) -> str | None:
    if path is None:
        return None
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None
    return path


def cmd_reduce(args, io: _Inputs) -> dict:
    lang = io.language(args.language)
    if args.gadget == "lift-constants":
        new_lang, defs = lift_language(lang)
    else:
        new_lang, defs = negation_language(lang), None
    out = {
        "gadget": args.gadget,
        "relations": {r.name: _rows(r) for r in new_lang},
        "language_file": _write(args.output, serialize_language(new_lang)),
    }
    if args.instance:
        text = io.read(args.instance)
        if "prefix" in text.split():
            inst = parse_qcsp(text, lang, args.instance)
        else:
            inst = parse_instance(text, lang, args.instance)
        if args.gadget == "lift-constants":
            if not isinstance(inst, QcspInstance):
                inst = QcspInstance(lang, tuple((EXISTS, v) for v in inst.variables), inst.constraints)
            reduced = inline_reduce_qcsp(inst, defs, new_lang)
        else:
            reduced = negation_instance(inst)
        if reduced is CONSTANT_FALSE:
            out["instance"] = "CONSTANT_FALSE"
        else:
            out["instance"] = serialize_instance(reduced)
            out["instance_file"] = _write(args.instance_output, out["instance"])
    return out


def cmd_eq(args, io: _Inputs) -> dict:
    text = io.read(args.formula) if args.file else args.formula
    phi = parse_eq_formula(text, args.formula if args.file else "<formula>")
    out = {"formula": str(phi), "positive": phi.is_positive}
    if args.method == "reduce" and not phi.is_positive:
        raise PreconditionError("the reduction requires a positive matrix (no ! or !=)")
    if args.method in ("reduce", "both") and phi.is_positive:
        out["reduced"] = str(positive_qcsp_reduce(phi))
        out["value"] = decide_positive_qcsp(phi)
    if args.method in ("game", "both"):
        g = game_oracle_eval(phi)
        if "value" in out:
            out["agree"] = out["value"] == g
        out["game_value"] = g
        out.setdefault("value", g)
    return out


def cmd_crosscheck(args, io: _Inputs) -> dict:
    from .algebra import AND, MAJORITY, MINORITY, OR

    rng = random.Random(args.seed)
    mismatches = []
    per_method: dict[str, int] = {}
    for i in range(args.count):
        op = rng.choice((AND, OR, MAJORITY, MINORITY))
        lang = random_closed_language(rng, op)
        inst = random_instance(rng, lang, rng.randint(1, args.max_vars), rng.randint(0, 15))
        method = select_method(lang)
        res = solve_with(inst, method)
        per_method[method] = per_method.get(method, 0) + 1
        if res.satisfiable != (brute_solve(inst) is not None):
            mismatches.append({"index": i, "method": method, "instance": serialize_instance(inst)})
    return {"seed": args.seed, "count": args.count, "methods": per_method, "mismatches": mismatches}


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors, so they exit with 1 rather than argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="boolcsp", description=__doc__.splitlines()[0])
    p.add_argument("--no-timing", action="store_true", help="omit the timing field from the report")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", help="CSP, QCSP and bounded-alternation classification")
    s.add_argument("language")
    s.add_argument("--k", type=int, help="also classify the prefix class of this length")
    s.add_argument("--kind", choices=("S", "P"), default="P", help="Σ (S) or Π (P) for --k")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("solve", help="solve a CSP instance")
    s.add_argument("language")
    s.add_argument("instance")
    s.add_argument("--method", choices=("auto", "brute") + METHODS, default="auto")
    s.add_argument("--verify", action="store_true", help="cross-check against the exhaustive oracle")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("qsolve", help="decide a quantified instance")
    s.add_argument("language")
    s.add_argument("instance")
    s.add_argument("--method", choices=("auto", "pi2", "brute"), default="auto")
    s.add_argument("--family", help="universal-assignment family for pi2, e.g. '<=1,0 | <=0,1'")
    s.set_defaults(func=cmd_qsolve)

    s = sub.add_parser("polymorphisms", help="list polymorphisms of one arity")
    s.add_argument("language")
    s.add_argument("--arity", type=int, required=True)
    s.set_defaults(func=cmd_polymorphisms)

    s = sub.add_parser("ppmember", help="test pp-definability of relations")
    s.add_argument("language")
    s.add_argument("relations", help="language file holding the candidate relations")
    s.add_argument("--name", help="only test this relation")
    s.add_argument("--definition", action="store_true", help="include a synthesized pp-definition")
    s.set_defaults(func=cmd_ppmember)

    s = sub.add_parser("reduce", help="apply a hardness gadget")
    s.add_argument("gadget", choices=("lift-constants", "negation-closure"))
    s.add_argument("language")
    s.add_argument("--instance", help="CSP or QCSP instance to transform")
    s.add_argument("-o", "--output", help="write the new language file here")
    s.add_argument("--instance-output", help="write the transformed instance here")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("eq", help="decide a quantified equality formula")
    s.add_argument("formula", help="formula text, or a file path with --file")
    s.add_argument("--file", action="store_true")
    s.add_argument(
        "--method",
        choices=("reduce", "game", "both"),
        default="both",
        help="both runs the reduction only on positive formulas",
    )
    s.set_defaults(func=cmd_eq)

    s = sub.add_parser("crosscheck", help="random solver-versus-oracle comparison")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=200)
    s.add_argument("--max-vars", type=int, default=10)
    s.set_defaults(func=cmd_crosscheck)
    return p


def run(argv=None) -> tuple[int, dict | None]:
    parser = build_parser()
    args = parser.parse_args(argv)
    io = _Inputs()
    start = time.perf_counter()
    try:
        result = args.func(args, io)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1, None
    except (BudgetExceeded, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2, None
    report = {
        "command": args.command,
        "argv": list(argv) if argv is not None else sys.argv[1:],
        "inputs": dict(sorted(io.digests.items())),
        "backend": kernels.BACKEND,
        "result": result,
    }
    if not args.no_timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    return 0, report


def main(argv=None) -> int:
    code, report = run(argv)
    if report is not None:
        json.dump(report, sys.stdout, indent=2, sort_keys=True, ensure_ascii=False)
        sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
