"""Command-line interface.

Subcommands
-----------
drazin   Drazin inverse of one matrix (oracle route), with axiom residuals.
sum      Additive formulas for a + b (theorems 2.2, 2.3, 2.4).
block    Block-matrix formulas for [[A, B], [C, D]] (rules 3.1 .. 4.3).
gen      Write a generated instance directory for a target hypothesis set.
verify   Re-check a directory of generated instances end to end.

Exit codes: 0 success/match, 2 precondition violation (or an instance the
generator cannot realize), 3 mismatch, failed axioms, or a forced run that
did not converge, 4 I/O, parse, or usage errors.

Thresholds: --eps-rank, --eps-check, --eps-match, --eps-tail; each falls
back to the environment (GDZ_TOL_RANK, GDZ_TOL_CHECK, GDZ_TOL_MATCH,
GDZ_TOL_TAIL) before the built-in defaults.
"""

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from .additive import drazin_sum, drazin_sum_nilpotent, nilpotent_sum_closure
from .blockmat import RULE_IDS, Block2x2, assemble, block_drazin
from .casegen import PRESET_SPECS, TARGETS, CaseSpec, certify, generate
from .drazin import check_drazin_axioms, drazin_oracle
from .errors import (
    AxiomViolation,
    ConvergenceError,
    GenerationFailed,
    PreconditionViolated,
    ReconciliationError,
)
from .io import (
    SCHEMA_VERSION,
    DocumentError,
    complex_to_doc,
    doc_to_complex,
    factor_check_to_doc,
    load_instance,
    load_matrix,
    matrix_to_doc,
    parse_scalar,
    save_instance,
)
from .linalg import Tolerance, fro_norm, scale_of

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_MISMATCH = 3
EXIT_IO = 4

_ENV_TOLS = {
    "eps_rank": "GDZ_TOL_RANK",
    "eps_check": "GDZ_TOL_CHECK",
    "eps_match": "GDZ_TOL_MATCH",
    "eps_tail": "GDZ_TOL_TAIL",
}


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors, which collides with the
    precondition-violation code; route usage problems to the I/O code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


def _add_tol_flags(p: argparse.ArgumentParser) -> None:
    for field, env in _ENV_TOLS.items():
        flag = "--" + field.replace("_", "-")
        p.add_argument(flag, type=float, default=None, help=f"override {field} (env {env})")


def _tol_from_args(parser: argparse.ArgumentParser, args: argparse.Namespace) -> Tolerance:
    values = {}
    for field, env in _ENV_TOLS.items():
        v = getattr(args, field)
        if v is None and env in os.environ:
            try:
                v = float(os.environ[env])
            except ValueError:
                parser.error(f"environment {env}={os.environ[env]!r} is not a number")
        if v is not None:
            values[field] = v
    try:
        return Tolerance(**values)
    except ValueError as exc:
        parser.error(str(exc))


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2)
    if out:
        Path(out).write_text(text + "\n")
        print(f"report written to {out}")
    else:
        print(text)


def _report(command: str, **fields) -> dict:
    base = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "theorem": None,
        "lambda": None,
        "conditions": None,
        "result": None,
        "oracle": None,
        "axiom_residuals": None,
        "match": None,
        "error": None,
        "wall_ms": None,
    }
    base.update(fields)
    return base


def _conditions_doc(conditions) -> list:
    return [factor_check_to_doc(c) for c in conditions]


def _lambda_doc(lam, conditions) -> list | None:
    if lam is not None:
        return complex_to_doc(lam)
    for c in conditions:
        if c.lam is not None:
            return complex_to_doc(c.lam)
    return None


def cmd_drazin(args, parser) -> int:
    tol = _tol_from_args(parser, args)
    t0 = time.perf_counter()
    a = load_matrix(args.matrix)
    try:
        res = drazin_oracle(a, tol)
    except AxiomViolation as exc:
        report = _report("drazin", error=str(exc), wall_ms=(time.perf_counter() - t0) * 1e3)
        _emit(report, args.out)
        return EXIT_MISMATCH
    axioms = check_drazin_axioms(a, res.d, tol)
    report = _report(
        "drazin",
        result=matrix_to_doc(res.d),
        pi=matrix_to_doc(res.pi),
        index=res.index,
        axiom_residuals={
            "solution": axioms.solution,
            "commute": axioms.commute,
            "power": axioms.power,
        },
        match=bool(axioms.ok),
        wall_ms=(time.perf_counter() - t0) * 1e3,
    )
    _emit(report, args.out)
    return EXIT_OK if axioms.ok else EXIT_MISMATCH


def _evaluate_pair(target: str, a, b, lam, tol) -> np.ndarray | None:
    """Formula output for a pair target; None for the closure decision."""
    if target == "2.2":
        return None
    if target == "2.3":
        return drazin_sum_nilpotent(a, b, tol, lam=lam, force=True)
    return drazin_sum(a, b, tol, lam=lam, force=True)


def cmd_sum(args, parser) -> int:
    tol = _tol_from_args(parser, args)
    t0 = time.perf_counter()
    a = load_matrix(args.a)
    b = load_matrix(args.b)
    mats = {"a": a, "b": b}
    conditions = certify("pair", args.theorem, mats, args.lam, tol)
    report = _report(
        "sum",
        theorem=args.theorem,
        conditions=_conditions_doc(conditions),
        **{"lambda": _lambda_doc(args.lam, conditions)},
    )
    failing = [c for c in conditions if not c.holds]
    if failing and not args.force:
        report["error"] = "precondition violated: " + "; ".join(c.condition for c in failing)
        report["wall_ms"] = (time.perf_counter() - t0) * 1e3
        _emit(report, args.out)
        return EXIT_PRECONDITION

    try:
        if args.theorem == "2.2":
            closed = nilpotent_sum_closure(a, b, tol, lam=args.lam) if not failing else False
            report["match"] = bool(closed)
            report["wall_ms"] = (time.perf_counter() - t0) * 1e3
            _emit(report, args.out)
            return EXIT_OK if closed else EXIT_MISMATCH
        formula = _evaluate_pair(args.theorem, a, b, args.lam, tol)
        oracle = drazin_oracle(a + b, tol)
    except (ConvergenceError, AxiomViolation) as exc:
        report["error"] = str(exc)
        report["wall_ms"] = (time.perf_counter() - t0) * 1e3
        _emit(report, args.out)
        return EXIT_MISMATCH

    gap = fro_norm(formula - oracle.d)
    scale = scale_of(a, b)
    axioms = check_drazin_axioms(a + b, formula, tol)
    ok = gap <= tol.eps_match * scale and axioms.ok
    report.update(
        result=matrix_to_doc(formula),
        oracle=matrix_to_doc(oracle.d),
        oracle_gap=gap,
        axiom_residuals={
            "solution": axioms.solution,
            "commute": axioms.commute,
            "power": axioms.power,
        },
        match=bool(ok),
        wall_ms=(time.perf_counter() - t0) * 1e3,
    )
    _emit(report, args.out)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_block(args, parser) -> int:
    tol = _tol_from_args(parser, args)
    t0 = time.perf_counter()
    blocks = Block2x2(
        a=load_matrix(args.a), b=load_matrix(args.b), c=load_matrix(args.c), d=load_matrix(args.d)
    )
    mats = {"a": blocks.a, "b": blocks.b, "c": blocks.c, "d": blocks.d}
    conditions = certify("block", args.theorem, mats, args.lam, tol)
    report = _report(
        "block",
        theorem=args.theorem,
        conditions=_conditions_doc(conditions),
        **{"lambda": _lambda_doc(args.lam, conditions)},
    )
    failing = [c for c in conditions if not c.holds]
    if failing and not args.force:
        report["error"] = "precondition violated: " + "; ".join(c.condition for c in failing)
        report["wall_ms"] = (time.perf_counter() - t0) * 1e3
        _emit(report, args.out)
        return EXIT_PRECONDITION

    m = assemble(blocks)
    try:
        formula = block_drazin(blocks, args.theorem, tol, lam=args.lam, force=True)
        oracle = drazin_oracle(m, tol)
    except (ConvergenceError, AxiomViolation) as exc:
        report["error"] = str(exc)
        report["wall_ms"] = (time.perf_counter() - t0) * 1e3
        _emit(report, args.out)
        return EXIT_MISMATCH

    gap = fro_norm(formula - oracle.d)
    scale = scale_of(blocks.a, blocks.b, blocks.c, blocks.d)
    axioms = check_drazin_axioms(m, formula, tol)
    ok = gap <= tol.eps_match * scale and axioms.ok
    report.update(
        result=matrix_to_doc(formula),
        oracle=matrix_to_doc(oracle.d),
        oracle_gap=gap,
        axiom_residuals={
            "solution": axioms.solution,
            "commute": axioms.commute,
            "power": axioms.power,
        },
        match=bool(ok),
        wall_ms=(time.perf_counter() - t0) * 1e3,
    )
    _emit(report, args.out)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_gen(args, parser) -> int:
    tol = _tol_from_args(parser, args)
    t0 = time.perf_counter()
    if args.preset:
        spec = PRESET_SPECS[args.preset]
    else:
        if args.target is None or args.dim is None:
            parser.error("gen requires --target and --dim (or --preset)")
        if args.lam is None:
            parser.error("gen requires a concrete --lambda (not auto)")
        spec = CaseSpec(
            target=args.target, dim=args.dim, lam=args.lam, seed=args.seed, negate=args.negate
        )
    case = generate(spec, tol)
    manifest = save_instance(args.out, case)
    report = _report(
        "gen",
        theorem=spec.target,
        conditions=manifest["certificate"],
        match=True,
        wall_ms=(time.perf_counter() - t0) * 1e3,
        out_dir=str(args.out),
        **{"lambda": complex_to_doc(complex(spec.lam))},
    )
    print(json.dumps(report, indent=2))
    return EXIT_OK


def _verify_one(manifest: dict, matrices: dict, tol: Tolerance) -> tuple[bool, str]:
    """Contract check for one instance: valid instances must evaluate and
    match the oracle; negated instances must trip the precondition."""
    target = manifest["target"]
    kind = manifest["kind"]
    negate = bool(manifest.get("negate", False))
    lam = doc_to_complex(manifest.get("lambda"))
    conditions = certify(kind, target, matrices, lam, tol)
    failing = [c for c in conditions if not c.holds]

    if negate:
        if not failing:
            return False, "negated instance was accepted (no condition failed)"
        return True, f"precondition tripped: {failing[0].condition}"

    if failing:
        return False, "valid instance rejected: " + "; ".join(c.condition for c in failing)
    if kind == "pair":
        a, b = matrices["a"], matrices["b"]
        if target == "2.2":
            ok = nilpotent_sum_closure(a, b, tol, lam=lam)
            return (ok, "closure holds" if ok else "closure failed")
        formula = _evaluate_pair(target, a, b, lam, tol)
        m = a + b
        scale = scale_of(a, b)
    else:
        blocks = Block2x2(a=matrices["a"], b=matrices["b"], c=matrices["c"], d=matrices["d"])
        formula = block_drazin(blocks, target, tol, lam=lam, force=True)
        m = assemble(blocks)
        scale = scale_of(*matrices.values())
    oracle = drazin_oracle(m, tol)
    gap = fro_norm(formula - oracle.d)
    if gap > tol.eps_match * scale:
        return False, f"formula/oracle gap {gap:.3e} exceeds {tol.eps_match * scale:.3e}"
    return True, f"match (gap {gap:.3e})"


def cmd_verify(args, parser) -> int:
    tol = _tol_from_args(parser, args)
    t0 = time.perf_counter()
    root = Path(args.directory)
    if not root.is_dir():
        raise DocumentError(f"{root} is not a directory")
    if (root / "instance.json").exists():
        dirs = [root]
    else:
        dirs = sorted(p for p in root.iterdir() if p.is_dir() and (p / "instance.json").exists())
    if not dirs:
        raise DocumentError(f"no instances under {root}")

    rows = []
    all_ok = True
    for d in dirs:
        manifest, matrices = load_instance(d)
        if args.theorem and manifest["target"] != args.theorem:
            continue
        try:
            ok, detail = _verify_one(manifest, matrices, tol)
        except PreconditionViolated as exc:
            ok, detail = bool(manifest.get("negate")), f"precondition tripped: {exc}"
        except (ConvergenceError, AxiomViolation) as exc:
            ok, detail = False, str(exc)
        rows.append(
            {
                "dir": str(d),
                "target": manifest["target"],
                "negate": bool(manifest.get("negate", False)),
                "ok": ok,
                "detail": detail,
            }
        )
        all_ok = all_ok and ok
    if not rows:
        raise DocumentError(f"no instances under {root} match theorem {args.theorem}")

    report = _report(
        "verify",
        theorem=args.theorem,
        match=all_ok,
        instances=rows,
        wall_ms=(time.perf_counter() - t0) * 1e3,
    )
    _emit(report, args.out)
    return EXIT_OK if all_ok else EXIT_MISMATCH


def build_parser() -> _Parser:
    parser = _Parser(prog="gdz", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("drazin", help="Drazin inverse of one matrix", parents=[])
    p.add_argument("matrix", help="matrix document (JSON)")
    p.add_argument("--out", default=None, help="write the report JSON here")
    _add_tol_flags(p)
    p.set_defaults(func=cmd_drazin)

    p = sub.add_parser("sum", help="additive formulas for a + b")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--theorem", required=True, choices=["2.2", "2.3", "2.4"])
    p.add_argument("--lambda", dest="lam", type=parse_scalar, default=None, metavar="L",
                   help="scalar (complex, fraction, or 'auto'); default auto")
    p.add_argument("--force", action="store_true", help="evaluate even if the hypothesis fails")
    p.add_argument("--out", default=None)
    _add_tol_flags(p)
    p.set_defaults(func=cmd_sum)

    p = sub.add_parser("block", help="block-matrix formulas for [[A,B],[C,D]]")
    for name in ("a", "b", "c", "d"):
        p.add_argument(name)
    p.add_argument("--theorem", required=True, choices=list(RULE_IDS))
    p.add_argument("--lambda", dest="lam", type=parse_scalar, default=None, metavar="L",
                   help="scalar (complex, fraction, or 'auto'); default auto")
    p.add_argument("--force", action="store_true", help="evaluate even if the hypothesis fails")
    p.add_argument("--out", default=None)
    _add_tol_flags(p)
    p.set_defaults(func=cmd_block)

    p = sub.add_parser("gen", help="write a generated instance directory")
    p.add_argument("--target", choices=list(TARGETS), default=None)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--lambda", dest="lam", type=parse_scalar, default=complex(1.0), metavar="L")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--negate", action="store_true",
                   help="break exactly one hypothesis condition at the declared lambda")
    p.add_argument("--preset", choices=sorted(PRESET_SPECS), default=None,
                   help="canonical named instance (overrides the other selectors)")
    p.add_argument("--out", required=True, help="instance directory to create")
    _add_tol_flags(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="re-check a directory of generated instances")
    p.add_argument("directory")
    p.add_argument("--theorem", default=None, choices=list(TARGETS),
                   help="only verify instances of this target")
    p.add_argument("--out", default=None)
    _add_tol_flags(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, parser)
    except SystemExit as exc:
        # argparse --help exits 0, _Parser.error exits 4; surface both as
        # return values so in-process callers never see SystemExit.
        return int(exc.code or 0)
    except DocumentError as exc:
        print(f"gdz: {exc}", file=sys.stderr)
        return EXIT_IO
    except GenerationFailed as exc:
        print(f"gdz: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except PreconditionViolated as exc:
        print(f"gdz: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ConvergenceError, AxiomViolation, ReconciliationError) as exc:
        print(f"gdz: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except ValueError as exc:
        print(f"gdz: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
