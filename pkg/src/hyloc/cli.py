"""Command-line interface: ``hyloc parse|check|encode|prove|countermodel``.

Exit codes: 0 success or holds, 1 definite negative (parse diagnostics, a
failing axiom, a countermodel), 2 usage or file error, 3 unknown or timeout.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .encoder import EncodingError, encode_task
from .fol import dump_theory, show
from .kripke import (
    BoundsTooLarge,
    SignatureMismatch,
    check_constraints,
    check_theory,
    explain_failure,
    find_countermodel,
    sat_local,
)
from .parser import ParseError, parse_model, parse_sentence, parse_spec
from .printer import print_model
from .prover import (
    STRATEGIES,
    Bounds,
    RegistryError,
    Status,
    default_prover,
    load_registry,
    prove_goals,
)
from .tptp import TptpError, emit_tptp

OK, NEGATIVE, USAGE, UNKNOWN = 0, 1, 2, 3


class _Fail(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise _Fail(USAGE, f"error: cannot read {path}: {e.strerror}") from None


def _report(diags, out) -> None:
    for d in diags:
        print(d, file=out)
        if d.excerpt:
            print(f"  {d.excerpt}", file=out)
            print(f"  {' ' * (d.column - 1)}^", file=out)


def _load_theory(path: str, name: str | None):
    try:
        spec = parse_spec(_read(path), path, all_errors=True)
    except ParseError as e:
        _report(e.diagnostics, sys.stderr)
        raise _Fail(USAGE) from None
    try:
        return spec.theory(name)
    except KeyError:
        what = f"spec {name!r}" if name else "an hlogic spec"
        raise _Fail(USAGE, f"error: {path} has no {what}") from None


def _goal(text: str, theory):
    try:
        return parse_sentence(text, theory.signature, "<goal>")
    except ParseError as e:
        _report(e.diagnostics, sys.stderr)
        raise _Fail(USAGE) from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise _Fail(USAGE, f"error: cannot write {path}: {e.strerror}") from None


# -- subcommands ---------------------------------------------------------------------------


def cmd_parse(args) -> int:
    code = OK
    for path in args.paths:
        try:
            text = _read(path)
        except _Fail as e:
            print(e, file=sys.stderr)
            code = USAGE
            continue
        try:
            spec = parse_spec(text, path, all_errors=True)
        except ParseError as e:
            _report(e.diagnostics, sys.stdout)
            code = max(code, NEGATIVE)
            continue
        n = len(spec.blocks)
        print(f"{path}: ok: {n} spec{'s' * (n != 1)}, {spec.axiom_count} axioms")
    return code


def cmd_check(args) -> int:
    theory = _load_theory(args.spec_file, args.spec)
    try:
        model = parse_model(_read(args.model_file), theory.signature, args.model_file, True)
    except ParseError as e:
        _report(e.diagnostics, sys.stdout)
        if all(d.code == "rigidity" for d in e.diagnostics):
            return NEGATIVE
        return USAGE
    violations = check_constraints(model, theory.constraints)
    for v in violations:
        print(f"constraint violation ({v.kind}): {v}")
    if violations:
        return NEGATIVE
    try:
        report = check_theory(model, theory)
    except SignatureMismatch as e:
        raise _Fail(USAGE, f"error: {e}") from None
    for r in report.results:
        print(r)
    passed = len(report.results) - len(report.failures())
    print(f"{passed}/{len(report.results)} axioms pass")
    code = OK if report.ok else NEGATIVE
    for text in args.goal or ():
        g = _goal(text, theory)
        bad = next((w for w in model.worlds if not sat_local(model, w, g)), None)
        if bad is None:
            print(f"goal '{text}': holds")
        else:
            world, bindings = explain_failure(model, bad, g)
            extra = "".join(f", {k}={v}" for k, v in bindings)
            print(f"goal '{text}': FAIL at world {world}{extra}")
            code = NEGATIVE
    return code


def cmd_encode(args) -> int:
    theory = _load_theory(args.spec_file, args.spec)
    goal = _goal(args.goal, theory) if args.goal is not None else None
    try:
        task = encode_task(theory, goal)
        text = emit_tptp(task)
    except (EncodingError, TptpError) as e:
        raise _Fail(USAGE, f"error: encoding failed: {e}") from None
    if args.dump_sorted:
        sorted_text = dump_theory(task.theory)
        if task.goal is not None:
            sorted_text += f"goal : {show(task.goal)}\n"
        _write(args.dump_sorted, sorted_text)
    _write(args.out, text)
    return OK


_WORD = {Status.PROVED: "PROVED", Status.COUNTERSAT: "COUNTERSAT"}


def cmd_prove(args) -> int:
    theory = _load_theory(args.spec_file, args.spec)
    goals = [_goal(g, theory) for g in args.goal]
    cfg = None
    if args.strategy != "bounded":
        try:
            registry = load_registry(args.registry)
        except RegistryError as e:
            raise _Fail(USAGE, f"error: {e}") from None
        if args.prover is not None:
            if args.prover not in registry:
                known = ", ".join(sorted(registry)) or "none"
                raise _Fail(USAGE, f"error: unknown prover {args.prover!r} (known: {known})")
            cfg = registry[args.prover]
        else:
            cfg = default_prover(registry)
            if cfg is None:
                raise _Fail(USAGE, "error: no prover configured")
    bounds = Bounds(args.max_worlds, args.max_carrier)
    if bounds.max_worlds < 1 or bounds.max_carrier < 1:
        raise _Fail(USAGE, "error: bounds must be at least 1")
    try:
        verdicts = prove_goals(
            theory, goals, jobs=args.jobs, strategy=args.strategy, config=cfg,
            bounds=bounds, timeout=args.timeout, parallel=args.parallel,
        )
    except BoundsTooLarge as e:
        raise _Fail(USAGE, f"error: {e}") from None
    except EncodingError as e:
        raise _Fail(USAGE, f"error: encoding failed: {e}") from None
    code = OK
    for k, (text, v) in enumerate(zip(args.goal, verdicts), 1):
        word = _WORD.get(v.status, "UNKNOWN")
        prov = v.provenance
        if v.status is Status.COUNTERSAT and v.countermodel is not None:
            name = f"countermodel-{k}.hmodel" if len(goals) > 1 else "countermodel.hmodel"
            path = os.path.join(args.model_dir, name)
            _write(path, print_model(v.countermodel.model))
            prov += f" model={path}"
        if v.status is Status.ERROR:
            prov += f" error={v.detail}"
            print(f"error: {v.prover}: {v.detail}", file=sys.stderr)
        elif v.status is Status.TIMEOUT:
            prov += " timeout"
        suffix = f" goal='{text}'" if len(goals) > 1 else ""
        print(f"{word} {v.time:.3f}s {prov}{suffix}")
        if v.status is Status.COUNTERSAT:
            code = max(code, NEGATIVE)
        elif v.status is not Status.PROVED:
            code = UNKNOWN
    return code


def cmd_countermodel(args) -> int:
    if args.max_worlds < 1 or args.max_carrier < 1:
        raise _Fail(USAGE, "error: bounds must be at least 1")
    theory = _load_theory(args.spec_file, args.spec)
    goal = _goal(args.goal, theory)
    try:
        cm = find_countermodel(
            theory.signature, theory.axioms, goal, args.max_worlds, args.max_carrier,
            theory.constraints, args.cap,
        )
    except BoundsTooLarge as e:
        raise _Fail(USAGE, f"error: {e}") from None
    if cm is None:
        print("none within bounds")
        return UNKNOWN
    _write(args.out, print_model(cm.model))
    where = f", written to {args.out}" if args.out not in (None, "-") else ""
    print(
        f"countermodel: {len(cm.model.worlds)} world(s), goal fails at {cm.world}{where}",
        file=sys.stderr if args.out in (None, "-") else sys.stdout,
    )
    return NEGATIVE


# -- argument parsing ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hyloc", description="Hybrid logic specification tools.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("parse", help="parse spec files and report diagnostics")
    p.add_argument("paths", nargs="+", metavar="FILE")
    p.set_defaults(func=cmd_parse)

    def spec_args(p):
        p.add_argument("spec_file", metavar="SPEC")
        p.add_argument("--spec", metavar="NAME", help="spec to use (default: last hlogic spec)")

    def bound_args(p):
        p.add_argument("--max-worlds", type=int, default=2, metavar="N")
        p.add_argument("--max-carrier", type=int, default=1, metavar="K")

    p = sub.add_parser("check", help="check a model file against a spec")
    spec_args(p)
    p.add_argument("model_file", metavar="MODEL")
    p.add_argument("--goal", action="append", metavar="SENTENCE",
                   help="also evaluate this sentence globally (repeatable)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("encode", help="write the TPTP FOF encoding of a proof task")
    spec_args(p)
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--goal", metavar="SENTENCE")
    which.add_argument("--all-axioms", action="store_true",
                       help="encode the axioms alone, with no conjecture")
    p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    p.add_argument("--dump-sorted", metavar="PATH",
                   help="also write the many-sorted intermediate theory")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("prove", help="decide whether goals follow from a spec")
    spec_args(p)
    p.add_argument("--goal", action="append", required=True, metavar="SENTENCE")
    p.add_argument("--strategy", choices=STRATEGIES, default="external")
    p.add_argument("--prover", metavar="ID", help="prover id from the registry")
    p.add_argument("--registry", metavar="PATH", help="prover registry (default: $HYLOC_PROVERS)")
    p.add_argument("--timeout", type=float, default=None, metavar="SECONDS")
    p.add_argument("--jobs", type=int, default=1, metavar="N", help="goals proved concurrently")
    p.add_argument("--parallel", action="store_true",
                   help="run both halves of --strategy both concurrently")
    p.add_argument("--model-dir", default=".", metavar="DIR",
                   help="where countermodels are written")
    bound_args(p)
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("countermodel", help="search for a finite countermodel")
    spec_args(p)
    p.add_argument("--goal", required=True, metavar="SENTENCE")
    p.add_argument("--out", metavar="PATH", help="model file (default: stdout)")
    p.add_argument("--cap", type=int, default=2_000_000, help="largest search space allowed")
    bound_args(p)
    p.set_defaults(func=cmd_countermodel)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code not in (0, None) else OK
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except _Fail as e:
        if str(e):
            print(e, file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
