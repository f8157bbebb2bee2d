"""Acceptance criteria, one pass/fail line per criterion.

The lines are collected into an "acceptance criteria" section of the
pytest terminal summary.
"""
import time

import pytest

import cases
from conftest import corpus_text
from hyloc.cli import main
from hyloc.kripke import check_constraints, sat_global
from hyloc.parser import parse_model, parse_sentence, parse_spec
from hyloc.prover import Bounds, Status, bounded_verdict, load_registry, default_prover, prove_goal

LINES = []

VALID = {
    "basic": ["@ i : i", r"@ i (p /\ q) <=> (@ i p /\ @ i q)", "[lam] p <=> not <lam> not p"],
    "calc": ["@ sum : <shift> mult"],
}
INVALID = ["@ i : p => p", "<lam> p => p"]


def report(criterion, ok, detail):
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}: {detail}"
    LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_calc_case_study():
    start = time.perf_counter()
    spec = parse_spec(corpus_text("calc.hspec"), "calc.hspec")
    calc = spec.theory("Calc")
    model = parse_model(corpus_text("calc_z5.hmodel"), calc.signature, "calc_z5.hmodel")
    violations = check_constraints(model, calc.constraints)
    holds = [sat_global(model, ax) for ax in calc.axioms]
    elapsed = time.perf_counter() - start
    # The listing contains seven axiom sentences; see the README on the count.
    ok = (len(spec.blocks), spec.axiom_count) == (2, 7) and not violations and all(holds)
    ok = ok and elapsed < 1.0
    report(1, ok, f"{len(spec.blocks)} specs, {spec.axiom_count} axioms, "
                  f"{sum(holds)}/{len(holds)} hold in Z5 model, {elapsed:.3f}s < 1s")


def test_criterion_2_translation_soundness():
    start = time.perf_counter()
    n, agree, seen = 250, 0, set()
    for seed in range(n):
        sig, _, k, s = cases.soundness_instance(seed)
        agree += cases.translation_agrees(sig, k, s)
        seen |= _constructors(s)
    elapsed = time.perf_counter() - start
    missing = {"At", "Box", "Diamond", "ForallNom", "ExistsNom"} - seen
    report(2, agree == n and elapsed < 30 and not missing,
           f"{agree}/{n} agree, {elapsed:.2f}s < 30s, constructs missing: {sorted(missing) or 'none'}")


def _constructors(s):
    out = {type(s).__name__}
    for child in vars(s).values():
        for c in child if isinstance(child, tuple) else (child,):
            if hasattr(c, "__dataclass_fields__") and type(c).__module__ == "hyloc.hybrid":
                out |= _constructors(c)
    return out


def test_criterion_3_satisfaction_condition():
    n = 200
    b = sum(cases.base_satisfaction_condition(s) for s in range(n))
    h = sum(cases.hybrid_satisfaction_condition(s) for s in range(n))
    report(3, b == n and h == n, f"base {b}/{n}, hybrid {h}/{n}")


def test_criterion_4_conservativity(calc, z5):
    n, good = 250, 0
    for seed in range(n):
        sig, cs, k, _ = cases.soundness_instance(seed)
        good += cases.conservative(sig, cs, k)
    calc_ok = cases.conservative(calc.signature, calc.constraints, z5)
    report(4, good == n and calc_ok, f"{good}/{n} random models, Calc Z5 model {calc_ok}")


def _theories():
    return {
        "basic": parse_spec(corpus_text("basic.hspec"), "basic.hspec").theory(),
        "calc": parse_spec(corpus_text("calc.hspec"), "calc.hspec").theory("Calc"),
    }


def test_criterion_5_external_validities(request):
    try:
        external_prover = request.getfixturevalue("external_prover")
    except pytest.skip.Exception as e:
        LINES.append(f"criterion 5 (external): SKIP: {e.msg}")
        raise
    results = []
    for key, goals in VALID.items():
        th = _theories()[key]
        for text in goals:
            g = parse_sentence(text, th.signature)
            v = prove_goal(th, g, "both", external_prover, Bounds(2, 1), timeout=30)
            results.append(v.status is Status.PROVED and v.time < 30)
    report("5 (external)", all(results),
           f"{sum(results)}/{len(results)} proved by {external_prover.id}, each < 30s, no conflicts")


def test_criterion_5_bounded_non_validities():
    th = _theories()["basic"]
    results, conflicts = [], 0
    for text in INVALID:
        v = bounded_verdict(th, parse_sentence(text, th.signature), Bounds(2, 1))
        ok = v.status is Status.COUNTERSAT and v.time < 5
        ok = ok and not sat_global(v.countermodel.model, parse_sentence(text, th.signature))
        results.append(ok)
    for key, goals in VALID.items():
        th2 = _theories()[key]
        for text in goals:
            v = bounded_verdict(th2, parse_sentence(text, th2.signature), Bounds(2, 1))
            conflicts += v.status is Status.COUNTERSAT
    report("5 (bounded)", all(results) and conflicts == 0,
           f"{sum(results)}/{len(results)} countersatisfiable within 2 worlds / carrier 1 in < 5s, "
           f"{conflicts} countermodels to valid goals")


def test_criterion_6_round_trip_and_grammar(calc_spec, tptp_grammar):
    from hyloc.printer import print_spec
    from hyloc.tptp import emit_tptp

    calc_ok = parse_spec(print_spec(calc_spec), "printed").blocks == calc_spec.blocks
    n = 500
    rt = sum(cases.round_trip(s) for s in range(n))
    m, good = 100, 0
    for s in range(m):
        try:
            tptp_grammar.parse(emit_tptp(cases.generated_task(s)))
            good += 1
        except Exception:
            pass
    report(6, calc_ok and rt == n and good == m,
           f"Calc round trip {calc_ok}, {rt}/{n} generated specs, {good}/{m} tasks grammatical")


def test_criterion_7_no_prover(tmp_path, monkeypatch, capsys):
    empty = tmp_path / "none.ini"
    empty.write_text("")
    monkeypatch.setenv("HYLOC_PROVERS", str(empty))
    no_prover = default_prover(load_registry()) is None
    spec = str(tmp_path / "basic.hspec")
    (tmp_path / "basic.hspec").write_text(corpus_text("basic.hspec"))
    bounded = main(["prove", spec, "--strategy", "bounded", "--model-dir", str(tmp_path),
                    "--goal", INVALID[0], "--goal", INVALID[1]])
    external = main(["prove", spec, "--goal", "@ i : i"])
    out, err = capsys.readouterr()
    ok = no_prover and bounded == 1 and external == 2 and "no prover configured" in err
    report(7, ok, "with an empty prover registry bounded search still answers and "
                  "the external strategy refuses with a clear message")

