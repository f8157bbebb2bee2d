import os
import sys

import pytest

from hyloc.encoder import encode_task
from hyloc.hybrid import At, Nom
from hyloc.parser import parse_sentence
from hyloc.prover import (
    Bounds,
    ProverConfig,
    ProverVerdict,
    RegistryError,
    Status,
    combine,
    load_registry,
    prove_goal,
    read_registry,
    run_prover,
    run_tptp,
)
from hyloc.z3_prover import solve


def fake_prover(tmp_path, output, code=0):
    script = tmp_path / "fake.py"
    script.write_text(f"import sys\nprint({output!r})\nsys.exit({code})\n")
    return ProverConfig("fake", sys.executable, f"{script} {{file}}")


def test_registry_file(tmp_path, monkeypatch):
    reg = tmp_path / "provers.ini"
    reg.write_text("[mine]\npath = /opt/mine\nargs = -t {timeout_s} {file}\ntimeout = 5\n")
    monkeypatch.setenv("HYLOC_PROVERS", str(reg))
    cfg = load_registry()["mine"]
    assert cfg.timeout == 5
    assert cfg.command("x.p", 2.5) == ["/opt/mine", "-t", "3", "x.p"]


def test_registry_errors():
    with pytest.raises(RegistryError):
        read_registry("[p]\nargs = x\n")
    with pytest.raises(RegistryError):
        read_registry("[p]\npath = x\ntimeout = 0\n")


@pytest.mark.parametrize(
    "line, code, status",
    [
        ("% SZS status Theorem for x", 0, Status.PROVED),
        ("% SZS status Unsatisfiable for x", 0, Status.PROVED),
        ("% SZS status CounterSatisfiable for x", 0, Status.COUNTERSAT),
        ("% SZS status Timeout for x", 0, Status.TIMEOUT),
        ("% SZS status GaveUp for x", 0, Status.UNKNOWN),
        ("segfault", 139, Status.ERROR),
        ("no verdict", 0, Status.UNKNOWN),
    ],
)
def test_szs_mapping(tmp_path, line, code, status):
    cfg = fake_prover(tmp_path, line, code)
    problem = tmp_path / "p.p"
    problem.write_text("fof(goal,conjecture,$true).\n")
    assert run_tptp(str(problem), cfg).status is status


def test_missing_executable(basic):
    cfg = ProverConfig("ghost", "/nonexistent/prover")
    v = run_prover(encode_task(basic, At("i", Nom("i"))), cfg)
    assert v.status is Status.ERROR and v.detail.startswith("ExecutableNotFound")


def test_timeout_is_a_verdict(tmp_path):
    script = tmp_path / "slow.py"
    script.write_text("import time\ntime.sleep(10)\n")
    cfg = ProverConfig("slow", sys.executable, f"{script} {{file}}")
    problem = tmp_path / "p.p"
    problem.write_text("fof(goal,conjecture,$true).\n")
    v = run_tptp(str(problem), cfg, timeout=0.3)
    assert v.status is Status.TIMEOUT and v.time < 5


def test_bounded_never_proves(basic):
    v = prove_goal(basic, At("i", Nom("i")), "bounded", bounds=Bounds(2, 1))
    assert v.status is Status.UNKNOWN and "worlds<=2" in v.provenance


def test_bounded_countermodel_is_reproducible(basic):
    g = parse_sentence("<lam> p => p", basic.signature)
    a = prove_goal(basic, g, "bounded")
    b = prove_goal(basic, g, "bounded")
    assert a.status is Status.COUNTERSAT and a.countermodel == b.countermodel


def test_combine_conflict_is_an_error():
    ext = ProverVerdict(Status.PROVED, "x", 0.1, provenance="x")
    internal = ProverVerdict(Status.COUNTERSAT, "bounded", 0.1, provenance="b")
    assert combine(ext, internal).status is Status.ERROR
    unknown = ProverVerdict(Status.UNKNOWN, "bounded", 0.1, provenance="b")
    assert combine(ext, unknown).status is Status.PROVED
    timeout = ProverVerdict(Status.TIMEOUT, "x", 1.0, provenance="x")
    assert combine(timeout, internal).status is Status.COUNTERSAT


def test_external_needs_a_config(basic):
    with pytest.raises(RegistryError):
        prove_goal(basic, At("i", Nom("i")), "external", config=None)


def test_z3_adapter_statuses():
    assert solve("fof(goal,conjecture,(a = a)).") == "Theorem"
    assert solve("fof(goal,conjecture,p(a)).") == "CounterSatisfiable"
    assert solve("fof(a,axiom,p).\nfof(b,axiom,~ p).") == "Unsatisfiable"
    assert solve("fof(a,axiom,p).") == "Satisfiable"


@pytest.mark.parametrize(
    "goal, status",
    [
        ("@ i : i", Status.PROVED),
        ("@ i : p => p", Status.COUNTERSAT),
        ("<lam> p => p", Status.COUNTERSAT),
    ],
)
def test_external_verdicts(basic, external_prover, goal, status):
    g = parse_sentence(goal, basic.signature)
    assert prove_goal(basic, g, "external", external_prover).status is status


def test_parallel_both(basic, external_prover):
    g = parse_sentence("<lam> p => p", basic.signature)
    v = prove_goal(basic, g, "both", external_prover, parallel=True)
    assert v.status is Status.COUNTERSAT and v.countermodel is not None
