import os
import sys
from pathlib import Path

import pytest

from hyloc.parser import parse_model, parse_spec

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def corpus_text(name: str) -> str:
    return (CORPUS / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def calc_spec():
    return parse_spec(corpus_text("calc.hspec"), "calc.hspec")


@pytest.fixture(scope="session")
def calc(calc_spec):
    return calc_spec.theory("Calc")


@pytest.fixture(scope="session")
def basic():
    return parse_spec(corpus_text("basic.hspec"), "basic.hspec").theory()


@pytest.fixture(scope="session")
def z5(calc):
    return parse_model(corpus_text("calc_z5.hmodel"), calc.signature, "calc_z5.hmodel")


@pytest.fixture(scope="session")
def mult_both(calc):
    return parse_model(
        corpus_text("calc_mult_both.hmodel"), calc.signature, "calc_mult_both.hmodel"
    )


def _grammar_path():
    try:
        import tptp_lark_parser
    except ImportError:
        return None
    p = Path(tptp_lark_parser.__file__).parent / "resources" / "TPTP.lark"
    return p if p.exists() else None


@pytest.fixture(scope="session")
def tptp_grammar():
    """The reference TPTP grammar, compiled with lark's LALR parser."""
    lark = pytest.importorskip("lark")
    path = _grammar_path()
    if path is None:
        pytest.skip("TPTP reference grammar (tptp-lark-parser) not installed")
    return lark.Lark(path.read_text(), start="tptp_file", parser="lalr")


@pytest.fixture(scope="session")
def external_prover():
    """A working SZS prover from the registry, or a skip with a notice."""
    from hyloc.prover import Status, default_prover, run_tptp

    cfg = default_prover()
    if cfg is None:
        pytest.skip("NOTICE: no external prover configured; external checks skipped")
    import tempfile

    with tempfile.TemporaryDirectory() as d:
        p = os.path.join(d, "probe.p")
        Path(p).write_text("fof(goal,conjecture,(a = a)).\n")
        v = run_tptp(p, cfg, timeout=30)
    if v.status is not Status.PROVED:
        pytest.skip(f"NOTICE: prover {cfg.id} unusable ({v.detail}); external checks skipped")
    return cfg


def pytest_terminal_summary(terminalreporter):
    lines = getattr(sys.modules.get("test_acceptance"), "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
