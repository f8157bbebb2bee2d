"""Dispatching encoded tasks to first-order provers and combining verdicts.

Provers are external programs that take a TPTP file and print an SZS
status line.  They are listed in an INI registry, one section per prover::

    [eprover]
    path = eprover
    args = --auto --tptp3-format -s --cpu-limit={timeout_s} {file}
    timeout = 30

``{file}`` is the problem path, ``{timeout}`` the timeout in seconds and
``{timeout_s}`` the same rounded up to whole seconds.  The registry file is
named by ``HYLOC_PROVERS``; without it a default registry is used, holding
the bundled Z3 adapter plus E and Vampire when they are on ``PATH``.
"""
from __future__ import annotations

import configparser
import enum
import logging
import math
import os
import shlex
import shutil
import subprocess
import sys
import tempfile
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .encoder import EncodedTask, encode_task
from .hybrid import HybridTheory, Sentence
from .kripke import Countermodel, find_countermodel
from .tptp import emit_tptp, parse_szs_status

log = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 30.0
ENV_VAR = "HYLOC_PROVERS"


class Status(enum.Enum):
    PROVED = "Proved"
    COUNTERSAT = "CounterSatisfiable"
    TIMEOUT = "Timeout"
    UNKNOWN = "Unknown"
    ERROR = "ProverError"


SZS_MAP = {
    "Theorem": Status.PROVED,
    "Unsatisfiable": Status.PROVED,
    "ContradictoryAxioms": Status.PROVED,
    "CounterSatisfiable": Status.COUNTERSAT,
    "Satisfiable": Status.COUNTERSAT,
    "Timeout": Status.TIMEOUT,
    "ResourceOut": Status.TIMEOUT,
    "GaveUp": Status.UNKNOWN,
    "Unknown": Status.UNKNOWN,
}


class RegistryError(ValueError):
    pass


@dataclass(frozen=True)
class ProverConfig:
    id: str
    path: str
    args: str = "{file}"
    timeout: float = DEFAULT_TIMEOUT

    def __post_init__(self):
        if not self.timeout > 0:
            raise RegistryError(f"prover {self.id!r}: timeout must be positive")

    def command(self, problem: str, timeout: float | None = None) -> list[str]:
        t = self.timeout if timeout is None else timeout
        fields = {"file": problem, "timeout": f"{t:g}", "timeout_s": str(max(1, math.ceil(t)))}
        return [self.path] + [a.format(**fields) for a in shlex.split(self.args)]

    def with_timeout(self, timeout: float) -> "ProverConfig":
        return ProverConfig(self.id, self.path, self.args, timeout)


def _builtin_registry() -> dict[str, ProverConfig]:
    reg = {
        "z3": ProverConfig("z3", sys.executable, "-m hyloc.z3_prover {file} --timeout {timeout}"),
    }
    if shutil.which("eprover"):
        reg["eprover"] = ProverConfig(
            "eprover", "eprover", "--auto --tptp3-format -s --cpu-limit={timeout_s} {file}"
        )
    if shutil.which("vampire"):
        reg["vampire"] = ProverConfig("vampire", "vampire", "--mode casc -t {timeout_s} {file}")
    return reg


def read_registry(text: str) -> dict[str, ProverConfig]:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as e:
        raise RegistryError(str(e)) from None
    reg = {}
    for section in cp.sections():
        sec = cp[section]
        if "path" not in sec:
            raise RegistryError(f"prover {section!r} has no path")
        try:
            timeout = sec.getfloat("timeout", DEFAULT_TIMEOUT)
        except ValueError:
            raise RegistryError(f"prover {section!r}: timeout is not a number") from None
        reg[section] = ProverConfig(section, sec["path"], sec.get("args", "{file}"), timeout)
    return reg


def load_registry(path: str | None = None) -> dict[str, ProverConfig]:
    """Registry from ``path``, else from ``$HYLOC_PROVERS``, else the default."""
    path = path or os.environ.get(ENV_VAR)
    if not path:
        return _builtin_registry()
    try:
        with open(path, encoding="utf-8") as fh:
            return read_registry(fh.read())
    except OSError as e:
        raise RegistryError(f"cannot read prover registry {path}: {e.strerror}") from None


def default_prover(registry: dict[str, ProverConfig] | None = None) -> ProverConfig | None:
    reg = load_registry() if registry is None else registry
    for pid in ("vampire", "eprover", "z3"):
        if pid in reg:
            return reg[pid]
    return next(iter(reg.values()), None)


# -- verdicts --------------------------------------------------------------------------------


@dataclass(frozen=True)
class ProverVerdict:
    status: Status
    prover: str
    time: float
    output: str = ""
    countermodel: Countermodel | None = None
    provenance: str = ""
    detail: str = ""

    @property
    def definitive(self) -> bool:
        return self.status in (Status.PROVED, Status.COUNTERSAT)


def _excerpt(text: str, limit: int = 2000) -> str:
    return text if len(text) <= limit else text[:limit] + "\n..."


def run_tptp(
    problem: str,
    cfg: ProverConfig,
    timeout: float | None = None,
    cancel: threading.Event | None = None,
) -> ProverVerdict:
    """Run a prover on a TPTP file on disk."""
    t = cfg.timeout if timeout is None else timeout
    cmd = cfg.command(problem, t)
    start = time.perf_counter()
    exe = shutil.which(cmd[0]) or (cmd[0] if os.access(cmd[0], os.X_OK) else None)
    if exe is None:
        return ProverVerdict(
            Status.ERROR, cfg.id, 0.0, provenance=cfg.id,
            detail=f"ExecutableNotFound: {cmd[0]}",
        )
    try:
        proc = subprocess.Popen(
            [exe] + cmd[1:], stdout=subprocess.PIPE, stderr=subprocess.STDOUT, text=True
        )
    except OSError as e:
        return ProverVerdict(
            Status.ERROR, cfg.id, 0.0, provenance=cfg.id, detail=f"ExecutableNotFound: {e}"
        )
    deadline = start + t
    out = ""
    while True:
        step = max(0.0, min(0.05, deadline - time.perf_counter()))
        try:
            out, _ = proc.communicate(timeout=step)
            break
        except subprocess.TimeoutExpired:
            if cancel is not None and cancel.is_set():
                proc.kill()
                proc.communicate()
                return ProverVerdict(
                    Status.UNKNOWN, cfg.id, time.perf_counter() - start,
                    provenance=cfg.id, detail="cancelled",
                )
            if time.perf_counter() >= deadline:
                proc.kill()
                out, _ = proc.communicate()
                return ProverVerdict(
                    Status.TIMEOUT, cfg.id, time.perf_counter() - start, _excerpt(out or ""),
                    provenance=cfg.id, detail=f"no answer within {t:g}s",
                )
    elapsed = time.perf_counter() - start
    szs = parse_szs_status(out)
    if szs is None:
        status = Status.ERROR if proc.returncode != 0 else Status.UNKNOWN
        detail = f"exit code {proc.returncode}, no SZS status line"
    else:
        status = SZS_MAP.get(szs, Status.UNKNOWN)
        detail = f"SZS status {szs}"
    return ProverVerdict(status, cfg.id, elapsed, _excerpt(out), provenance=cfg.id, detail=detail)


def run_prover(
    task: EncodedTask,
    cfg: ProverConfig,
    timeout: float | None = None,
    cancel: threading.Event | None = None,
) -> ProverVerdict:
    """Emit ``task`` as TPTP into a temporary file and run one prover on it."""
    text = emit_tptp(task)
    with tempfile.TemporaryDirectory(prefix="hyloc-") as d:
        path = os.path.join(d, "problem.p")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        return run_tptp(path, cfg, timeout, cancel)


# -- strategies ------------------------------------------------------------------------------


@dataclass(frozen=True)
class Bounds:
    max_worlds: int = 2
    max_carrier: int = 1

    def __str__(self) -> str:
        return f"bounded(worlds<={self.max_worlds},carrier<={self.max_carrier})"


def bounded_verdict(theory: HybridTheory, goal: Sentence, bounds: Bounds) -> ProverVerdict:
    """Internal search.  Never reports PROVED: bounds are not complete."""
    start = time.perf_counter()
    cm = find_countermodel(
        theory.signature, theory.axioms, goal,
        bounds.max_worlds, bounds.max_carrier, theory.constraints,
    )
    elapsed = time.perf_counter() - start
    if cm is None:
        return ProverVerdict(
            Status.UNKNOWN, "bounded", elapsed, provenance=str(bounds),
            detail="no countermodel within bounds",
        )
    return ProverVerdict(
        Status.COUNTERSAT, "bounded", elapsed, countermodel=cm, provenance=str(bounds),
        detail=f"goal fails at world {cm.world}",
    )


def combine(external: ProverVerdict, internal: ProverVerdict) -> ProverVerdict:
    """Merge the two halves of the ``both`` strategy."""
    elapsed = max(external.time, internal.time)
    both = f"{external.provenance}+{internal.provenance}"
    if external.status is Status.PROVED and internal.status is Status.COUNTERSAT:
        return ProverVerdict(
            Status.ERROR, "both", elapsed, external.output, internal.countermodel, both,
            detail=f"conflict: {external.prover} proved the goal but a countermodel exists",
        )
    if external.status is Status.PROVED:
        return ProverVerdict(Status.PROVED, external.prover, elapsed, external.output,
                             provenance=external.provenance, detail=external.detail)
    if internal.status is Status.COUNTERSAT:
        return ProverVerdict(Status.COUNTERSAT, "bounded", elapsed, external.output,
                             internal.countermodel, internal.provenance, internal.detail)
    if external.definitive:
        return external
    return ProverVerdict(
        external.status, "both", elapsed, external.output, provenance=both,
        detail=f"{external.detail}; {internal.detail}",
    )


STRATEGIES = ("external", "bounded", "both")


def prove_goal(
    theory: HybridTheory,
    goal: Sentence,
    strategy: str = "external",
    config: ProverConfig | None = None,
    bounds: Bounds = Bounds(),
    timeout: float | None = None,
    parallel: bool = False,
) -> ProverVerdict:
    """Decide ``theory |= goal`` as far as the chosen strategy allows.

    With ``parallel`` the two halves of ``both`` run concurrently and a
    countermodel from the search stops the external prover early.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "bounded":
        return bounded_verdict(theory, goal, bounds)
    if config is None:
        raise RegistryError("no prover configured for the external strategy")
    task = encode_task(theory, goal)
    if strategy == "external":
        return run_prover(task, config, timeout)
    if not parallel:
        return combine(run_prover(task, config, timeout), bounded_verdict(theory, goal, bounds))
    cancel = threading.Event()
    with ThreadPoolExecutor(max_workers=2) as pool:
        ext = pool.submit(run_prover, task, config, timeout, cancel)
        internal = bounded_verdict(theory, goal, bounds)
        if internal.status is Status.COUNTERSAT:
            cancel.set()
        return combine(ext.result(), internal)


def prove_goals(
    theory: HybridTheory,
    goals: Sequence[Sentence],
    jobs: int = 1,
    **kwargs,
) -> list[ProverVerdict]:
    """Independent goals, up to ``jobs`` at a time; results keep goal order."""
    if jobs <= 1 or len(goals) <= 1:
        return [prove_goal(theory, g, **kwargs) for g in goals]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda g: prove_goal(theory, g, **kwargs), goals))
