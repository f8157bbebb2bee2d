"""
From hybrid sentences to a first-order prover
=============================================

A goal is translated into many-sorted first-order logic over an explicit
``World`` sort, then relativised to unsorted logic and written as TPTP.
Any prover that prints an SZS status line can consume the result; the
bundled Z3 adapter is used when nothing else is installed.
"""
from pathlib import Path

from hyloc import Bounds, encode_task, emit_tptp, parse_sentence, parse_spec, prove_goal
from hyloc.fol import dump_theory, show
from hyloc.prover import default_prover

corpus = Path(__file__).resolve().parent.parent / "corpus"
calc = parse_spec((corpus / "calc.hspec").read_text(), "calc.hspec").theory("Calc")
goal = parse_sentence("@ sum : <shift> mult", calc.signature)

task = encode_task(calc, goal)
# The sorted stage: X picks up a leading World argument, suc stays rigid.
print(dump_theory(task.theory))
print("goal :", show(task.goal))

# The unsorted stage adds sort predicates, non-emptiness and closure axioms.
print(emit_tptp(task))

prover = default_prover()
if prover is None:
    print("no prover configured")
else:
    v = prove_goal(calc, goal, "both", prover, Bounds(2, 1), timeout=30)
    print(v.status.name, f"{v.time:.3f}s", v.provenance)
