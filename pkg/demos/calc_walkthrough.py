"""
A reconfigurable calculator
===========================

One binary operation ``X`` that behaves as addition in the state named
``sum`` and as multiplication in the state named ``mult``.  We parse the
specification, load a finite two-world model over Z/5 and check it.
"""
from pathlib import Path

from hyloc import check_constraints, check_theory, parse_model, parse_spec, sat_local, show

corpus = Path(__file__).resolve().parent.parent / "corpus"

# Two specs: the rigid data part and the hybrid part that imports it.
spec = parse_spec((corpus / "calc.hspec").read_text(), "calc.hspec")
calc = spec.theory("Calc")
print(f"{len(spec.blocks)} specs, {spec.axiom_count} axioms")
for k, ax in enumerate(calc.axioms, 1):
    print(f"  {k}. {show(ax)}")

# The intended model: X is + at world s and x at world m, suc and 0 are shared.
z5 = parse_model((corpus / "calc_z5.hmodel").read_text(), calc.signature, "calc_z5.hmodel")
print("constraint violations:", check_constraints(z5, calc.constraints) or "none")
report = check_theory(z5, calc)
for r in report.results:
    print(" ", r)
print("all axioms hold:", report.ok)

# A broken variant where both worlds multiply: the sum axioms now fail,
# and the report names the world and the witnesses.
bad = parse_model(
    (corpus / "calc_mult_both.hmodel").read_text(), calc.signature, "calc_mult_both.hmodel"
)
for r in check_theory(bad, calc).failures():
    print(" ", r)

# Local truth can be asked world by world.
ax = calc.axioms[0]
print({w: sat_local(z5, w, ax) for w in z5.worlds})
