"""
Finding countermodels
=====================

Bounded search enumerates every Kripke model up to a size limit.  It can
refute a goal but never prove one, so a miss is reported as unknown.
"""
from pathlib import Path

from hyloc import find_countermodel, parse_sentence, parse_spec, print_model, sat_local

corpus = Path(__file__).resolve().parent.parent / "corpus"
basic = parse_spec((corpus / "basic.hspec").read_text(), "basic.hspec").theory()
sig = basic.signature

# "What holds at i holds here" is not valid: two worlds are enough to see why.
goal = parse_sentence("@ i : p => p", sig)
cm = find_countermodel(sig, basic.axioms, goal, max_worlds=2, max_carrier=1)
print(f"goal fails at world {cm.world}")
print(print_model(cm.model))

# The printed model is ordinary input again, so the loop can be closed.
assert not sat_local(cm.model, cm.world, goal)

# Reflexivity is not assumed, so a possible p need not be actual.
goal = parse_sentence("<lam> p => p", sig)
print(print_model(find_countermodel(sig, (), goal, 2, 1).model))

# A validity has no countermodel at any size; the search just comes back empty.
print(find_countermodel(sig, (), parse_sentence("@ i : i", sig), 2, 1))
