"""Seeded single-case checks shared by the property and acceptance suites.

Each function takes an integer seed, builds one random instance with
``hyloc.testing`` and returns whether the checked law held.
"""
import random

from hyloc.base import base_satisfies, reduct_model, translate_sentence
from hyloc.encoder import encode_sentence, encode_task, induced_fol_model, unsort_formula
from hyloc.fol import FVar, evaluate
from hyloc.hybrid import HybridTheory, translate_hybrid
from hyloc.kripke import reduct_kripke, sat_local
from hyloc.parser import parse_spec
from hyloc.printer import print_block
from hyloc.testing import (
    random_base_case,
    random_constraints,
    random_hybrid_morphism,
    random_hybrid_signature,
    random_kripke_model,
    random_sentence,
    random_spec_blocks,
)


def base_satisfaction_condition(seed: int) -> bool:
    c = random_base_case(random.Random(seed))
    lhs = base_satisfies(c.model, translate_sentence(c.morphism, c.sentence), c.env)
    rhs = base_satisfies(reduct_model(c.morphism, c.model), c.sentence, c.env)
    return lhs == rhs


def hybrid_satisfaction_condition(seed: int) -> bool:
    rng = random.Random(seed)
    target = random_hybrid_signature(rng, rng.choice(["PROP", "RFOL"]))
    phi = random_hybrid_morphism(rng, target)
    model = random_kripke_model(rng, target, max_worlds=3, max_carrier=2)
    s = random_sentence(rng, phi.source, depth=3)
    reduct = reduct_kripke(phi, model)
    t = translate_hybrid(phi, s)
    return all(sat_local(model, w, t) == sat_local(reduct, w, s) for w in model.worlds)


def soundness_instance(seed: int):
    """A PROP-based signature, constrained model and sentence within the stated limits."""
    rng = random.Random(seed)
    sig = random_hybrid_signature(rng, "PROP", max_modalities=2, arities=(2, 3), max_atoms=3)
    cs = random_constraints(rng, sig)
    k = random_kripke_model(rng, sig, max_worlds=4, constraints=cs)
    return sig, cs, k, random_sentence(rng, sig, depth=4)


def translation_agrees(sig, k, s) -> bool:
    f = unsort_formula(encode_sentence(sig, s, FVar("W")))
    m = induced_fol_model(k)
    return all(sat_local(k, w, s) == evaluate(m, f, {"W": ("World", w)}) for w in k.worlds)


def conservative(sig, cs, k) -> bool:
    """The induced structure satisfies every signature, frame and closure axiom."""
    task = encode_task(HybridTheory("T", sig, (), cs))
    m = induced_fol_model(k)
    return all(evaluate(m, a.formula) for a in task.unsorted_theory.axioms)


def spec_text(blocks) -> str:
    return "".join(print_block(b) + "\n" for b in blocks)


def round_trip(seed: int) -> bool:
    blocks = random_spec_blocks(random.Random(seed), n_axioms=3)
    return parse_spec(spec_text(blocks), "<generated>").blocks == tuple(blocks)


def generated_task(seed: int):
    """A proof task over a generated spec; the goal is a fresh random sentence."""
    rng = random.Random(seed)
    blocks = random_spec_blocks(rng, n_axioms=2)
    th = parse_spec(spec_text(blocks), "<generated>").theory()
    return encode_task(th, random_sentence(rng, th.signature, depth=3))

