import random

import pytest

from hyloc.base import BaseModel, BaseSignature, Prop
from hyloc.encoder import (
    EncodingError,
    encode_sentence,
    encode_signature,
    encode_task,
    induced_fol_model,
    kripke_of_structure,
    unsort,
    unsort_formula,
)
from hyloc.fol import All, Conj, Equal, Ex, Fn, FVar, Imp, PredAtom, check_theory, evaluate
from hyloc.hybrid import At, Atom, Box, Diamond, HybridSignature, HybridTheory, Modality, Nom
from hyloc.kripke import ConstraintSet, KripkeModel, sat_local
from hyloc.testing import random_hybrid_signature, random_kripke_model, random_sentence


def test_calc_signature_inventory(calc):
    th = encode_signature(calc.signature, calc.constraints)
    sig = th.signature
    assert set(sig.sorts) == {"World", "Nat"}
    assert dict(sig.funcs) == {
        "mult": ((), "World"),
        "sum": ((), "World"),
        "0": ((), "Nat"),
        "suc": (("Nat",), "Nat"),
        "X": (("World", "Nat", "Nat"), "Nat"),
    }
    assert dict(sig.preds) == {"R_shift": ("World", "World")}
    assert th.axioms == ()


def test_proposition_becomes_unary_world_predicate():
    sig = HybridSignature((), (), BaseSignature.prop(["p"]))
    assert encode_signature(sig).signature.preds == {"p": ("World",)}


def test_reflexive_frame_axiom():
    sig = HybridSignature((), (Modality("l", 2),), BaseSignature.prop(["p"]))
    (ax,) = encode_signature(sig, ConstraintSet({"l": {"reflexive"}})).axioms
    assert ax.formula == All("w", "World", PredAtom("R_l", (FVar("w"), FVar("w"))))


def test_standard_translation_of_calc_fragment(calc):
    s = At("sum", Diamond("shift", (Nom("mult"),)))
    f = encode_sentence(calc.signature, s, FVar("w"))
    w1 = FVar("%w1")
    assert f == Ex("%w1", "World", Conj((PredAtom("R_shift", (Fn("sum"), w1)), Equal(w1, Fn("mult")))))


def test_nominal_clause(basic):
    assert encode_sentence(basic.signature, Nom("i"), FVar("w")) == Equal(FVar("w"), Fn("i"))


def test_vacuous_box_matches_kripke():
    sig = HybridSignature(("i",), (Modality("l", 2),), BaseSignature.prop(["p"]))
    k = KripkeModel(sig, ("w",), {"l": frozenset()}, {"i": "w"},
                    {"w": BaseModel(sig.base, valuation={"p": False})})
    s = Box("l", (Atom(Prop("p")),))
    f = encode_sentence(sig, s, FVar("v"))
    assert sat_local(k, "w", s)
    assert evaluate(induced_fol_model(k), f, {"v": ("World", "w")})


def test_unsort_examples():
    sig = HybridSignature(("i",), (Modality("l", 2),), BaseSignature.prop(["p"]))
    sorted_th = encode_signature(sig, ConstraintSet({"l": {"reflexive"}}))
    u = unsort(sorted_th)
    by_label = {a.label: a.formula for a in u.axioms}
    w = FVar("w")
    assert by_label["frame_reflexive_l"] == All(
        "w", None, Imp(PredAtom("is_World", (w,)), PredAtom("R_l", (w, w)))
    )
    assert by_label["closure_i"] == PredAtom("is_World", (Fn("i"),))
    assert by_label["nonempty_World"] == Ex("x", None, PredAtom("is_World", (FVar("x"),)))
    check_theory(u)


def test_suc_closure(calc):
    u = unsort(encode_signature(calc.signature))
    x = FVar("x1")
    closure = {a.label: a.formula for a in u.axioms}["closure_suc"]
    assert closure == All(
        "x1", None, Imp(PredAtom("is_Nat", (x,)), PredAtom("is_Nat", (Fn("suc", (x,)),)))
    )


def test_goal_excludes_signature_axioms(basic):
    task = encode_task(basic, At("i", Nom("i")))
    assert task.goal == Equal(Fn("i"), Fn("i"))
    assert task.unsorted_goal == task.goal


def test_calc_task_sizes(calc):
    task = encode_task(calc)
    labels = [a.label for a in task.unsorted_theory.axioms]
    assert sum(1 for x in labels if x.startswith("premise_")) == 7
    assert sum(1 for x in labels if x.startswith("closure_")) == 5
    assert sum(1 for x in labels if x.startswith("nonempty_")) == 2
    assert task.goal is None


def test_clashing_names_are_rejected():
    sig = HybridSignature((), (Modality("l", 2),), BaseSignature.prop(["R_l"]))
    with pytest.raises(EncodingError):
        encode_signature(sig)


def test_calc_induced_model(calc, z5, mult_both):
    m = induced_fol_model(z5)
    assert len(m.universe) == 2 + 5
    task = encode_task(calc)
    assert all(evaluate(m, a.formula) for a in task.unsorted_theory.axioms)
    assert all(evaluate(m, a.formula) for a in task.theory.axioms)
    bad = induced_fol_model(mult_both)
    results = [evaluate(bad, a.formula) for a in task.unsorted_theory.axioms]
    assert results.count(False) == 3


def test_one_world_prop_model():
    sig = HybridSignature((), (), BaseSignature.prop(["p"]))
    k = KripkeModel(sig, ("w",), {}, {}, {"w": BaseModel(sig.base, valuation={"p": True})})
    m = induced_fol_model(k)
    assert m.universe == (("World", "w"),)
    assert (("World", "w"),) in m.preds["p"]


def test_translation_agrees_on_calc(calc, z5, mult_both):
    for k in (z5, mult_both):
        m = induced_fol_model(k)
        for ax in calc.axioms:
            f = unsort_formula(encode_sentence(calc.signature, ax, FVar("W")))
            for w in k.worlds:
                assert sat_local(k, w, ax) == evaluate(m, f, {"W": ("World", w)})


def test_back_translation_inverts_induced_model():
    rng = random.Random(3)
    for _ in range(30):
        sig = random_hybrid_signature(rng, "PROP")
        k = random_kripke_model(rng, sig)
        assert kripke_of_structure(induced_fol_model(k), sig) == k


def test_goal_must_be_closed(basic):
    with pytest.raises(EncodingError):
        encode_task(basic, Nom("nowhere"))
