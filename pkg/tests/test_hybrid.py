import pytest

from hyloc.base import BaseSignature, Prop, SignatureError, SignatureMorphism
from hyloc.hybrid import (
    WORLD,
    And,
    At,
    Atom,
    Box,
    Diamond,
    ForallNom,
    HybridMorphism,
    HybridSignature,
    HybridTheory,
    Modality,
    Nom,
    Not,
    check_wellformed,
    free_names,
    is_closed,
    signature_problems,
    size,
    translate_hybrid,
)

BASE = BaseSignature.prop(["p", "q"])
SIG = HybridSignature(("i", "j"), (Modality("r", 2), Modality("t", 3)), BASE)


def test_namespaces_must_be_disjoint():
    with pytest.raises(SignatureError):
        HybridSignature(("p",), (), BASE)
    with pytest.raises(SignatureError):
        HybridSignature(("i",), (Modality("i", 2),), BASE)


def test_world_sort_name_is_reserved():
    from hyloc.base import Sort

    with pytest.raises(SignatureError):
        HybridSignature((), (), BaseSignature.rfol([Sort(WORLD, True)]))


def test_unary_modality_is_reported():
    sig = HybridSignature((), (Modality("u", 1),), BASE)
    assert "at least 2" in signature_problems(sig)[0].message
    assert signature_problems(SIG) == []


def test_arity_mismatch_message():
    s = Box("t", (Atom(Prop("p")),))
    (problem,) = check_wellformed(SIG, s)
    assert problem.message == "arity mismatch: expected 2 arguments, got 1"


def test_undeclared_names():
    msgs = [p.message for p in check_wellformed(SIG, And(Nom("k"), Diamond("zz", (Nom("i"),))))]
    assert "undeclared nominal 'k'" in msgs
    assert "undeclared modality 'zz'" in msgs


def test_binder_problems():
    shadow = ForallNom("k", ForallNom("k", Nom("k")))
    assert any("shadows" in p.message for p in check_wellformed(SIG, shadow))
    clash = ForallNom("i", Nom("i"))
    assert any("clashes" in p.message for p in check_wellformed(SIG, clash))


def test_free_names_and_closedness():
    s = ForallNom("k", At("k", Nom("j")))
    assert free_names(s) == (frozenset({"j"}), frozenset())
    assert is_closed(SIG, s)
    assert not is_closed(SIG, Nom("k"))


def test_size_counts_nodes():
    assert size(Not(And(Nom("i"), Nom("j")))) == 4


def test_translation_renames_everything():
    src = HybridSignature(("a",), (Modality("m", 2),), BaseSignature.prop(["x"]))
    phi = HybridMorphism(
        src, SIG, {"a": "i"}, {"m": "r"},
        SignatureMorphism(src.base, BASE, atoms={"x": "q"}),
    )
    s = At("a", Diamond("m", (Atom(Prop("x")),)))
    assert translate_hybrid(phi, s) == At("i", Diamond("r", (Atom(Prop("q")),)))


def test_translation_alpha_renames_captured_binders():
    src = HybridSignature(("a",), (), BaseSignature.prop(["x"]))
    tgt = HybridSignature(("a", "k"), (), BaseSignature.prop(["x"]))
    phi = HybridMorphism(src, tgt)
    s = ForallNom("k", At("k", Nom("a")))
    out = translate_hybrid(phi, s)
    assert out.var != "k" and out.body == At(out.var, Nom("a"))


def test_morphism_checks_modality_arity():
    src = HybridSignature((), (Modality("m", 3),), BASE)
    with pytest.raises(SignatureError):
        HybridMorphism(src, SIG, {}, {"m": "r"})


def test_theory_rejects_open_axioms():
    with pytest.raises(SignatureError, match="undeclared nominal"):
        HybridTheory("T", SIG, (Nom("k"),))
