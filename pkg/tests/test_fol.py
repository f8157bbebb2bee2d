import pytest

from hyloc.fol import (
    All, Conj, Equal, Ex, FolError, FolSignature, FolStructure, FolTheory, FolAxiom, Fn, FVar,
    Imp, Neg, PredAtom, check_formula, check_theory, dump_theory, evaluate, free_vars, show,
)

SIG = FolSignature(("A",), {"c": ((), "A"), "f": (("A",), "A")}, {"P": ("A",)})
M = FolStructure(
    universe=(0, 1),
    funcs={"c": {(): 0}, "f": {(0,): 1, (1,): 1}},
    preds={"P": frozenset({(1,)})},
    domains={"A": (0, 1)},
)


def test_evaluation():
    x = FVar("x")
    assert evaluate(M, PredAtom("P", (Fn("f", (Fn("c"),)),)))
    assert not evaluate(M, All("x", "A", PredAtom("P", (x,))))
    assert evaluate(M, Ex("x", "A", Conj((PredAtom("P", (x,)), Equal(Fn("f", (x,)), x)))))
    assert evaluate(M, Imp(PredAtom("P", (Fn("c"),)), Neg(Equal(Fn("c"), Fn("c")))))


def test_free_vars():
    f = All("x", None, Equal(FVar("x"), FVar("y")))
    assert free_vars(f) == {"y"}


def test_well_ranked():
    check_formula(SIG, All("x", "A", PredAtom("P", (Fn("f", (FVar("x"),)),))))
    with pytest.raises(FolError):
        check_formula(SIG, PredAtom("P", (Fn("c"), Fn("c"))))
    with pytest.raises(FolError, match="unbound"):
        check_formula(SIG, PredAtom("P", (FVar("z"),)))


def test_open_axiom_rejected():
    th = FolTheory("T", SIG, (FolAxiom("a", PredAtom("P", (FVar("x"),))),))
    with pytest.raises(FolError, match="not closed"):
        check_theory(th)


def test_symbol_used_twice_rejected():
    with pytest.raises(FolError):
        FolSignature((), {"a": ((), "$i")}, {"a": ()})


def test_dump_is_readable():
    th = FolTheory("T", SIG, (FolAxiom("ax", All("x", "A", PredAtom("P", (FVar("x"),)))),))
    text = dump_theory(th)
    assert "func f : A -> A" in text and "axiom ax : forall x:A. P(x)" in text
    assert show(Neg(Equal(Fn("c"), Fn("c")))) == "~c = c"
