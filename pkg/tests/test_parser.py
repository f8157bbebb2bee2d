import pytest

from hyloc.base import App, Eq, OpDecl, Sort, Var
from hyloc.hybrid import (
    And, At, Atom, Box, Diamond, ExistsRigid, ForallRigid, Iff, Implies, Modality, Nom, Not, Or,
)
from hyloc.parser import ParseError, parse_model, parse_sentence, parse_spec, tokenize

from conftest import corpus_text

BASIC = """
spec B =
  hlogic : HPROP
  props p, q
  nominals i, j
  modality r : 2
  modality t : 3
end
"""


@pytest.fixture(scope="module")
def sig():
    return parse_spec(BASIC).theory().signature


def P(name):
    from hyloc.base import Prop

    return Atom(Prop(name))


def test_calc_listing_structure(calc_spec):
    nat, calc = calc_spec.blocks
    assert (nat.name, nat.kind, nat.logic) == ("Nat", "logic", "RigidCASL")
    assert nat.sorts == (Sort("Nat", True),)
    assert nat.ops == (
        OpDecl("0", (), "Nat", True),
        OpDecl("suc", ("Nat",), "Nat", True),
        OpDecl("X", ("Nat", "Nat"), "Nat", False),
    )
    assert calc.imports == ("Nat",)
    assert calc.nominals == ("mult", "sum")
    assert calc.modalities == (Modality("shift", 2),)
    assert len(calc.axioms) == 7 and calc_spec.axiom_count == 7


def test_calc_axiom_shapes(calc):
    ax = calc.axioms
    assert ax[0] == Or(Nom("mult"), Nom("sum"))
    assert ax[1] == At(
        "sum", And(Diamond("shift", (Nom("mult"),)), Box("shift", (Nom("mult"),)))
    )
    assert ax[3] == At("mult", Not(Nom("sum")))
    five = ax[4]
    assert five == At(
        "sum", ForallRigid("m", "Nat", Atom(Eq(App("X", (Var("m"), App("0"))), Var("m"))))
    )
    seven = ax[6]
    assert isinstance(seven.arg, ForallRigid) and isinstance(seven.arg.body.body, ExistsRigid)


def test_precedence(sig):
    assert parse_sentence("p /\\ q \\/ p", sig) == Or(And(P("p"), P("q")), P("p"))
    assert parse_sentence("p => q => p", sig) == Implies(P("p"), Implies(P("q"), P("p")))
    assert parse_sentence("p <=> q => p", sig) == Iff(P("p"), Implies(P("q"), P("p")))
    assert parse_sentence("not p /\\ q", sig) == And(Not(P("p")), P("q"))


def test_at_scopes(sig):
    # the colon form covers disjunctions and conjunctions but stops at =>
    assert parse_sentence("@ i : p \\/ q", sig) == At("i", Or(P("p"), P("q")))
    assert parse_sentence("@ i : p => p", sig) == Implies(At("i", P("p")), P("p"))
    # the tight form takes a single prefix formula
    assert parse_sentence("@ i p /\\ q", sig) == And(At("i", P("p")), P("q"))


def test_modal_forms(sig):
    assert parse_sentence("[r] p", sig) == Box("r", (P("p"),))
    assert parse_sentence("<t>(p, q)", sig) == Diamond("t", (P("p"), P("q")))


def test_arity_mismatch_is_positioned(sig):
    with pytest.raises(ParseError) as e:
        parse_sentence("p /\\ [t] p", sig)
    (d,) = e.value.diagnostics
    assert (d.line, d.column) == (1, 6)
    assert "arity mismatch" in d.message


def test_unknown_symbol(sig):
    with pytest.raises(ParseError, match="unknown symbol 'zz'"):
        parse_sentence("p /\\ zz", sig)


def test_quantified_sort_must_be_rigid():
    text = """
spec S =
  hlogic : HRigidFOL
  sort Flex
  op c : Flex
  . forall x : Flex . x = c
end
"""
    with pytest.raises(ParseError, match="not rigid"):
        parse_spec(text)


def test_all_errors_mode_collects_several_diagnostics():
    text = BASIC.replace("end", ". p /\\ \n  . [r] zz\n  . q q\nend")
    with pytest.raises(ParseError) as e:
        parse_spec(text, "b.hspec", all_errors=True)
    assert len(e.value.diagnostics) >= 2
    assert all(d.file == "b.hspec" for d in e.value.diagnostics)


def test_non_ascii_is_diagnosed():
    _, diags = tokenize("p ∧ q")
    assert diags and "non-ASCII" in diags[0].message and diags[0].column == 3


def test_missing_end():
    with pytest.raises(ParseError, match="missing 'end'"):
        parse_spec("spec A = hlogic : HPROP props p")


def test_frame_properties_are_parsed():
    th = parse_spec(BASIC.replace("modality r : 2", "modality r : 2 reflexive transitive")).theory()
    assert th.constraints.frame == {"r": frozenset({"reflexive", "transitive"})}


def test_model_diagnostics(calc):
    good = corpus_text("calc_z5.hmodel")
    with pytest.raises(ParseError, match="nominal 'sum' unassigned"):
        parse_model(good.replace("nominal sum = s\n", ""), calc.signature)
    with pytest.raises(ParseError) as e:
        parse_model(corpus_text("calc_nonrigid.hmodel"), calc.signature, "nr.hmodel")
    d = e.value.diagnostics[0]
    assert d.code == "rigidity" and (d.line, d.column) == (13, 6)
    assert str(d) == "nr.hmodel:13:6: error: rigid op 'suc' redeclared in world 'm'"


def test_model_relation_width(calc):
    text = corpus_text("calc_z5.hmodel").replace("(s, m), (m, s)", "(s, m, s)")
    with pytest.raises(ParseError, match="width|arity"):
        parse_model(text, calc.signature)
