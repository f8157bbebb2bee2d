import pytest

from hyloc.encoder import encode_task
from hyloc.fol import All, Conj, Disj, Equal, FVar, Fn, Imp, Neg, PredAtom
from hyloc.hybrid import At, Nom
from hyloc.parser import parse_sentence
from hyloc.tptp import (
    Namer,
    TptpError,
    UnsanitizableIdentifier,
    emit_tptp,
    formula_text,
    parse_szs_status,
    parse_tptp,
)

AT_SELF = """\
% problem: Basic
% nonempty_World
fof(ax_1,axiom,(? [V_x] : is_World(V_x))).
% closure_i
fof(ax_2,axiom,is_World(i)).
% closure_j
fof(ax_3,axiom,is_World(j)).
% goal
fof(goal,conjecture,(i = i)).
"""


def test_golden_at_self(basic):
    assert emit_tptp(encode_task(basic, At("i", Nom("i")))) == AT_SELF


def test_emission_is_deterministic(calc):
    g = parse_sentence("@ sum : <shift> mult", calc.signature)
    assert emit_tptp(encode_task(calc, g)) == emit_tptp(encode_task(calc, g))


def test_namer():
    n = Namer()
    assert n.symbol("suc") == "suc"
    assert n.symbol("0") == "c_0"
    assert n.symbol("X") == "c_X"
    assert n.symbol("c_X") == "c_X_2"  # clash with an earlier rewrite
    assert n.symbol("fof") == "c_fof"
    assert n.symbol("suc") == "suc"
    assert Namer.variable("%w3") == "W3" and Namer.variable("m") == "V_m"
    with pytest.raises(UnsanitizableIdentifier):
        n.symbol("bad-name")


def test_fully_parenthesised():
    a, b, c = (PredAtom(x) for x in "abc")
    assert formula_text(Conj((a, b, c)), Namer()) == "(a & (b & c))"
    assert formula_text(Imp(Disj((a, b)), Neg(c)), Namer()) == "((a | b) => ~ c)"
    with pytest.raises(TptpError):
        formula_text(All("x", "S", a), Namer())


def test_calc_problem_is_grammatical(calc, tptp_grammar):
    text = emit_tptp(encode_task(calc, parse_sentence("@ sum : <shift> mult", calc.signature)))
    tptp_grammar.parse(text)
    units = parse_tptp(text)
    assert [u.role for u in units].count("axiom") == 14 and units[-1].role == "conjecture"


def test_reference_grammar_is_strict(tptp_grammar):
    with pytest.raises(Exception):
        tptp_grammar.parse("fof(a,axiom,(p & q | r)).")


def test_reader():
    (u,) = parse_tptp("fof(a, axiom, ! [X,Y] : (p(X) <= X != Y), [annotation]).  % c")
    x, y = FVar("X"), FVar("Y")
    assert u.formula == All("X", None, All("Y", None, Imp(Neg(Equal(x, y)), PredAtom("p", (x,)))))
    with pytest.raises(TptpError):
        parse_tptp("cnf(a, axiom, p).")


def test_reader_inverts_emission(basic):
    g = parse_sentence("[lam] p <=> not <lam> not p", basic.signature)
    text = emit_tptp(encode_task(basic, g))
    assert len(parse_tptp(text)) == 4


@pytest.mark.parametrize(
    "out, status",
    [
        ("% SZS status Theorem for p.p\n", "Theorem"),
        ("# SZS status CounterSatisfiable\n", "CounterSatisfiable"),
        ("nothing here", None),
    ],
)
def test_szs(out, status):
    assert parse_szs_status(out) == status
