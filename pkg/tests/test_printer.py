import pytest

from hyloc.base import Prop
from hyloc.hybrid import And, At, Atom, Box, ExistsNom, ForallNom, Iff, Implies, Nom, Not, Or
from hyloc.parser import parse_model, parse_sentence, parse_spec
from hyloc.printer import print_model, print_spec, show

p, q = Atom(Prop("p")), Atom(Prop("q"))


@pytest.mark.parametrize(
    "sentence, text",
    [
        (And(Or(p, q), p), "(p \\/ q) /\\ p"),
        (Implies(At("i", p), p), "@ i p => p"),
        (And(At("i", p), q), "@ i p /\\ q"),
        (At("i", And(p, q)), "@ i : p /\\ q"),
        (Not(Box("lam", (p,))), "not [lam] p"),
        (ForallNom("k", At("k", Nom("i"))), "forallH k : World . @ k : i"),
        (And(ExistsNom("k", Nom("k")), p), "(existsH k : World . k) /\\ p"),
        (Iff(Iff(p, q), p), "(p <=> q) <=> p"),
    ],
)
def test_show(sentence, text):
    assert show(sentence) == text


def test_calc_round_trip(calc_spec):
    text = print_spec(calc_spec)
    again = parse_spec(text)
    assert again == calc_spec
    assert print_spec(again) == text


def test_model_round_trip(calc, z5):
    text = print_model(z5)
    assert parse_model(text, calc.signature) == z5
    assert text.count("op suc") == 5  # rigid tables appear once


def test_goal_text_round_trips(basic):
    for g in ["@ i : p => p", "<lam> p => p", "[lam] p <=> not <lam> not p"]:
        s = parse_sentence(g, basic.signature)
        assert parse_sentence(show(s), basic.signature) == s
