"""Pretty-printing of sentences, spec files and model files.

Output re-parses to the same AST.  Parentheses are inserted only where
precedence or the open-ended scope of ``@ i :`` and quantifier bodies
requires them.
"""
from __future__ import annotations

import re

from . import base
from .hybrid import (
    WORLD,
    And,
    At,
    Atom,
    Box,
    Diamond,
    ExistsNom,
    ExistsRigid,
    ForallNom,
    ForallRigid,
    Iff,
    Implies,
    Nom,
    Not,
    Or,
    Sentence,
)

# precedence levels: quantifier scope < <=> < => < \/ < /\ < prefix
_IFF, _IMP, _OR, _AND, _PREFIX = 1, 2, 3, 4, 5

_TOKEN = re.compile(r"[A-Za-z][A-Za-z0-9_]*|[0-9]+\Z")


def show_term(t) -> str:
    if isinstance(t, base.Var):
        return t.name
    if not t.args:
        return t.op
    return f"{t.op}({', '.join(show_term(a) for a in t.args)})"


def show_base(s) -> str:
    if isinstance(s, base.Prop):
        return s.name
    if isinstance(s, base.Eq):
        return f"{show_term(s.lhs)} = {show_term(s.rhs)}"
    if not s.args:
        return s.rel
    return f"{s.rel}({', '.join(show_term(a) for a in s.args)})"


def _fmt(s: Sentence, ctx: int, tail: bool) -> str:
    if isinstance(s, Atom):
        return show_base(s.base)
    if isinstance(s, Nom):
        return s.name
    if isinstance(s, Not):
        return "not " + _fmt(s.arg, _PREFIX, tail)
    if isinstance(s, (Box, Diamond)):
        op = f"[{s.modality}]" if isinstance(s, Box) else f"<{s.modality}>"
        if len(s.args) == 1:
            return f"{op} {_fmt(s.args[0], _PREFIX, tail)}"
        return f"{op}({', '.join(_fmt(a, 0, True) for a in s.args)})"
    if isinstance(s, At):
        if tail or ctx <= _IMP:
            return f"@ {s.nominal} : {_fmt(s.arg, _OR, tail)}"
        return f"@ {s.nominal} {_fmt(s.arg, _PREFIX, tail)}"
    if isinstance(s, (ForallNom, ExistsNom, ForallRigid, ExistsRigid)):
        kw = "forallH" if isinstance(s, (ForallNom, ForallRigid)) else "existsH"
        sort = getattr(s, "sort", WORLD)
        text = f"{kw} {s.var} : {sort} . {_fmt(s.body, 0, True)}"
        return text if tail else f"({text})"
    if isinstance(s, And):
        level, left, right, op = _AND, _AND, _PREFIX, "/\\"
    elif isinstance(s, Or):
        level, left, right, op = _OR, _OR, _AND, "\\/"
    elif isinstance(s, Implies):
        level, left, right, op = _IMP, _OR, _IMP, "=>"
    elif isinstance(s, Iff):
        level, left, right, op = _IFF, _IMP, _IFF, "<=>"
    else:
        raise TypeError(f"not a sentence: {s!r}")
    if level < ctx:
        return f"({_fmt(s, 0, True)})"
    return f"{_fmt(s.left, left, False)} {op} {_fmt(s.right, right, tail)}"


def show(s: Sentence) -> str:
    """Concrete syntax for a sentence."""
    return _fmt(s, 0, True)


# -- spec files -------------------------------------------------------------------


def _rank(args, result=None) -> str:
    text = " * ".join(args)
    if result is None:
        return text
    return f"{text} -> {result}" if args else result


def print_block(block) -> str:
    lines = [f"spec {block.name} =", f"  {block.kind} : {block.logic}"]
    for name in block.imports:
        lines.append(f"  data {name}")
    if block.props:
        lines.append(f"  props {', '.join(block.props)}")
    for s in block.sorts:
        lines.append(f"  {'rigid ' if s.rigid else ''}sort {s.name}")
    for o in block.ops:
        lines.append(f"  {'rigid ' if o.rigid else ''}op {o.name} : {_rank(o.args, o.result)}")
    for r in block.rels:
        rank = f" : {_rank(r.args)}" if r.args else ""
        lines.append(f"  {'rigid ' if r.rigid else ''}pred {r.name}{rank}")
    if block.nominals:
        lines.append(f"  nominals {', '.join(block.nominals)}")
    for m in block.modalities:
        props = "".join(f" {p}" for p in block.frame.get(m.name, ()))
        lines.append(f"  modality {m.name} : {m.arity}{props}")
    for ax in block.axioms:
        lines.append(f"  . {show(ax)}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def print_spec(spec) -> str:
    return "\n".join(print_block(b) for b in spec.blocks)


# -- model files ------------------------------------------------------------------


def _id(x) -> str:
    text = str(x)
    if not _TOKEN.fullmatch(text):
        raise ValueError(f"{x!r} cannot be written as a model-file name")
    return text


def _tuple(t) -> str:
    return "(" + ", ".join(_id(x) for x in t) + ")"


def _sorted(items):
    return sorted(items, key=lambda t: tuple(map(str, t)))


def _op_lines(name, table, indent):
    out = []
    for args in _sorted(table):
        lhs = name + (_tuple(args) if args else "")
        out.append(f"{indent}op {lhs} = {_id(table[args])}")
    return out


def _rel_lines(name, tuples, indent):
    return [f"{indent}pred {name}{_tuple(t) if t else ''}" for t in _sorted(tuples)]


def print_model(model) -> str:
    """Model-file text for a Kripke model; rigid tables are written once."""
    sig = model.signature
    bsig = sig.base
    lines = [f"worlds {', '.join(_id(w) for w in model.worlds)}"]
    for n in sig.nominals:
        lines.append(f"nominal {n} = {_id(model.nominals[n])}")
    for m in sig.modalities:
        tuples = _sorted(model.relations[m.name])
        if tuples:
            lines.append(f"relation {m.name} : {', '.join(_tuple(t) for t in tuples)}")
    first = model.local[model.worlds[0]]
    for s in bsig.sorts:
        if s.rigid:
            lines.append(f"carrier {s.name} = {', '.join(_id(e) for e in first.carriers[s.name])}")
    for o in bsig.ops:
        if o.rigid:
            lines.extend(_op_lines(o.name, first.ops[o.name], ""))
    for r in bsig.rels:
        if r.rigid:
            lines.extend(_rel_lines(r.name, first.rels.get(r.name, ()), ""))
    for w in model.worlds:
        m = model.local[w]
        lines.append(f"world {_id(w)} {{")
        true = [a for a in bsig.atoms if m.valuation[a]]
        if true:
            lines.append(f"  true {', '.join(true)}")
        for s in bsig.sorts:
            if not s.rigid:
                lines.append(f"  carrier {s.name} = {', '.join(_id(e) for e in m.carriers[s.name])}")
        for o in bsig.ops:
            if not o.rigid:
                lines.extend(_op_lines(o.name, m.ops[o.name], "  "))
        for r in bsig.rels:
            if not r.rigid:
                lines.extend(_rel_lines(r.name, m.rels.get(r.name, ()), "  "))
        lines.append("}")
    return "\n".join(lines) + "\n"
