"""First-order terms, formulas, theories and finite structures.

Used both many-sorted (quantifiers carry a sort) and unsorted (sort is
``None``).  Evaluation over finite structures is the oracle the encoding
is checked against.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterator, Mapping

UNIVERSE = "$i"


class FolError(ValueError):
    pass


# -- terms and formulas ------------------------------------------------------------


@dataclass(frozen=True)
class FVar:
    name: str


@dataclass(frozen=True)
class Fn:
    name: str
    args: tuple = ()


FTerm = FVar | Fn


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Verum(Formula):
    pass


@dataclass(frozen=True)
class Falsum(Formula):
    pass


@dataclass(frozen=True)
class PredAtom(Formula):
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class Equal(Formula):
    lhs: FTerm
    rhs: FTerm


@dataclass(frozen=True)
class Neg(Formula):
    arg: Formula


@dataclass(frozen=True)
class Conj(Formula):
    items: tuple


@dataclass(frozen=True)
class Disj(Formula):
    items: tuple


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Equiv(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class All(Formula):
    var: str
    sort: str | None
    body: Formula


@dataclass(frozen=True)
class Ex(Formula):
    var: str
    sort: str | None
    body: Formula


def conj(*items: Formula) -> Formula:
    items = tuple(items)
    if not items:
        return Verum()
    return items[0] if len(items) == 1 else Conj(items)


def disj(*items: Formula) -> Formula:
    items = tuple(items)
    if not items:
        return Falsum()
    return items[0] if len(items) == 1 else Disj(items)


def forall(vars_sorts, body: Formula) -> Formula:
    for v, s in reversed(list(vars_sorts)):
        body = All(v, s, body)
    return body


def exists(vars_sorts, body: Formula) -> Formula:
    for v, s in reversed(list(vars_sorts)):
        body = Ex(v, s, body)
    return body


def term_vars(t: FTerm) -> Iterator[str]:
    if isinstance(t, FVar):
        yield t.name
    else:
        for a in t.args:
            yield from term_vars(a)


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, (Verum, Falsum)):
        return set()
    if isinstance(f, PredAtom):
        return {v for a in f.args for v in term_vars(a)}
    if isinstance(f, Equal):
        return set(term_vars(f.lhs)) | set(term_vars(f.rhs))
    if isinstance(f, Neg):
        return free_vars(f.arg)
    if isinstance(f, (Conj, Disj)):
        return set().union(*(free_vars(x) for x in f.items))
    if isinstance(f, (Imp, Equiv)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (All, Ex)):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Neg):
        yield from subformulas(f.arg)
    elif isinstance(f, (Conj, Disj)):
        for x in f.items:
            yield from subformulas(x)
    elif isinstance(f, (Imp, Equiv)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, (All, Ex)):
        yield from subformulas(f.body)


# -- signatures and theories --------------------------------------------------------


@dataclass(frozen=True)
class FolSignature:
    """Sorts plus ranked symbols.  Unsorted signatures have no sorts and
    use :data:`UNIVERSE` in every rank position."""

    sorts: tuple[str, ...] = ()
    funcs: Mapping[str, tuple[tuple[str, ...], str]] = field(default_factory=dict)
    preds: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        known = set(self.sorts) or {UNIVERSE}
        both = set(self.funcs) & set(self.preds)
        if both:
            raise FolError(f"symbols used as function and predicate: {sorted(both)}")
        for name, (args, res) in self.funcs.items():
            if not set(args) | {res} <= known:
                raise FolError(f"function {name!r} uses an undeclared sort")
        for name, args in self.preds.items():
            if not set(args) <= known:
                raise FolError(f"predicate {name!r} uses an undeclared sort")

    @property
    def is_sorted(self) -> bool:
        return bool(self.sorts)


@dataclass(frozen=True)
class FolAxiom:
    label: str
    formula: Formula


@dataclass(frozen=True)
class FolTheory:
    name: str
    signature: FolSignature
    axioms: tuple[FolAxiom, ...] = ()

    def formulas(self) -> list[Formula]:
        return [a.formula for a in self.axioms]


def term_sort(sig: FolSignature, t: FTerm, var_sorts: Mapping[str, str]) -> str:
    if isinstance(t, FVar):
        if t.name not in var_sorts:
            raise FolError(f"unbound variable {t.name!r}")
        return var_sorts[t.name]
    if t.name not in sig.funcs:
        raise FolError(f"unknown function {t.name!r}")
    args, res = sig.funcs[t.name]
    if len(args) != len(t.args):
        raise FolError(f"{t.name!r} expects {len(args)} argument(s)")
    for a, s in zip(t.args, args):
        if term_sort(sig, a, var_sorts) != s:
            raise FolError(f"ill-sorted argument of {t.name!r}")
    return res


def check_formula(sig: FolSignature, f: Formula, var_sorts: Mapping[str, str] = {}) -> None:
    """Raise FolError unless ``f`` is well-ranked with free variables typed
    by ``var_sorts``."""
    if isinstance(f, (Verum, Falsum)):
        return
    if isinstance(f, PredAtom):
        if f.name not in sig.preds:
            raise FolError(f"unknown predicate {f.name!r}")
        args = sig.preds[f.name]
        if len(args) != len(f.args):
            raise FolError(f"{f.name!r} expects {len(args)} argument(s)")
        for a, s in zip(f.args, args):
            if term_sort(sig, a, var_sorts) != s:
                raise FolError(f"ill-sorted argument of {f.name!r}")
    elif isinstance(f, Equal):
        if term_sort(sig, f.lhs, var_sorts) != term_sort(sig, f.rhs, var_sorts):
            raise FolError("equation between different sorts")
    elif isinstance(f, Neg):
        check_formula(sig, f.arg, var_sorts)
    elif isinstance(f, (Conj, Disj)):
        for x in f.items:
            check_formula(sig, x, var_sorts)
    elif isinstance(f, (Imp, Equiv)):
        check_formula(sig, f.left, var_sorts)
        check_formula(sig, f.right, var_sorts)
    elif isinstance(f, (All, Ex)):
        sort = f.sort if sig.is_sorted else UNIVERSE
        if sig.is_sorted and sort not in sig.sorts:
            raise FolError(f"quantifier over unknown sort {f.sort!r}")
        check_formula(sig, f.body, {**var_sorts, f.var: sort})
    else:
        raise TypeError(f"not a formula: {f!r}")


def check_theory(th: FolTheory) -> None:
    for ax in th.axioms:
        if free_vars(ax.formula):
            raise FolError(f"axiom {ax.label} is not closed")
        check_formula(th.signature, ax.formula)


# -- finite structures ----------------------------------------------------------------


@dataclass(frozen=True)
class FolStructure:
    """A finite first-order structure.

    Function tables may be partial; ``defaults`` totalises them, so every
    function symbol denotes a total function on the universe.  ``domains``
    gives per-sort ranges for many-sorted evaluation.
    """

    universe: tuple
    funcs: Mapping[str, Mapping[tuple, Hashable]]
    preds: Mapping[str, frozenset]
    defaults: Mapping[str, Hashable] = field(default_factory=dict)
    domains: Mapping[str, tuple] = field(default_factory=dict)

    def apply(self, name: str, args: tuple):
        table = self.funcs[name]
        if args in table:
            return table[args]
        return self.defaults.get(name, self.universe[0])


def eval_term(m: FolStructure, t: FTerm, env: Mapping[str, Hashable]):
    if isinstance(t, FVar):
        try:
            return env[t.name]
        except KeyError:
            raise FolError(f"unbound variable {t.name!r}") from None
    return m.apply(t.name, tuple(eval_term(m, a, env) for a in t.args))


def evaluate(m: FolStructure, f: Formula, env: Mapping[str, Hashable] | None = None) -> bool:
    env = env or {}
    if isinstance(f, Verum):
        return True
    if isinstance(f, Falsum):
        return False
    if isinstance(f, PredAtom):
        return tuple(eval_term(m, a, env) for a in f.args) in m.preds.get(f.name, ())
    if isinstance(f, Equal):
        return eval_term(m, f.lhs, env) == eval_term(m, f.rhs, env)
    if isinstance(f, Neg):
        return not evaluate(m, f.arg, env)
    if isinstance(f, Conj):
        return all(evaluate(m, x, env) for x in f.items)
    if isinstance(f, Disj):
        return any(evaluate(m, x, env) for x in f.items)
    if isinstance(f, Imp):
        return not evaluate(m, f.left, env) or evaluate(m, f.right, env)
    if isinstance(f, Equiv):
        return evaluate(m, f.left, env) == evaluate(m, f.right, env)
    if isinstance(f, (All, Ex)):
        domain = m.domains[f.sort] if f.sort is not None else m.universe
        test = all if isinstance(f, All) else any
        return test(evaluate(m, f.body, {**env, f.var: e}) for e in domain)
    raise TypeError(f"not a formula: {f!r}")


def show(f: Formula) -> str:
    """Readable (not TPTP) rendering, used in dumps and error messages."""

    def t(x):
        if isinstance(x, FVar):
            return x.name
        return x.name + (f"({', '.join(map(t, x.args))})" if x.args else "")

    if isinstance(f, Verum):
        return "true"
    if isinstance(f, Falsum):
        return "false"
    if isinstance(f, PredAtom):
        return f.name + (f"({', '.join(map(t, f.args))})" if f.args else "")
    if isinstance(f, Equal):
        return f"{t(f.lhs)} = {t(f.rhs)}"
    if isinstance(f, Neg):
        return f"~{show(f.arg)}"
    if isinstance(f, Conj):
        return "(" + " & ".join(map(show, f.items)) + ")"
    if isinstance(f, Disj):
        return "(" + " | ".join(map(show, f.items)) + ")"
    if isinstance(f, Imp):
        return f"({show(f.left)} -> {show(f.right)})"
    if isinstance(f, Equiv):
        return f"({show(f.left)} <-> {show(f.right)})"
    q = "forall" if isinstance(f, All) else "exists"
    sort = f":{f.sort}" if f.sort else ""
    return f"{q} {f.var}{sort}. {show(f.body)}"


def dump_theory(th: FolTheory) -> str:
    """The many-sorted intermediate as plain text, for debugging."""
    sig = th.signature
    lines = [f"theory {th.name}"]
    lines += [f"sort {s}" for s in sig.sorts]
    for name, (args, res) in sig.funcs.items():
        lines.append(f"func {name} : {' * '.join(args) + ' -> ' if args else ''}{res}")
    for name, args in sig.preds.items():
        lines.append(f"pred {name} : {' * '.join(args)}")
    for ax in th.axioms:
        lines.append(f"axiom {ax.label} : {show(ax.formula)}")
    return "\n".join(lines) + "\n"
