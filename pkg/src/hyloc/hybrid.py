"""Hybridised signatures, sentences, morphisms and theories."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping

from . import base
from .base import BaseSentence, BaseSignature, SignatureError, SymbolNotInDomain

WORLD = "World"


@dataclass(frozen=True)
class Modality:
    name: str
    arity: int


@dataclass(frozen=True)
class HybridSignature:
    nominals: tuple[str, ...]
    modalities: tuple[Modality, ...]
    base: BaseSignature

    def __post_init__(self):
        noms = set(self.nominals)
        if len(noms) != len(self.nominals):
            raise SignatureError("duplicate nominal")
        mods = [m.name for m in self.modalities]
        if len(set(mods)) != len(mods):
            raise SignatureError("duplicate modality")
        base_names = self.base.symbols()
        for a, b, what in (
            (noms, set(mods), "nominal and modality"),
            (noms, base_names, "nominal and base symbol"),
            (set(mods), base_names, "modality and base symbol"),
        ):
            if a & b:
                raise SignatureError(f"{what} namespaces overlap: {sorted(a & b)}")
        if WORLD in self.base.sort_map:
            raise SignatureError(f"sort name {WORLD!r} is reserved")
        for m in self.modalities:
            if m.arity < 1:
                raise SignatureError(f"modality {m.name!r} has arity {m.arity}")

    @cached_property
    def modality_map(self) -> dict[str, Modality]:
        return {m.name: m for m in self.modalities}

    def symbols(self) -> set[str]:
        return set(self.nominals) | set(self.modality_map) | self.base.symbols()


# -- sentences ----------------------------------------------------------------


class Sentence:
    """Base class of the hybrid sentence AST."""

    __slots__ = ()

    def children(self) -> tuple["Sentence", ...]:
        return ()

    def __str__(self) -> str:
        from .printer import show

        return show(self)


@dataclass(frozen=True)
class Atom(Sentence):
    base: BaseSentence


@dataclass(frozen=True)
class Nom(Sentence):
    name: str


@dataclass(frozen=True)
class Not(Sentence):
    arg: Sentence

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class _Binary(Sentence):
    left: Sentence
    right: Sentence

    def children(self):
        return (self.left, self.right)


class And(_Binary):
    pass


class Or(_Binary):
    pass


class Implies(_Binary):
    pass


class Iff(_Binary):
    pass


@dataclass(frozen=True)
class _Modal(Sentence):
    modality: str
    args: tuple[Sentence, ...]

    def children(self):
        return self.args


class Box(_Modal):
    pass


class Diamond(_Modal):
    pass


@dataclass(frozen=True)
class At(Sentence):
    nominal: str
    arg: Sentence

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class _NomQuant(Sentence):
    var: str
    body: Sentence

    def children(self):
        return (self.body,)


class ForallNom(_NomQuant):
    pass


class ExistsNom(_NomQuant):
    pass


@dataclass(frozen=True)
class _RigidQuant(Sentence):
    var: str
    sort: str
    body: Sentence

    def children(self):
        return (self.body,)


class ForallRigid(_RigidQuant):
    pass


class ExistsRigid(_RigidQuant):
    pass


BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (ForallNom, ExistsNom, ForallRigid, ExistsRigid)


def rebuild(s: Sentence, children) -> Sentence:
    """Return ``s`` with its immediate subsentences replaced."""
    children = tuple(children)
    if isinstance(s, (Atom, Nom)):
        return s
    if isinstance(s, Not):
        return Not(children[0])
    if isinstance(s, BINARY):
        return type(s)(children[0], children[1])
    if isinstance(s, _Modal):
        return type(s)(s.modality, children)
    if isinstance(s, At):
        return At(s.nominal, children[0])
    if isinstance(s, _NomQuant):
        return type(s)(s.var, children[0])
    if isinstance(s, _RigidQuant):
        return type(s)(s.var, s.sort, children[0])
    raise TypeError(f"not a sentence: {s!r}")


def walk(s: Sentence) -> Iterator[Sentence]:
    yield s
    for c in s.children():
        yield from walk(c)


def size(s: Sentence) -> int:
    return sum(1 for _ in walk(s))


def free_names(s: Sentence) -> tuple[frozenset[str], frozenset[str]]:
    """Free nominals and free rigid variables of ``s``.

    Declared nominals count as free nominals; only quantifier binders
    make a name bound.
    """
    noms: set[str] = set()
    rvars: set[str] = set()

    def go(s, bound_noms, bound_vars):
        if isinstance(s, Atom):
            rvars.update(base.sentence_vars(s.base) - bound_vars)
        elif isinstance(s, Nom):
            if s.name not in bound_noms:
                noms.add(s.name)
        elif isinstance(s, At):
            if s.nominal not in bound_noms:
                noms.add(s.nominal)
            go(s.arg, bound_noms, bound_vars)
        elif isinstance(s, _NomQuant):
            go(s.body, bound_noms | {s.var}, bound_vars)
        elif isinstance(s, _RigidQuant):
            go(s.body, bound_noms, bound_vars | {s.var})
        else:
            for c in s.children():
                go(c, bound_noms, bound_vars)

    go(s, frozenset(), frozenset())
    return frozenset(noms), frozenset(rvars)


def is_closed(sig: HybridSignature, s: Sentence) -> bool:
    noms, rvars = free_names(s)
    return not rvars and noms <= set(sig.nominals)


# -- well-formedness ------------------------------------------------------------


@dataclass(frozen=True)
class Problem:
    """A well-formedness diagnostic; ``path`` indexes children from the root."""

    path: tuple[int, ...]
    message: str

    def __str__(self):
        where = "/".join(map(str, self.path)) or "root"
        return f"{where}: {self.message}"


def signature_problems(sig: HybridSignature) -> list[Problem]:
    return [
        Problem((), f"modality {m.name!r} has arity {m.arity}; arity must be at least 2")
        for m in sig.modalities
        if m.arity < 2
    ]


def check_wellformed(sig: HybridSignature, s: Sentence) -> list[Problem]:
    """All well-formedness problems of ``s`` over ``sig``; empty means ok."""
    problems: list[Problem] = []
    declared = sig.symbols()
    rigid_sorts = {x.name for x in sig.base.sorts if x.rigid}

    def bind(name, path, bound):
        if name in bound:
            problems.append(Problem(path, f"{name!r} shadows an enclosing binder"))
        elif name in declared:
            problems.append(Problem(path, f"bound name {name!r} clashes with a symbol"))

    def go(s, path, noms, rvars):
        if isinstance(s, Atom):
            try:
                base.check_sentence(sig.base, s.base, rvars)
            except base.UnboundVariable as e:
                problems.append(Problem(path, f"unbound variable {e.args[0]!r}"))
            except base.UnsortedTerm as e:
                problems.append(Problem(path, str(e)))
        elif isinstance(s, Nom):
            if s.name not in sig.nominals and s.name not in noms:
                problems.append(Problem(path, f"undeclared nominal {s.name!r}"))
        elif isinstance(s, At):
            if s.nominal not in sig.nominals and s.nominal not in noms:
                problems.append(Problem(path, f"undeclared nominal {s.nominal!r}"))
            go(s.arg, path + (0,), noms, rvars)
        elif isinstance(s, _Modal):
            m = sig.modality_map.get(s.modality)
            if m is None:
                problems.append(Problem(path, f"undeclared modality {s.modality!r}"))
            elif len(s.args) != m.arity - 1:
                n = m.arity - 1
                problems.append(
                    Problem(
                        path,
                        f"arity mismatch: expected {n} argument{'s' if n != 1 else ''}"
                        f", got {len(s.args)}",
                    )
                )
            for i, c in enumerate(s.args):
                go(c, path + (i,), noms, rvars)
        elif isinstance(s, _NomQuant):
            bind(s.var, path, set(noms) | set(rvars))
            go(s.body, path + (0,), noms | {s.var}, rvars)
        elif isinstance(s, _RigidQuant):
            bind(s.var, path, set(noms) | set(rvars))
            if s.sort not in sig.base.sort_map:
                problems.append(Problem(path, f"unknown sort {s.sort!r}"))
            elif s.sort not in rigid_sorts:
                problems.append(
                    Problem(path, f"quantified sort {s.sort!r} is not rigid")
                )
            go(s.body, path + (0,), noms, {**rvars, s.var: s.sort})
        else:
            for i, c in enumerate(s.children()):
                go(c, path + (i,), noms, rvars)

    go(s, (), frozenset(), {})
    return problems


# -- morphisms ----------------------------------------------------------------


@dataclass(frozen=True)
class HybridMorphism:
    """Renaming of nominals, modalities and base symbols."""

    source: HybridSignature
    target: HybridSignature
    nominals: Mapping[str, str] = field(default_factory=dict)
    modalities: Mapping[str, str] = field(default_factory=dict)
    base: base.SignatureMorphism | None = None

    def __post_init__(self):
        src, tgt = self.source, self.target
        noms = {n: self.nominals.get(n, n) for n in src.nominals}
        mods = {m: self.modalities.get(m, m) for m in src.modality_map}
        for n, t in noms.items():
            if t not in tgt.nominals:
                raise SignatureError(f"nominal {n!r} mapped to undeclared {t!r}")
        for m, t in mods.items():
            if t not in tgt.modality_map:
                raise SignatureError(f"modality {m!r} mapped to undeclared {t!r}")
            if tgt.modality_map[t].arity != src.modality_map[m].arity:
                raise SignatureError(f"modality {m!r} mapped across arities")
        bm = self.base or base.SignatureMorphism(src.base, tgt.base)
        if bm.source != src.base or bm.target != tgt.base:
            raise SignatureError("base morphism does not match the signatures")
        object.__setattr__(self, "nominals", noms)
        object.__setattr__(self, "modalities", mods)
        object.__setattr__(self, "base", bm)

    @classmethod
    def identity(cls, sig: HybridSignature) -> "HybridMorphism":
        return cls(sig, sig)


def _fresh(name: str, taken: set[str]) -> str:
    k = 1
    while f"{name}_{k}" in taken:
        k += 1
    return f"{name}_{k}"


def _rename_var_in_base(s: BaseSentence, old: str, new: str) -> BaseSentence:
    def t(x):
        if isinstance(x, base.Var):
            return base.Var(new) if x.name == old else x
        return base.App(x.op, tuple(t(a) for a in x.args))

    if isinstance(s, base.Eq):
        return base.Eq(t(s.lhs), t(s.rhs))
    if isinstance(s, base.RelAtom):
        return base.RelAtom(s.rel, tuple(t(a) for a in s.args))
    return s


def translate_hybrid(phi: HybridMorphism, s: Sentence) -> Sentence:
    """Rename symbols along ``phi``; binders clashing with target symbols
    are alpha-renamed to fresh names."""
    taken = phi.target.symbols() | {
        n for x in walk(s) if isinstance(x, QUANTIFIERS) for n in [x.var]
    }

    def go(s, noms: dict[str, str], rvars: dict[str, str]):
        if isinstance(s, Atom):
            b = s.base
            for old, new in rvars.items():
                if old != new:
                    b = _rename_var_in_base(b, old, new)
            # variables are renamed first so the base translation never sees them
            return Atom(base.translate_sentence(phi.base, b))
        if isinstance(s, Nom):
            if s.name in noms:
                return Nom(noms[s.name])
            if s.name not in phi.nominals:
                raise SymbolNotInDomain(s.name)
            return Nom(phi.nominals[s.name])
        if isinstance(s, At):
            if s.nominal in noms:
                target = noms[s.nominal]
            elif s.nominal in phi.nominals:
                target = phi.nominals[s.nominal]
            else:
                raise SymbolNotInDomain(s.nominal)
            return At(target, go(s.arg, noms, rvars))
        if isinstance(s, _Modal):
            if s.modality not in phi.modalities:
                raise SymbolNotInDomain(s.modality)
            return type(s)(
                phi.modalities[s.modality], tuple(go(c, noms, rvars) for c in s.args)
            )
        if isinstance(s, _NomQuant):
            new = s.var
            if new in phi.target.symbols():
                new = _fresh(s.var, taken)
                taken.add(new)
            return type(s)(new, go(s.body, {**noms, s.var: new}, rvars))
        if isinstance(s, _RigidQuant):
            new = s.var
            if new in phi.target.symbols():
                new = _fresh(s.var, taken)
                taken.add(new)
            if s.sort not in phi.base.sorts:
                raise SymbolNotInDomain(s.sort)
            return type(s)(
                new, phi.base.sorts[s.sort], go(s.body, noms, {**rvars, s.var: new})
            )
        return rebuild(s, (go(c, noms, rvars) for c in s.children()))

    return go(s, {}, {})


# -- theories -----------------------------------------------------------------


@dataclass(frozen=True)
class HybridTheory:
    name: str
    signature: HybridSignature
    axioms: tuple[Sentence, ...] = ()
    constraints: "ConstraintSet | None" = None

    def __post_init__(self):
        from .kripke import ConstraintSet

        if self.constraints is None:
            object.__setattr__(self, "constraints", ConstraintSet())
        for i, ax in enumerate(self.axioms, 1):
            problems = check_wellformed(self.signature, ax)
            if problems:
                raise SignatureError(f"axiom {i} of {self.name}: {problems[0]}")
            if not is_closed(self.signature, ax):
                raise SignatureError(f"axiom {i} of {self.name} is not closed")
