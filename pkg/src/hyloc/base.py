"""Base institutions: signatures, atomic sentences, finite models, morphisms.

Two concrete bases are provided.  ``PROP`` has propositional atoms and
nothing else.  ``RFOL`` is many-sorted first-order logic over total
functions and relations, restricted to atomic sentences (equations and
relational atoms), with a rigidity flag on every symbol.

Everything here is immutable once built; all operations are pure.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Hashable, Iterable, Iterator, Mapping

PROP = "PROP"
RFOL = "RFOL"


class BaseLogicError(Exception):
    pass


class SignatureError(BaseLogicError, ValueError):
    pass


class UnsortedTerm(BaseLogicError):
    pass


class UnboundVariable(BaseLogicError):
    pass


class SymbolNotInDomain(BaseLogicError):
    pass


class ModelError(BaseLogicError, ValueError):
    pass


# -- signatures ---------------------------------------------------------------


@dataclass(frozen=True)
class Sort:
    name: str
    rigid: bool = False


@dataclass(frozen=True)
class OpDecl:
    name: str
    args: tuple[str, ...]
    result: str
    rigid: bool = False


@dataclass(frozen=True)
class RelDecl:
    name: str
    args: tuple[str, ...]
    rigid: bool = False


@dataclass(frozen=True)
class BaseSignature:
    kind: str
    atoms: tuple[str, ...] = ()
    sorts: tuple[Sort, ...] = ()
    ops: tuple[OpDecl, ...] = ()
    rels: tuple[RelDecl, ...] = ()

    def __post_init__(self):
        if self.kind not in (PROP, RFOL):
            raise SignatureError(f"unknown base logic {self.kind!r}")
        if self.kind == PROP and (self.sorts or self.ops or self.rels):
            raise SignatureError("a PROP signature has atoms only")
        if self.kind == RFOL and self.atoms:
            raise SignatureError("an RFOL signature has no propositional atoms")
        for label, names in (
            ("atom", self.atoms),
            ("sort", [s.name for s in self.sorts]),
            ("op", [o.name for o in self.ops]),
            ("rel", [r.name for r in self.rels]),
        ):
            seen = set()
            for n in names:
                if n in seen:
                    raise SignatureError(f"duplicate {label} {n!r}")
                seen.add(n)
        clash = {o.name for o in self.ops} & {r.name for r in self.rels}
        if clash:
            raise SignatureError(f"name used as both op and rel: {sorted(clash)}")
        rigid = {s.name: s.rigid for s in self.sorts}
        for o in self.ops:
            for s in (*o.args, o.result):
                if s not in rigid:
                    raise SignatureError(f"op {o.name!r} uses undeclared sort {s!r}")
                if o.rigid and not rigid[s]:
                    raise SignatureError(
                        f"rigid op {o.name!r} ranges over flexible sort {s!r}"
                    )
        for r in self.rels:
            for s in r.args:
                if s not in rigid:
                    raise SignatureError(f"rel {r.name!r} uses undeclared sort {s!r}")
                if r.rigid and not rigid[s]:
                    raise SignatureError(
                        f"rigid rel {r.name!r} ranges over flexible sort {s!r}"
                    )

    @classmethod
    def prop(cls, atoms: Iterable[str]) -> "BaseSignature":
        return cls(PROP, atoms=tuple(atoms))

    @classmethod
    def rfol(cls, sorts=(), ops=(), rels=()) -> "BaseSignature":
        return cls(RFOL, sorts=tuple(sorts), ops=tuple(ops), rels=tuple(rels))

    @cached_property
    def sort_map(self) -> dict[str, Sort]:
        return {s.name: s for s in self.sorts}

    @cached_property
    def op_map(self) -> dict[str, OpDecl]:
        return {o.name: o for o in self.ops}

    @cached_property
    def rel_map(self) -> dict[str, RelDecl]:
        return {r.name: r for r in self.rels}

    def symbols(self) -> set[str]:
        """All names declared in this signature, across symbol classes."""
        return (
            set(self.atoms)
            | set(self.sort_map)
            | set(self.op_map)
            | set(self.rel_map)
        )

    def rigid_sorts(self) -> list[str]:
        return [s.name for s in self.sorts if s.rigid]


# -- sentences ----------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    op: str
    args: tuple = ()


Term = Var | App


@dataclass(frozen=True)
class Prop:
    name: str


@dataclass(frozen=True)
class Eq:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class RelAtom:
    rel: str
    args: tuple = ()


BaseSentence = Prop | Eq | RelAtom


def term_vars(t: Term) -> Iterator[str]:
    if isinstance(t, Var):
        yield t.name
    else:
        for a in t.args:
            yield from term_vars(a)


def sentence_vars(s: BaseSentence) -> set[str]:
    if isinstance(s, Prop):
        return set()
    if isinstance(s, Eq):
        return set(term_vars(s.lhs)) | set(term_vars(s.rhs))
    return {v for a in s.args for v in term_vars(a)}


def term_sort(sig: BaseSignature, t: Term, var_sorts: Mapping[str, str]) -> str:
    if isinstance(t, Var):
        if t.name not in var_sorts:
            raise UnboundVariable(t.name)
        return var_sorts[t.name]
    decl = sig.op_map.get(t.op)
    if decl is None:
        raise UnsortedTerm(f"unknown op {t.op!r}")
    if len(decl.args) != len(t.args):
        raise UnsortedTerm(
            f"op {t.op!r} takes {len(decl.args)} argument(s), got {len(t.args)}"
        )
    for i, (a, expected) in enumerate(zip(t.args, decl.args)):
        got = term_sort(sig, a, var_sorts)
        if got != expected:
            raise UnsortedTerm(
                f"argument {i + 1} of {t.op!r} has sort {got}, expected {expected}"
            )
    return decl.result


def check_sentence(
    sig: BaseSignature, s: BaseSentence, var_sorts: Mapping[str, str] = {}
) -> None:
    """Raise UnsortedTerm or UnboundVariable unless ``s`` is well-sorted."""
    if isinstance(s, Prop):
        if sig.kind != PROP or s.name not in sig.atoms:
            raise UnsortedTerm(f"unknown proposition {s.name!r}")
    elif isinstance(s, Eq):
        if sig.kind != RFOL:
            raise UnsortedTerm("equations need a first-order base")
        left = term_sort(sig, s.lhs, var_sorts)
        right = term_sort(sig, s.rhs, var_sorts)
        if left != right:
            raise UnsortedTerm(f"equation between sorts {left} and {right}")
    elif isinstance(s, RelAtom):
        decl = sig.rel_map.get(s.rel)
        if decl is None:
            raise UnsortedTerm(f"unknown relation {s.rel!r}")
        if len(decl.args) != len(s.args):
            raise UnsortedTerm(
                f"relation {s.rel!r} takes {len(decl.args)} argument(s), "
                f"got {len(s.args)}"
            )
        for i, (a, expected) in enumerate(zip(s.args, decl.args)):
            got = term_sort(sig, a, var_sorts)
            if got != expected:
                raise UnsortedTerm(
                    f"argument {i + 1} of {s.rel!r} has sort {got}, expected {expected}"
                )
    else:
        raise TypeError(f"not a base sentence: {s!r}")


def base_symbols(s: BaseSentence) -> tuple[set[str], set[str], set[str]]:
    """(atoms, ops, rels) occurring in ``s``."""
    ops: set[str] = set()

    def walk(t):
        if isinstance(t, App):
            ops.add(t.op)
            for a in t.args:
                walk(a)

    if isinstance(s, Prop):
        return {s.name}, set(), set()
    if isinstance(s, Eq):
        walk(s.lhs)
        walk(s.rhs)
        return set(), ops, set()
    for a in s.args:
        walk(a)
    return set(), ops, {s.rel}


# -- models -------------------------------------------------------------------

Element = Hashable


@dataclass(frozen=True)
class BaseModel:
    """A finite model over ``signature``.

    ``valuation`` is used by PROP; ``carriers``, ``ops`` and ``rels`` by
    RFOL.  Op tables map argument tuples to results; rel tables are sets
    of tuples.
    """

    signature: BaseSignature
    valuation: Mapping[str, bool] = field(default_factory=dict)
    carriers: Mapping[str, tuple] = field(default_factory=dict)
    ops: Mapping[str, Mapping[tuple, Element]] = field(default_factory=dict)
    rels: Mapping[str, frozenset] = field(default_factory=dict)

    def validate(self) -> None:
        """Raise ModelError if a table is partial or leaves its carriers."""
        sig = self.signature
        if sig.kind == PROP:
            missing = set(sig.atoms) - set(self.valuation)
            if missing:
                raise ModelError(f"atoms without a truth value: {sorted(missing)}")
            return
        for s in sig.sorts:
            if not self.carriers.get(s.name):
                raise ModelError(f"carrier of sort {s.name!r} is missing or empty")
        for o in sig.ops:
            table = self.ops.get(o.name)
            if table is None:
                raise ModelError(f"op {o.name!r} has no table")
            for args in product(*(self.carriers[a] for a in o.args)):
                if args not in table:
                    raise ModelError(f"op {o.name!r} undefined at {args}")
                if table[args] not in self.carriers[o.result]:
                    raise ModelError(
                        f"op {o.name!r} at {args} leaves carrier of {o.result!r}"
                    )
        for r in sig.rels:
            for tup in self.rels.get(r.name, ()):
                if len(tup) != len(r.args) or any(
                    e not in self.carriers[a] for e, a in zip(tup, r.args)
                ):
                    raise ModelError(f"tuple {tup} of rel {r.name!r} leaves carriers")


def eval_term(model: BaseModel, t: Term, env: Mapping[str, Element]) -> Element:
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariable(t.name) from None
    args = tuple(eval_term(model, a, env) for a in t.args)
    try:
        return model.ops[t.op][args]
    except KeyError:
        raise UnsortedTerm(f"{t.op}{args} is outside the model's tables") from None


def base_satisfies(
    model: BaseModel, sentence: BaseSentence, env: Mapping[str, Element] | None = None
) -> bool:
    env = env or {}
    if isinstance(sentence, Prop):
        try:
            return bool(model.valuation[sentence.name])
        except KeyError:
            raise UnsortedTerm(f"unknown proposition {sentence.name!r}") from None
    if isinstance(sentence, Eq):
        return eval_term(model, sentence.lhs, env) == eval_term(model, sentence.rhs, env)
    if isinstance(sentence, RelAtom):
        args = tuple(eval_term(model, a, env) for a in sentence.args)
        if sentence.rel not in model.signature.rel_map:
            raise UnsortedTerm(f"unknown relation {sentence.rel!r}")
        return args in model.rels.get(sentence.rel, frozenset())
    raise TypeError(f"not a base sentence: {sentence!r}")


# -- morphisms ----------------------------------------------------------------


@dataclass(frozen=True)
class SignatureMorphism:
    """A symbol-wise map between base signatures.

    Unmapped source symbols map to the same name in the target.  The target
    may declare extra symbols (an extension morphism).
    """

    source: BaseSignature
    target: BaseSignature
    atoms: Mapping[str, str] = field(default_factory=dict)
    sorts: Mapping[str, str] = field(default_factory=dict)
    ops: Mapping[str, str] = field(default_factory=dict)
    rels: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        src, tgt = self.source, self.target
        if src.kind != tgt.kind:
            raise SignatureError("morphism between different base logics")
        full = lambda given, names: {n: given.get(n, n) for n in names}  # noqa: E731
        object.__setattr__(self, "atoms", full(self.atoms, src.atoms))
        object.__setattr__(self, "sorts", full(self.sorts, src.sort_map))
        object.__setattr__(self, "ops", full(self.ops, src.op_map))
        object.__setattr__(self, "rels", full(self.rels, src.rel_map))
        for a, b in self.atoms.items():
            if b not in tgt.atoms:
                raise SignatureError(f"atom {a!r} mapped to undeclared {b!r}")
        for s, t in self.sorts.items():
            if t not in tgt.sort_map:
                raise SignatureError(f"sort {s!r} mapped to undeclared {t!r}")
            if tgt.sort_map[t].rigid != src.sort_map[s].rigid:
                raise SignatureError(f"sort {s!r} mapped across rigidity")
        for o, p in self.ops.items():
            d, e = src.op_map[o], tgt.op_map.get(p)
            if e is None:
                raise SignatureError(f"op {o!r} mapped to undeclared {p!r}")
            if (
                tuple(self.sorts[a] for a in d.args) != e.args
                or self.sorts[d.result] != e.result
                or d.rigid != e.rigid
            ):
                raise SignatureError(f"op {o!r} -> {p!r} does not preserve its rank")
        for r, q in self.rels.items():
            d, e = src.rel_map[r], tgt.rel_map.get(q)
            if e is None:
                raise SignatureError(f"rel {r!r} mapped to undeclared {q!r}")
            if tuple(self.sorts[a] for a in d.args) != e.args or d.rigid != e.rigid:
                raise SignatureError(f"rel {r!r} -> {q!r} does not preserve its rank")

    @classmethod
    def identity(cls, sig: BaseSignature) -> "SignatureMorphism":
        return cls(sig, sig)

    def then(self, other: "SignatureMorphism") -> "SignatureMorphism":
        """Diagrammatic composition: first ``self``, then ``other``."""
        if self.target != other.source:
            raise SignatureError("morphisms are not composable")
        return SignatureMorphism(
            self.source,
            other.target,
            atoms={a: other.atoms[b] for a, b in self.atoms.items()},
            sorts={a: other.sorts[b] for a, b in self.sorts.items()},
            ops={a: other.ops[b] for a, b in self.ops.items()},
            rels={a: other.rels[b] for a, b in self.rels.items()},
        )


def translate_term(phi: SignatureMorphism, t: Term) -> Term:
    if isinstance(t, Var):
        return t
    if t.op not in phi.ops:
        raise SymbolNotInDomain(t.op)
    return App(phi.ops[t.op], tuple(translate_term(phi, a) for a in t.args))


def translate_sentence(phi: SignatureMorphism, s: BaseSentence) -> BaseSentence:
    if isinstance(s, Prop):
        if s.name not in phi.atoms:
            raise SymbolNotInDomain(s.name)
        return Prop(phi.atoms[s.name])
    if isinstance(s, Eq):
        return Eq(translate_term(phi, s.lhs), translate_term(phi, s.rhs))
    if s.rel not in phi.rels:
        raise SymbolNotInDomain(s.rel)
    return RelAtom(phi.rels[s.rel], tuple(translate_term(phi, a) for a in s.args))


def reduct_model(phi: SignatureMorphism, model: BaseModel) -> BaseModel:
    """Interpret every source symbol as ``model`` interprets its image."""
    return BaseModel(
        phi.source,
        valuation={a: model.valuation[b] for a, b in phi.atoms.items()},
        carriers={s: model.carriers[t] for s, t in phi.sorts.items()},
        ops={o: model.ops[p] for o, p in phi.ops.items()},
        rels={r: model.rels.get(q, frozenset()) for r, q in phi.rels.items()},
    )
