"""Finite constrained Kripke models and hybrid satisfaction.

A :class:`KripkeModel` carries one base model per world.  Rigid symbols
must be interpreted identically everywhere; :func:`check_constraints`
verifies that together with any frame properties requested for binary
modalities.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Hashable, Iterator, Mapping, Sequence

from . import base
from .base import PROP, BaseModel, ModelError
from .hybrid import (
    And,
    At,
    Atom,
    Box,
    Diamond,
    ExistsNom,
    ExistsRigid,
    ForallNom,
    ForallRigid,
    HybridMorphism,
    HybridSignature,
    HybridTheory,
    Iff,
    Implies,
    Nom,
    Not,
    Or,
    Sentence,
)

log = logging.getLogger(__name__)

World = Hashable

FRAME_PROPERTIES = ("reflexive", "symmetric", "transitive", "serial")


class UnboundName(Exception):
    pass


class SignatureMismatch(ValueError):
    pass


class BoundsTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class ConstraintSet:
    """Frame properties requested per binary modality.

    Rigidity needs no entry here: it follows from the signature flags.
    """

    frame: Mapping[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        frame = {m: frozenset(p) for m, p in self.frame.items() if p}
        for m, props in frame.items():
            bad = props - set(FRAME_PROPERTIES)
            if bad:
                raise ValueError(f"unknown frame properties for {m!r}: {sorted(bad)}")
        object.__setattr__(self, "frame", frame)

    def validate(self, sig: HybridSignature) -> None:
        for m in self.frame:
            mod = sig.modality_map.get(m)
            if mod is None:
                raise ValueError(f"constraint on undeclared modality {m!r}")
            if mod.arity != 2:
                raise ValueError(f"frame properties need a binary modality, {m!r} is not")

    def __hash__(self):
        return hash(tuple(sorted(self.frame.items())))


@dataclass(frozen=True)
class KripkeModel:
    signature: HybridSignature
    worlds: tuple
    relations: Mapping[str, frozenset]
    nominals: Mapping[str, World]
    local: Mapping[World, BaseModel]

    def __post_init__(self):
        sig = self.signature
        if not self.worlds:
            raise ModelError("a Kripke model needs at least one world")
        if len(set(self.worlds)) != len(self.worlds):
            raise ModelError("duplicate world")
        ws = set(self.worlds)
        rels = {m.name: frozenset(self.relations.get(m.name, ())) for m in sig.modalities}
        for name in self.relations:
            if name not in rels:
                raise ModelError(f"relation for undeclared modality {name!r}")
        for m in sig.modalities:
            for tup in rels[m.name]:
                if len(tup) != m.arity:
                    raise ModelError(
                        f"tuple {tup} of {m.name!r} has width {len(tup)}, expected {m.arity}"
                    )
                if not set(tup) <= ws:
                    raise ModelError(f"tuple {tup} of {m.name!r} leaves the worlds")
        for n in sig.nominals:
            if n not in self.nominals:
                raise ModelError(f"nominal {n!r} unassigned")
            if self.nominals[n] not in ws:
                raise ModelError(f"nominal {n!r} names unknown world {self.nominals[n]!r}")
        if set(self.local) != ws:
            raise ModelError("every world needs exactly one local model")
        for w, m in self.local.items():
            if m.signature != sig.base:
                raise ModelError(f"local model at {w!r} has the wrong signature")
            m.validate()
        object.__setattr__(self, "relations", rels)

    @cached_property
    def successors(self) -> dict[str, dict[World, list[tuple]]]:
        out: dict[str, dict[World, list[tuple]]] = {}
        for name, tuples in self.relations.items():
            idx: dict[World, list[tuple]] = {w: [] for w in self.worlds}
            for tup in sorted(tuples, key=repr):
                idx[tup[0]].append(tup[1:])
            out[name] = idx
        return out

    def rigid_carrier(self, sort: str) -> tuple:
        return self.local[self.worlds[0]].carriers[sort]


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: str
    witness: tuple
    message: str

    def __str__(self):
        return self.message


def check_constraints(model: KripkeModel, cs: ConstraintSet | None = None) -> list[Violation]:
    """Rigidity sharing and requested frame properties; empty list means ok."""
    out: list[Violation] = []
    sig = model.signature.base
    first, *rest = model.worlds
    m0 = model.local[first]
    for w in rest:
        mw = model.local[w]
        for s in sig.sorts:
            if s.rigid and set(mw.carriers[s.name]) != set(m0.carriers[s.name]):
                out.append(
                    Violation(
                        "rigidity", s.name, (first, w),
                        f"rigid sort {s.name!r} has different carriers at {first!r} and {w!r}",
                    )
                )
        for o in sig.ops:
            if o.rigid and dict(mw.ops[o.name]) != dict(m0.ops[o.name]):
                out.append(
                    Violation(
                        "rigidity", o.name, (first, w),
                        f"rigid op {o.name!r} differs between {first!r} and {w!r}",
                    )
                )
        for r in sig.rels:
            if r.rigid and set(mw.rels.get(r.name, ())) != set(m0.rels.get(r.name, ())):
                out.append(
                    Violation(
                        "rigidity", r.name, (first, w),
                        f"rigid rel {r.name!r} differs between {first!r} and {w!r}",
                    )
                )
    if cs is None:
        return out
    cs.validate(model.signature)
    for name, props in sorted(cs.frame.items()):
        rel = model.relations[name]
        for prop in FRAME_PROPERTIES:
            if prop not in props:
                continue
            witness = _frame_witness(prop, rel, model.worlds)
            if witness is not None:
                out.append(
                    Violation(
                        prop, name, witness,
                        f"{name!r} is not {prop}: witness {witness}",
                    )
                )
    return out


def _frame_witness(prop: str, rel: frozenset, worlds: Sequence) -> tuple | None:
    if prop == "reflexive":
        for w in worlds:
            if (w, w) not in rel:
                return (w, w)
    elif prop == "symmetric":
        for a, b in sorted(rel, key=repr):
            if (b, a) not in rel:
                return (b, a)
    elif prop == "transitive":
        for a, b in sorted(rel, key=repr):
            for c, d in sorted(rel, key=repr):
                if b == c and (a, d) not in rel:
                    return (a, d)
    elif prop == "serial":
        for w in worlds:
            if not any(t[0] == w for t in rel):
                return (w,)
    return None


def satisfies_frame(prop: str, rel: frozenset, worlds: Sequence) -> bool:
    return _frame_witness(prop, rel, worlds) is None


# -- satisfaction ---------------------------------------------------------------


@dataclass(frozen=True)
class Environment:
    """Bindings for nominal variables (to worlds) and rigid variables."""

    nominals: Mapping[str, World] = field(default_factory=dict)
    rigid: Mapping[str, Hashable] = field(default_factory=dict)

    def bind_nominal(self, name, world) -> "Environment":
        return Environment({**self.nominals, name: world}, self.rigid)

    def bind_rigid(self, name, value) -> "Environment":
        return Environment(self.nominals, {**self.rigid, name: value})


EMPTY = Environment()


def _resolve(model: KripkeModel, name: str, env: Environment) -> World:
    if name in env.nominals:
        return env.nominals[name]
    try:
        return model.nominals[name]
    except KeyError:
        raise UnboundName(name) from None


def sat_local(
    model: KripkeModel, w: World, s: Sentence, env: Environment = EMPTY
) -> bool:
    if isinstance(s, Atom):
        try:
            return base.base_satisfies(model.local[w], s.base, env.rigid)
        except base.UnboundVariable as e:
            raise UnboundName(e.args[0]) from None
    if isinstance(s, Nom):
        return _resolve(model, s.name, env) == w
    if isinstance(s, Not):
        return not sat_local(model, w, s.arg, env)
    if isinstance(s, And):
        return sat_local(model, w, s.left, env) and sat_local(model, w, s.right, env)
    if isinstance(s, Or):
        return sat_local(model, w, s.left, env) or sat_local(model, w, s.right, env)
    if isinstance(s, Implies):
        return not sat_local(model, w, s.left, env) or sat_local(model, w, s.right, env)
    if isinstance(s, Iff):
        return sat_local(model, w, s.left, env) == sat_local(model, w, s.right, env)
    if isinstance(s, Box):
        # every successor tuple needs some argument position where its sentence holds
        return all(
            any(sat_local(model, v, a, env) for v, a in zip(succ, s.args))
            for succ in model.successors[s.modality][w]
        )
    if isinstance(s, Diamond):
        return any(
            all(sat_local(model, v, a, env) for v, a in zip(succ, s.args))
            for succ in model.successors[s.modality][w]
        )
    if isinstance(s, At):
        return sat_local(model, _resolve(model, s.nominal, env), s.arg, env)
    if isinstance(s, ForallNom):
        return all(sat_local(model, w, s.body, env.bind_nominal(s.var, v)) for v in model.worlds)
    if isinstance(s, ExistsNom):
        return any(sat_local(model, w, s.body, env.bind_nominal(s.var, v)) for v in model.worlds)
    if isinstance(s, ForallRigid):
        return all(
            sat_local(model, w, s.body, env.bind_rigid(s.var, e))
            for e in model.rigid_carrier(s.sort)
        )
    if isinstance(s, ExistsRigid):
        return any(
            sat_local(model, w, s.body, env.bind_rigid(s.var, e))
            for e in model.rigid_carrier(s.sort)
        )
    raise TypeError(f"not a sentence: {s!r}")


def sat_global(model: KripkeModel, s: Sentence) -> bool:
    return all(sat_local(model, w, s) for w in model.worlds)


@dataclass(frozen=True)
class AxiomResult:
    index: int
    axiom: Sentence
    holds: bool
    world: World | None = None
    bindings: tuple = ()

    def __str__(self):
        if self.holds:
            return f"axiom {self.index}: pass"
        where = f" at world {self.world}"
        if self.bindings:
            where += " with " + ", ".join(f"{k}={v}" for k, v in self.bindings)
        return f"axiom {self.index}: FAIL{where}"


@dataclass(frozen=True)
class TheoryReport:
    theory: str
    results: tuple[AxiomResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.holds for r in self.results)

    def failures(self) -> list[AxiomResult]:
        return [r for r in self.results if not r.holds]


def explain_failure(
    model: KripkeModel, w: World, s: Sentence, env: Environment = EMPTY
) -> tuple[World, tuple]:
    """Follow a failing sentence down to the world and bindings that refute it.

    Only descends through @, conjunctions and universal quantifiers; other
    connectives stop the search where they are.
    """
    bindings: list[tuple[str, object]] = []
    while True:
        if isinstance(s, At):
            w = _resolve(model, s.nominal, env)
            s = s.arg
        elif isinstance(s, And):
            s = s.left if not sat_local(model, w, s.left, env) else s.right
        elif isinstance(s, (ForallNom, ForallRigid)):
            domain = (
                model.worlds if isinstance(s, ForallNom) else model.rigid_carrier(s.sort)
            )
            for v in domain:
                e = (
                    env.bind_nominal(s.var, v)
                    if isinstance(s, ForallNom)
                    else env.bind_rigid(s.var, v)
                )
                if not sat_local(model, w, s.body, e):
                    bindings.append((s.var, v))
                    env, s = e, s.body
                    break
        else:
            return w, tuple(bindings)


def check_theory(model: KripkeModel, theory: HybridTheory) -> TheoryReport:
    if model.signature != theory.signature:
        raise SignatureMismatch(f"model signature does not match theory {theory.name}")
    results = []
    for i, ax in enumerate(theory.axioms, 1):
        bad = next((w for w in model.worlds if not sat_local(model, w, ax)), None)
        if bad is None:
            results.append(AxiomResult(i, ax, True))
        else:
            world, bindings = explain_failure(model, bad, ax)
            results.append(AxiomResult(i, ax, False, world, bindings))
    return TheoryReport(theory.name, tuple(results))


# -- reducts ----------------------------------------------------------------------


def reduct_kripke(phi: HybridMorphism, model: KripkeModel) -> KripkeModel:
    """Reduct of a target-signature Kripke model along ``phi``."""
    return KripkeModel(
        phi.source,
        model.worlds,
        {m: model.relations[t] for m, t in phi.modalities.items()},
        {n: model.nominals[t] for n, t in phi.nominals.items()},
        {w: base.reduct_model(phi.base, m) for w, m in model.local.items()},
    )


# -- bounded countermodel search ----------------------------------------------------


@dataclass(frozen=True)
class Countermodel:
    model: KripkeModel
    world: World


def _subsets(items: list) -> Iterator[frozenset]:
    """All subsets, ordered by bitmask value over ``items``."""
    n = len(items)
    for mask in range(1 << n):
        yield frozenset(items[i] for i in range(n) if mask >> i & 1)


def _functions(domain: list[tuple], codomain: tuple) -> Iterator[dict]:
    for values in product(codomain, repeat=len(domain)):
        yield dict(zip(domain, values))


def _elements(size: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(size))


def _table_count(sig: base.BaseSignature, sizes: Mapping[str, int], rigid: bool) -> int:
    n = 1
    for o in sig.ops:
        if o.rigid == rigid:
            dom = 1
            for a in o.args:
                dom *= sizes[a]
            n *= sizes[o.result] ** dom
    for r in sig.rels:
        if r.rigid == rigid:
            dom = 1
            for a in r.args:
                dom *= sizes[a]
            n *= 2**dom
    return n


def search_space(sig: HybridSignature, max_worlds: int, max_carrier: int) -> int:
    """Number of candidate models :func:`find_countermodel` may visit."""
    b = sig.base
    rigid = [s.name for s in b.sorts if s.rigid]
    flexible = [s.name for s in b.sorts if not s.rigid]
    total = 0
    for n in range(1, max_worlds + 1):
        frames = 1
        for m in sig.modalities:
            frames *= 2 ** (n**m.arity)
        noms = n ** len(sig.nominals)
        for rsizes in product(range(1, max_carrier + 1), repeat=len(rigid)):
            per_flex = 0
            for fsizes in product(range(1, max_carrier + 1), repeat=len(flexible)):
                sizes = {**dict(zip(rigid, rsizes)), **dict(zip(flexible, fsizes))}
                per_flex += _table_count(b, sizes, rigid=False) * (
                    2 ** len(b.atoms)
                )
            rigid_tables = _table_count(b, dict(zip(rigid, rsizes)), rigid=True)
            total += frames * noms * rigid_tables * per_flex**n
    return total


def _local_models(sig: base.BaseSignature, carriers: dict, rigid_ops: dict, rigid_rels: dict):
    """Every local model extending the given rigid interpretation."""
    if sig.kind == PROP:
        for bits in product((False, True), repeat=len(sig.atoms)):
            yield BaseModel(sig, valuation=dict(zip(sig.atoms, bits)))
        return
    flex_ops = [o for o in sig.ops if not o.rigid]
    flex_rels = [r for r in sig.rels if not r.rigid]
    op_choices = [
        list(_functions(list(product(*(carriers[a] for a in o.args))), carriers[o.result]))
        for o in flex_ops
    ]
    rel_choices = [
        list(_subsets(list(product(*(carriers[a] for a in r.args))))) for r in flex_rels
    ]
    for tables in product(*op_choices):
        for rels in product(*rel_choices):
            yield BaseModel(
                sig,
                carriers=carriers,
                ops={**rigid_ops, **{o.name: t for o, t in zip(flex_ops, tables)}},
                rels={**rigid_rels, **{r.name: t for r, t in zip(flex_rels, rels)}},
            )


def enumerate_models(
    sig: HybridSignature,
    max_worlds: int,
    max_carrier: int,
    constraints: ConstraintSet | None = None,
) -> Iterator[KripkeModel]:
    """Constrained Kripke models within bounds, in a fixed order.

    Order: world count, then carrier sizes, then modality relations (by
    bitmask), nominal assignments, rigid tables and local models.
    """
    cs = constraints or ConstraintSet()
    cs.validate(sig)
    b = sig.base
    rigid = [s.name for s in b.sorts if s.rigid]
    flexible = [s.name for s in b.sorts if not s.rigid]
    for n in range(1, max_worlds + 1):
        worlds = tuple(f"w{i}" for i in range(n))
        frames = []
        for m in sig.modalities:
            tuples = list(product(worlds, repeat=m.arity))
            props = cs.frame.get(m.name, ())
            frames.append(
                [r for r in _subsets(tuples) if all(satisfies_frame(p, r, worlds) for p in props)]
            )
        for rsizes in product(range(1, max_carrier + 1), repeat=len(rigid)):
            rcar = {s: _elements(k) for s, k in zip(rigid, rsizes)}
            rigid_ops = [o for o in b.ops if o.rigid]
            rigid_rels = [r for r in b.rels if r.rigid]
            rigid_op_choices = [
                list(_functions(list(product(*(rcar[a] for a in o.args))), rcar[o.result]))
                for o in rigid_ops
            ]
            rigid_rel_choices = [
                list(_subsets(list(product(*(rcar[a] for a in r.args))))) for r in rigid_rels
            ]
            flex_sizes = list(product(range(1, max_carrier + 1), repeat=len(flexible)))
            for rels in product(*frames):
                relations = {m.name: r for m, r in zip(sig.modalities, rels)}
                for noms in product(worlds, repeat=len(sig.nominals)):
                    nominals = dict(zip(sig.nominals, noms))
                    for rtabs in product(*rigid_op_choices):
                        ropmap = {o.name: t for o, t in zip(rigid_ops, rtabs)}
                        for rreltabs in product(*rigid_rel_choices):
                            rrelmap = {r.name: t for r, t in zip(rigid_rels, rreltabs)}
                            per_world = []
                            for fs in flex_sizes:
                                car = {**rcar, **{s: _elements(k) for s, k in zip(flexible, fs)}}
                                per_world.extend(_local_models(b, car, ropmap, rrelmap))
                            for locals_ in product(per_world, repeat=n):
                                yield KripkeModel(
                                    sig, worlds, relations, nominals, dict(zip(worlds, locals_))
                                )


DEFAULT_SEARCH_CAP = 2_000_000


def find_countermodel(
    sig: HybridSignature,
    premises: Sequence[Sentence],
    goal: Sentence,
    max_worlds: int = 2,
    max_carrier: int = 1,
    constraints: ConstraintSet | None = None,
    cap: int = DEFAULT_SEARCH_CAP,
) -> Countermodel | None:
    """First model within bounds satisfying every premise globally and
    refuting ``goal`` at some world; None when the bounds are exhausted."""
    if max_worlds < 1 or max_carrier < 1:
        raise ValueError("bounds must be at least 1")
    space = search_space(sig, max_worlds, max_carrier)
    if space > cap:
        raise BoundsTooLarge(f"search space of {space} models exceeds cap {cap}")
    log.debug("searching %d candidate models", space)
    for model in enumerate_models(sig, max_worlds, max_carrier, constraints):
        if not all(sat_global(model, p) for p in premises):
            continue
        for w in model.worlds:
            if not sat_local(model, w, goal):
                return Countermodel(model, w)
    return None
