"""Encoding hybrid theories into first-order logic.

The translation makes worlds explicit: a ``World`` sort, a constant per
nominal and a predicate ``R_<m>`` per modality.  Flexible symbols gain a
leading world argument while rigid ones keep their rank, so sharing across
worlds needs no axioms.  :func:`unsort` then relativises sorts to unary
predicates for provers that only speak unsorted logic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import base
from .fol import (
    UNIVERSE,
    All,
    Conj,
    Disj,
    Equal,
    Equiv,
    Ex,
    Falsum,
    Fn,
    FolAxiom,
    FolSignature,
    FolStructure,
    FolTheory,
    Formula,
    FTerm,
    FVar,
    Imp,
    Neg,
    PredAtom,
    Verum,
    conj,
    disj,
    exists,
    forall,
    free_vars,
)
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
    HybridSignature,
    HybridTheory,
    Iff,
    Implies,
    Nom,
    Not,
    Or,
    Sentence,
    is_closed,
)
from .kripke import ConstraintSet, KripkeModel


class EncodingError(ValueError):
    pass


class UnboundName(EncodingError):
    pass


def relation_symbol(modality: str) -> str:
    return f"R_{modality}"


def sort_predicate(sort: str) -> str:
    return f"is_{sort}"


# -- signatures ---------------------------------------------------------------------------


def _frame_axiom(prop: str, rel: str) -> Formula:
    w, v, u = FVar("w"), FVar("v"), FVar("u")
    R = lambda a, b: PredAtom(rel, (a, b))  # noqa: E731
    if prop == "reflexive":
        return All("w", WORLD, R(w, w))
    if prop == "symmetric":
        return forall([("w", WORLD), ("v", WORLD)], Imp(R(w, v), R(v, w)))
    if prop == "transitive":
        return forall(
            [("w", WORLD), ("v", WORLD), ("u", WORLD)],
            Imp(Conj((R(w, v), R(v, u))), R(w, u)),
        )
    if prop == "serial":
        return All("w", WORLD, Ex("v", WORLD, R(w, v)))
    raise EncodingError(f"unknown frame property {prop!r}")


def encode_signature(sig: HybridSignature, cs: ConstraintSet | None = None) -> FolTheory:
    """The many-sorted theory a hybrid signature maps to."""
    cs = cs or ConstraintSet()
    b = sig.base
    funcs: dict[str, tuple[tuple[str, ...], str]] = {}
    preds: dict[str, tuple[str, ...]] = {}

    def add(table, name, rank):
        if name in funcs or name in preds:
            raise EncodingError(f"symbol {name!r} would be declared twice")
        table[name] = rank

    for n in sig.nominals:
        add(funcs, n, ((), WORLD))
    for m in sig.modalities:
        add(preds, relation_symbol(m.name), (WORLD,) * m.arity)
    for p in b.atoms:
        add(preds, p, (WORLD,))
    for o in b.ops:
        lead = () if o.rigid else (WORLD,)
        add(funcs, o.name, (lead + o.args, o.result))
    for r in b.rels:
        lead = () if r.rigid else (WORLD,)
        add(preds, r.name, lead + r.args)
    fsig = FolSignature((WORLD,) + tuple(s.name for s in b.sorts), funcs, preds)
    axioms = []
    for name in sorted(cs.frame):
        for prop in ("reflexive", "symmetric", "transitive", "serial"):
            if prop in cs.frame[name]:
                axioms.append(
                    FolAxiom(f"frame_{prop}_{name}", _frame_axiom(prop, relation_symbol(name)))
                )
    return FolTheory(f"Phi({','.join(sig.nominals)})", fsig, tuple(axioms))


# -- sentences ----------------------------------------------------------------------------


def encode_sentence(sig: HybridSignature, s: Sentence, world: FTerm) -> Formula:
    """Standard translation of ``s`` evaluated at the world denoted by ``world``."""
    counter = itertools.count(1)
    b = sig.base

    def fresh() -> str:
        return f"%w{next(counter)}"

    def term(t, w, rvars):
        if isinstance(t, base.Var):
            if t.name not in rvars:
                raise UnboundName(t.name)
            return FVar(t.name)
        decl = b.op_map.get(t.op)
        if decl is None:
            raise EncodingError(f"unknown op {t.op!r}")
        args = tuple(term(a, w, rvars) for a in t.args)
        return Fn(t.op, args if decl.rigid else (w,) + args)

    def atom(a, w, rvars) -> Formula:
        if isinstance(a, base.Prop):
            return PredAtom(a.name, (w,))
        if isinstance(a, base.Eq):
            return Equal(term(a.lhs, w, rvars), term(a.rhs, w, rvars))
        decl = b.rel_map[a.rel]
        args = tuple(term(x, w, rvars) for x in a.args)
        return PredAtom(a.rel, args if decl.rigid else (w,) + args)

    def nominal(name, noms) -> FTerm:
        if name in noms:
            return FVar(name)
        if name in sig.nominals:
            return Fn(name)
        raise UnboundName(name)

    def st(s, w, noms, rvars) -> Formula:
        if isinstance(s, Atom):
            return atom(s.base, w, rvars)
        if isinstance(s, Nom):
            return Equal(w, nominal(s.name, noms))
        if isinstance(s, Not):
            return Neg(st(s.arg, w, noms, rvars))
        if isinstance(s, And):
            return Conj((st(s.left, w, noms, rvars), st(s.right, w, noms, rvars)))
        if isinstance(s, Or):
            return Disj((st(s.left, w, noms, rvars), st(s.right, w, noms, rvars)))
        if isinstance(s, Implies):
            return Imp(st(s.left, w, noms, rvars), st(s.right, w, noms, rvars))
        if isinstance(s, Iff):
            return Equiv(st(s.left, w, noms, rvars), st(s.right, w, noms, rvars))
        if isinstance(s, (Box, Diamond)):
            vs = [fresh() for _ in s.args]
            access = PredAtom(relation_symbol(s.modality), (w,) + tuple(FVar(v) for v in vs))
            parts = [st(a, FVar(v), noms, rvars) for v, a in zip(vs, s.args)]
            binders = [(v, WORLD) for v in vs]
            if isinstance(s, Box):
                return forall(binders, Imp(access, disj(*parts)))
            return exists(binders, conj(access, *parts))
        if isinstance(s, At):
            return st(s.arg, nominal(s.nominal, noms), noms, rvars)
        if isinstance(s, (ForallNom, ExistsNom)):
            q = All if isinstance(s, ForallNom) else Ex
            return q(s.var, WORLD, st(s.body, w, noms | {s.var}, rvars))
        if isinstance(s, (ForallRigid, ExistsRigid)):
            q = All if isinstance(s, ForallRigid) else Ex
            return q(s.var, s.sort, st(s.body, w, noms, rvars | {s.var}))
        raise TypeError(f"not a sentence: {s!r}")

    return st(s, world, frozenset(), frozenset())


def encode_global(sig: HybridSignature, s: Sentence) -> Formula:
    """Global satisfaction: the translation holds at every world.

    The binder is left out when the world variable does not occur (as in
    ``@ i : i``); the World sort is never empty, so nothing changes.
    """
    body = encode_sentence(sig, s, FVar("%w0"))
    if "%w0" not in free_vars(body):
        return body
    return All("%w0", WORLD, body)


# -- many-sorted to unsorted ---------------------------------------------------------------


def unsort_formula(f: Formula) -> Formula:
    """Relativise sorted quantifiers to sort predicates."""
    if isinstance(f, (Verum, Falsum, PredAtom, Equal)):
        return f
    if isinstance(f, Neg):
        return Neg(unsort_formula(f.arg))
    if isinstance(f, Conj):
        return Conj(tuple(map(unsort_formula, f.items)))
    if isinstance(f, Disj):
        return Disj(tuple(map(unsort_formula, f.items)))
    if isinstance(f, Imp):
        return Imp(unsort_formula(f.left), unsort_formula(f.right))
    if isinstance(f, Equiv):
        return Equiv(unsort_formula(f.left), unsort_formula(f.right))
    if isinstance(f, All):
        body = unsort_formula(f.body)
        if f.sort is None:
            return All(f.var, None, body)
        return All(f.var, None, Imp(PredAtom(sort_predicate(f.sort), (FVar(f.var),)), body))
    if isinstance(f, Ex):
        body = unsort_formula(f.body)
        if f.sort is None:
            return Ex(f.var, None, body)
        return Ex(f.var, None, Conj((PredAtom(sort_predicate(f.sort), (FVar(f.var),)), body)))
    raise TypeError(f"not a formula: {f!r}")


def unsort(theory: FolTheory) -> FolTheory:
    """Unsorted version of a many-sorted theory.

    Adds a non-emptiness axiom per sort and a closure axiom per function,
    then relativises every original axiom.
    """
    sig = theory.signature
    if not sig.is_sorted:
        raise EncodingError("theory is already unsorted")
    preds = {name: (UNIVERSE,) * len(args) for name, args in sig.preds.items()}
    for s in sig.sorts:
        p = sort_predicate(s)
        if p in preds or p in sig.funcs:
            raise EncodingError(f"sort predicate {p!r} clashes with a symbol")
        preds[p] = (UNIVERSE,)
    funcs = {name: ((UNIVERSE,) * len(args), UNIVERSE) for name, (args, _) in sig.funcs.items()}
    axioms = []
    for s in sig.sorts:
        axioms.append(
            FolAxiom(f"nonempty_{s}", Ex("x", None, PredAtom(sort_predicate(s), (FVar("x"),))))
        )
    for name, (args, res) in sig.funcs.items():
        xs = [f"x{i}" for i in range(1, len(args) + 1)]
        head = PredAtom(sort_predicate(res), (Fn(name, tuple(FVar(x) for x in xs)),))
        if not args:
            body = head
        else:
            guards = conj(*(PredAtom(sort_predicate(a), (FVar(x),)) for x, a in zip(xs, args)))
            body = forall([(x, None) for x in xs], Imp(guards, head))
        axioms.append(FolAxiom(f"closure_{name}", body))
    for ax in theory.axioms:
        axioms.append(FolAxiom(ax.label, unsort_formula(ax.formula)))
    return FolTheory(theory.name, FolSignature((), funcs, preds), tuple(axioms))


# -- tasks --------------------------------------------------------------------------------


@dataclass(frozen=True)
class EncodedTask:
    """A proof task E |= e in both encodings.

    ``theory`` holds the signature axioms and translated premises; the goal
    never includes the signature axioms.
    """

    name: str
    theory: FolTheory
    goal: Formula | None
    unsorted_theory: FolTheory
    unsorted_goal: Formula | None


def encode_task(
    theory: HybridTheory, goal: Sentence | None = None, name: str | None = None
) -> EncodedTask:
    sig = theory.signature
    if goal is not None and not is_closed(sig, goal):
        raise EncodingError("goal is not closed over the theory's signature")
    phi = encode_signature(sig, theory.constraints)
    premises = tuple(
        FolAxiom(f"premise_{i}", encode_global(sig, ax)) for i, ax in enumerate(theory.axioms, 1)
    )
    sorted_th = FolTheory(theory.name, phi.signature, phi.axioms + premises)
    g = encode_global(sig, goal) if goal is not None else None
    return EncodedTask(
        name or theory.name,
        sorted_th,
        g,
        unsort(sorted_th),
        unsort_formula(g) if g is not None else None,
    )


# -- models --------------------------------------------------------------------------------


def induced_fol_model(k: KripkeModel) -> FolStructure:
    """The first-order structure whose back-translation is ``k``.

    Elements are tagged with their sort, so the universe is the disjoint
    union of the worlds and all carriers.  Flexible carriers are merged
    across worlds.
    """
    sig = k.signature
    b = sig.base
    domains: dict[str, list] = {WORLD: [(WORLD, w) for w in k.worlds]}
    for s in b.sorts:
        seen: list = []
        for w in k.worlds:
            for e in k.local[w].carriers[s.name]:
                if (s.name, e) not in seen:
                    seen.append((s.name, e))
        domains[s.name] = seen
    universe = tuple(e for d in domains.values() for e in d)
    funcs: dict[str, dict] = {}
    defaults: dict = {}
    preds: dict[str, frozenset] = {}
    for n in sig.nominals:
        funcs[n] = {(): (WORLD, k.nominals[n])}
    for m in sig.modalities:
        preds[relation_symbol(m.name)] = frozenset(
            tuple((WORLD, w) for w in t) for t in k.relations[m.name]
        )
    for p in b.atoms:
        preds[p] = frozenset(((WORLD, w),) for w in k.worlds if k.local[w].valuation[p])
    first = k.local[k.worlds[0]]
    for o in b.ops:
        table = {}
        defaults[o.name] = domains[o.result][0]
        tag = lambda args: tuple((s, e) for s, e in zip(o.args, args))  # noqa: E731
        if o.rigid:
            for args, v in first.ops[o.name].items():
                table[tag(args)] = (o.result, v)
        else:
            for w in k.worlds:
                for args, v in k.local[w].ops[o.name].items():
                    table[((WORLD, w),) + tag(args)] = (o.result, v)
        funcs[o.name] = table
    for r in b.rels:
        tag = lambda args: tuple((s, e) for s, e in zip(r.args, args))  # noqa: E731
        if r.rigid:
            preds[r.name] = frozenset(tag(t) for t in first.rels.get(r.name, ()))
        else:
            preds[r.name] = frozenset(
                ((WORLD, w),) + tag(t) for w in k.worlds for t in k.local[w].rels.get(r.name, ())
            )
    for s, d in domains.items():
        preds[sort_predicate(s)] = frozenset((e,) for e in d)
    return FolStructure(
        universe, funcs, preds, defaults, {s: tuple(d) for s, d in domains.items()}
    )


def kripke_of_structure(m: FolStructure, sig: HybridSignature) -> KripkeModel:
    """Back-translation of a finite structure of the encoded signature.

    Worlds are the extension of ``is_World``; every sort's carrier is its
    sort predicate's extension at each world.
    """
    b = sig.base

    def ext(sort):
        return [e[0] for e in sorted(m.preds[sort_predicate(sort)], key=repr)]

    worlds = tuple(ext(WORLD))
    untag = lambda e: e[1] if isinstance(e, tuple) and len(e) == 2 else e  # noqa: E731
    carriers = {s.name: ext(s.name) for s in b.sorts}
    local = {}
    for w in worlds:
        ops = {}
        for o in b.ops:
            lead = () if o.rigid else (w,)
            ops[o.name] = {
                tuple(untag(a) for a in args): untag(m.apply(o.name, lead + args))
                for args in itertools.product(*(carriers[a] for a in o.args))
            }
        rels = {}
        for r in b.rels:
            lead = () if r.rigid else (w,)
            rels[r.name] = frozenset(
                tuple(untag(a) for a in args)
                for args in itertools.product(*(carriers[a] for a in r.args))
                if lead + args in m.preds.get(r.name, ())
            )
        local[untag(w)] = base.BaseModel(
            b,
            valuation={p: (w,) in m.preds.get(p, ()) for p in b.atoms},
            carriers={s: tuple(untag(e) for e in es) for s, es in carriers.items()},
            ops=ops,
            rels=rels,
        )
    relations = {
        mod.name: frozenset(
            tuple(untag(x) for x in t) for t in m.preds.get(relation_symbol(mod.name), ())
        )
        for mod in sig.modalities
    }
    nominals = {n: untag(m.apply(n, ())) for n in sig.nominals}
    return KripkeModel(sig, tuple(untag(w) for w in worlds), relations, nominals, local)
