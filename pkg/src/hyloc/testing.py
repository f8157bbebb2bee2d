"""Random signatures, models and sentences for property-based checks.

Every generator takes a :class:`random.Random`, so results are reproducible
from a seed and the module does not depend on any testing framework.
Generated names never collide: atoms are ``p<k>``, nominals ``n<k>``,
modalities ``m<k>``, sorts ``S<k>``, ops ``f<k>``, relations ``r<k>``,
bound nominal variables ``k<k>`` and bound rigid variables ``x<k>``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from . import base
from .base import PROP, RFOL, App, BaseModel, BaseSignature, OpDecl, RelDecl, Sort, Var
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
    Iff,
    Implies,
    Modality,
    Nom,
    Not,
    Or,
    Sentence,
)
from .kripke import FRAME_PROPERTIES, ConstraintSet, KripkeModel
from .parser import SpecBlock

__all__ = [
    "random_base_signature",
    "random_base_model",
    "random_base_sentence",
    "random_base_morphism",
    "random_hybrid_signature",
    "random_constraints",
    "random_kripke_model",
    "random_sentence",
    "random_hybrid_morphism",
    "random_spec_blocks",
    "BaseCase",
]


# -- base level --------------------------------------------------------------------------


def random_base_signature(
    rng: random.Random,
    kind: str = RFOL,
    max_atoms: int = 3,
    max_sorts: int = 2,
    max_ops: int = 3,
    max_rels: int = 2,
    max_arity: int = 2,
) -> BaseSignature:
    if kind == PROP:
        return BaseSignature.prop([f"p{i}" for i in range(rng.randint(1, max_atoms))])
    sorts = [Sort(f"S{i}", rng.random() < 0.7) for i in range(rng.randint(1, max_sorts))]
    sorts[0] = Sort("S0", True)  # at least one rigid sort to quantify over

    def rank(rigid: bool, arity: int):
        pool = [s.name for s in sorts if s.rigid or not rigid]
        return tuple(rng.choice(pool) for _ in range(arity)), pool

    ops = []
    for i in range(rng.randint(1, max_ops)):
        rigid = rng.random() < 0.5
        args, pool = rank(rigid, rng.randint(0, max_arity))
        ops.append(OpDecl(f"f{i}", args, rng.choice(pool), rigid))
    if not any(not o.args for o in ops):
        ops[0] = OpDecl("f0", (), ops[0].result, ops[0].rigid)
    # every sort needs a closed term so that random atoms always exist
    for s in sorts:
        if not any(o.result == s.name and not o.args for o in ops):
            ops.append(OpDecl(f"f{len(ops)}", (), s.name, s.rigid and rng.random() < 0.5))
    rels = []
    for i in range(rng.randint(0, max_rels)):
        rigid = rng.random() < 0.5
        args, _ = rank(rigid, rng.randint(0, max_arity))
        rels.append(RelDecl(f"r{i}", args, rigid))
    return BaseSignature.rfol(sorts, ops, rels)


def _tables(rng, sig: BaseSignature, carriers, symbols):
    ops, rels = {}, {}
    for o in symbols[0]:
        dom = itertools.product(*(carriers[a] for a in o.args))
        ops[o.name] = {args: rng.choice(carriers[o.result]) for args in dom}
    for r in symbols[1]:
        dom = itertools.product(*(carriers[a] for a in r.args))
        rels[r.name] = frozenset(t for t in dom if rng.random() < 0.5)
    return ops, rels


def random_base_model(
    rng: random.Random,
    sig: BaseSignature,
    max_carrier: int = 3,
    fixed: BaseModel | None = None,
) -> BaseModel:
    """A random model; with ``fixed``, rigid parts are copied from it."""
    if sig.kind == PROP:
        return BaseModel(sig, valuation={a: rng.random() < 0.5 for a in sig.atoms})
    carriers = {}
    for s in sig.sorts:
        if fixed is not None and s.rigid:
            carriers[s.name] = fixed.carriers[s.name]
        else:
            carriers[s.name] = tuple(str(i) for i in range(rng.randint(1, max_carrier)))
    if fixed is None:
        ops, rels = _tables(rng, sig, carriers, (sig.ops, sig.rels))
    else:
        ops, rels = _tables(
            rng, sig, carriers,
            ([o for o in sig.ops if not o.rigid], [r for r in sig.rels if not r.rigid]),
        )
        ops.update({o.name: fixed.ops[o.name] for o in sig.ops if o.rigid})
        rels.update({r.name: fixed.rels.get(r.name, frozenset()) for r in sig.rels if r.rigid})
    return BaseModel(sig, carriers=carriers, ops=ops, rels=rels)


def random_term(rng, sig: BaseSignature, sort: str, var_sorts: dict, depth: int):
    vs = [v for v, s in var_sorts.items() if s == sort]
    ops = [o for o in sig.ops if o.result == sort]
    leaves = [o for o in ops if not o.args]
    if vs and (depth <= 0 or rng.random() < 0.4):
        return Var(rng.choice(vs))
    if depth <= 0 or rng.random() < 0.3:
        if leaves:
            return App(rng.choice(leaves).name)
        return Var(rng.choice(vs))
    o = rng.choice(ops)
    return App(o.name, tuple(random_term(rng, sig, a, var_sorts, depth - 1) for a in o.args))


def random_base_sentence(rng, sig: BaseSignature, var_sorts: dict | None = None, depth: int = 2):
    var_sorts = var_sorts or {}
    if sig.kind == PROP:
        return base.Prop(rng.choice(sig.atoms))
    if sig.rels and rng.random() < 0.4:
        r = rng.choice(sig.rels)
        args = tuple(random_term(rng, sig, a, var_sorts, depth) for a in r.args)
        return base.RelAtom(r.name, args)
    s = rng.choice(sig.sorts).name
    lhs = random_term(rng, sig, s, var_sorts, depth)
    return base.Eq(lhs, random_term(rng, sig, s, var_sorts, depth))


def random_base_morphism(rng: random.Random, target: BaseSignature) -> base.SignatureMorphism:
    """A morphism into ``target`` from a fresh source signature.

    The map is usually not injective: several source symbols may share an
    image.  Source names carry a ``q`` prefix so they differ from the
    target's.
    """
    if target.kind == PROP:
        atoms = [f"q{i}" for i in range(rng.randint(1, len(target.atoms) + 1))]
        amap = {a: rng.choice(target.atoms) for a in atoms}
        return base.SignatureMorphism(BaseSignature.prop(atoms), target, atoms=amap)
    sorts, smap = [], {}
    for t in target.sorts:
        for j in range(rng.randint(1, 2)):
            name = f"q{t.name}_{j}"
            sorts.append(Sort(name, t.rigid))
            smap[name] = t.name
    pre = {t.name: [s.name for s in sorts if smap[s.name] == t.name] for t in target.sorts}
    ops, omap = [], {}
    for t in target.ops:
        # constants are copied onto every preimage sort so each sort stays inhabited
        results = pre[t.result] if not t.args else rng.sample(pre[t.result], 1) * rng.randint(1, 2)
        for res in results:
            name = f"qf{len(ops)}"
            args = tuple(rng.choice(pre[a]) for a in t.args)
            ops.append(OpDecl(name, args, res, t.rigid))
            omap[name] = t.name
    rels, rmap = [], {}
    for i, t in enumerate(r for r in target.rels if rng.random() < 0.8):
        name = f"qr{i}"
        rels.append(RelDecl(name, tuple(rng.choice(pre[a]) for a in t.args), t.rigid))
        rmap[name] = t.name
    src = BaseSignature.rfol(sorts, ops, rels)
    return base.SignatureMorphism(src, target, sorts=smap, ops=omap, rels=rmap)


@dataclass(frozen=True)
class BaseCase:
    """A morphism, a target model, a source sentence and a variable valuation."""

    morphism: base.SignatureMorphism
    model: BaseModel
    sentence: object
    env: dict


def random_base_case(rng: random.Random, kind: str | None = None) -> BaseCase:
    kind = kind or rng.choice([PROP, RFOL])
    target = random_base_signature(rng, kind)
    phi = random_base_morphism(rng, target)
    model = random_base_model(rng, target)
    var_sorts = {}
    if kind == RFOL:
        for i in range(rng.randint(0, 2)):
            var_sorts[f"x{i}"] = rng.choice(phi.source.sorts).name
    s = random_base_sentence(rng, phi.source, var_sorts)
    env = {v: rng.choice(model.carriers[phi.sorts[srt]]) for v, srt in var_sorts.items()}
    return BaseCase(phi, model, s, env)


# -- hybrid level ------------------------------------------------------------------------


def random_hybrid_signature(
    rng: random.Random,
    kind: str = PROP,
    max_nominals: int = 2,
    max_modalities: int = 2,
    arities: tuple[int, int] = (2, 3),
    **base_kw,
) -> HybridSignature:
    nominals = tuple(f"n{i}" for i in range(rng.randint(1, max_nominals)))
    mods = tuple(
        Modality(f"m{i}", rng.randint(*arities)) for i in range(rng.randint(1, max_modalities))
    )
    return HybridSignature(nominals, mods, random_base_signature(rng, kind, **base_kw))


def random_constraints(rng: random.Random, sig: HybridSignature) -> ConstraintSet:
    frame = {}
    for m in sig.modalities:
        if m.arity == 2 and rng.random() < 0.5:
            frame[m.name] = frozenset(p for p in FRAME_PROPERTIES if rng.random() < 0.4)
    return ConstraintSet(frame)


def _close(rel: set, props, worlds) -> frozenset:
    rel = set(rel)
    if "reflexive" in props:
        rel |= {(w, w) for w in worlds}
    if "symmetric" in props:
        rel |= {(b, a) for a, b in rel}
    if "transitive" in props:
        changed = True
        while changed:
            extra = {(a, d) for a, b in rel for c, d in rel if b == c} - rel
            rel |= extra
            changed = bool(extra)
    if "serial" in props:
        rel |= {(w, w) for w in worlds if not any(a == w for a, _ in rel)}
    return frozenset(rel)


def random_kripke_model(
    rng: random.Random,
    sig: HybridSignature,
    max_worlds: int = 4,
    max_carrier: int = 3,
    constraints: ConstraintSet | None = None,
    density: float = 0.3,
) -> KripkeModel:
    """A random model satisfying rigidity and the given frame properties."""
    cs = constraints or ConstraintSet()
    worlds = tuple(f"w{i}" for i in range(rng.randint(1, max_worlds)))
    relations = {}
    for m in sig.modalities:
        tuples = {t for t in itertools.product(worlds, repeat=m.arity) if rng.random() < density}
        relations[m.name] = _close(tuples, cs.frame.get(m.name, ()), worlds)
    nominals = {n: rng.choice(worlds) for n in sig.nominals}
    first = random_base_model(rng, sig.base, max_carrier)
    local = {worlds[0]: first}
    for w in worlds[1:]:
        local[w] = random_base_model(rng, sig.base, max_carrier, fixed=first)
    return KripkeModel(sig, worlds, relations, nominals, local)


def random_sentence(
    rng: random.Random,
    sig: HybridSignature,
    depth: int = 4,
    quantifiers: bool = True,
) -> Sentence:
    """A closed, well-formed sentence of modal depth at most ``depth``."""
    counter = itertools.count()
    rigid_sorts = [s.name for s in sig.base.sorts if s.rigid]

    def atom(noms, rvars):
        if rng.random() < 1 / 3:
            return Nom(rng.choice(list(sig.nominals) + noms))
        return Atom(random_base_sentence(rng, sig.base, rvars, 2))

    def go(d, noms: list, rvars: dict) -> Sentence:
        if d <= 0 or rng.random() < 0.15:
            return atom(noms, rvars)
        kinds = ["not", "and", "or", "imp", "iff", "box", "dia", "box", "dia", "at", "at"]
        if quantifiers:
            kinds += ["fnom", "enom"]
            if rigid_sorts:
                kinds += ["frig", "erig"]
        k = rng.choice(kinds)
        if k == "not":
            return Not(go(d - 1, noms, rvars))
        if k in ("and", "or", "imp", "iff"):
            cls = {"and": And, "or": Or, "imp": Implies, "iff": Iff}[k]
            return cls(go(d - 1, noms, rvars), go(d - 1, noms, rvars))
        if k in ("box", "dia"):
            m = rng.choice(sig.modalities)
            cls = Box if k == "box" else Diamond
            return cls(m.name, tuple(go(d - 1, noms, rvars) for _ in range(m.arity - 1)))
        if k == "at":
            return At(rng.choice(list(sig.nominals) + noms), go(d - 1, noms, rvars))
        if k in ("fnom", "enom"):
            v = f"k{next(counter)}"
            cls = ForallNom if k == "fnom" else ExistsNom
            return cls(v, go(d - 1, noms + [v], rvars))
        v = f"x{next(counter)}"
        s = rng.choice(rigid_sorts)
        cls = ForallRigid if k == "frig" else ExistsRigid
        return cls(v, s, go(d - 1, noms, {**rvars, v: s}))

    return go(depth, [], {})


def random_hybrid_morphism(rng: random.Random, target: HybridSignature) -> HybridMorphism:
    """A (typically non-injective) renaming into ``target``."""
    bm = random_base_morphism(rng, target.base)
    noms = {f"qn{i}": rng.choice(target.nominals) for i in range(rng.randint(1, 3))}
    mods, decls = {}, []
    for i, t in enumerate(m for m in target.modalities for _ in range(rng.randint(1, 2))):
        mods[f"qm{i}"] = t.name
        decls.append(Modality(f"qm{i}", t.arity))
    src = HybridSignature(tuple(noms), tuple(decls), bm.source)
    return HybridMorphism(src, target, noms, mods, bm)


# -- spec files ----------------------------------------------------------------------------


def random_spec_blocks(rng: random.Random, n_axioms: int = 3) -> tuple[SpecBlock, ...]:
    """A base block plus a hybrid block importing it, as a parser would build them."""
    kind = rng.choice([PROP, RFOL])
    sig = random_hybrid_signature(rng, kind, max_modalities=3)
    b = sig.base
    tag = "PROP" if kind == PROP else rng.choice(["RigidFOL", "RigidCASL"])
    base_block = SpecBlock(
        "Base", "logic", tag, (), b.atoms, b.sorts, b.ops, b.rels,
    )
    frame = {}
    for m in sig.modalities:
        if m.arity == 2 and rng.random() < 0.3:
            frame[m.name] = tuple(p for p in FRAME_PROPERTIES if rng.random() < 0.5) or ("serial",)
    axioms = tuple(random_sentence(rng, sig, rng.randint(0, 4)) for _ in range(n_axioms))
    hyb = SpecBlock(
        "Main", "hlogic", f"H{tag}{'C' if rng.random() < 0.5 else ''}", ("Base",),
        nominals=sig.nominals, modalities=sig.modalities, frame=frame, axioms=axioms,
    )
    return base_block, hyb
