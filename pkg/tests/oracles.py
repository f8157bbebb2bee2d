"""Independent reference implementations used to cross-check the library."""
from itertools import product

from hyloc import base
from hyloc.hybrid import (
    And, At, Atom, Box, Diamond, ExistsNom, ExistsRigid, ForallNom, ForallRigid,
    Iff, Implies, Nom, Not, Or,
)


def extension(model, s, noms=None, rvars=None):
    """The set of worlds where ``s`` holds, computed bottom-up on sets."""
    noms = noms or {}
    rvars = rvars or {}
    W = frozenset(model.worlds)

    def name(n):
        return noms.get(n, model.nominals.get(n))

    if isinstance(s, Atom):
        return frozenset(w for w in W if base.base_satisfies(model.local[w], s.base, rvars))
    if isinstance(s, Nom):
        return frozenset({name(s.name)})
    if isinstance(s, Not):
        return W - extension(model, s.arg, noms, rvars)
    if isinstance(s, (And, Or, Implies, Iff)):
        a = extension(model, s.left, noms, rvars)
        b = extension(model, s.right, noms, rvars)
        if isinstance(s, And):
            return a & b
        if isinstance(s, Or):
            return a | b
        if isinstance(s, Implies):
            return (W - a) | b
        return (a & b) | ((W - a) & (W - b))
    if isinstance(s, (Box, Diamond)):
        exts = [extension(model, c, noms, rvars) for c in s.args]
        rel = model.relations[s.modality]
        if isinstance(s, Diamond):
            return frozenset(
                t[0] for t in rel if all(v in e for v, e in zip(t[1:], exts))
            )
        bad = frozenset(t[0] for t in rel if not any(v in e for v, e in zip(t[1:], exts)))
        return W - bad
    if isinstance(s, At):
        return W if name(s.nominal) in extension(model, s.arg, noms, rvars) else frozenset()
    if isinstance(s, (ForallNom, ExistsNom)):
        parts = [extension(model, s.body, {**noms, s.var: v}, rvars) for v in model.worlds]
        if isinstance(s, ForallNom):
            return frozenset.intersection(W, *parts)
        return frozenset().union(*parts)
    if isinstance(s, (ForallRigid, ExistsRigid)):
        dom = model.local[model.worlds[0]].carriers[s.sort]
        parts = [extension(model, s.body, noms, {**rvars, s.var: e}) for e in dom]
        if isinstance(s, ForallRigid):
            return frozenset.intersection(W, *parts)
        return frozenset().union(*parts)
    raise TypeError(s)


def z5_tables():
    """X at each world of the Z/5 Calc model, written out arithmetically."""
    add = {(str(a), str(b)): str((a + b) % 5) for a, b in product(range(5), repeat=2)}
    mul = {(str(a), str(b)): str((a * b) % 5) for a, b in product(range(5), repeat=2)}
    return add, mul
