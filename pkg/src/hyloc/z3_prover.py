"""An SZS-speaking front end to the Z3 SMT solver for TPTP FOF problems.

Run as ``python -m hyloc.z3_prover PROBLEM.p [--timeout SECONDS]``.  Output
follows the usual prover convention, a single ``% SZS status`` line.
"""
from __future__ import annotations

import argparse
import sys

import z3

from .fol import All, Conj, Disj, Equal, Equiv, Ex, Falsum, Fn, FVar, Imp, Neg, PredAtom, Verum
from .tptp import TptpError, parse_tptp


class _Translator:
    def __init__(self) -> None:
        self.U = z3.DeclareSort("U")
        self.symbols: dict[tuple[str, int, bool], z3.FuncDeclRef] = {}

    def _decl(self, name: str, arity: int, pred: bool):
        key = (name, arity, pred)
        if key not in self.symbols:
            rng = z3.BoolSort() if pred else self.U
            label = f"{name}/{arity}" if any(k[0] == name for k in self.symbols) else name
            self.symbols[key] = z3.Function(label, *([self.U] * arity), rng)
        return self.symbols[key]

    def term(self, t, env):
        if isinstance(t, FVar):
            if t.name not in env:
                raise TptpError(f"free variable {t.name!r}")
            return env[t.name]
        return self._decl(t.name, len(t.args), False)(*(self.term(a, env) for a in t.args))

    def formula(self, f, env):
        if isinstance(f, Verum):
            return z3.BoolVal(True)
        if isinstance(f, Falsum):
            return z3.BoolVal(False)
        if isinstance(f, PredAtom):
            return self._decl(f.name, len(f.args), True)(*(self.term(a, env) for a in f.args))
        if isinstance(f, Equal):
            return self.term(f.lhs, env) == self.term(f.rhs, env)
        if isinstance(f, Neg):
            return z3.Not(self.formula(f.arg, env))
        if isinstance(f, Conj):
            return z3.And(*(self.formula(x, env) for x in f.items))
        if isinstance(f, Disj):
            return z3.Or(*(self.formula(x, env) for x in f.items))
        if isinstance(f, Imp):
            return z3.Implies(self.formula(f.left, env), self.formula(f.right, env))
        if isinstance(f, Equiv):
            return self.formula(f.left, env) == self.formula(f.right, env)
        if isinstance(f, (All, Ex)):
            x = z3.Const(f.var, self.U)
            body = self.formula(f.body, {**env, f.var: x})
            return (z3.ForAll if isinstance(f, All) else z3.Exists)([x], body)
        raise TypeError(f"not a formula: {f!r}")


def solve(text: str, timeout: float | None = None) -> str:
    """SZS status for a FOF problem."""
    units = parse_tptp(text)
    tr = _Translator()
    solver = z3.Solver()
    if timeout is not None:
        solver.set("timeout", max(1, int(timeout * 1000)))
    conjectures = []
    for u in units:
        f = tr.formula(u.formula, {})
        if u.role == "conjecture":
            conjectures.append(f)
        elif u.role == "negated_conjecture":
            conjectures.append(z3.Not(f))
        else:
            solver.add(f)
    if len(conjectures) > 1:
        raise TptpError("more than one conjecture")
    if conjectures:
        solver.add(z3.Not(conjectures[0]))
    result = solver.check()
    if result == z3.unsat:
        return "Theorem" if conjectures else "Unsatisfiable"
    if result == z3.sat:
        return "CounterSatisfiable" if conjectures else "Satisfiable"
    reason = solver.reason_unknown()
    return "Timeout" if "timeout" in reason or "canceled" in reason else "GaveUp"


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="python -m hyloc.z3_prover")
    ap.add_argument("problem")
    ap.add_argument("--timeout", type=float, default=None, help="seconds")
    args = ap.parse_args(argv)
    try:
        with open(args.problem, encoding="utf-8") as fh:
            text = fh.read()
        status = solve(text, args.timeout)
    except (OSError, TptpError) as e:
        print(f"% SZS status InputError for {args.problem}")
        print(f"% {e}", file=sys.stderr)
        return 2
    print(f"% SZS status {status} for {args.problem}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
