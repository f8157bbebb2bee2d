"""TPTP FOF emission and reading, plus SZS status extraction."""
from __future__ import annotations

import re
from dataclasses import dataclass

from .fol import (
    All,
    Conj,
    Disj,
    Equal,
    Equiv,
    Ex,
    Falsum,
    Fn,
    Formula,
    FTerm,
    FVar,
    Imp,
    Neg,
    PredAtom,
    Verum,
)


class TptpError(ValueError):
    pass


class UnsanitizableIdentifier(TptpError):
    pass


_LOWER_WORD = re.compile(r"[a-z][A-Za-z0-9_]*")
_UPPER_WORD = re.compile(r"[A-Z][A-Za-z0-9_]*")
_SAFE_CHARS = re.compile(r"[A-Za-z0-9_]+")
# lower words the FOF grammar treats specially
_RESERVED = frozenset({"fof", "cnf", "tff", "thf", "tcf", "fot", "include", "axiom",
                       "conjecture", "hypothesis", "goal", "ax"})


class Namer:
    """Stable, injective mapping from internal names to TPTP lexemes."""

    def __init__(self) -> None:
        self._symbols: dict[str, str] = {}
        self._used: set[str] = set()

    def symbol(self, name: str) -> str:
        if name in self._symbols:
            return self._symbols[name]
        if not _SAFE_CHARS.fullmatch(name):
            raise UnsanitizableIdentifier(f"cannot write {name!r} as a TPTP identifier")
        base = name if _LOWER_WORD.fullmatch(name) and name not in _RESERVED else f"c_{name}"
        out, k = base, 1
        while out in self._used:
            k += 1
            out = f"{base}_{k}"
        self._used.add(out)
        self._symbols[name] = out
        return out

    @staticmethod
    def variable(name: str) -> str:
        if name.startswith("%w") and name[2:].isdigit():
            return "W" + name[2:]
        if not _SAFE_CHARS.fullmatch(name):
            raise UnsanitizableIdentifier(f"cannot write variable {name!r} in TPTP")
        return f"V_{name}"

    @property
    def mapping(self) -> dict[str, str]:
        return dict(self._symbols)


def _term(t: FTerm, n: Namer) -> str:
    if isinstance(t, FVar):
        return n.variable(t.name)
    head = n.symbol(t.name)
    if not t.args:
        return head
    return f"{head}({','.join(_term(a, n) for a in t.args)})"


def _binary(op: str, items, n: Namer) -> str:
    items = list(items)
    text = formula_text(items[-1], n)
    for f in reversed(items[:-1]):
        text = f"({formula_text(f, n)} {op} {text})"
    return text


def formula_text(f: Formula, n: Namer) -> str:
    """Fully parenthesised FOF text; every non-atomic result is a unit formula."""
    if isinstance(f, Verum):
        return "$true"
    if isinstance(f, Falsum):
        return "$false"
    if isinstance(f, PredAtom):
        return _term(Fn(f.name, f.args), n)
    if isinstance(f, Equal):
        return f"({_term(f.lhs, n)} = {_term(f.rhs, n)})"
    if isinstance(f, Neg):
        return f"~ {formula_text(f.arg, n)}"
    if isinstance(f, Conj):
        return _binary("&", f.items, n) if f.items else "$true"
    if isinstance(f, Disj):
        return _binary("|", f.items, n) if f.items else "$false"
    if isinstance(f, Imp):
        return f"({formula_text(f.left, n)} => {formula_text(f.right, n)})"
    if isinstance(f, Equiv):
        return f"({formula_text(f.left, n)} <=> {formula_text(f.right, n)})"
    if isinstance(f, (All, Ex)):
        if f.sort is not None:
            raise TptpError("FOF output needs an unsorted formula")
        q = "!" if isinstance(f, All) else "?"
        return f"({q} [{n.variable(f.var)}] : {formula_text(f.body, n)})"
    raise TypeError(f"not a formula: {f!r}")


def emit_tptp(task, namer: Namer | None = None) -> str:
    """TPTP FOF problem for an encoded task (its unsorted half).

    Axioms appear in theory order (sort axioms, closures, frame axioms,
    premises) as ``ax_1``, ``ax_2``, ...; the goal, when present, is the
    conjecture ``goal``.
    """
    n = namer or Namer()
    th = task.unsorted_theory
    lines = [f"% problem: {task.name}"]
    for k, ax in enumerate(th.axioms, 1):
        lines.append(f"% {ax.label}")
        lines.append(f"fof(ax_{k},axiom,{formula_text(ax.formula, n)}).")
    if task.unsorted_goal is not None:
        lines.append("% goal")
        lines.append(f"fof(goal,conjecture,{formula_text(task.unsorted_goal, n)}).")
    return "\n".join(lines) + "\n"


# -- reading --------------------------------------------------------------------------------


@dataclass(frozen=True)
class Annotated:
    name: str
    role: str
    formula: Formula


_TOKEN = re.compile(
    r"""\s+|%[^\n]*|/\*.*?\*/
    |(?P<op><=>|<~>|=>|<=|~\||~&|!=|[!?~&|=:,()\[\].])
    |(?P<word>\$?[A-Za-z0-9_]+|'(?:[^'\\]|\\.)*')""",
    re.VERBOSE | re.DOTALL,
)


def _tokens(text: str) -> list[str]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise TptpError(f"unexpected character {text[pos]!r} at offset {pos}")
        if m.group("op") or m.group("word"):
            out.append(m.group(0))
        pos = m.end()
    return out


class _Reader:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise TptpError("unexpected end of input")
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.next()
        if got != tok:
            raise TptpError(f"expected {tok!r}, got {got!r}")

    def file(self) -> list[Annotated]:
        out = []
        while self.peek() is not None:
            kind = self.next()
            if kind != "fof":
                raise TptpError(f"only fof formulas are supported, got {kind!r}")
            self.expect("(")
            name = self.next()
            self.expect(",")
            role = self.next()
            self.expect(",")
            f = self.formula()
            if self.peek() == ",":  # annotations are skipped
                depth = 0
                while not (depth == 0 and self.peek() == ")"):
                    t = self.next()
                    if t in ("(", "["):
                        depth += 1
                    elif t in (")", "]"):
                        depth -= 1
            self.expect(")")
            self.expect(".")
            out.append(Annotated(name, role, f))
        return out

    def formula(self) -> Formula:
        left = self.unit()
        op = self.peek()
        if op in ("&", "|"):
            items = [left]
            while self.peek() == op:
                self.next()
                items.append(self.unit())
            return Conj(tuple(items)) if op == "&" else Disj(tuple(items))
        if op in ("=>", "<=", "<=>", "<~>", "~|", "~&"):
            self.next()
            right = self.unit()
            return {
                "=>": lambda: Imp(left, right),
                "<=": lambda: Imp(right, left),
                "<=>": lambda: Equiv(left, right),
                "<~>": lambda: Neg(Equiv(left, right)),
                "~|": lambda: Neg(Disj((left, right))),
                "~&": lambda: Neg(Conj((left, right))),
            }[op]()
        return left

    def unit(self) -> Formula:
        tok = self.peek()
        if tok == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        if tok == "~":
            self.next()
            return Neg(self.unit())
        if tok in ("!", "?"):
            self.next()
            self.expect("[")
            names = [self.next()]
            while self.peek() == ",":
                self.next()
                names.append(self.next())
            self.expect("]")
            self.expect(":")
            body = self.unit()
            q = All if tok == "!" else Ex
            for v in reversed(names):
                body = q(v, None, body)
            return body
        if tok == "$true":
            self.next()
            return Verum()
        if tok == "$false":
            self.next()
            return Falsum()
        lhs = self.term()
        if self.peek() in ("=", "!="):
            eq = self.next()
            f = Equal(lhs, self.term())
            return f if eq == "=" else Neg(f)
        if isinstance(lhs, FVar):
            raise TptpError(f"variable {lhs.name!r} used as a formula")
        return PredAtom(lhs.name, lhs.args)

    def term(self) -> FTerm:
        tok = self.next()
        if _UPPER_WORD.fullmatch(tok):
            return FVar(tok)
        if not (tok[0].islower() or tok[0].isdigit() or tok[0] in "'$"):
            raise TptpError(f"unexpected {tok!r} where a term was expected")
        args = []
        if self.peek() == "(":
            self.next()
            args.append(self.term())
            while self.peek() == ",":
                self.next()
                args.append(self.term())
            self.expect(")")
        return Fn(tok, tuple(args))


def parse_tptp(text: str) -> list[Annotated]:
    """Read a FOF problem.  ``include`` and non-FOF languages are rejected."""
    return _Reader(text).file()


_SZS = re.compile(r"SZS status\s+([A-Za-z]+)")


def parse_szs_status(output: str) -> str | None:
    """The first ``SZS status`` value in prover output, if any."""
    m = _SZS.search(output)
    return m.group(1) if m else None
