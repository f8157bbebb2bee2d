"""Concrete syntax: ``.hspec`` specification files and ``.hmodel`` model files.

Grammar of sentences (loosest to tightest)::

    sentence := iff
    iff      := implies ['<=>' iff]
    implies  := or ['=>' implies]
    or       := and {'\\/' and}
    and      := unary {'/\\' unary}
    unary    := 'not' unary
              | '<' M '>' modargs | '[' M ']' modargs
              | '@' N ':' or | '@' N unary
              | QUANT names ':' SORT '.' sentence
              | '(' sentence ')' | atom
    modargs  := '(' sentence {',' sentence} ')' | unary

``QUANT`` is one of ``forall exists forallH existsH``; binding the sort
``World`` quantifies over nominals.  Comments run from ``--`` to the end of
the line.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import base
from .base import OpDecl, RelDecl, Sort
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
    Modality,
    Nom,
    Not,
    Or,
    Sentence,
    check_wellformed,
    signature_problems,
)
from .kripke import FRAME_PROPERTIES, ConstraintSet, KripkeModel


@dataclass(frozen=True)
class Diagnostic:
    file: str
    line: int
    column: int
    severity: str
    message: str
    excerpt: str = ""
    code: str = "syntax"

    def __str__(self):
        return f"{self.file}:{self.line}:{self.column}: {self.severity}: {self.message}"


class ParseError(Exception):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(map(str, self.diagnostics)))


# -- lexer ----------------------------------------------------------------------

_LEX = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>--[^\n]*)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<number>[0-9]+)
  | (?P<punct><=>|=>|->|/\\|\\/|[<>\[\](),:.=*@{}])
    """,
    re.VERBOSE,
)

KEYWORDS = {
    "spec", "end", "logic", "hlogic", "data", "rigid", "sort", "sorts", "op", "ops",
    "pred", "preds", "prop", "props", "nominal", "nominals", "modality", "not",
    "forall", "exists", "forallH", "existsH",
}
QUANT_WORDS = {"forall", "exists", "forallH", "existsH"}
BASE_LOGICS = {"PROP": base.PROP, "RigidFOL": base.RFOL, "RigidCASL": base.RFOL}


@dataclass(frozen=True)
class Token:
    kind: str  # ident, number, punct, eof
    value: str
    line: int
    column: int
    first_on_line: bool = False

    @property
    def is_name(self):
        return self.kind in ("ident", "number")


def tokenize(text: str, file: str = "<input>") -> tuple[list[Token], list[Diagnostic]]:
    tokens: list[Token] = []
    diags: list[Diagnostic] = []
    lines = text.split("\n")
    pos, line, col = 0, 1, 1
    last_line = 0
    while pos < len(text):
        m = _LEX.match(text, pos)
        if m is None:
            ch = text[pos]
            msg = (
                f"non-ASCII character {ch!r}" if ord(ch) > 127 else f"unexpected character {ch!r}"
            )
            diags.append(Diagnostic(file, line, col, "error", msg, lines[line - 1]))
            pos += 1
            col += 1
            continue
        kind, value = m.lastgroup, m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, value, line, col, line != last_line))
            last_line = line
        nl = value.count("\n")
        if nl:
            line += nl
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(Token("eof", "", line, col, True))
    return tokens, diags


# -- spec file structures -----------------------------------------------------------


@dataclass(frozen=True)
class SpecBlock:
    name: str
    kind: str  # "logic" or "hlogic"
    logic: str
    imports: tuple[str, ...] = ()
    props: tuple[str, ...] = ()
    sorts: tuple[Sort, ...] = ()
    ops: tuple[OpDecl, ...] = ()
    rels: tuple[RelDecl, ...] = ()
    nominals: tuple[str, ...] = ()
    modalities: tuple[Modality, ...] = ()
    frame: dict = field(default_factory=dict)
    axioms: tuple[Sentence, ...] = ()

    def __hash__(self):
        return hash((self.name, self.kind, self.axioms))


@dataclass(frozen=True)
class SpecFile:
    blocks: tuple[SpecBlock, ...] = ()
    theories: tuple[HybridTheory, ...] = field(default=(), compare=False)

    def theory(self, name: str | None = None) -> HybridTheory:
        """The theory named ``name``, or the last one in the file."""
        if not self.theories:
            raise KeyError("no hlogic spec in file")
        if name is None:
            return self.theories[-1]
        for t in self.theories:
            if t.name == name:
                return t
        raise KeyError(name)

    @property
    def axiom_count(self) -> int:
        return sum(len(b.axioms) for b in self.blocks)


class _Abort(Exception):
    pass


class _Parser:
    def __init__(self, text: str, file: str, all_errors: bool):
        self.text = text
        self.file = file
        self.all_errors = all_errors
        self.lines = text.split("\n")
        self.toks, self.diags = tokenize(text, file)
        self.i = 0
        self.positions: dict[int, Token] = {}
        if self.diags and not all_errors:
            raise ParseError(self.diags[:1])

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, *values) -> bool:
        t = self.tok
        return t.kind in ("punct", "ident") and t.value in values

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.i += 1
        return t

    def error(self, message, tok=None, code="syntax"):
        tok = tok or self.tok
        excerpt = self.lines[tok.line - 1] if tok.line <= len(self.lines) else ""
        self.diags.append(
            Diagnostic(self.file, tok.line, tok.column, "error", message, excerpt, code)
        )
        if not self.all_errors:
            raise ParseError(self.diags)
        raise _Abort

    def expect(self, value: str) -> Token:
        if not self.at(value):
            shown = self.tok.value or "end of input"
            self.error(f"expected {value!r}, found {shown!r}")
        return self.advance()

    def name(self, what="name", allow_number=False) -> Token:
        t = self.tok
        ok = t.kind == "ident" or (allow_number and t.kind == "number")
        if not ok or t.value in KEYWORDS:
            self.error(f"expected {what}, found {t.value or 'end of input'!r}")
        return self.advance()

    def names(self, what="name", allow_number=False) -> list[Token]:
        out = [self.name(what, allow_number)]
        while self.at(","):
            self.advance()
            out.append(self.name(what, allow_number))
        return out

    def recover(self, stops=(".", "end", "}", "spec")):
        """Skip to the next line starting with a statement keyword."""
        self.advance()
        decl = {"data", "rigid", "sort", "sorts", "op", "ops", "pred", "preds",
                "prop", "props", "nominal", "nominals", "modality", "logic", "hlogic"}
        while self.tok.kind != "eof":
            if self.tok.first_on_line and (self.tok.value in stops or self.tok.value in decl):
                return
            self.advance()

    # -- spec files --
    def spec_file(self) -> SpecFile:
        blocks: list[SpecBlock] = []
        theories: list[HybridTheory] = []
        env: dict[str, tuple[SpecBlock, base.BaseSignature]] = {}
        while self.tok.kind != "eof":
            start = self.tok
            try:
                block, theory, sig = self.block(env)
            except _Abort:
                self.recover(stops=("spec",))
                continue
            if block.name in env:
                self.diags.append(self._diag(f"duplicate spec {block.name!r}", start))
            env[block.name] = (block, sig)
            blocks.append(block)
            if theory is not None:
                theories.append(theory)
        if self.diags:
            raise ParseError(self.diags)
        return SpecFile(tuple(blocks), tuple(theories))

    def block(self, env):
        start = self.tok
        if not self.at("spec"):
            self.error(f"expected 'spec', found {self.tok.value or 'end of input'!r}")
        self.advance()
        name = self.name("spec name").value
        self.expect("=")
        if not self.at("logic", "hlogic"):
            self.error("expected 'logic :' or 'hlogic :'")
        kind = self.advance().value
        self.expect(":")
        tag_tok = self.name("logic name")
        tag = tag_tok.value
        base_kind = self.logic_kind(kind, tag, tag_tok)
        b = _BlockBuilder(name, kind, tag, base_kind)
        depth = 0
        sig: HybridSignature | None = None
        bsig: base.BaseSignature | None = None
        while not self.at("end"):
            if self.tok.kind == "eof":
                self.error(f"spec {name!r} is missing 'end'")
            try:
                if self.at("{"):
                    self.advance()
                    depth += 1
                elif self.at("}"):
                    if depth == 0:
                        self.error("unbalanced '}'")
                    self.advance()
                    depth -= 1
                elif self.at("."):
                    dot = self.advance()
                    if kind == "logic":
                        self.error("axioms belong in hlogic specs", dot)
                    if sig is None:
                        sig, bsig = self.signature(b, env, start)
                    b.axioms.append(self.axiom(sig, dot))
                else:
                    if sig is not None:
                        self.error("declarations must precede axioms")
                    self.declaration(b, env)
            except _Abort:
                self.recover()
        if depth:
            self.error("unbalanced '{'")
        self.advance()
        if sig is None:
            sig, bsig = self.signature(b, env, start)
        block = b.build()
        theory = None
        if kind == "hlogic" and not self.diags:
            theory = HybridTheory(
                name, sig, tuple(b.axioms), ConstraintSet(dict(b.frame))
            )
        return block, theory, bsig

    def logic_kind(self, kind, tag, tok) -> str:
        if kind == "logic":
            if tag not in BASE_LOGICS:
                self.error(f"unknown logic {tag!r}; expected PROP, RigidFOL or RigidCASL", tok)
            return BASE_LOGICS[tag]
        rest = tag[1:] if tag.startswith("H") else None
        if rest is not None:
            if rest in BASE_LOGICS:
                return BASE_LOGICS[rest]
            if rest.endswith("C") and rest[:-1] in BASE_LOGICS:
                return BASE_LOGICS[rest[:-1]]
        self.error(f"unknown hybrid logic {tag!r}; expected H<base>[C]", tok)

    def declaration(self, b: "_BlockBuilder", env):
        t = self.tok
        if self.at("data"):
            self.advance()
            for n in self.names("spec name"):
                if n.value not in env:
                    self.error(f"unknown spec {n.value!r}", n)
                imported, isig = env[n.value]
                if imported.kind != "logic":
                    self.error(f"{n.value!r} is not a base-level spec", n)
                if isig.kind != b.base_kind:
                    self.error(f"{n.value!r} uses a different base logic", n)
                b.imports.append((n.value, isig, n))
            return
        rigid = False
        if self.at("rigid"):
            self.advance()
            rigid = True
        if self.at("sort", "sorts"):
            self.advance()
            self.need_base(b, base.RFOL, t)
            for n in self.names("sort name"):
                if n.value == WORLD:
                    self.error(f"sort name {WORLD!r} is reserved", n)
                b.sorts.append((Sort(n.value, rigid), n))
        elif self.at("op", "ops"):
            self.advance()
            self.need_base(b, base.RFOL, t)
            names = self.names("op name", allow_number=True)
            self.expect(":")
            args, result = self.rank(with_result=True)
            for n in names:
                b.ops.append((OpDecl(n.value, args, result, rigid), n))
        elif self.at("pred", "preds"):
            self.advance()
            self.need_base(b, base.RFOL, t)
            names = self.names("predicate name")
            args = ()
            if self.at(":"):
                self.advance()
                args, _ = self.rank(with_result=False)
            for n in names:
                b.rels.append((RelDecl(n.value, args, rigid), n))
        elif self.at("prop", "props"):
            self.advance()
            self.need_base(b, base.PROP, t)
            if rigid:
                self.error("propositions are always flexible", t)
            b.props.extend((n.value, n) for n in self.names("proposition name"))
        elif rigid:
            self.error("expected sort, op or pred after 'rigid'")
        elif self.at("nominal", "nominals"):
            self.advance()
            if b.kind != "hlogic":
                self.error("nominals belong in hlogic specs", t)
            b.nominals.extend((n.value, n) for n in self.names("nominal name"))
        elif self.at("modality"):
            self.advance()
            if b.kind != "hlogic":
                self.error("modalities belong in hlogic specs", t)
            n = self.name("modality name")
            self.expect(":")
            if self.tok.kind != "number":
                self.error("expected modality arity")
            arity = int(self.advance().value)
            props = []
            while self.tok.kind == "ident" and self.tok.value in FRAME_PROPERTIES:
                props.append(self.advance().value)
            if props and arity != 2:
                self.error("frame properties need a binary modality", n)
            b.modalities.append((Modality(n.value, arity), n))
            if props:
                b.frame[n.value] = tuple(props)
        else:
            self.error(f"unexpected {t.value or 'end of input'!r}")

    def need_base(self, b, kind, tok):
        if b.base_kind != kind:
            self.error(f"declaration does not fit base logic {b.logic!r}", tok)

    def rank(self, with_result):
        sorts = [self.name("sort name").value]
        while self.at("*"):
            self.advance()
            sorts.append(self.name("sort name").value)
        if not with_result:
            return tuple(sorts), None
        if self.at("->"):
            self.advance()
            return tuple(sorts), self.name("sort name").value
        if len(sorts) != 1:
            self.error("expected '->' in op rank")
        return (), sorts[0]

    def signature(self, b, env, start):
        """Assemble the block's signature from its imports and declarations."""
        owner: dict[str, str] = {}
        atoms, sorts, ops, rels = [], [], [], []

        def add(name, where, tok):
            if name in owner:
                self.error(f"name {name!r} clashes with a declaration in {owner[name]}", tok)
            owner[name] = where

        for spec_name, isig, tok in b.imports:
            for x in isig.atoms:
                add(x, spec_name, tok)
            atoms.extend(isig.atoms)
            for s in isig.sorts:
                add(s.name, spec_name, tok)
            sorts.extend(isig.sorts)
            for o in isig.ops:
                add(o.name, spec_name, tok)
            ops.extend(isig.ops)
            for r in isig.rels:
                add(r.name, spec_name, tok)
            rels.extend(isig.rels)
        for x, tok in b.props:
            add(x, b.name, tok)
            atoms.append(x)
        for s, tok in b.sorts:
            add(s.name, b.name, tok)
            sorts.append(s)
        for o, tok in b.ops:
            add(o.name, b.name, tok)
            ops.append(o)
        for r, tok in b.rels:
            add(r.name, b.name, tok)
            rels.append(r)
        for n, tok in b.nominals:
            add(n, b.name, tok)
        for m, tok in b.modalities:
            add(m.name, b.name, tok)
        try:
            if b.base_kind == base.PROP:
                bsig = base.BaseSignature.prop(atoms)
            else:
                bsig = base.BaseSignature.rfol(sorts, ops, rels)
            sig = HybridSignature(
                tuple(n for n, _ in b.nominals), tuple(m for m, _ in b.modalities), bsig
            )
        except base.SignatureError as e:
            self.error(str(e), start)
        for (m, tok) in b.modalities:
            if m.arity < 2:
                self.diags.append(
                    self._diag(
                        f"modality {m.name!r} has arity {m.arity}; "
                        "a width-1 relation admits no successor argument",
                        tok,
                        "arity",
                    )
                )
        return sig, bsig

    def _diag(self, message, tok, code="syntax"):
        excerpt = self.lines[tok.line - 1] if tok.line <= len(self.lines) else ""
        return Diagnostic(self.file, tok.line, tok.column, "error", message, excerpt, code)

    # -- sentences --
    def axiom(self, sig: HybridSignature, start: Token) -> Sentence:
        self.sig = sig
        self.noms: list[str] = []
        self.rvars: dict[str, str] = {}
        s = self.sentence()
        self.check(sig, s, start, skip_signature=True)
        return s

    def check(self, sig, s, start, skip_signature=False):
        problems = check_wellformed(sig, s)
        if not skip_signature:
            problems = signature_problems(sig) + problems
        for p in problems:
            node = s
            for k in p.path:
                node = node.children()[k]
            tok = self.positions.get(id(node), start)
            code = "arity" if "arity" in p.message else "wellformed"
            self.diags.append(self._diag(p.message, tok, code))
            if not self.all_errors:
                raise ParseError(self.diags)

    def mark(self, node, tok):
        self.positions[id(node)] = tok
        return node

    def sentence(self) -> Sentence:
        start = self.tok
        left = self.implies()
        if self.at("<=>"):
            self.advance()
            return self.mark(Iff(left, self.sentence()), start)
        return left

    def implies(self) -> Sentence:
        start = self.tok
        left = self.disjunction()
        if self.at("=>"):
            self.advance()
            return self.mark(Implies(left, self.implies()), start)
        return left

    def disjunction(self) -> Sentence:
        start = self.tok
        left = self.conjunction()
        while self.at("\\/"):
            self.advance()
            left = self.mark(Or(left, self.conjunction()), start)
        return left

    def conjunction(self) -> Sentence:
        start = self.tok
        left = self.unary()
        while self.at("/\\"):
            self.advance()
            left = self.mark(And(left, self.unary()), start)
        return left

    def unary(self) -> Sentence:
        t = self.tok
        if self.at("not"):
            self.advance()
            return self.mark(Not(self.unary()), t)
        if self.at("<", "["):
            close = ">" if t.value == "<" else "]"
            self.advance()
            m = self.name("modality name").value
            self.expect(close)
            args = self.modargs()
            cls = Diamond if close == ">" else Box
            return self.mark(cls(m, args), t)
        if self.at("@"):
            self.advance()
            n = self.name("nominal").value
            if self.at(":"):
                self.advance()
                body = self.disjunction()
            else:
                body = self.unary()
            return self.mark(At(n, body), t)
        if self.tok.kind == "ident" and self.tok.value in QUANT_WORDS:
            return self.quantified()
        if self.at("("):
            self.advance()
            s = self.sentence()
            self.expect(")")
            return s
        return self.atom()

    def modargs(self) -> tuple[Sentence, ...]:
        if self.at("("):
            self.advance()
            if self.at(")"):
                self.advance()
                return ()
            args = [self.sentence()]
            while self.at(","):
                self.advance()
                args.append(self.sentence())
            self.expect(")")
            return tuple(args)
        return (self.unary(),)

    def quantified(self) -> Sentence:
        t = self.advance()
        universal = t.value.startswith("forall")
        names = self.names("variable name")
        self.expect(":")
        sort = self.name("sort name").value
        self.expect(".")
        saved_noms, saved_vars = list(self.noms), dict(self.rvars)
        for n in names:
            if sort == WORLD:
                self.noms.append(n.value)
            else:
                self.rvars[n.value] = sort
        body = self.sentence()
        self.noms, self.rvars = saved_noms, saved_vars
        for n in reversed(names):
            if sort == WORLD:
                body = (ForallNom if universal else ExistsNom)(n.value, body)
            else:
                body = (ForallRigid if universal else ExistsRigid)(n.value, sort, body)
            self.mark(body, n if len(names) > 1 else t)
        return body

    def atom(self) -> Sentence:
        t = self.tok
        if not t.is_name or t.value in KEYWORDS:
            self.error(f"expected a sentence, found {t.value or 'end of input'!r}")
        name, nxt = t.value, self.peek().value
        bsig = self.sig.base
        if (name in self.noms or name in self.sig.nominals) and nxt not in ("(", "="):
            self.advance()
            return self.mark(Nom(name), t)
        if name in bsig.atoms:
            self.advance()
            return self.mark(Atom(base.Prop(name)), t)
        if name in bsig.rel_map:
            self.advance()
            args = self.term_args()
            return self.mark(Atom(base.RelAtom(name, args)), t)
        if name not in bsig.op_map and name not in self.rvars and nxt not in ("(", "="):
            self.error(f"unknown symbol {name!r}")
        lhs = self.term()
        self.expect("=")
        rhs = self.term()
        return self.mark(Atom(base.Eq(lhs, rhs)), t)

    def term_args(self) -> tuple:
        if not self.at("("):
            return ()
        self.advance()
        args = [self.term()]
        while self.at(","):
            self.advance()
            args.append(self.term())
        self.expect(")")
        return tuple(args)

    def term(self):
        t = self.tok
        if not t.is_name or t.value in KEYWORDS:
            self.error(f"expected a term, found {t.value or 'end of input'!r}")
        self.advance()
        if t.value in self.rvars and not self.at("("):
            return base.Var(t.value)
        return base.App(t.value, self.term_args())


class _BlockBuilder:
    def __init__(self, name, kind, logic, base_kind):
        self.name, self.kind, self.logic, self.base_kind = name, kind, logic, base_kind
        self.imports: list = []
        self.props: list = []
        self.sorts: list = []
        self.ops: list = []
        self.rels: list = []
        self.nominals: list = []
        self.modalities: list = []
        self.frame: dict = {}
        self.axioms: list = []

    def build(self) -> SpecBlock:
        return SpecBlock(
            self.name,
            self.kind,
            self.logic,
            tuple(n for n, _, _ in self.imports),
            tuple(p for p, _ in self.props),
            tuple(s for s, _ in self.sorts),
            tuple(o for o, _ in self.ops),
            tuple(r for r, _ in self.rels),
            tuple(n for n, _ in self.nominals),
            tuple(m for m, _ in self.modalities),
            dict(self.frame),
            tuple(self.axioms),
        )


def parse_spec(text: str, file: str = "<input>", all_errors: bool = False) -> SpecFile:
    """Parse and elaborate a spec file.

    Raises ParseError carrying the first diagnostic, or all of them when
    ``all_errors`` is set.
    """
    p = _Parser(text, file, all_errors)
    try:
        return p.spec_file()
    except _Abort:  # pragma: no cover - spec_file recovers internally
        raise ParseError(p.diags) from None


def parse_sentence(text: str, sig: HybridSignature, file: str = "<goal>") -> Sentence:
    """Parse a single sentence (e.g. a proof goal) against ``sig``."""
    p = _Parser(text, file, all_errors=False)
    s = p.axiom(sig, p.tok)
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.value!r} after sentence")
    return s


# -- model files ------------------------------------------------------------------------


class _ModelParser(_Parser):
    def model(self, sig: HybridSignature) -> KripkeModel:
        bsig = sig.base
        worlds: list[str] = []
        world_tok: dict[str, Token] = {}
        nominals: dict[str, str] = {}
        relations: dict[str, set] = {m.name: set() for m in sig.modalities}
        shared = _Tables()
        local: dict[str, _Tables] = {}
        current: str | None = None
        while self.tok.kind != "eof":
            try:
                t = self.tok
                if self.at("worlds"):
                    self.advance()
                    for n in self.names("world name", allow_number=True):
                        if n.value in world_tok:
                            self.error(f"duplicate world {n.value!r}", n)
                        worlds.append(n.value)
                        world_tok[n.value] = n
                elif self.at("nominal"):
                    self.advance()
                    n = self.name("nominal")
                    if n.value not in sig.nominals:
                        self.error(f"unknown nominal {n.value!r}", n)
                    self.expect("=")
                    w = self.world(world_tok)
                    nominals[n.value] = w
                elif self.at("relation"):
                    self.advance()
                    n = self.name("modality name")
                    mod = sig.modality_map.get(n.value)
                    if mod is None:
                        self.error(f"unknown modality {n.value!r}", n)
                    self.expect(":")
                    while self.at("("):
                        start = self.tok
                        tup = self.elements()
                        if len(tup) != mod.arity:
                            self.error(
                                f"tuple of width {len(tup)} for {n.value!r}, "
                                f"expected width {mod.arity}", start,
                            )
                        for x, xt in tup:
                            if x not in world_tok:
                                self.error(f"unknown world {x!r}", xt)
                        relations[n.value].add(tuple(x for x, _ in tup))
                        if not self.at(","):
                            break
                        self.advance()
                elif self.at("world"):
                    self.advance()
                    w = self.world(world_tok)
                    if w in local:
                        self.error(f"world {w!r} has two blocks", t)
                    self.expect("{")
                    local[w] = _Tables()
                    current = w
                elif self.at("}"):
                    if current is None:
                        self.error("unbalanced '}'")
                    self.advance()
                    current = None
                elif self.at("carrier", "op", "pred", "true"):
                    self.entry(bsig, shared if current is None else local[current], current)
                else:
                    self.error(f"unexpected {t.value or 'end of input'!r}")
            except _Abort:
                self.recover(stops=("worlds", "nominal", "relation", "world", "}",
                                    "carrier", "op", "pred", "true"))
                current = None if self.at("world") else current
        if current is not None:
            self.error_at_end(f"world block {current!r} is not closed")
        if not worlds:
            self.error_at_end("no worlds declared")
        for n in sig.nominals:
            if n not in nominals:
                self.error_at_end(f"nominal {n!r} unassigned")
        if self.diags:
            raise ParseError(self.diags)
        models = {}
        for w in worlds:
            tables = local.get(w, _Tables())
            models[w] = self.local_model(bsig, shared, tables, w)
        if self.diags:
            raise ParseError(self.diags)
        return KripkeModel(
            sig, tuple(worlds), {k: frozenset(v) for k, v in relations.items()}, nominals, models
        )

    def error_at_end(self, message, code="syntax"):
        tok = self.toks[-1]
        self.diags.append(self._diag(message, tok, code))
        if not self.all_errors:
            raise ParseError(self.diags)

    def world(self, world_tok) -> str:
        n = self.name("world name", allow_number=True)
        if n.value not in world_tok:
            self.error(f"unknown world {n.value!r}", n)
        return n.value

    def elements(self) -> list[tuple[str, Token]]:
        self.expect("(")
        out = []
        if not self.at(")"):
            out = [(n.value, n) for n in self.names("element", allow_number=True)]
        self.expect(")")
        return out

    def entry(self, bsig, tables: "_Tables", world):
        t = self.advance()
        where = "top level" if world is None else f"world {world!r}"
        if t.value == "true":
            if world is None:
                self.error("propositions are flexible: give them inside a world block", t)
            for n in self.names("proposition"):
                if n.value not in bsig.atoms:
                    self.error(f"unknown proposition {n.value!r}", n)
                tables.true.add(n.value)
            return
        if t.value == "carrier":
            n = self.name("sort name")
            s = bsig.sort_map.get(n.value)
            if s is None:
                self.error(f"unknown sort {n.value!r}", n)
            self.rigidity(s.rigid, world, f"sort {n.value!r}", n)
            self.expect("=")
            elems = [e.value for e in self.names("element", allow_number=True)]
            if n.value in tables.carriers:
                self.error(f"carrier of {n.value!r} given twice at {where}", n)
            tables.carriers[n.value] = (tuple(elems), n)
            return
        n = self.name("symbol", allow_number=True)
        if t.value == "op":
            o = bsig.op_map.get(n.value)
            if o is None:
                self.error(f"unknown op {n.value!r}", n)
            self.rigidity(o.rigid, world, f"op {n.value!r}", n)
            args = self.elements() if self.at("(") else []
            if len(args) != len(o.args):
                self.error(f"op {n.value!r} takes {len(o.args)} argument(s)", n)
            self.expect("=")
            value = self.name("element", allow_number=True)
            key = tuple(a for a, _ in args)
            table = tables.ops.setdefault(n.value, {})
            if key in table:
                self.error(f"op {n.value!r} defined twice at {key}", n)
            table[key] = (value.value, n, [a for _, a in args], value)
        else:
            r = bsig.rel_map.get(n.value)
            if r is None:
                self.error(f"unknown predicate {n.value!r}", n)
            self.rigidity(r.rigid, world, f"pred {n.value!r}", n)
            args = self.elements() if self.at("(") else []
            if len(args) != len(r.args):
                self.error(f"pred {n.value!r} takes {len(r.args)} argument(s)", n)
            tables.rels.setdefault(n.value, {})[tuple(a for a, _ in args)] = n

    def rigidity(self, rigid, world, what, tok):
        if rigid and world is not None:
            self.error(f"rigid {what} redeclared in world {world!r}", tok, code="rigidity")
        if not rigid and world is None:
            self.error(f"flexible {what} must be given inside a world block", tok)

    def local_model(self, bsig, shared: "_Tables", mine: "_Tables", w) -> base.BaseModel:
        if bsig.kind == base.PROP:
            return base.BaseModel(bsig, valuation={a: a in mine.true for a in bsig.atoms})
        carriers = {}
        for s in bsig.sorts:
            src = shared if s.rigid else mine
            if s.name not in src.carriers:
                self.error_at_end(f"carrier of sort {s.name!r} missing at world {w!r}")
                continue
            carriers[s.name] = src.carriers[s.name][0]
        ops = {}
        for o in bsig.ops:
            src = shared if o.rigid else mine
            table = src.ops.get(o.name, {})
            ops[o.name] = {}
            for key, (value, tok, arg_toks, vtok) in table.items():
                for a, at_, sort in zip(key, arg_toks, o.args):
                    if a not in carriers.get(sort, ()):
                        self.diags.append(self._diag(f"{a!r} is not in carrier of {sort!r}", at_))
                if value not in carriers.get(o.result, ()):
                    self.diags.append(
                        self._diag(f"{value!r} is not in carrier of {o.result!r}", vtok)
                    )
                ops[o.name][key] = value
            if all(s in carriers for s in (*o.args, o.result)):
                from itertools import product

                for key in product(*(carriers[a] for a in o.args)):
                    if key not in ops[o.name]:
                        self.error_at_end(
                            f"op {o.name!r} undefined at {key} in world {w!r}"
                            if not o.rigid else f"op {o.name!r} undefined at {key}"
                        )
                        break
        rels = {}
        for r in bsig.rels:
            src = shared if r.rigid else mine
            entries = src.rels.get(r.name, {})
            for key, tok in entries.items():
                for a, sort in zip(key, r.args):
                    if a not in carriers.get(sort, ()):
                        self.diags.append(self._diag(f"{a!r} is not in carrier of {sort!r}", tok))
            rels[r.name] = frozenset(entries)
        return base.BaseModel(bsig, carriers=carriers, ops=ops, rels=rels)


class _Tables:
    def __init__(self):
        self.true: set[str] = set()
        self.carriers: dict = {}
        self.ops: dict = {}
        self.rels: dict = {}


def parse_model(
    text: str, sig: HybridSignature, file: str = "<model>", all_errors: bool = False
) -> KripkeModel:
    """Parse a model file against an elaborated signature."""
    p = _ModelParser(text, file, all_errors)
    return p.model(sig)
