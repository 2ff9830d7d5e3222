"""Concrete syntax for ``.llmk`` program files.

A program file is a semicolon-separated list of declarations:

    base Bool = {tt, ff};
    prim coin : 1 -> Bool = { () -> {tt: 1/2, ff: 1/2} };
    def main : M Bool = sample coin as x in x;

``base`` declares a finite ground type by listing its elements, ``prim``
declares a kernel by giving one probability row per domain point, and
``def`` names a term.  The language of a ``def`` is inferred from its
declared type: measure/lolli/tensor types are linear, base/product types
belong to the kernel language, and a bare ``1`` is read as the linear
unit.  Comments run from ``--`` to the end of the line.

Identifiers referring to earlier ``def``s are inlined during parsing
(definitions are closed terms, so inlining cannot capture).  In linear
positions a primitive ``f`` of domain ``1`` and a primitive application
``f(M)`` with closed ``M`` are sugar for the empty-sample lift
``sample as in f(M)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .syntax import (
    LlApp,
    LlLam,
    LlLetTensor,
    LlSample,
    LlTensor,
    LlTerm,
    LlType,
    LlUnit,
    LlUnitVal,
    LlVar,
    Lolli,
    Meas,
    MkBase,
    MkLet,
    MkPair,
    MkPrimApp,
    MkProd,
    MkProj1,
    MkProj2,
    MkTerm,
    MkType,
    MkUnit,
    MkUnitVal,
    MkVar,
    TensorType,
)

KEYWORDS = {
    "base", "prim", "def", "let", "in", "as", "sample", "observe",
    "fst", "snd", "M",
}

Point = object  # () | label | (Point, Point)


class ParseError(Exception):
    """Positioned diagnostic for lexical, syntactic, and resolution errors."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# Point enumeration (canonical order, shared with the semantics)

def mk_type_points(bases: dict[str, tuple[str, ...]], t: MkType) -> tuple:
    """Canonical enumeration of the points of a ground type.

    Unit has the single point ``()``, a base type enumerates its declared
    labels in order, and a product enumerates pairs lexicographically.
    """
    match t:
        case MkUnit():
            return ((),)
        case MkBase(name):
            if name not in bases:
                raise KeyError(f"unknown base type {name}")
            return tuple(bases[name])
        case MkProd(left, right):
            rs = mk_type_points(bases, right)
            return tuple(
                (a, b) for a in mk_type_points(bases, left) for b in rs
            )
    raise TypeError(f"not an MK type: {t!r}")


def point_str(p) -> str:
    if p == ():
        return "()"
    if isinstance(p, tuple):
        return f"({point_str(p[0])},{point_str(p[1])})"
    return str(p)


# ---------------------------------------------------------------------------
# Program structure

@dataclass
class PrimDecl:
    """A declared kernel: one probability row per domain point."""

    name: str
    domain: MkType
    codomain: MkType
    kernel: dict[Point, dict[Point, Fraction]]
    span: tuple[int, int] | None = None


@dataclass
class Def:
    name: str
    lang: str  # "MK" | "LL"
    decl_type: MkType | LlType
    term: MkTerm | LlTerm
    span: tuple[int, int] | None = None


@dataclass
class Program:
    bases: dict[str, tuple[str, ...]] = field(default_factory=dict)
    prims: dict[str, PrimDecl] = field(default_factory=dict)
    defs: dict[str, Def] = field(default_factory=dict)
    allow_subprob: bool = False


def validate_prim(program: Program, decl: PrimDecl) -> None:
    """Check kernel completeness, point validity, and row mass."""
    dom = mk_type_points(program.bases, decl.domain)
    cod = mk_type_points(program.bases, decl.codomain)
    cod_set = set(cod)
    for p in dom:
        if p not in decl.kernel:
            raise ValueError(f"prim {decl.name}: no row for {point_str(p)}")
    for p, row in decl.kernel.items():
        if p not in dom:
            raise ValueError(f"prim {decl.name}: {point_str(p)} not a domain point")
        for q, w in row.items():
            if q not in cod_set:
                raise ValueError(
                    f"prim {decl.name}: {point_str(q)} not a codomain point"
                )
            if w < 0:
                raise ValueError(f"prim {decl.name}: negative weight {w}")
        total = sum(row.values(), Fraction(0))
        if program.allow_subprob:
            if total > 1:
                raise ValueError(
                    f"prim {decl.name}: row {point_str(p)} sums to {total} > 1"
                )
        elif total != 1:
            raise ValueError(
                f"prim {decl.name}: row {point_str(p)} sums to {total} ≠ 1"
            )


def build_program(bases=(), prims=(), defs=(), allow_subprob=False) -> Program:
    """Assemble and validate a program from parsed or hand-built pieces."""
    program = Program(allow_subprob=allow_subprob)
    for name, labels in bases:
        if name in program.bases:
            raise ValueError(f"duplicate base {name}")
        if len(set(labels)) != len(labels):
            raise ValueError(f"base {name}: duplicate labels")
        program.bases[name] = tuple(labels)
    for decl in prims:
        if decl.name in program.prims:
            raise ValueError(f"duplicate prim {decl.name}")
        validate_prim(program, decl)
        program.prims[decl.name] = decl
    for d in defs:
        if d.name in program.defs:
            raise ValueError(f"duplicate def {d.name}")
        program.defs[d.name] = d
    return program


# ---------------------------------------------------------------------------
# Lexer

@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>--[^\n]*)
  | (?P<tensor>\(\*\))
  | (?P<arrow>->)
  | (?P<lolli>-o)
  | (?P<int>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[(){},;:=*/\\.])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        lexeme = m.group(0)
        kind = m.lastgroup
        if kind == "ident" and lexeme in KEYWORDS:
            kind = lexeme
        elif kind == "punct":
            kind = lexeme
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, lexeme, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser

class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.program = Program()

    # -- token plumbing

    def peek(self, offset=0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, kind: str) -> bool:
        return self.peek().kind == kind

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise self.error(f"expected {kind!r}, found {tok.text or 'end of input'!r}")
        return self.advance()

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message, tok.line, tok.col)

    # -- declarations

    def parse_program(self) -> Program:
        while not self.at("eof"):
            self.parse_decl()
            self.expect(";")
        return self.program

    def parse_decl(self) -> None:
        tok = self.peek()
        if self.at("base"):
            self.parse_base()
        elif self.at("prim"):
            self.parse_prim()
        elif self.at("def"):
            self.parse_def()
        else:
            raise self.error(
                f"expected a declaration, found {tok.text or 'end of input'!r}"
            )

    def parse_base(self) -> None:
        self.expect("base")
        name_tok = self.expect("ident")
        if name_tok.text in self.program.bases:
            raise self.error(f"duplicate base {name_tok.text}", name_tok)
        self.expect("=")
        self.expect("{")
        labels = [self.expect("ident").text]
        while self.at(","):
            self.advance()
            labels.append(self.expect("ident").text)
        self.expect("}")
        if len(set(labels)) != len(labels):
            raise self.error(f"base {name_tok.text}: duplicate labels", name_tok)
        self.program.bases[name_tok.text] = tuple(labels)

    def parse_prim(self) -> None:
        span_tok = self.expect("prim")
        name_tok = self.expect("ident")
        if name_tok.text in self.program.prims:
            raise self.error(f"duplicate prim {name_tok.text}", name_tok)
        self.expect(":")
        domain = self.parse_mk_type()
        self.expect("arrow")
        codomain = self.parse_mk_type()
        self.expect("=")
        self.expect("{")
        kernel: dict = {}
        while True:
            row_tok = self.peek()
            p = self.parse_point()
            if p in kernel:
                raise self.error(f"duplicate row for {point_str(p)}", row_tok)
            self.expect("arrow")
            kernel[p] = self.parse_row()
            if self.at(","):
                self.advance()
            else:
                break
        self.expect("}")
        decl = PrimDecl(
            name_tok.text, domain, codomain, kernel,
            span=(span_tok.line, span_tok.col),
        )
        try:
            validate_prim(self.program, decl)
        except ValueError as exc:
            raise self.error(str(exc), name_tok) from None
        self.program.prims[decl.name] = decl

    def parse_row(self) -> dict:
        self.expect("{")
        row: dict = {}
        while True:
            q_tok = self.peek()
            q = self.parse_point()
            if q in row:
                raise self.error(f"duplicate entry for {point_str(q)}", q_tok)
            self.expect(":")
            row[q] = self.parse_rational()
            if self.at(","):
                self.advance()
            else:
                break
        self.expect("}")
        return row

    def parse_point(self):
        if self.at("("):
            self.advance()
            if self.at(")"):
                self.advance()
                return ()
            a = self.parse_point()
            self.expect(",")
            b = self.parse_point()
            self.expect(")")
            return (a, b)
        return self.expect("ident").text

    def parse_rational(self) -> Fraction:
        num = int(self.expect("int").text)
        if self.at("/"):
            self.advance()
            den = int(self.expect("int").text)
            if den == 0:
                raise self.error("zero denominator")
            return Fraction(num, den)
        return Fraction(num)

    def parse_def(self) -> None:
        span_tok = self.expect("def")
        name_tok = self.expect("ident")
        if name_tok.text in self.program.defs:
            raise self.error(f"duplicate def {name_tok.text}", name_tok)
        self.expect(":")
        lang, decl_type = self.parse_def_type()
        self.expect("=")
        if lang == "LL" and decl_type == LlUnit():
            # `1` is the one type both languages share; kernel terms of
            # unit type are the common case, so try that reading first
            start = self.pos
            try:
                term = self.parse_mk_term(scope=frozenset())
                if not self.at(";"):
                    raise self.error("trailing tokens after kernel term")
                lang, decl_type = "MK", MkUnit()
            except ParseError:
                self.pos = start
                term = self.parse_ll_term(scope=frozenset())
        elif lang == "LL":
            term = self.parse_ll_term(scope=frozenset())
        else:
            term = self.parse_mk_term(scope=frozenset())
        self.program.defs[name_tok.text] = Def(
            name_tok.text, lang, decl_type, term,
            span=(span_tok.line, span_tok.col),
        )

    def parse_def_type(self):
        """Classify the declared type: linear syntax wins, else kernel syntax.

        A bare ``1`` is read as the linear unit.
        """
        start = self.pos
        try:
            ty = self.parse_ll_type()
            if self.at("="):
                return "LL", ty
        except ParseError:
            pass
        self.pos = start
        return "MK", self.parse_mk_type()

    # -- types

    def parse_mk_type(self) -> MkType:
        t = self.parse_mk_atom()
        while self.at("*"):
            self.advance()
            t = MkProd(t, self.parse_mk_atom())
        return t

    def parse_mk_atom(self) -> MkType:
        tok = self.peek()
        if tok.kind == "int" and tok.text == "1":
            self.advance()
            return MkUnit()
        if tok.kind == "ident":
            self.advance()
            if tok.text not in self.program.bases:
                raise self.error(f"unknown base type {tok.text}", tok)
            return MkBase(tok.text)
        if tok.kind == "(":
            self.advance()
            t = self.parse_mk_type()
            self.expect(")")
            return t
        raise self.error(f"expected a ground type, found {tok.text!r}")

    def parse_ll_type(self) -> LlType:
        t = self.parse_tensor_type()
        if self.at("lolli"):
            self.advance()
            return Lolli(t, self.parse_ll_type())
        return t

    def parse_tensor_type(self) -> LlType:
        t = self.parse_ll_atom()
        while self.at("tensor"):
            self.advance()
            t = TensorType(t, self.parse_ll_atom())
        return t

    def parse_ll_atom(self) -> LlType:
        tok = self.peek()
        if tok.kind == "int" and tok.text == "1":
            self.advance()
            return LlUnit()
        if tok.kind == "M":
            self.advance()
            return Meas(self.parse_mk_atom())
        if tok.kind == "(":
            self.advance()
            t = self.parse_ll_type()
            self.expect(")")
            return t
        raise self.error(f"expected a linear type, found {tok.text!r}")

    # -- MK terms

    def parse_mk_term(self, scope: frozenset[str]) -> MkTerm:
        if self.at("let"):
            self.advance()
            var = self.expect("ident").text
            self.expect("=")
            bound = self.parse_mk_term(scope)
            self.expect("in")
            body = self.parse_mk_term(scope | {var})
            return MkLet(var, bound, body)
        return self.parse_mk_unary(scope)

    def parse_mk_unary(self, scope: frozenset[str]) -> MkTerm:
        if self.at("fst"):
            self.advance()
            return MkProj1(self.parse_mk_unary(scope))
        if self.at("snd"):
            self.advance()
            return MkProj2(self.parse_mk_unary(scope))
        return self.parse_mk_primary(scope)

    def parse_mk_primary(self, scope: frozenset[str]) -> MkTerm:
        tok = self.peek()
        if tok.kind == "(":
            self.advance()
            if self.at(")"):
                self.advance()
                return MkUnitVal()
            t = self.parse_mk_term(scope)
            if self.at(","):
                self.advance()
                u = self.parse_mk_term(scope)
                self.expect(")")
                return MkPair(t, u)
            self.expect(")")
            return t
        if tok.kind in ("let", "fst", "snd"):
            return self.parse_mk_term(scope)
        if tok.kind == "ident":
            self.advance()
            if self.at("("):
                if tok.text not in self.program.prims:
                    raise self.error(f"unknown prim {tok.text}", tok)
                self.advance()
                if self.at(")"):
                    self.advance()
                    return MkPrimApp(tok.text, MkUnitVal())
                arg = self.parse_mk_term(scope)
                self.expect(")")
                return MkPrimApp(tok.text, arg)
            if tok.text in scope:
                return MkVar(tok.text)
            d = self.program.defs.get(tok.text)
            if d is not None and d.lang == "MK":
                return d.term
            raise self.error(f"unknown identifier {tok.text}", tok)
        raise self.error(f"expected a kernel term, found {tok.text or 'end of input'!r}")

    # -- LL terms

    def parse_ll_term(self, scope: frozenset[str]) -> LlTerm:
        tok = self.peek()
        if tok.kind == "\\":
            self.advance()
            var = self.expect("ident").text
            self.expect(":")
            annot = self.parse_ll_type()
            self.expect(".")
            body = self.parse_ll_term(scope | {var})
            return LlLam(var, annot, body)
        if tok.kind == "let":
            self.advance()
            var1 = self.expect("ident").text
            self.expect("tensor")
            var2 = self.expect("ident").text
            if var1 == var2:
                raise self.error(f"repeated binder {var1}", tok)
            self.expect("=")
            bound = self.parse_ll_term(scope)
            self.expect("in")
            body = self.parse_ll_term(scope | {var1, var2})
            return LlLetTensor(var1, var2, bound, body)
        if tok.kind in ("sample", "observe"):
            self.advance()
            args: list[LlTerm] = []
            if not self.at("as"):
                args.append(self.parse_ll_term(scope))
                while self.at(","):
                    self.advance()
                    args.append(self.parse_ll_term(scope))
            self.expect("as")
            binders: list[str] = []
            if not self.at("in"):
                binders.append(self.expect("ident").text)
                while self.at(","):
                    self.advance()
                    binders.append(self.expect("ident").text)
            self.expect("in")
            if len(args) != len(binders):
                raise self.error(
                    f"sample binds {len(binders)} variables to {len(args)} arguments",
                    tok,
                )
            if len(set(binders)) != len(binders):
                raise self.error("repeated sample binder", tok)
            body = self.parse_mk_term(scope=frozenset(binders))
            return LlSample(tuple(args), tuple(binders), body)
        return self.parse_ll_tensor(scope)

    def parse_ll_tensor(self, scope: frozenset[str]) -> LlTerm:
        t = self.parse_ll_app(scope)
        while self.at("tensor"):
            self.advance()
            t = LlTensor(t, self.parse_ll_app(scope))
        return t

    def parse_ll_app(self, scope: frozenset[str]) -> LlTerm:
        t = self.parse_ll_primary(scope)
        while self.peek().kind in ("(", "ident"):
            t = LlApp(t, self.parse_ll_primary(scope))
        return t

    def parse_ll_primary(self, scope: frozenset[str]) -> LlTerm:
        tok = self.peek()
        if tok.kind == "(":
            self.advance()
            if self.at(")"):
                self.advance()
                return LlUnitVal()
            t = self.parse_ll_term(scope)
            self.expect(")")
            return t
        if tok.kind == "ident":
            self.advance()
            if self.at("(") and tok.text in self.program.prims:
                # prim application in a linear position: lift via an empty sample
                self.advance()
                if self.at(")"):
                    self.advance()
                    arg: MkTerm = MkUnitVal()
                else:
                    arg = self.parse_mk_term(scope=frozenset())
                    self.expect(")")
                return LlSample((), (), MkPrimApp(tok.text, arg))
            if tok.text in scope:
                return LlVar(tok.text)
            d = self.program.defs.get(tok.text)
            if d is not None and d.lang == "LL":
                return d.term
            prim = self.program.prims.get(tok.text)
            if prim is not None:
                if prim.domain != MkUnit():
                    raise self.error(
                        f"prim {tok.text} needs an argument of type {prim.domain}",
                        tok,
                    )
                return LlSample((), (), MkPrimApp(tok.text, MkUnitVal()))
            raise self.error(f"unknown identifier {tok.text}", tok)
        raise self.error(
            f"expected a linear term, found {tok.text or 'end of input'!r}"
        )


def parse_program(text: str, allow_subprob: bool = False) -> Program:
    parser = _Parser(tokenize(text))
    parser.program.allow_subprob = allow_subprob
    return parser.parse_program()


def parse_mk_type_str(text: str, bases: dict[str, tuple[str, ...]]) -> MkType:
    """Parse a standalone ground type, e.g. for the ``webs`` command."""
    parser = _Parser(tokenize(text))
    parser.program.bases = dict(bases)
    t = parser.parse_mk_type()
    parser.expect("eof")
    return t


# ---------------------------------------------------------------------------
# Pretty printer

def pp_mk_term(t: MkTerm) -> str:
    match t:
        case MkLet(var, bound, body):
            return f"let {var} = {pp_mk_term(bound)} in {pp_mk_term(body)}"
        case MkProj1(arg):
            return f"fst {_pp_mk_primary(arg)}"
        case MkProj2(arg):
            return f"snd {_pp_mk_primary(arg)}"
        case _:
            return _pp_mk_primary(t)


def _pp_mk_primary(t: MkTerm) -> str:
    match t:
        case MkVar(name):
            return name
        case MkUnitVal():
            return "()"
        case MkPair(left, right):
            return f"({pp_mk_term(left)}, {pp_mk_term(right)})"
        case MkPrimApp(prim, arg):
            return f"{prim}({pp_mk_term(arg)})"
        case _:
            return f"({pp_mk_term(t)})"


def pp_ll_term(t: LlTerm) -> str:
    match t:
        case LlLam(var, annot, body):
            return f"\\{var} : {annot}. {pp_ll_term(body)}"
        case LlLetTensor(var1, var2, bound, body):
            return (
                f"let {var1} (*) {var2} = {pp_ll_term(bound)}"
                f" in {pp_ll_term(body)}"
            )
        case LlSample((), (), MkPrimApp(_, _)):
            return _pp_ll_primary(t)
        case LlSample(args, binders, body):
            args_s = ", ".join(_pp_ll_arg(a) for a in args)
            binders_s = ", ".join(binders)
            head = f"sample {args_s}" if args else "sample"
            mid = f"as {binders_s}" if binders else "as"
            return f"{head} {mid} in {pp_mk_term(body)}"
        case _:
            return _pp_ll_tensor(t)


def _pp_ll_arg(t: LlTerm) -> str:
    # sample arguments are comma-separated: keep each argument atomic enough
    if isinstance(t, (LlLam, LlLetTensor, LlSample)):
        return f"({pp_ll_term(t)})"
    return _pp_ll_tensor(t)


def _pp_ll_tensor(t: LlTerm) -> str:
    if isinstance(t, LlTensor):
        return f"{_pp_ll_tensor(t.left)} (*) {_pp_ll_app(t.right)}"
    return _pp_ll_app(t)


def _pp_ll_app(t: LlTerm) -> str:
    if isinstance(t, LlApp):
        return f"{_pp_ll_app(t.fun)} {_pp_ll_primary(t.arg)}"
    return _pp_ll_primary(t)


def _pp_ll_primary(t: LlTerm) -> str:
    match t:
        case LlVar(name):
            return name
        case LlUnitVal():
            return "()"
        case LlSample((), (), MkPrimApp(prim, arg)):
            # fold the lift back into its surface sugar
            return f"{prim}({pp_mk_term(arg)})"
        case _:
            return f"({pp_ll_term(t)})"


def pp_program(program: Program) -> str:
    lines = []
    for name, labels in program.bases.items():
        lines.append(f"base {name} = {{{', '.join(labels)}}};")
    for decl in program.prims.values():
        rows = ", ".join(
            f"{point_str(p)} -> {{{_pp_row(row)}}}"
            for p, row in decl.kernel.items()
        )
        lines.append(
            f"prim {decl.name} : {decl.domain} -> {decl.codomain} = {{ {rows} }};"
        )
    for d in program.defs.values():
        body = pp_ll_term(d.term) if d.lang == "LL" else pp_mk_term(d.term)
        lines.append(f"def {d.name} : {d.decl_type} = {body};")
    return "\n".join(lines) + ("\n" if lines else "")


def _pp_row(row: dict) -> str:
    return ", ".join(f"{point_str(q)}: {w}" for q, w in row.items())


def pretty_print(x) -> str:
    """Render a term, type, or program back to concrete syntax."""
    if isinstance(x, Program):
        return pp_program(x)
    if isinstance(x, (MkUnit, MkBase, MkProd, LlUnit, Meas, Lolli, TensorType)):
        return str(x)
    if isinstance(
        x, (MkVar, MkUnitVal, MkLet, MkPair, MkProj1, MkProj2, MkPrimApp)
    ):
        return pp_mk_term(x)
    return pp_ll_term(x)
