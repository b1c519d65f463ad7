"""Recursive-descent parser for the .npl surface language.

Layout of a file::

    type T;
    var x: Int;  var a: [Int]Int;
    function f(Int): Int;
    axiom <formula>;
    procedure name()
      requires <formula>;
      ensures <formula>;
    { <statements> }

Statements: ``x := e;``  ``a[e] := e;``  ``havoc x;``  ``assume f;``
``assert f;``  ``if (f) { ... } else { ... }``
``while (f) invariant ?H; { ... }``  and the standalone cut ``invariant ?H;``.

Pragma comments recognized before parsing:
``// depth: k``, ``// flags: ...``, ``// oracle: H: f ; f``,
``// predicates: H: f ; f``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .logic import (
    ARRAY,
    BOOL,
    INT,
    Add,
    And,
    Apply,
    BoolAtom,
    BoolLit,
    BoolLitTerm,
    Cmp,
    Exists,
    Forall,
    Formula,
    FuncDecl,
    HoleRef,
    Iff,
    Implies,
    IntLit,
    Ite,
    Mul,
    Not,
    Or,
    Select,
    Sort,
    SortError,
    Store,
    Sub,
    Term,
    Var,
)
from .program import (
    ArrayAssign,
    Assert,
    Assign,
    Assume,
    Cut,
    Havoc,
    If,
    Program,
    Stmt,
    While,
)


class NplError(Exception):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col


KEYWORDS = {
    "var", "function", "axiom", "procedure", "requires", "ensures", "type",
    "if", "else", "while", "invariant", "havoc", "assume", "assert",
    "forall", "exists", "true", "false", "ite", "Int", "Bool",
}

_SYMBOLS = [
    "<==>", "==>", "::", ":=", "==", "!=", "<=", ">=", "&&", "||",
    "(", ")", "[", "]", "{", "}", ",", ";", ":", "<", ">", "!", "+", "-", "*", "?",
]


@dataclass
class Token:
    kind: str  # 'id', 'int', 'kw', 'sym', 'eof'
    text: str
    line: int
    col: int


def tokenize(src: str) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(src)
    while i < n:
        c = src[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if src.startswith("//", i):
            while i < n and src[i] != "\n":
                i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            toks.append(Token("int", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            text = src[i:j]
            toks.append(Token("kw" if text in KEYWORDS else "id", text, line, col))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if src.startswith(sym, i):
                toks.append(Token("sym", sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise NplError(f"unexpected character {c!r}", line, col)
    toks.append(Token("eof", "", line, col))
    return toks


class Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0
        self.vars: dict[str, Sort] = {}
        self.funcs: dict[str, FuncDecl] = {}
        self.sorts: dict[str, Sort] = {}
        self.scopes: list[dict[str, Sort]] = []
        self.holes_seen: dict[str, Token] = {}

    # -- token plumbing -----------------------------------------------------

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind in ("sym", "kw")

    def eat(self, text: str) -> Token:
        t = self.peek()
        if not self.at(text):
            raise NplError(f"expected {text!r}, found {t.text!r}", t.line, t.col)
        return self.next()

    def eat_id(self) -> Token:
        t = self.peek()
        if t.kind != "id":
            raise NplError(f"expected identifier, found {t.text!r}", t.line, t.col)
        return self.next()

    def error(self, msg: str) -> NplError:
        t = self.peek()
        return NplError(msg, t.line, t.col)

    # -- declarations -------------------------------------------------------

    def lookup_var(self, name: str, tok: Token) -> Sort:
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        if name in self.vars:
            return self.vars[name]
        raise NplError(f"undeclared variable {name!r}", tok.line, tok.col)

    def parse_sort(self) -> Sort:
        t = self.peek()
        if self.at("Int"):
            self.next()
            return INT
        if self.at("Bool"):
            self.next()
            return BOOL
        if self.at("["):
            self.next()
            self.eat("Int")
            self.eat("]")
            self.eat("Int")
            return ARRAY
        if t.kind == "id" and t.text in self.sorts:
            self.next()
            return self.sorts[t.text]
        raise NplError(f"expected a sort, found {t.text!r}", t.line, t.col)

    # -- terms --------------------------------------------------------------

    def parse_term(self) -> Term:
        left = self.parse_mul()
        while self.at("+") or self.at("-"):
            op = self.next().text
            t = self.peek()
            right = self.parse_mul()
            try:
                left = Add(left, right) if op == "+" else Sub(left, right)
            except SortError as e:
                raise NplError(str(e), t.line, t.col)
        return left

    def parse_mul(self) -> Term:
        t = self.peek()
        if t.kind == "int" and self.peek(1).text == "*":
            coeff = int(self.next().text)
            self.eat("*")
            pt = self.peek()
            term = self.parse_primary()
            try:
                return Mul(coeff, term)
            except SortError as e:
                raise NplError(str(e), pt.line, pt.col)
        if self.at("(") and self.peek(1).text == "-" and self.peek(2).kind == "int" \
                and self.peek(3).text == ")" and self.peek(4).text == "*":
            self.next(); self.next()
            coeff = -int(self.next().text)
            self.next()
            self.eat("*")
            return Mul(coeff, self.parse_primary())
        first = self.parse_primary()
        if self.at("*"):
            tok = self.peek()
            if isinstance(first, IntLit):
                self.next()
                return Mul(first.value, self.parse_primary())
            raise NplError("nonlinear multiplication: one factor must be a literal", tok.line, tok.col)
        return first

    def parse_primary(self) -> Term:
        t = self.peek()
        if t.kind == "int":
            self.next()
            return self._postfix(IntLit(int(t.text)))
        if self.at("-"):
            self.next()
            nxt = self.peek()
            if nxt.kind == "int":
                self.next()
                return self._postfix(IntLit(-int(nxt.text)))
            return Sub(IntLit(0), self.parse_primary())
        if self.at("true"):
            self.next()
            return BoolLitTerm(True)
        if self.at("false"):
            self.next()
            return BoolLitTerm(False)
        if self.at("ite"):
            self.next()
            self.eat("(")
            cond = self.parse_formula()
            self.eat(",")
            then = self.parse_term()
            self.eat(",")
            els = self.parse_term()
            close = self.peek()
            self.eat(")")
            try:
                return self._postfix(Ite(cond, then, els))
            except SortError as e:
                raise NplError(str(e), close.line, close.col)
        if self.at("("):
            self.next()
            inner = self.parse_term()
            self.eat(")")
            return self._postfix(inner)
        if t.kind == "id":
            self.next()
            if self.at("("):
                if t.text not in self.funcs:
                    raise NplError(f"undeclared function {t.text!r}", t.line, t.col)
                fd = self.funcs[t.text]
                self.next()
                args: list[Term] = []
                if not self.at(")"):
                    args.append(self.parse_term())
                    while self.at(","):
                        self.next()
                        args.append(self.parse_term())
                self.eat(")")
                try:
                    return self._postfix(Apply(fd, tuple(args)))
                except SortError as e:
                    raise NplError(str(e), t.line, t.col)
            return self._postfix(Var(t.text, self.lookup_var(t.text, t)))
        raise NplError(f"expected a term, found {t.text!r}", t.line, t.col)

    def _postfix(self, base: Term) -> Term:
        while self.at("["):
            open_tok = self.peek()
            self.next()
            idx = self.parse_term()
            if self.at(":="):
                self.next()
                val = self.parse_term()
                self.eat("]")
                try:
                    base = Store(base, idx, val)
                except SortError as e:
                    raise NplError(str(e), open_tok.line, open_tok.col)
            else:
                self.eat("]")
                try:
                    base = Select(base, idx)
                except SortError as e:
                    raise NplError(str(e), open_tok.line, open_tok.col)
        return base

    # -- formulas -----------------------------------------------------------

    def parse_formula(self) -> Formula:
        left = self.parse_implies()
        while self.at("<==>"):
            self.next()
            right = self.parse_implies()
            left = Iff(left, right)
        return left

    def parse_implies(self) -> Formula:
        left = self.parse_or()
        if self.at("==>"):
            self.next()
            right = self.parse_implies()
            return Implies(left, right)
        return left

    def parse_or(self) -> Formula:
        parts = [self.parse_and()]
        while self.at("||"):
            self.next()
            parts.append(self.parse_and())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def parse_and(self) -> Formula:
        parts = [self.parse_unary()]
        while self.at("&&"):
            self.next()
            parts.append(self.parse_unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def parse_unary(self) -> Formula:
        if self.at("!"):
            self.next()
            return Not(self.parse_unary())
        if self.at("forall") or self.at("exists"):
            kw = self.next().text
            binders: list[Var] = []
            while True:
                name = self.eat_id()
                self.eat(":")
                sort = self.parse_sort()
                binders.append(Var(name.text, sort))
                if self.at(","):
                    self.next()
                    continue
                break
            self.eat("::")
            self.scopes.append({v.name: v.sort for v in binders})
            try:
                body = self.parse_formula()
            finally:
                self.scopes.pop()
            cls = Forall if kw == "forall" else Exists
            return cls(tuple(binders), body)
        return self.parse_atom()

    def parse_atom(self) -> Formula:
        t = self.peek()
        if self.at("true"):
            self.next()
            return BoolLit(True)
        if self.at("false"):
            self.next()
            return BoolLit(False)
        if self.at("?"):
            self.next()
            hole = self.eat_id()
            return HoleRef(hole.text)
        # Either `term relop term`, a Bool-sorted term, or a parenthesized formula.
        save = self.pos
        try:
            left = self.parse_term()
        except NplError:
            self.pos = save
            self.eat("(")
            inner = self.parse_formula()
            self.eat(")")
            return inner
        for op in ("==", "!=", "<=", ">=", "<", ">"):
            if self.at(op):
                op_tok = self.next()
                right = self.parse_term()
                try:
                    return Cmp(op, left, right)
                except SortError as e:
                    raise NplError(str(e), op_tok.line, op_tok.col)
        if left.sort == BOOL:
            return BoolAtom(left)
        raise NplError(f"expected a comparison or Bool term, found sort {left.sort}", t.line, t.col)

    # -- statements ---------------------------------------------------------

    def parse_block(self) -> tuple[Stmt, ...]:
        self.eat("{")
        stmts: list[Stmt] = []
        while not self.at("}"):
            stmts.append(self.parse_stmt())
        self.eat("}")
        return tuple(stmts)

    def parse_stmt(self) -> Stmt:
        t = self.peek()
        if self.at("havoc"):
            self.next()
            name = self.eat_id()
            self.lookup_var(name.text, name)
            self.eat(";")
            return Havoc(name.text)
        if self.at("assume"):
            self.next()
            f = self.parse_formula()
            self.eat(";")
            return Assume(f)
        if self.at("assert"):
            self.next()
            f = self.parse_formula()
            self.eat(";")
            return Assert(f)
        if self.at("invariant"):
            self.next()
            self.eat("?")
            hole = self.eat_id()
            self._register_hole(hole)
            self.eat(";")
            return Cut(hole.text)
        if self.at("if"):
            self.next()
            self.eat("(")
            cond = self.parse_formula()
            self.eat(")")
            then = self.parse_block()
            els: tuple[Stmt, ...] = ()
            if self.at("else"):
                self.next()
                els = self.parse_block()
            return If(cond, then, els)
        if self.at("while"):
            self.next()
            self.eat("(")
            cond = self.parse_formula()
            self.eat(")")
            self.eat("invariant")
            self.eat("?")
            hole = self.eat_id()
            self._register_hole(hole)
            self.eat(";")
            body = self.parse_block()
            return While(cond, hole.text, body)
        if t.kind == "id":
            name = self.eat_id()
            sort = self.lookup_var(name.text, name)
            if self.at("["):
                if sort != ARRAY:
                    raise NplError(f"{name.text!r} is not an array", name.line, name.col)
                self.next()
                idx = self.parse_term()
                if idx.sort != INT:
                    raise NplError("array index must be Int", name.line, name.col)
                self.eat("]")
                self.eat(":=")
                val = self.parse_term()
                if val.sort != INT:
                    raise NplError("array element must be Int", name.line, name.col)
                self.eat(";")
                return ArrayAssign(name.text, idx, val)
            self.eat(":=")
            expr = self.parse_term()
            if expr.sort != sort:
                raise NplError(
                    f"cannot assign {expr.sort} to {name.text!r}: {sort}", name.line, name.col
                )
            self.eat(";")
            return Assign(name.text, expr)
        raise NplError(f"expected a statement, found {t.text!r}", t.line, t.col)

    def _register_hole(self, tok: Token) -> None:
        if tok.text in self.holes_seen:
            raise NplError(f"duplicate hole id {tok.text!r}", tok.line, tok.col)
        self.holes_seen[tok.text] = tok

    # -- top level ----------------------------------------------------------

    def parse_program(self) -> Program:
        axioms: list[Formula] = []
        name = "main"
        requires: list[Formula] = []
        ensures: list[Formula] = []
        body: tuple[Stmt, ...] = ()
        saw_proc = False
        while not self.peek().kind == "eof":
            if self.at("type"):
                self.next()
                n = self.eat_id()
                self.sorts[n.text] = Sort(n.text)
                self.eat(";")
            elif self.at("var"):
                self.next()
                n = self.eat_id()
                if n.text in self.vars:
                    raise NplError(f"duplicate variable {n.text!r}", n.line, n.col)
                self.eat(":")
                self.vars[n.text] = self.parse_sort()
                self.eat(";")
            elif self.at("function"):
                self.next()
                n = self.eat_id()
                self.eat("(")
                arg_sorts: list[Sort] = []
                if not self.at(")"):
                    arg_sorts.append(self.parse_sort())
                    while self.at(","):
                        self.next()
                        arg_sorts.append(self.parse_sort())
                self.eat(")")
                self.eat(":")
                result = self.parse_sort()
                self.funcs[n.text] = FuncDecl(n.text, tuple(arg_sorts), result)
                self.eat(";")
            elif self.at("axiom"):
                self.next()
                axioms.append(self.parse_formula())
                self.eat(";")
            elif self.at("procedure"):
                if saw_proc:
                    raise self.error("only one procedure per file")
                saw_proc = True
                self.next()
                name = self.eat_id().text
                self.eat("(")
                self.eat(")")
                while self.at("requires") or self.at("ensures"):
                    kw = self.next().text
                    f = self.parse_formula()
                    self.eat(";")
                    (requires if kw == "requires" else ensures).append(f)
                body = self.parse_block()
            else:
                raise self.error(f"expected a declaration, found {self.peek().text!r}")
        if not saw_proc:
            raise self.error("no procedure found")
        return Program(
            name=name,
            vars=dict(self.vars),
            funcs=dict(self.funcs),
            sorts=dict(self.sorts),
            axioms=axioms,
            requires=requires,
            ensures=ensures,
            body=body,
        )


_PRAGMA_RE = re.compile(r"^\s*//\s*(depth|flags|oracle|predicates)\s*:\s*(.*?)\s*$")


def parse_program(text: str) -> Program:
    """Parse an .npl file, including pragma comments."""
    pragmas: list[tuple[str, str]] = []
    for line in text.splitlines():
        m = _PRAGMA_RE.match(line)
        if m:
            pragmas.append((m.group(1), m.group(2)))
    p = Parser(tokenize(text))
    program = p.parse_program()
    for key, value in pragmas:
        if key == "depth":
            program.depth = int(value)
        elif key == "flags":
            program.flags |= {f.strip() for f in value.split(",") if f.strip()}
        elif key in ("oracle", "predicates"):
            hole, _, rest = value.partition(":")
            hole = hole.strip()
            forms = [
                parse_formula_text(part.strip(), program)
                for part in rest.split(";")
                if part.strip()
            ]
            target = program.oracle if key == "oracle" else program.pinned_predicates
            target[hole] = forms
    return program


def parse_formula_text(text: str, program: Program) -> Formula:
    """Parse a bare formula against a program's declarations."""
    p = Parser(tokenize(text))
    p.vars = dict(program.vars)
    p.funcs = dict(program.funcs)
    p.sorts = dict(program.sorts)
    f = p.parse_formula()
    tail = p.peek()
    if tail.kind != "eof":
        raise NplError(f"trailing input {tail.text!r}", tail.line, tail.col)
    return f
