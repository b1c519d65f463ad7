"""Imperative program AST: one annotated procedure over global declarations."""

from __future__ import annotations

from dataclasses import dataclass, field

from .logic import ARRAY, BOOL, INT, Formula, FuncDecl, Sort


class Stmt:
    pass


@dataclass(frozen=True)
class Assign(Stmt):
    name: str
    expr: object  # Term


@dataclass(frozen=True)
class ArrayAssign(Stmt):
    name: str
    index: object  # Term
    value: object  # Term


@dataclass(frozen=True)
class Havoc(Stmt):
    name: str


@dataclass(frozen=True)
class Assume(Stmt):
    formula: Formula


@dataclass(frozen=True)
class Assert(Stmt):
    formula: Formula


@dataclass(frozen=True)
class If(Stmt):
    cond: Formula
    then: tuple[Stmt, ...]
    els: tuple[Stmt, ...]


@dataclass(frozen=True)
class While(Stmt):
    cond: Formula
    hole: str
    body: tuple[Stmt, ...]


@dataclass(frozen=True)
class Cut(Stmt):
    """A standalone annotation hole (``invariant ?H;``), e.g. at a return site."""

    hole: str


@dataclass
class Program:
    name: str
    vars: dict[str, Sort]
    funcs: dict[str, FuncDecl]
    sorts: dict[str, Sort]
    axioms: list[Formula]
    requires: list[Formula]
    ensures: list[Formula]
    body: tuple[Stmt, ...]
    # pragmas from // comments
    depth: int | None = None
    oracle: dict[str, list[Formula]] = field(default_factory=dict)
    pinned_predicates: dict[str, list[Formula]] = field(default_factory=dict)
    flags: set[str] = field(default_factory=set)

    def hole_ids(self) -> list[str]:
        out: list[str] = []

        def walk(stmts: tuple[Stmt, ...]) -> None:
            for s in stmts:
                if isinstance(s, While):
                    out.append(s.hole)
                    walk(s.body)
                elif isinstance(s, Cut):
                    out.append(s.hole)
                elif isinstance(s, If):
                    walk(s.then)
                    walk(s.els)

        walk(self.body)
        return out

    def int_literals(self) -> set[int]:
        """Integer constants mentioned anywhere in the program text."""
        from .logic import IntLit, formula_terms

        lits: set[int] = set()

        def from_formula(f: Formula) -> None:
            for t in formula_terms(f):
                if isinstance(t, IntLit):
                    lits.add(t.value)

        def from_term(t) -> None:
            from .logic import subterms

            for s in subterms(t):
                if isinstance(s, IntLit):
                    lits.add(s.value)

        for f in self.axioms + self.requires + self.ensures:
            from_formula(f)

        def walk(stmts: tuple[Stmt, ...]) -> None:
            for s in stmts:
                if isinstance(s, Assign):
                    from_term(s.expr)
                elif isinstance(s, ArrayAssign):
                    from_term(s.index)
                    from_term(s.value)
                elif isinstance(s, (Assume, Assert)):
                    from_formula(s.formula)
                elif isinstance(s, If):
                    from_formula(s.cond)
                    walk(s.then)
                    walk(s.els)
                elif isinstance(s, While):
                    from_formula(s.cond)
                    walk(s.body)

        walk(self.body)
        return lits
