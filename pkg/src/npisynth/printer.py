"""Surface-syntax rendering of terms, formulas, statements, and programs.

Printing is precedence-aware and quantifiers are always parenthesized, so
re-parsing printed text yields a structurally identical AST.
"""

from __future__ import annotations

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
    Store,
    Sub,
    Term,
    Var,
)
from . import program as prog


def sort_to_str(s: Sort) -> str:
    return s.name


# term precedences: additive 1, multiplicative 2, primary 9

def term_to_str(t: Term, prec: int = 0) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, IntLit):
        s = str(t.value)
        return s if t.value >= 0 or prec <= 2 else f"({s})"
    if isinstance(t, BoolLitTerm):
        return "true" if t.value else "false"
    if isinstance(t, Add):
        s = f"{term_to_str(t.left, 1)} + {term_to_str(t.right, 2)}"
        return s if prec <= 1 else f"({s})"
    if isinstance(t, Sub):
        s = f"{term_to_str(t.left, 1)} - {term_to_str(t.right, 2)}"
        return s if prec <= 1 else f"({s})"
    if isinstance(t, Mul):
        s = f"{t.coeff} * {term_to_str(t.term, 3)}" if t.coeff >= 0 else f"({t.coeff}) * {term_to_str(t.term, 3)}"
        return s if prec <= 2 else f"({s})"
    if isinstance(t, Apply):
        args = ", ".join(term_to_str(a, 0) for a in t.args)
        return f"{t.func.name}({args})"
    if isinstance(t, Select):
        return f"{term_to_str(t.array, 9)}[{term_to_str(t.index, 0)}]"
    if isinstance(t, Store):
        return f"{term_to_str(t.array, 9)}[{term_to_str(t.index, 0)} := {term_to_str(t.value, 0)}]"
    if isinstance(t, Ite):
        return f"ite({formula_to_str(t.cond, 0)}, {term_to_str(t.then, 0)}, {term_to_str(t.els, 0)})"
    raise TypeError(f"unknown term {t!r}")


# formula precedences: iff 1, implies 2, or 3, and 4, not 5, cmp 7, atoms 9

def formula_to_str(f: Formula, prec: int = 0) -> str:
    if isinstance(f, BoolLit):
        return "true" if f.value else "false"
    if isinstance(f, HoleRef):
        return f"?{f.hole}"
    if isinstance(f, BoolAtom):
        return term_to_str(f.term, 9)
    if isinstance(f, Cmp):
        s = f"{term_to_str(f.left, 0)} {f.op} {term_to_str(f.right, 0)}"
        return s if prec <= 7 else f"({s})"
    if isinstance(f, Not):
        return f"!{formula_to_str(f.arg, 8)}"
    if isinstance(f, And):
        s = " && ".join(formula_to_str(a, 5) for a in f.args)
        return s if prec <= 4 else f"({s})"
    if isinstance(f, Or):
        s = " || ".join(formula_to_str(a, 4) for a in f.args)
        return s if prec <= 3 else f"({s})"
    if isinstance(f, Implies):
        s = f"{formula_to_str(f.left, 3)} ==> {formula_to_str(f.right, 2)}"
        return s if prec <= 2 else f"({s})"
    if isinstance(f, Iff):
        s = f"{formula_to_str(f.left, 1)} <==> {formula_to_str(f.right, 2)}"
        return s if prec <= 1 else f"({s})"
    if isinstance(f, (Forall, Exists)):
        kw = "forall" if isinstance(f, Forall) else "exists"
        binders = ", ".join(f"{v.name}:{sort_to_str(v.sort)}" for v in f.vars)
        return f"({kw} {binders} :: {formula_to_str(f.body, 0)})"
    raise TypeError(f"unknown formula {f!r}")


def stmt_to_str(s: prog.Stmt, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(s, prog.Assign):
        return f"{pad}{s.name} := {term_to_str(s.expr, 0)};"
    if isinstance(s, prog.ArrayAssign):
        return f"{pad}{s.name}[{term_to_str(s.index, 0)}] := {term_to_str(s.value, 0)};"
    if isinstance(s, prog.Havoc):
        return f"{pad}havoc {s.name};"
    if isinstance(s, prog.Assume):
        return f"{pad}assume {formula_to_str(s.formula, 0)};"
    if isinstance(s, prog.Assert):
        return f"{pad}assert {formula_to_str(s.formula, 0)};"
    if isinstance(s, prog.Cut):
        return f"{pad}invariant ?{s.hole};"
    if isinstance(s, prog.If):
        lines = [f"{pad}if ({formula_to_str(s.cond, 0)}) {{"]
        lines += [stmt_to_str(b, indent + 1) for b in s.then]
        if s.els:
            lines.append(f"{pad}}} else {{")
            lines += [stmt_to_str(b, indent + 1) for b in s.els]
        lines.append(f"{pad}}}")
        return "\n".join(lines)
    if isinstance(s, prog.While):
        lines = [f"{pad}while ({formula_to_str(s.cond, 0)}) invariant ?{s.hole}; {{"]
        lines += [stmt_to_str(b, indent + 1) for b in s.body]
        lines.append(f"{pad}}}")
        return "\n".join(lines)
    raise TypeError(f"unknown statement {s!r}")


def program_to_str(p: prog.Program) -> str:
    lines: list[str] = []
    for name in p.sorts:
        lines.append(f"type {name};")
    for name, sort in p.vars.items():
        lines.append(f"var {name}: {sort_to_str(sort)};")
    for fd in p.funcs.values():
        args = ", ".join(sort_to_str(s) for s in fd.arg_sorts)
        lines.append(f"function {fd.name}({args}): {sort_to_str(fd.result)};")
    for ax in p.axioms:
        lines.append(f"axiom {formula_to_str(ax, 0)};")
    lines.append(f"procedure {p.name}()")
    for r in p.requires:
        lines.append(f"  requires {formula_to_str(r, 0)};")
    for e in p.ensures:
        lines.append(f"  ensures {formula_to_str(e, 0)};")
    lines.append("{")
    for s in p.body:
        lines.append(stmt_to_str(s, 1))
    lines.append("}")
    return "\n".join(lines) + "\n"
