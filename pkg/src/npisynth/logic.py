"""First-order terms and formulas.

The term language is linear integer arithmetic with uninterpreted
functions and Int-indexed Int arrays; formulas add comparisons, the
boolean connectives, quantifiers over sorted variables, and invariant
holes (``HoleRef``) that the synthesis driver later substitutes.

All nodes are frozen dataclasses with structural equality, so terms and
formulas can live in sets and dicts (the instantiation pool relies on
this).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Mapping


class SortError(Exception):
    """An ill-sorted term or formula was constructed or parsed."""


# ---------------------------------------------------------------------------
# Sorts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Sort:
    name: str

    def __str__(self) -> str:
        return self.name


INT = Sort("Int")
BOOL = Sort("Bool")
ARRAY = Sort("[Int]Int")  # index and element sorts fixed to Int


def uninterpreted_sort(name: str) -> Sort:
    return Sort(name)


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FuncDecl:
    name: str
    arg_sorts: tuple[Sort, ...]
    result: Sort


class Term:
    """Base class; subclasses define ``sort``."""

    sort: Sort

    def __str__(self) -> str:
        from .printer import term_to_str

        return term_to_str(self)


@dataclass(frozen=True, repr=False)
class Var(Term):
    name: str
    sort: Sort

    def __repr__(self) -> str:
        return f"Var({self.name}:{self.sort})"


@dataclass(frozen=True, repr=False)
class IntLit(Term):
    value: int
    sort: Sort = field(default=INT, init=False)

    def __repr__(self) -> str:
        return f"IntLit({self.value})"


@dataclass(frozen=True, repr=False)
class BoolLitTerm(Term):
    """``true``/``false`` in term position (argument of a Bool function)."""

    value: bool
    sort: Sort = field(default=BOOL, init=False)

    def __repr__(self) -> str:
        return f"BoolLitTerm({self.value})"


@dataclass(frozen=True, repr=False)
class Add(Term):
    left: Term
    right: Term
    sort: Sort = field(default=INT, init=False)

    def __post_init__(self) -> None:
        _require(self.left, INT)
        _require(self.right, INT)


@dataclass(frozen=True, repr=False)
class Sub(Term):
    left: Term
    right: Term
    sort: Sort = field(default=INT, init=False)

    def __post_init__(self) -> None:
        _require(self.left, INT)
        _require(self.right, INT)


@dataclass(frozen=True, repr=False)
class Mul(Term):
    """Constant multiple; the only multiplication the language admits."""

    coeff: int
    term: Term
    sort: Sort = field(default=INT, init=False)

    def __post_init__(self) -> None:
        _require(self.term, INT)


@dataclass(frozen=True, repr=False)
class Apply(Term):
    func: FuncDecl
    args: tuple[Term, ...]

    def __post_init__(self) -> None:
        if len(self.args) != len(self.func.arg_sorts):
            raise SortError(
                f"{self.func.name} expects {len(self.func.arg_sorts)} args, got {len(self.args)}"
            )
        for a, s in zip(self.args, self.func.arg_sorts):
            _require(a, s)

    @property
    def sort(self) -> Sort:  # type: ignore[override]
        return self.func.result


@dataclass(frozen=True, repr=False)
class Select(Term):
    array: Term
    index: Term
    sort: Sort = field(default=INT, init=False)

    def __post_init__(self) -> None:
        _require(self.array, ARRAY)
        _require(self.index, INT)


@dataclass(frozen=True, repr=False)
class Store(Term):
    array: Term
    index: Term
    value: Term
    sort: Sort = field(default=ARRAY, init=False)

    def __post_init__(self) -> None:
        _require(self.array, ARRAY)
        _require(self.index, INT)
        _require(self.value, INT)


@dataclass(frozen=True, repr=False)
class Ite(Term):
    cond: "Formula"
    then: Term
    els: Term

    def __post_init__(self) -> None:
        if self.then.sort != self.els.sort:
            raise SortError(f"ite branches disagree: {self.then.sort} vs {self.els.sort}")

    @property
    def sort(self) -> Sort:  # type: ignore[override]
        return self.then.sort


def _require(t: Term, s: Sort) -> None:
    if t.sort != s:
        raise SortError(f"expected {s}, got {t.sort} in {t!r}")


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------

CMP_OPS = ("==", "!=", "<", "<=", ">", ">=")


class Formula:
    def __str__(self) -> str:
        from .printer import formula_to_str

        return formula_to_str(self)


@dataclass(frozen=True, repr=False)
class BoolLit(Formula):
    value: bool


TRUE = BoolLit(True)
FALSE = BoolLit(False)


@dataclass(frozen=True, repr=False)
class Cmp(Formula):
    op: str
    left: Term
    right: Term

    def __post_init__(self) -> None:
        if self.op not in CMP_OPS:
            raise ValueError(f"bad comparison operator {self.op}")
        _require(self.left, INT)
        _require(self.right, INT)


@dataclass(frozen=True, repr=False)
class BoolAtom(Formula):
    """A Bool-sorted term (variable or function application) in formula position."""

    term: Term

    def __post_init__(self) -> None:
        _require(self.term, BOOL)


@dataclass(frozen=True, repr=False)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True, repr=False)
class And(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True, repr=False)
class Or(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Forall(Formula):
    vars: tuple[Var, ...]
    body: Formula


@dataclass(frozen=True, repr=False)
class Exists(Formula):
    vars: tuple[Var, ...]
    body: Formula


@dataclass(frozen=True, repr=False)
class HoleRef(Formula):
    hole: str


def conj(parts: list[Formula] | tuple[Formula, ...]) -> Formula:
    parts = [p for p in parts if p != TRUE]
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return And(tuple(parts))


def disj(parts: list[Formula] | tuple[Formula, ...]) -> Formula:
    parts = [p for p in parts if p != FALSE]
    if not parts:
        return FALSE
    if len(parts) == 1:
        return parts[0]
    return Or(tuple(parts))


# ---------------------------------------------------------------------------
# Traversals
# ---------------------------------------------------------------------------

def term_children(t: Term) -> tuple:
    if isinstance(t, (Var, IntLit, BoolLitTerm)):
        return ()
    if isinstance(t, (Add, Sub)):
        return (t.left, t.right)
    if isinstance(t, Mul):
        return (t.term,)
    if isinstance(t, Apply):
        return t.args
    if isinstance(t, Select):
        return (t.array, t.index)
    if isinstance(t, Store):
        return (t.array, t.index, t.value)
    if isinstance(t, Ite):
        return (t.cond, t.then, t.els)
    raise TypeError(f"unknown term {t!r}")


def subterms(t: Term) -> Iterator[Term]:
    yield t
    for c in term_children(t):
        if isinstance(c, Term):
            yield from subterms(c)
        else:
            yield from formula_terms(c)


def formula_terms(f: Formula) -> Iterator[Term]:
    """All terms appearing in f, including under quantifiers."""
    if isinstance(f, Cmp):
        yield from subterms(f.left)
        yield from subterms(f.right)
    elif isinstance(f, BoolAtom):
        yield from subterms(f.term)
    elif isinstance(f, Not):
        yield from formula_terms(f.arg)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from formula_terms(a)
    elif isinstance(f, (Implies, Iff)):
        yield from formula_terms(f.left)
        yield from formula_terms(f.right)
    elif isinstance(f, (Forall, Exists)):
        yield from formula_terms(f.body)
    elif isinstance(f, (BoolLit, HoleRef)):
        return
    else:
        raise TypeError(f"unknown formula {f!r}")


def free_vars(f: Formula | Term, bound: frozenset[str] = frozenset()) -> set[Var]:
    out: set[Var] = set()
    if isinstance(f, Term):
        if isinstance(f, Var):
            if f.name not in bound:
                out.add(f)
        elif isinstance(f, Ite):
            out |= free_vars(f.cond, bound)
            out |= free_vars(f.then, bound)
            out |= free_vars(f.els, bound)
        else:
            for c in term_children(f):
                out |= free_vars(c, bound)
        return out
    if isinstance(f, (Forall, Exists)):
        inner = bound | {v.name for v in f.vars}
        return free_vars(f.body, inner)
    if isinstance(f, Cmp):
        return free_vars(f.left, bound) | free_vars(f.right, bound)
    if isinstance(f, BoolAtom):
        return free_vars(f.term, bound)
    if isinstance(f, Not):
        return free_vars(f.arg, bound)
    if isinstance(f, (And, Or)):
        for a in f.args:
            out |= free_vars(a, bound)
        return out
    if isinstance(f, (Implies, Iff)):
        return free_vars(f.left, bound) | free_vars(f.right, bound)
    if isinstance(f, (BoolLit, HoleRef)):
        return out
    raise TypeError(f"unknown formula {f!r}")


def holes_of(f: Formula) -> set[str]:
    if isinstance(f, HoleRef):
        return {f.hole}
    if isinstance(f, Not):
        return holes_of(f.arg)
    if isinstance(f, (And, Or)):
        out: set[str] = set()
        for a in f.args:
            out |= holes_of(a)
        return out
    if isinstance(f, (Implies, Iff)):
        return holes_of(f.left) | holes_of(f.right)
    if isinstance(f, (Forall, Exists)):
        return holes_of(f.body)
    return set()


def functions_of(f: Formula | Term) -> set[FuncDecl]:
    out: set[FuncDecl] = set()
    it = formula_terms(f) if isinstance(f, Formula) else subterms(f)
    for t in it:
        if isinstance(t, Apply):
            out.add(t.func)
    return out


# ---------------------------------------------------------------------------
# Substitution (capture-avoiding)
# ---------------------------------------------------------------------------

def subst_term(t: Term, mapping: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, (IntLit, BoolLitTerm)):
        return t
    if isinstance(t, Add):
        return Add(subst_term(t.left, mapping), subst_term(t.right, mapping))
    if isinstance(t, Sub):
        return Sub(subst_term(t.left, mapping), subst_term(t.right, mapping))
    if isinstance(t, Mul):
        return Mul(t.coeff, subst_term(t.term, mapping))
    if isinstance(t, Apply):
        return Apply(t.func, tuple(subst_term(a, mapping) for a in t.args))
    if isinstance(t, Select):
        return Select(subst_term(t.array, mapping), subst_term(t.index, mapping))
    if isinstance(t, Store):
        return Store(
            subst_term(t.array, mapping),
            subst_term(t.index, mapping),
            subst_term(t.value, mapping),
        )
    if isinstance(t, Ite):
        return Ite(subst(t.cond, mapping), subst_term(t.then, mapping), subst_term(t.els, mapping))
    raise TypeError(f"unknown term {t!r}")


_rename_counter = 0


def _fresh_name(base: str) -> str:
    global _rename_counter
    _rename_counter += 1
    return f"{base}!r{_rename_counter}"


def subst(f: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Substitute free variables by terms, renaming binders on capture."""
    if isinstance(f, (BoolLit, HoleRef)):
        return f
    if isinstance(f, Cmp):
        return Cmp(f.op, subst_term(f.left, mapping), subst_term(f.right, mapping))
    if isinstance(f, BoolAtom):
        return BoolAtom(subst_term(f.term, mapping))
    if isinstance(f, Not):
        return Not(subst(f.arg, mapping))
    if isinstance(f, And):
        return And(tuple(subst(a, mapping) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(subst(a, mapping) for a in f.args))
    if isinstance(f, Implies):
        return Implies(subst(f.left, mapping), subst(f.right, mapping))
    if isinstance(f, Iff):
        return Iff(subst(f.left, mapping), subst(f.right, mapping))
    if isinstance(f, (Forall, Exists)):
        live = {n: t for n, t in mapping.items() if n not in {v.name for v in f.vars}}
        if not live:
            return f
        replaced_frees = set()
        for t in live.values():
            replaced_frees |= {v.name for v in free_vars(t)}
        new_vars = []
        renames: dict[str, Term] = {}
        for v in f.vars:
            if v.name in replaced_frees:
                nv = Var(_fresh_name(v.name), v.sort)
                renames[v.name] = nv
                new_vars.append(nv)
            else:
                new_vars.append(v)
        body = subst(f.body, renames) if renames else f.body
        body = subst(body, live)
        cls = Forall if isinstance(f, Forall) else Exists
        return cls(tuple(new_vars), body)
    raise TypeError(f"unknown formula {f!r}")


def rename_bound(f: Formula, prefix: str) -> Formula:
    """Rename every quantified variable to ``<prefix>!<n>``, n in traversal order.

    Gives predicate bodies canonical, globally unique binder names so the
    skolem constants arising from a hole substitution are reproducible.
    """
    counter = [0]

    def go(g: Formula) -> Formula:
        if isinstance(g, (BoolLit, HoleRef, Cmp, BoolAtom)):
            return g
        if isinstance(g, Not):
            return Not(go(g.arg))
        if isinstance(g, And):
            return And(tuple(go(a) for a in g.args))
        if isinstance(g, Or):
            return Or(tuple(go(a) for a in g.args))
        if isinstance(g, Implies):
            return Implies(go(g.left), go(g.right))
        if isinstance(g, Iff):
            return Iff(go(g.left), go(g.right))
        if isinstance(g, (Forall, Exists)):
            renames: dict[str, Term] = {}
            new_vars = []
            for v in g.vars:
                nv = Var(f"{prefix}!{counter[0]}", v.sort)
                counter[0] += 1
                renames[v.name] = nv
                new_vars.append(nv)
            body = go(subst(g.body, renames))
            cls = Forall if isinstance(g, Forall) else Exists
            return cls(tuple(new_vars), body)
        raise TypeError(f"unknown formula {g!r}")

    return go(f)


# ---------------------------------------------------------------------------
# Negation normal form
# ---------------------------------------------------------------------------

_NEG_CMP = {"==": "!=", "!=": "==", "<": ">=", "<=": ">", ">": "<=", ">=": "<"}


def nnf(f: Formula) -> Formula:
    """Push negations to atoms, eliminating => and <=>. No HoleRefs allowed."""
    return _nnf(f, positive=True)


def _nnf(f: Formula, positive: bool) -> Formula:
    if isinstance(f, HoleRef):
        raise ValueError("nnf applied to a formula with unsubstituted holes")
    if isinstance(f, BoolLit):
        return f if positive else BoolLit(not f.value)
    if isinstance(f, Cmp):
        return f if positive else Cmp(_NEG_CMP[f.op], f.left, f.right)
    if isinstance(f, BoolAtom):
        return f if positive else Not(f)
    if isinstance(f, Not):
        return _nnf(f.arg, not positive)
    if isinstance(f, And):
        parts = tuple(_nnf(a, positive) for a in f.args)
        return And(parts) if positive else Or(parts)
    if isinstance(f, Or):
        parts = tuple(_nnf(a, positive) for a in f.args)
        return Or(parts) if positive else And(parts)
    if isinstance(f, Implies):
        if positive:
            return Or((_nnf(f.left, False), _nnf(f.right, True)))
        return And((_nnf(f.left, True), _nnf(f.right, False)))
    if isinstance(f, Iff):
        # a <=> b becomes (a' and b') or (~a' and ~b'); dual under negation
        a_pos, a_neg = _nnf(f.left, True), _nnf(f.left, False)
        b_pos, b_neg = _nnf(f.right, True), _nnf(f.right, False)
        if positive:
            return Or((And((a_pos, b_pos)), And((a_neg, b_neg))))
        return Or((And((a_pos, b_neg)), And((a_neg, b_pos))))
    if isinstance(f, Forall):
        body = _nnf(f.body, positive)
        return Forall(f.vars, body) if positive else Exists(f.vars, body)
    if isinstance(f, Exists):
        body = _nnf(f.body, positive)
        return Exists(f.vars, body) if positive else Forall(f.vars, body)
    raise TypeError(f"unknown formula {f!r}")


# ---------------------------------------------------------------------------
# Predicates and hole substitution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Predicate:
    """One building block of an invariant: an identity plus a closed body."""

    hole: str
    index: int
    body: Formula

    def canonical_body(self) -> Formula:
        """Body with binders renamed to the q!<hole>!<index>!<n> namespace."""
        return rename_bound(self.body, f"q!{self.hole}!{self.index}")


def substitute_holes(
    f: Formula,
    candidate: Mapping[str, frozenset[int]],
    predicates: Mapping[str, list[Predicate]],
) -> Formula:
    """Replace each HoleRef(h) by the conjunction of candidate(h)'s bodies.

    The empty conjunction is the literal ``true``. Bodies are inserted with
    canonical binder names so downstream skolemization is reproducible.
    """

    def build(hole: str) -> Formula:
        if hole not in candidate:
            raise KeyError(f"unbound hole {hole}")
        univ = predicates[hole]
        atoms = sorted(candidate[hole])
        return conj([univ[i].canonical_body() for i in atoms])

    return substitute_holes_formula(f, build)


def substitute_holes_formula(f: Formula, build) -> Formula:
    """Generalized hole substitution; ``build(hole)`` supplies the formula."""
    if isinstance(f, HoleRef):
        return build(f.hole)
    if isinstance(f, (BoolLit, Cmp, BoolAtom)):
        return f
    if isinstance(f, Not):
        return Not(substitute_holes_formula(f.arg, build))
    if isinstance(f, And):
        return And(tuple(substitute_holes_formula(a, build) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(substitute_holes_formula(a, build) for a in f.args))
    if isinstance(f, Implies):
        return Implies(
            substitute_holes_formula(f.left, build), substitute_holes_formula(f.right, build)
        )
    if isinstance(f, Iff):
        return Iff(
            substitute_holes_formula(f.left, build), substitute_holes_formula(f.right, build)
        )
    if isinstance(f, Forall):
        return Forall(f.vars, substitute_holes_formula(f.body, build))
    if isinstance(f, Exists):
        return Exists(f.vars, substitute_holes_formula(f.body, build))
    raise TypeError(f"unknown formula {f!r}")
