"""Hoare-triple decomposition and verification conditions.

``cut_loops`` slices an annotated program at loop heads and standalone
cuts: each loop contributes an entry triple, a preservation triple, and
its exit flows into the next cut point or the postcondition.  Program
axioms are conjoined into every triple's precondition so the resulting
VC is self-contained.

``vc_of`` builds ``pre => wp(body, post)`` after hole substitution and
records variable snapshots: the pre-state is the program variables
themselves; the post-state is a symbolic store per path through the
(loop-free) body, with havocked variables becoming the same fresh
constants that skolemization later introduces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .logic import (
    ARRAY,
    Forall,
    Formula,
    HoleRef,
    Implies,
    Not,
    Predicate,
    Sort,
    Store,
    Term,
    Var,
    conj,
    holes_of,
    subst,
    subst_term,
    substitute_holes,
    substitute_holes_formula,
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

PRE_TO_INV = "PreToInv"
INV_TO_POST = "InvToPost"
INV_TO_INV = "InvToInv"
PLAIN = "Plain"


class VcgenError(Exception):
    pass


@dataclass(frozen=True)
class NamedHavoc(Stmt):
    """Havoc with its quantifier name fixed, so wp and the symbolic store agree."""

    name: str
    fresh: str
    sort: Sort


def _name_havocs(stmts: tuple[Stmt, ...], vars: Mapping[str, Sort], counter: list[int]) -> tuple[Stmt, ...]:
    out: list[Stmt] = []
    for s in stmts:
        if isinstance(s, Havoc):
            fresh = f"hv!{s.name}!{counter[0]}"
            counter[0] += 1
            out.append(NamedHavoc(s.name, fresh, vars[s.name]))
        elif isinstance(s, If):
            out.append(
                If(s.cond, _name_havocs(s.then, vars, counter), _name_havocs(s.els, vars, counter))
            )
        else:
            out.append(s)
    return tuple(out)


@dataclass(frozen=True)
class HoareTriple:
    index: int
    pre: Formula
    body: tuple[Stmt, ...]
    post: Formula
    kind: str
    pre_hole: str | None
    post_hole: str | None

    def label(self) -> str:
        return f"t{self.index}:{self.kind}"


def _classify(pre: Formula, post: Formula) -> tuple[str, str | None, str | None]:
    pre_holes = sorted(holes_of(pre))
    post_holes = sorted(holes_of(post))
    if len(pre_holes) > 1 or len(post_holes) > 1:
        raise VcgenError(f"multiple holes on one side: {pre_holes} / {post_holes}")
    ph = pre_holes[0] if pre_holes else None
    qh = post_holes[0] if post_holes else None
    if ph and qh:
        return INV_TO_INV, ph, qh
    if qh:
        return PRE_TO_INV, None, qh
    if ph:
        return INV_TO_POST, ph, None
    return PLAIN, None, None


def _contains_loop(stmts: tuple[Stmt, ...]) -> bool:
    for s in stmts:
        if isinstance(s, (While, Cut)):
            return True
        if isinstance(s, If) and (_contains_loop(s.then) or _contains_loop(s.els)):
            return True
    return False


def cut_loops(p: Program) -> list[HoareTriple]:
    axioms = list(p.axioms)
    triples: list[HoareTriple] = []
    havoc_counter = [0]

    def emit(pre: Formula, body: tuple[Stmt, ...], post: Formula) -> None:
        full_pre = conj(axioms + [pre])
        kind, ph, qh = _classify(full_pre, post)
        body = _name_havocs(body, p.vars, havoc_counter)
        triples.append(HoareTriple(len(triples), full_pre, body, post, kind, ph, qh))

    def process(stmts: tuple[Stmt, ...], entry: Formula, exit_post: Formula) -> None:
        prefix: list[Stmt] = []
        current = entry
        for s in stmts:
            if isinstance(s, While):
                emit(current, tuple(prefix), HoleRef(s.hole))
                prefix = []
                process(s.body, conj([HoleRef(s.hole), s.cond]), HoleRef(s.hole))
                current = conj([HoleRef(s.hole), Not(s.cond)])
            elif isinstance(s, Cut):
                emit(current, tuple(prefix), HoleRef(s.hole))
                prefix = []
                current = HoleRef(s.hole)
            else:
                if isinstance(s, If) and _contains_loop((s,)):
                    raise VcgenError("loops inside if branches are not supported")
                prefix.append(s)
        emit(current, tuple(prefix), exit_post)

    process(p.body, conj(list(p.requires)), conj(list(p.ensures)))
    return triples


# ---------------------------------------------------------------------------
# Weakest preconditions
# ---------------------------------------------------------------------------

def wp_stmt(s: Stmt, post: Formula) -> Formula:
    if isinstance(s, Assign):
        return subst(post, {s.name: s.expr})
    if isinstance(s, ArrayAssign):
        return subst(post, {s.name: Store(Var(s.name, ARRAY), s.index, s.value)})
    if isinstance(s, NamedHavoc):
        fresh = Var(s.fresh, s.sort)
        return Forall((fresh,), subst(post, {s.name: fresh}))
    if isinstance(s, Havoc):
        raise VcgenError("havoc reached wp without a name; use cut_loops/_name_havocs")
    if isinstance(s, Assume):
        return Implies(s.formula, post)
    if isinstance(s, Assert):
        return conj([s.formula, post])
    if isinstance(s, If):
        return conj(
            [
                Implies(s.cond, wp_stmts(s.then, post)),
                Implies(Not(s.cond), wp_stmts(s.els, post)),
            ]
        )
    raise VcgenError(f"statement not allowed in a loop-free body: {s!r}")


def wp_stmts(stmts: tuple[Stmt, ...], post: Formula) -> Formula:
    for s in reversed(stmts):
        post = wp_stmt(s, post)
    return post


# ---------------------------------------------------------------------------
# Symbolic stores for ghost evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PostPath:
    """One control path through a triple body: guard conditions (expressed
    over the pre-state and havoc constants) and the resulting store."""

    conds: tuple[Formula, ...]
    store: Mapping[str, Term]


def post_paths(body: tuple[Stmt, ...], vars: Mapping[str, Sort]) -> list[PostPath]:
    def go(stmts: tuple[Stmt, ...], conds: tuple[Formula, ...], store: dict[str, Term]) -> list[PostPath]:
        store = dict(store)
        for idx, s in enumerate(stmts):
            if isinstance(s, Assign):
                store[s.name] = subst_term(s.expr, store)
            elif isinstance(s, ArrayAssign):
                cur = store.get(s.name, Var(s.name, ARRAY))
                store[s.name] = Store(cur, subst_term(s.index, store), subst_term(s.value, store))
            elif isinstance(s, NamedHavoc):
                store[s.name] = Var(s.fresh, s.sort)
            elif isinstance(s, (Assume, Assert)):
                pass
            elif isinstance(s, If):
                guard = subst(s.cond, store)
                rest = stmts[idx + 1 :]
                taken = go(s.then + rest, conds + (guard,), store)
                skipped = go(s.els + rest, conds + (Not(guard),), store)
                return taken + skipped
            else:
                raise VcgenError(f"statement not allowed in a loop-free body: {s!r}")
        return [PostPath(conds, store)]

    return go(body, (), {})


# ---------------------------------------------------------------------------
# Verification conditions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VC:
    formula: Formula  # closed and hole-free
    origin: HoareTriple
    paths: tuple[PostPath, ...]  # post-state snapshots for ghost readout


def vc_of(
    triple: HoareTriple,
    candidate: Mapping[str, frozenset[int]],
    predicates: Mapping[str, list[Predicate]],
    vars: Mapping[str, Sort],
) -> VC:
    pre = substitute_holes(triple.pre, candidate, predicates)
    post = substitute_holes(triple.post, candidate, predicates)
    formula = Implies(pre, wp_stmts(triple.body, post))
    return VC(formula, triple, tuple(post_paths(triple.body, vars)))


def vc_with_post_formula(
    triple: HoareTriple,
    candidate: Mapping[str, frozenset[int]],
    predicates: Mapping[str, list[Predicate]],
    vars: Mapping[str, Sort],
    post_override: Formula,
) -> VC:
    """VC with the post-side hole replaced by an arbitrary formula.

    Used by the normality re-checks, which substitute a disjunction where
    candidates ordinarily supply a conjunction.
    """
    pre = substitute_holes(triple.pre, candidate, predicates)

    def build(hole: str) -> Formula:
        return post_override

    post = substitute_holes_formula(triple.post, build)
    formula = Implies(pre, wp_stmts(triple.body, post))
    return VC(formula, triple, tuple(post_paths(triple.body, vars)))
